//! Command-line front end: corpus synthesis, factor training, evaluation,
//! cross-validation, sign-test comparison, and collocation statistics.
//!
//! All randomness flows from explicit `--seed` flags, outputs are written
//! in deterministic order, and identical invocations produce byte-identical
//! files. Exit codes: 0 success, 1 usage error, 2 data error. The
//! `PREFRANK_OUT_DIR` environment variable, when set, prefixes every
//! relative output path.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{ArgAction, Parser, Subcommand};

use crate::colloc::{
    extract_triple_counts_with, CollocModel, CollocOptions, CollocStatistic, RuleModel,
    TieWeighting,
};
use crate::corpus::{self, Corpus, Triple};
use crate::eval::{
    self, cross_validate, sign_test, CrossValOutcome, DerivedFunction, DerivedKind, EvalReport,
    PipelineConfig, TrainMethod, TrainedPipeline,
};
use crate::score::ScoreWeights;
use crate::synth::{self, SynthConfig};
use crate::train::{self, ScalingFactors, TieMode};

#[derive(Parser)]
#[command(name = "prefrank", version, about = "Train and evaluate weighted preference-function combinations for ranking sentence analyses")]
struct Cli {
    /// Training-score reward for a constituent shared with the gold tree.
    #[arg(long, global = true, default_value_t = 1.0)]
    a1: f64,
    /// Training-score penalty for a hallucinated constituent.
    #[arg(long, global = true, default_value_t = 10.0)]
    a2: f64,
    /// Training-score penalty for a missing gold constituent.
    #[arg(long, global = true, default_value_t = 0.0)]
    a3: f64,
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

impl Cli {
    fn weights(&self) -> ScoreWeights {
        ScoreWeights::new(self.a1, self.a2, self.a3)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic corpus with planted structure.
    Synth {
        /// Output corpus path.
        #[arg(long)]
        out: PathBuf,
        /// Flat key=value config file; flags below override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        sentences: Option<usize>,
        #[arg(long)]
        analyses_min: Option<usize>,
        #[arg(long)]
        analyses_max: Option<usize>,
        #[arg(long)]
        functions: Option<usize>,
        /// Comma-separated planted weights.
        #[arg(long)]
        planted: Option<String>,
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        head_vocab: Option<usize>,
        #[arg(long)]
        relation_vocab: Option<usize>,
        #[arg(long)]
        triple_signal: Option<f64>,
    },
    /// Train scaling factors on a corpus.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        /// Output factors file (flat name-to-value map).
        #[arg(long)]
        out: PathBuf,
        /// normalized | lsq | lsq+hillclimb | single:<function>
        #[arg(long, default_value = "lsq+hillclimb", value_parser = parse_method)]
        method: TrainMethod,
        #[arg(long, default_value = "strict", value_parser = parse_tie_mode)]
        tie_mode: TieMode,
        /// Hill-climbing iteration cap (default: 50 per function).
        #[arg(long)]
        max_iters: Option<usize>,
        /// Derived collocation function, as <statistic>:<name>; repeatable.
        #[arg(long = "colloc", value_parser = parse_derived_colloc)]
        colloc: Vec<DerivedFunction>,
        /// Name for a derived syntactic-rule-cost function.
        #[arg(long)]
        rule_cost: Option<String>,
        /// Directory for derived-model files (default: alongside --out).
        #[arg(long)]
        models_out: Option<PathBuf>,
        /// Override of the per-statistic smoothing constant.
        #[arg(long)]
        smoothing: Option<f64>,
        /// Override of the unseen-triple score.
        #[arg(long)]
        colloc_default: Option<f64>,
        #[arg(long, default_value = "fractional", value_parser = parse_tie_weighting)]
        tie_weighting: TieWeighting,
    },
    /// Evaluate a factors file on a corpus.
    Evaluate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        factors: PathBuf,
        /// Trained collocation model, as <function-name>=<path>; repeatable.
        #[arg(long = "colloc-model", value_parser = parse_named_path)]
        colloc_models: Vec<(String, PathBuf)>,
        /// Trained rule model, as <function-name>=<path>; repeatable.
        #[arg(long = "rule-model", value_parser = parse_named_path)]
        rule_models: Vec<(String, PathBuf)>,
        /// Write per-sentence fractional results (for `compare`).
        #[arg(long)]
        results_out: Option<PathBuf>,
        /// Emit machine-readable JSON instead of a table.
        #[arg(long)]
        machine: bool,
    },
    /// Print per-sentence analysis rankings.
    Score {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        factors: PathBuf,
        #[arg(long = "colloc-model", value_parser = parse_named_path)]
        colloc_models: Vec<(String, PathBuf)>,
        #[arg(long = "rule-model", value_parser = parse_named_path)]
        rule_models: Vec<(String, PathBuf)>,
        #[arg(long)]
        machine: bool,
    },
    /// k-fold cross-validation with per-fold training.
    Crossval {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(short, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "lsq+hillclimb", value_parser = parse_method)]
        method: TrainMethod,
        #[arg(long, default_value = "strict", value_parser = parse_tie_mode)]
        tie_mode: TieMode,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long = "colloc", value_parser = parse_derived_colloc)]
        colloc: Vec<DerivedFunction>,
        #[arg(long)]
        rule_cost: Option<String>,
        #[arg(long)]
        smoothing: Option<f64>,
        #[arg(long)]
        colloc_default: Option<f64>,
        #[arg(long, default_value = "fractional", value_parser = parse_tie_weighting)]
        tie_weighting: TieWeighting,
        /// Write aggregate per-sentence results (for `compare`).
        #[arg(long)]
        results_out: Option<PathBuf>,
        #[arg(long)]
        machine: bool,
    },
    /// Sign test between two per-sentence result files.
    Compare {
        a: PathBuf,
        b: PathBuf,
    },
    /// Tab-separated table of triple counts and all five statistics.
    CollocStats {
        #[arg(long)]
        corpus: PathBuf,
        /// Statistic to sort by (descending).
        #[arg(long, default_value = "mean_distance", value_parser = parse_statistic)]
        statistic: CollocStatistic,
        #[arg(long)]
        smoothing: Option<f64>,
        #[arg(long)]
        colloc_default: Option<f64>,
        #[arg(long, default_value = "fractional", value_parser = parse_tie_weighting)]
        tie_weighting: TieWeighting,
        /// Also write the sort statistic's trained model file.
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Convert bracketed constituent trees into the corpus format.
    Convert {
        /// File of bracketed trees, e.g. `(P do (A i) get (A dinner))`.
        #[arg(long)]
        from_brackets: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_method(s: &str) -> Result<TrainMethod, String> {
    match s {
        "normalized" => Ok(TrainMethod::Normalized),
        "lsq" => Ok(TrainMethod::LeastSquares),
        "lsq+hillclimb" => Ok(TrainMethod::LeastSquaresHillClimb),
        other => match other.strip_prefix("single:") {
            Some(name) if !name.is_empty() => Ok(TrainMethod::SingleFunction(name.to_string())),
            _ => Err(format!(
                "unknown method {other:?} (expected normalized, lsq, lsq+hillclimb, or single:<function>)"
            )),
        },
    }
}

fn parse_tie_mode(s: &str) -> Result<TieMode, String> {
    match s {
        "strict" => Ok(TieMode::Strict),
        "lenient" => Ok(TieMode::Lenient),
        other => Err(format!("unknown tie mode {other:?} (expected strict or lenient)")),
    }
}

fn parse_tie_weighting(s: &str) -> Result<TieWeighting, String> {
    match s {
        "fractional" => Ok(TieWeighting::Fractional),
        "count-all" => Ok(TieWeighting::CountAll),
        other => Err(format!(
            "unknown tie weighting {other:?} (expected fractional or count-all)"
        )),
    }
}

fn parse_statistic(s: &str) -> Result<CollocStatistic, String> {
    s.parse()
}

fn parse_derived_colloc(s: &str) -> Result<DerivedFunction, String> {
    let (statistic, name) = s
        .split_once(':')
        .ok_or_else(|| format!("expected <statistic>:<name>, got {s:?}"))?;
    if name.is_empty() {
        return Err(format!("empty function name in {s:?}"));
    }
    Ok(DerivedFunction {
        name: name.to_string(),
        kind: DerivedKind::Colloc(statistic.parse()?),
    })
}

fn parse_named_path(s: &str) -> Result<(String, PathBuf), String> {
    let (name, path) = s
        .split_once('=')
        .ok_or_else(|| format!("expected <function-name>=<path>, got {s:?}"))?;
    if name.is_empty() || path.is_empty() {
        return Err(format!("empty name or path in {s:?}"));
    }
    Ok((name.to_string(), PathBuf::from(path)))
}

enum CliError {
    Data(String),
}

impl CliError {
    fn code(&self) -> i32 {
        2
    }

    fn message(&self) -> &str {
        match self {
            CliError::Data(m) => m,
        }
    }
}

macro_rules! from_error {
    ($ty:ty) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Data(e.to_string())
            }
        }
    };
}

from_error!(corpus::CorpusError);
from_error!(crate::colloc::CollocError);
from_error!(crate::train::TrainError);
from_error!(crate::eval::EvalError);
from_error!(crate::synth::SynthError);
from_error!(std::io::Error);
from_error!(serde_json::Error);

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    init_logging(cli.verbose);
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn init_logging(verbosity: u8) {
    let level = match verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
}

/// Resolves an output path under `PREFRANK_OUT_DIR` when that is set and
/// the path is relative.
fn out_path(path: &Path) -> PathBuf {
    match std::env::var_os("PREFRANK_OUT_DIR") {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn create_out(path: &Path) -> Result<BufWriter<File>, CliError> {
    let resolved = out_path(path);
    if let Some(parent) = resolved.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(resolved)?))
}

fn load_checked_corpus(path: &Path) -> Result<Corpus, CliError> {
    let corpus = corpus::load_corpus(path)?;
    Ok(corpus::apply_class_map(&corpus))
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Synth {
            out,
            config,
            seed,
            sentences,
            analyses_min,
            analyses_max,
            functions,
            planted,
            noise,
            head_vocab,
            relation_vocab,
            triple_signal,
        } => {
            let mut cfg = match config {
                Some(path) => SynthConfig::from_key_value(BufReader::new(File::open(path)?))?,
                None => SynthConfig::default(),
            };
            if let Some(v) = seed {
                cfg.seed = *v;
            }
            if let Some(v) = sentences {
                cfg.n_sentences = *v;
            }
            if let Some(v) = analyses_min {
                cfg.analyses_min = *v;
            }
            if let Some(v) = analyses_max {
                cfg.analyses_max = *v;
            }
            if let Some(v) = functions {
                cfg.n_functions = *v;
            }
            if let Some(list) = planted {
                cfg.planted_weights = list
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| CliError::Data(format!("--planted: {e}")))?;
            }
            if let Some(v) = noise {
                cfg.noise_scale = *v;
            }
            if let Some(v) = head_vocab {
                cfg.head_vocab = *v;
            }
            if let Some(v) = relation_vocab {
                cfg.relation_vocab = *v;
            }
            if let Some(v) = triple_signal {
                cfg.triple_signal = *v;
            }
            let corpus = synth::generate(&cfg)?;
            let mut writer = create_out(out)?;
            corpus::write_corpus(&corpus, &mut writer)?;
            writer.flush()?;
            println!(
                "wrote {} sentences ({} analyses) to {}",
                corpus.sentences.len(),
                corpus.n_analyses(),
                out.display()
            );
            Ok(())
        }

        Command::Train {
            corpus: corpus_path,
            out,
            method,
            tie_mode,
            max_iters,
            colloc,
            rule_cost,
            models_out,
            smoothing,
            colloc_default,
            tie_weighting,
        } => {
            let corpus = load_checked_corpus(corpus_path)?;
            let mut derived = colloc.clone();
            if let Some(name) = rule_cost {
                derived.push(DerivedFunction {
                    name: name.clone(),
                    kind: DerivedKind::RuleCost,
                });
            }
            let config = PipelineConfig {
                weights: cli.weights(),
                method: method.clone(),
                tie_mode: *tie_mode,
                max_iters: *max_iters,
                derived,
                colloc: CollocOptions {
                    smoothing: *smoothing,
                    default_value: *colloc_default,
                    tie_weighting: *tie_weighting,
                },
            };
            let trained = eval::train_pipeline(&corpus, &config)?;
            let mut writer = create_out(out)?;
            train::write_factors(&mut writer, &trained.function_names, &trained.factors)?;
            writer.flush()?;

            let model_dir = models_out
                .clone()
                .or_else(|| out.parent().map(Path::to_path_buf))
                .unwrap_or_default();
            for (name, model) in &trained.colloc_models {
                let path = model_dir.join(format!("{name}.colloc.json"));
                let mut writer = create_out(&path)?;
                model.to_writer(&mut writer)?;
                writer.flush()?;
            }
            for (name, model) in &trained.rule_models {
                let path = model_dir.join(format!("{name}.rules.json"));
                let mut writer = create_out(&path)?;
                model.to_writer(&mut writer)?;
                writer.flush()?;
            }

            let report = trained.evaluate(&corpus);
            println!(
                "trained {} factors; training-set strict correct {}/{} ({:.1}%)",
                trained.factors.len(),
                report.correct_strict,
                report.n_sentences,
                100.0 * report.correct_strict as f64 / report.n_sentences.max(1) as f64
            );
            Ok(())
        }

        Command::Evaluate {
            corpus: corpus_path,
            factors,
            colloc_models,
            rule_models,
            results_out,
            machine,
        } => {
            let corpus = load_checked_corpus(corpus_path)?;
            let (augmented, names) = augment_with_models(&corpus, colloc_models, rule_models)?;
            let factors = read_factors_file(factors, &names)?;
            let report = eval::evaluate(&augmented, &factors);
            if let Some(path) = results_out {
                write_results(path, &report)?;
            }
            if *machine {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                print_report_table(&[("evaluate".to_string(), &report)]);
            }
            Ok(())
        }

        Command::Score {
            corpus: corpus_path,
            factors,
            colloc_models,
            rule_models,
            machine,
        } => {
            let corpus = load_checked_corpus(corpus_path)?;
            let (augmented, names) = augment_with_models(&corpus, colloc_models, rule_models)?;
            let factors = read_factors_file(factors, &names)?;
            if *machine {
                let ranked: BTreeMap<String, Vec<(String, f64)>> = augmented
                    .sentences
                    .iter()
                    .map(|s| (s.id.clone(), eval::rank(s, &names, &factors)))
                    .collect();
                println!("{}", serde_json::to_string(&ranked)?);
            } else {
                for sentence in &augmented.sentences {
                    let ranked = eval::rank(sentence, &names, &factors);
                    let row: Vec<String> = ranked
                        .iter()
                        .map(|(id, score)| format!("{id}={score}"))
                        .collect();
                    println!("{}\t{}", sentence.id, row.join("\t"));
                }
            }
            Ok(())
        }

        Command::Crossval {
            corpus: corpus_path,
            k,
            seed,
            method,
            tie_mode,
            max_iters,
            colloc,
            rule_cost,
            smoothing,
            colloc_default,
            tie_weighting,
            results_out,
            machine,
        } => {
            let corpus = load_checked_corpus(corpus_path)?;
            let mut derived = colloc.clone();
            if let Some(name) = rule_cost {
                derived.push(DerivedFunction {
                    name: name.clone(),
                    kind: DerivedKind::RuleCost,
                });
            }
            let config = PipelineConfig {
                weights: cli.weights(),
                method: method.clone(),
                tie_mode: *tie_mode,
                max_iters: *max_iters,
                derived,
                colloc: CollocOptions {
                    smoothing: *smoothing,
                    default_value: *colloc_default,
                    tie_weighting: *tie_weighting,
                },
            };
            let outcome = cross_validate(&corpus, *k, &config, *seed)?;
            if let Some(path) = results_out {
                write_results(path, &outcome.aggregate)?;
            }
            if *machine {
                print_crossval_machine(&outcome)?;
            } else {
                let rows: Vec<(String, &EvalReport)> = outcome
                    .folds
                    .iter()
                    .map(|f| (format!("fold {}", f.fold), &f.report))
                    .chain(std::iter::once(("all".to_string(), &outcome.aggregate)))
                    .collect();
                print_report_table(&rows);
            }
            Ok(())
        }

        Command::Compare { a, b } => {
            let a = read_results(a)?;
            let b = read_results(b)?;
            let result = sign_test(&binarize(&a), &binarize(&b))?;
            if result.has_disagreements() {
                println!("+{} -{} #SDs {:.1}", result.plus, result.minus, result.sds);
            } else {
                println!("+0 -0 #SDs 0.0 (no disagreements)");
            }
            Ok(())
        }

        Command::CollocStats {
            corpus: corpus_path,
            statistic,
            smoothing,
            colloc_default,
            tie_weighting,
            model_out,
        } => {
            let corpus = load_checked_corpus(corpus_path)?;
            let options = CollocOptions {
                smoothing: *smoothing,
                default_value: *colloc_default,
                tie_weighting: *tie_weighting,
            };
            let weights = cli.weights();
            let stats = extract_triple_counts_with(&corpus, &weights, *tie_weighting);
            let mut models = BTreeMap::new();
            for stat in CollocStatistic::ALL {
                models.insert(
                    stat.to_string(),
                    CollocModel::train(stat, &corpus, &weights, &options)?,
                );
            }
            let mut universe: Vec<&Triple> = models
                .values()
                .flat_map(|m| m.table.keys())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let sort_model = &models[&statistic.to_string()];
            universe.sort_by(|a, b| {
                sort_model
                    .triple_score(b)
                    .total_cmp(&sort_model.triple_score(a))
                    .then_with(|| a.cmp(b))
            });

            let mut stdout = std::io::stdout().lock();
            writeln!(
                stdout,
                "h1\tr\th2\tjoint\tmutual_info\tchi_squared\tchi\tmean_distance\tlikelihood_ratio"
            )?;
            for triple in universe {
                let row: Vec<String> = CollocStatistic::ALL
                    .iter()
                    .map(|stat| format!("{}", models[&stat.to_string()].triple_score(triple)))
                    .collect();
                writeln!(
                    stdout,
                    "{}\t{}\t{}\t{}\t{}",
                    triple.h1,
                    triple.r,
                    triple.h2,
                    stats.joint_count(triple),
                    row.join("\t")
                )?;
            }
            if let Some(path) = model_out {
                let mut writer = create_out(path)?;
                models[&statistic.to_string()].to_writer(&mut writer)?;
                writer.flush()?;
            }
            Ok(())
        }

        Command::Convert { from_brackets, out } => {
            let text = std::fs::read_to_string(from_brackets)?;
            let mut sentences = Vec::new();
            for (i, chunk) in split_balanced(&text).into_iter().enumerate() {
                let (tokens, tree) = corpus::parse_bracketed_tree(&chunk)?;
                sentences.push(crate::corpus::Sentence {
                    id: format!("t{i}"),
                    tokens,
                    analyses: vec![crate::corpus::Analysis {
                        id: "gold".to_string(),
                        spans: tree.constituents.clone(),
                        triples: vec![],
                        rules: vec![],
                        features: BTreeMap::new(),
                    }],
                    gold: tree,
                });
            }
            if sentences.is_empty() {
                return Err(CliError::Data(format!(
                    "no bracketed trees found in {}",
                    from_brackets.display()
                )));
            }
            let corpus = Corpus {
                function_names: vec![],
                class_map: BTreeMap::new(),
                sentences,
            };
            let mut writer = create_out(out)?;
            corpus::write_corpus(&corpus, &mut writer)?;
            writer.flush()?;
            println!("wrote {} sentences to {}", corpus.sentences.len(), out.display());
            Ok(())
        }
    }
}

/// Splits text into top-level balanced-parenthesis chunks.
fn split_balanced(text: &str) -> Vec<String> {
    let mut chunks = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(ch);
                if depth == 0 {
                    chunks.push(std::mem::take(&mut current));
                }
            }
            _ if depth > 0 => current.push(ch),
            _ => {}
        }
    }
    if !current.trim().is_empty() {
        chunks.push(current);
    }
    chunks
}

/// Loads trained model files and augments the corpus with their feature
/// values; returns the augmented corpus and its full function-name list.
fn augment_with_models(
    corpus: &Corpus,
    colloc_models: &[(String, PathBuf)],
    rule_models: &[(String, PathBuf)],
) -> Result<(Corpus, Vec<String>), CliError> {
    let mut loaded_colloc = Vec::new();
    for (name, path) in colloc_models {
        let model = CollocModel::from_reader(BufReader::new(File::open(path)?))?;
        loaded_colloc.push((name.clone(), model));
    }
    let mut loaded_rules = Vec::new();
    for (name, path) in rule_models {
        let model = RuleModel::from_reader(BufReader::new(File::open(path)?))?;
        loaded_rules.push((name.clone(), model));
    }
    let mut function_names = corpus.function_names.clone();
    for (name, _) in loaded_colloc.iter() {
        if function_names.contains(name) {
            return Err(CliError::Data(format!(
                "model function {name:?} duplicates a declared function"
            )));
        }
        function_names.push(name.clone());
    }
    for (name, _) in loaded_rules.iter() {
        if function_names.contains(name) {
            return Err(CliError::Data(format!(
                "model function {name:?} duplicates a declared function"
            )));
        }
        function_names.push(name.clone());
    }
    let pipeline = TrainedPipeline {
        function_names: function_names.clone(),
        factors: ScalingFactors::zeros(0),
        colloc_models: loaded_colloc,
        rule_models: loaded_rules,
    };
    Ok((pipeline.augment(corpus), function_names))
}

fn read_factors_file(path: &Path, names: &[String]) -> Result<ScalingFactors, CliError> {
    let file = File::open(path)?;
    Ok(train::read_factors(BufReader::new(file), names)?)
}

fn write_results(path: &Path, report: &EvalReport) -> Result<(), CliError> {
    let mut writer = create_out(path)?;
    serde_json::to_writer_pretty(&mut writer, &report.per_sentence)?;
    writer.flush()?;
    Ok(())
}

fn read_results(path: &Path) -> Result<BTreeMap<String, f64>, CliError> {
    let file = File::open(path)?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}

fn binarize(results: &BTreeMap<String, f64>) -> BTreeMap<String, bool> {
    results.iter().map(|(k, v)| (k.clone(), *v == 1.0)).collect()
}

fn format_count(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{v:.2}")
    }
}

fn print_report_table(rows: &[(String, &EvalReport)]) {
    println!("{:<24}{:>16}{:>12}", "Condition", "Number correct", "Percentage");
    for (label, report) in rows {
        println!(
            "{:<24}{:>16}{:>12.1}",
            label,
            format_count(report.correct_fractional),
            report.percentage
        );
    }
}

fn print_crossval_machine(outcome: &CrossValOutcome) -> Result<(), CliError> {
    #[derive(serde::Serialize)]
    struct FoldRecord<'a> {
        fold: usize,
        heldout: usize,
        report: &'a EvalReport,
    }
    #[derive(serde::Serialize)]
    struct Record<'a> {
        folds: Vec<FoldRecord<'a>>,
        aggregate: &'a EvalReport,
    }
    let record = Record {
        folds: outcome
            .folds
            .iter()
            .map(|f| FoldRecord {
                fold: f.fold,
                heldout: f.heldout_ids.len(),
                report: &f.report,
            })
            .collect(),
        aggregate: &outcome.aggregate,
    };
    println!("{}", serde_json::to_string(&record)?);
    Ok(())
}

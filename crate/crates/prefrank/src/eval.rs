//! Ranking, evaluation with fractional tie credit, k-fold cross-validation,
//! and sign-test comparisons.
//!
//! An analysis's preference score is the weighted sum of its raw feature
//! scores under a set of scaling factors. A sentence where `N` analyses tie
//! at the top, `G` of them correct, earns fractional credit `G/N` (the
//! probability a random choice among the tied analyses is correct); for
//! significance testing, which needs binary data, the sentence counts as
//! correct only when all top scorers are correct.
//!
//! Cross-validation partitions sentences into seeded folds and, for each
//! fold, trains everything (collocation tables, rule probabilities, scaling
//! factors) on the other folds only, so held-out data never influences a
//! trained model.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colloc::{
    estimate_rule_probs, syntactic_rule_cost, CollocError, CollocModel, CollocOptions,
    CollocStatistic, RuleModel,
};
use crate::corpus::{Corpus, Sentence};
use crate::score::{self, ScoreWeights};
use crate::train::{
    self, HillClimbOptions, ScalingFactors, TieMode, TrainError,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("result sets cover different sentences (e.g. {0:?})")]
    KeyMismatch(String),
    #[error("cannot split {n} sentences into {k} folds")]
    BadFolds { k: usize, n: usize },
    #[error("derived function {0:?} duplicates a declared function name")]
    DuplicateFunction(String),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Colloc(#[from] CollocError),
}

/// Preference score of every analysis: `Σ_j c_j s_ij` over raw features.
pub fn analysis_scores(
    sentence: &Sentence,
    functions: &[String],
    factors: &ScalingFactors,
) -> Vec<f64> {
    sentence
        .analyses
        .iter()
        .map(|a| {
            functions
                .iter()
                .zip(&factors.c)
                .map(|(name, c)| c * a.feature(name))
                .sum()
        })
        .collect()
}

fn top_indices(scores: &[f64]) -> Vec<usize> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    scores
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == max)
        .map(|(i, _)| i)
        .collect()
}

/// Fractional credit `G/N` for the sentence: `N` top scorers, `G` correct.
pub fn sentence_fraction(
    sentence: &Sentence,
    functions: &[String],
    factors: &ScalingFactors,
) -> f64 {
    let scores = analysis_scores(sentence, functions, factors);
    let top = top_indices(&scores);
    let correct = top
        .iter()
        .filter(|&&i| score::exact_match(&sentence.analyses[i], &sentence.gold))
        .count();
    correct as f64 / top.len() as f64
}

/// Whether a sentence counts as correct under the given tie rule.
pub fn sentence_correct(
    sentence: &Sentence,
    functions: &[String],
    factors: &ScalingFactors,
    tie: TieMode,
) -> bool {
    let scores = analysis_scores(sentence, functions, factors);
    let top = top_indices(&scores);
    let correct = top
        .iter()
        .filter(|&&i| score::exact_match(&sentence.analyses[i], &sentence.gold))
        .count();
    match tie {
        TieMode::Strict => correct == top.len(),
        TieMode::Lenient => correct > 0,
    }
}

/// Analyses ranked by descending preference score; ties keep input order.
pub fn rank(
    sentence: &Sentence,
    functions: &[String],
    factors: &ScalingFactors,
) -> Vec<(String, f64)> {
    let scores = analysis_scores(sentence, functions, factors);
    let mut ranked: Vec<(String, f64)> = sentence
        .analyses
        .iter()
        .zip(&scores)
        .map(|(a, s)| (a.id.clone(), *s))
        .collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    ranked
}

/// Corpus-level evaluation results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_sentences: usize,
    /// Sentences whose entire top-scoring set is correct.
    pub correct_strict: usize,
    /// Sum of fractional credits.
    pub correct_fractional: f64,
    /// `100 * correct_fractional / n_sentences`.
    pub percentage: f64,
    /// Fractional credit per sentence id.
    pub per_sentence: BTreeMap<String, f64>,
}

impl EvalReport {
    pub fn from_per_sentence(per_sentence: BTreeMap<String, f64>) -> Self {
        let n_sentences = per_sentence.len();
        let correct_fractional: f64 = per_sentence.values().sum();
        let correct_strict = per_sentence.values().filter(|v| **v == 1.0).count();
        let percentage = if n_sentences == 0 {
            0.0
        } else {
            100.0 * correct_fractional / n_sentences as f64
        };
        EvalReport {
            n_sentences,
            correct_strict,
            correct_fractional,
            percentage,
            per_sentence,
        }
    }

    /// Binary strict correctness per sentence (full credit only).
    pub fn strict_map(&self) -> BTreeMap<String, bool> {
        self.per_sentence
            .iter()
            .map(|(id, v)| (id.clone(), *v == 1.0))
            .collect()
    }

    /// Merges disjoint reports (e.g. per-fold) into one.
    pub fn merged(reports: &[EvalReport]) -> EvalReport {
        let mut per_sentence = BTreeMap::new();
        for report in reports {
            per_sentence.extend(report.per_sentence.clone());
        }
        EvalReport::from_per_sentence(per_sentence)
    }
}

/// Evaluates a factor set over the corpus.
pub fn evaluate(corpus: &Corpus, factors: &ScalingFactors) -> EvalReport {
    let per_sentence = corpus
        .sentences
        .iter()
        .map(|s| {
            (
                s.id.clone(),
                sentence_fraction(s, &corpus.function_names, factors),
            )
        })
        .collect();
    EvalReport::from_per_sentence(per_sentence)
}

/// Expected performance of choosing one analysis uniformly at random:
/// each sentence earns (correct analyses) / (total analyses).
pub fn random_baseline(corpus: &Corpus) -> EvalReport {
    let per_sentence = corpus
        .sentences
        .iter()
        .map(|s| {
            let correct = s
                .analyses
                .iter()
                .filter(|a| score::exact_match(a, &s.gold))
                .count();
            (s.id.clone(), correct as f64 / s.analyses.len() as f64)
        })
        .collect();
    EvalReport::from_per_sentence(per_sentence)
}

/// Sampled variant of the random baseline, for demonstration runs.
pub fn random_baseline_sampled(corpus: &Corpus, seed: u64) -> EvalReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_sentence = corpus
        .sentences
        .iter()
        .map(|s| {
            let pick = rng.random_range(0..s.analyses.len());
            let credit = if score::exact_match(&s.analyses[pick], &s.gold) {
                1.0
            } else {
                0.0
            };
            (s.id.clone(), credit)
        })
        .collect();
    EvalReport::from_per_sentence(per_sentence)
}

/// Paired sign-test summary over the sentences where two systems disagree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignTestResult {
    /// Sentences correct under A but wrong under B.
    pub plus: usize,
    /// Sentences correct under B but wrong under A.
    pub minus: usize,
    /// `|plus - minus| / sqrt(plus + minus)`; 0 when there are no
    /// disagreements.
    pub sds: f64,
}

impl SignTestResult {
    pub fn from_counts(plus: usize, minus: usize) -> Self {
        let total = plus + minus;
        let sds = if total == 0 {
            0.0
        } else {
            (plus as f64 - minus as f64).abs() / (total as f64).sqrt()
        };
        SignTestResult { plus, minus, sds }
    }

    pub fn has_disagreements(&self) -> bool {
        self.plus + self.minus > 0
    }
}

/// Sign test over per-sentence binary correctness of two systems.
///
/// Sentences where both agree are ignored; both inputs must cover exactly
/// the same sentence ids.
pub fn sign_test(
    a: &BTreeMap<String, bool>,
    b: &BTreeMap<String, bool>,
) -> Result<SignTestResult, EvalError> {
    if a.len() != b.len() {
        let example = a
            .keys()
            .find(|k| !b.contains_key(*k))
            .or_else(|| b.keys().find(|k| !a.contains_key(*k)))
            .cloned()
            .unwrap_or_default();
        return Err(EvalError::KeyMismatch(example));
    }
    let mut plus = 0;
    let mut minus = 0;
    for (id, &a_correct) in a {
        let Some(&b_correct) = b.get(id) else {
            return Err(EvalError::KeyMismatch(id.clone()));
        };
        match (a_correct, b_correct) {
            (true, false) => plus += 1,
            (false, true) => minus += 1,
            _ => {}
        }
    }
    Ok(SignTestResult::from_counts(plus, minus))
}

/// How scaling factors are produced from a training corpus.
#[derive(Debug, Clone, PartialEq)]
pub enum TrainMethod {
    /// Inverse-standard-deviation factors signed by correlation.
    Normalized,
    /// Least squares on the relativised training matrix.
    LeastSquares,
    /// Least squares refined by hill climbing.
    LeastSquaresHillClimb,
    /// Factor 1 on the named function, 0 elsewhere.
    SingleFunction(String),
    /// User-supplied factors (e.g. hand-tuned), keyed by function name.
    Fixed(BTreeMap<String, f64>),
}

/// A preference function computed from trained models rather than stored
/// in the corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedFunction {
    pub name: String,
    pub kind: DerivedKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DerivedKind {
    Colloc(CollocStatistic),
    RuleCost,
}

/// Full training configuration: weights, factor method, and the derived
/// functions to train alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub weights: ScoreWeights,
    pub method: TrainMethod,
    pub tie_mode: TieMode,
    pub max_iters: Option<usize>,
    pub derived: Vec<DerivedFunction>,
    pub colloc: CollocOptions,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            weights: ScoreWeights::default(),
            method: TrainMethod::LeastSquaresHillClimb,
            tie_mode: TieMode::Strict,
            max_iters: None,
            derived: Vec::new(),
            colloc: CollocOptions::default(),
        }
    }
}

/// Everything trained on one training split: models for the derived
/// functions and the scaling factors over the augmented function list.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedPipeline {
    /// Declared corpus functions followed by the derived ones.
    pub function_names: Vec<String>,
    pub factors: ScalingFactors,
    pub colloc_models: Vec<(String, CollocModel)>,
    pub rule_models: Vec<(String, RuleModel)>,
}

impl TrainedPipeline {
    /// Adds the derived feature values (computed from the trained models)
    /// to every analysis, and the derived names to the declared functions.
    pub fn augment(&self, corpus: &Corpus) -> Corpus {
        let mut out = corpus.clone();
        out.function_names = self.function_names.clone();
        for sentence in &mut out.sentences {
            let words = sentence.tokens.len();
            for analysis in &mut sentence.analyses {
                for (name, model) in &self.colloc_models {
                    analysis
                        .features
                        .insert(name.clone(), model.score_analysis(analysis, words));
                }
                for (name, model) in &self.rule_models {
                    analysis
                        .features
                        .insert(name.clone(), syntactic_rule_cost(model, analysis));
                }
            }
        }
        out
    }

    /// Augments and evaluates a (held-out) corpus.
    pub fn evaluate(&self, corpus: &Corpus) -> EvalReport {
        evaluate(&self.augment(corpus), &self.factors)
    }
}

/// Trains derived models and scaling factors on a training corpus.
pub fn train_pipeline(
    corpus: &Corpus,
    config: &PipelineConfig,
) -> Result<TrainedPipeline, EvalError> {
    let mut colloc_models = Vec::new();
    let mut rule_models = Vec::new();
    let mut function_names = corpus.function_names.clone();
    for derived in &config.derived {
        if function_names.contains(&derived.name) {
            return Err(EvalError::DuplicateFunction(derived.name.clone()));
        }
        function_names.push(derived.name.clone());
        match &derived.kind {
            DerivedKind::Colloc(statistic) => {
                let model =
                    CollocModel::train(*statistic, corpus, &config.weights, &config.colloc)?;
                colloc_models.push((derived.name.clone(), model));
            }
            DerivedKind::RuleCost => {
                rule_models.push((derived.name.clone(), estimate_rule_probs(corpus)?));
            }
        }
    }

    let mut trained = TrainedPipeline {
        function_names,
        factors: ScalingFactors::zeros(0),
        colloc_models,
        rule_models,
    };
    let augmented = trained.augment(corpus);

    trained.factors = match &config.method {
        TrainMethod::Normalized => {
            let matrix = train::assemble_training_matrix(
                &augmented,
                &config.weights,
                &augmented.function_names,
            )?;
            train::normalized_factors(&matrix)
        }
        TrainMethod::LeastSquares => {
            let matrix = train::assemble_training_matrix(
                &augmented,
                &config.weights,
                &augmented.function_names,
            )?;
            train::least_squares(&matrix)
        }
        TrainMethod::LeastSquaresHillClimb => {
            let matrix = train::assemble_training_matrix(
                &augmented,
                &config.weights,
                &augmented.function_names,
            )?;
            let start = train::least_squares(&matrix);
            let options = HillClimbOptions {
                tie_mode: config.tie_mode,
                max_iters: config.max_iters,
            };
            train::hill_climb(&augmented, &start, &options)?.factors
        }
        TrainMethod::SingleFunction(name) => {
            let idx = augmented
                .function_index(name)
                .ok_or_else(|| TrainError::UnknownFunction(name.clone()))?;
            let mut factors = ScalingFactors::zeros(augmented.function_names.len());
            factors.c[idx] = 1.0;
            factors
        }
        TrainMethod::Fixed(map) => {
            ScalingFactors::from_named(map, &augmented.function_names)?
        }
    };
    Ok(trained)
}

/// One fold of a cross-validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub fold: usize,
    pub heldout_ids: Vec<String>,
    pub trained: TrainedPipeline,
    pub report: EvalReport,
}

/// Per-fold outcomes plus the merged report.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossValOutcome {
    pub folds: Vec<FoldOutcome>,
    pub aggregate: EvalReport,
}

/// Deterministic seeded fold assignment: a shuffled round-robin, so fold
/// sizes differ by at most one.
pub fn fold_assignment(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut folds = vec![0; n];
    for (rank, sentence_idx) in order.into_iter().enumerate() {
        folds[sentence_idx] = rank % k;
    }
    folds
}

/// k-fold cross-validation: each fold is held out in turn, all models are
/// trained on the remaining folds only, and the held-out fold is evaluated
/// with the resulting pipeline.
pub fn cross_validate(
    corpus: &Corpus,
    k: usize,
    config: &PipelineConfig,
    seed: u64,
) -> Result<CrossValOutcome, EvalError> {
    let n = corpus.sentences.len();
    if k < 2 || k > n {
        return Err(EvalError::BadFolds { k, n });
    }
    let assignment = fold_assignment(n, k, seed);

    let mut folds = Vec::with_capacity(k);
    for fold in 0..k {
        let split = |keep_heldout: bool| Corpus {
            function_names: corpus.function_names.clone(),
            class_map: corpus.class_map.clone(),
            sentences: corpus
                .sentences
                .iter()
                .zip(&assignment)
                .filter(|(_, f)| (**f == fold) == keep_heldout)
                .map(|(s, _)| s.clone())
                .collect(),
        };
        let training = split(false);
        let heldout = split(true);
        let trained = train_pipeline(&training, config)?;
        let report = trained.evaluate(&heldout);
        folds.push(FoldOutcome {
            fold,
            heldout_ids: heldout.sentences.iter().map(|s| s.id.clone()).collect(),
            trained,
            report,
        });
    }
    let aggregate = EvalReport::merged(&folds.iter().map(|f| f.report.clone()).collect::<Vec<_>>());
    Ok(CrossValOutcome { folds, aggregate })
}

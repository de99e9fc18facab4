//! Seeded synthetic corpora with planted ground truth.
//!
//! Every sentence gets a random nested gold tree, one designated-correct
//! analysis whose spans equal the gold tree, and distractors with perturbed
//! spans (always different from gold, so exactly one analysis per sentence
//! is exactly correct). Feature vectors are planted so that a known weight
//! vector separates the correct analysis from the distractors by a unit
//! margin; `noise_scale` blurs that margin. Triples and rules are drawn
//! from correctness-specific symbol pools with probability `triple_signal`
//! and from a shared pool otherwise, making `triple_signal` a single dial
//! for how informative the collocation and rule statistics are.
//!
//! Generation is a pure function of the config: each sentence uses its own
//! RNG substream derived from `(seed, sentence index)`, so corpora are
//! byte-identical across runs and machines.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::corpus::{Analysis, Constituent, Corpus, Label, Sentence, SkeletalTree, Triple};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synth config: {0}")]
    InvalidConfig(String),
    #[error("sentence {0}: cannot construct a distractor differing from gold")]
    Impossible(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Synthetic-corpus parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_sentences: usize,
    pub analyses_min: usize,
    pub analyses_max: usize,
    pub n_functions: usize,
    /// Weight vector that separates correct analyses; empty means "derive
    /// one deterministically from the seed".
    pub planted_weights: Vec<f64>,
    /// Standard deviation of per-feature noise added to distractor
    /// perturbations, relative to the unit planted margin.
    pub noise_scale: f64,
    pub head_vocab: usize,
    pub relation_vocab: usize,
    /// Probability in [0, 1] that a triple or rule is drawn from the
    /// correctness-specific pool rather than the shared one.
    pub triple_signal: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_sentences: 100,
            analyses_min: 2,
            analyses_max: 4,
            n_functions: 5,
            planted_weights: Vec::new(),
            noise_scale: 0.2,
            head_vocab: 24,
            relation_vocab: 6,
            triple_signal: 0.8,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let fail = |msg: &str| Err(SynthError::InvalidConfig(msg.to_string()));
        if self.n_sentences == 0 {
            return fail("n_sentences must be at least 1");
        }
        if self.analyses_min < 2 {
            return fail("analyses_min must be at least 2");
        }
        if self.analyses_max < self.analyses_min {
            return fail("analyses_max must be >= analyses_min");
        }
        if self.n_functions == 0 {
            return fail("n_functions must be at least 1");
        }
        if !self.planted_weights.is_empty() && self.planted_weights.len() != self.n_functions {
            return fail("planted_weights length must equal n_functions");
        }
        if self.noise_scale < 0.0 || self.noise_scale.is_nan() {
            return fail("noise_scale must be nonnegative");
        }
        if self.head_vocab < 4 {
            return fail("head_vocab must be at least 4");
        }
        if self.relation_vocab == 0 {
            return fail("relation_vocab must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.triple_signal) {
            return fail("triple_signal must lie in [0, 1]");
        }
        Ok(())
    }

    /// Reads a flat `key = value` config file. Unknown keys are rejected;
    /// `#` starts a comment.
    pub fn from_key_value(reader: impl Read) -> Result<SynthConfig, SynthError> {
        let mut cfg = SynthConfig::default();
        for (lineno, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| SynthError::InvalidConfig(format!("line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let parse_usize =
                |v: &str| v.parse::<usize>().map_err(|e| bad(format!("{key}: {e}")));
            let parse_f64 = |v: &str| v.parse::<f64>().map_err(|e| bad(format!("{key}: {e}")));
            match key {
                "n_sentences" => cfg.n_sentences = parse_usize(value)?,
                "analyses_min" => cfg.analyses_min = parse_usize(value)?,
                "analyses_max" => cfg.analyses_max = parse_usize(value)?,
                "n_functions" => cfg.n_functions = parse_usize(value)?,
                "planted_weights" => {
                    cfg.planted_weights = value
                        .split(',')
                        .map(|v| v.trim().parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| bad(format!("planted_weights: {e}")))?;
                }
                "noise_scale" => cfg.noise_scale = parse_f64(value)?,
                "head_vocab" => cfg.head_vocab = parse_usize(value)?,
                "relation_vocab" => cfg.relation_vocab = parse_usize(value)?,
                "triple_signal" => cfg.triple_signal = parse_f64(value)?,
                "seed" => {
                    cfg.seed = value
                        .parse::<u64>()
                        .map_err(|e| bad(format!("seed: {e}")))?;
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }

    /// The planted weights, deriving a deterministic heterogeneous vector
    /// from the seed when none was supplied.
    pub fn resolved_weights(&self) -> Vec<f64> {
        if !self.planted_weights.is_empty() {
            return self.planted_weights.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.n_functions)
            .map(|_| {
                let magnitude = rng.random_range(0.3..3.0);
                if rng.random_bool(0.5) {
                    magnitude
                } else {
                    -magnitude
                }
            })
            .collect()
    }
}

/// Generates a corpus from the config. Pure: the same config always yields
/// the same corpus.
pub fn generate(cfg: &SynthConfig) -> Result<Corpus, SynthError> {
    cfg.validate()?;
    let planted = cfg.resolved_weights();
    let norm_sq: f64 = planted.iter().map(|w| w * w).sum();
    let function_names: Vec<String> = (0..cfg.n_functions).map(|j| format!("f{j}")).collect();

    let mut sentences = Vec::with_capacity(cfg.n_sentences);
    for i in 0..cfg.n_sentences {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64 + 1);
        sentences.push(generate_sentence(cfg, &planted, norm_sq, i, &mut rng)?);
    }
    Ok(Corpus {
        function_names,
        class_map: BTreeMap::new(),
        sentences,
    })
}

fn generate_sentence(
    cfg: &SynthConfig,
    planted: &[f64],
    norm_sq: f64,
    index: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Sentence, SynthError> {
    let id = format!("s{index}");
    let n_tokens = rng.random_range(4..=15);
    let tokens: Vec<String> = (0..n_tokens).map(|j| format!("w{j}")).collect();
    let gold = SkeletalTree::new(generate_tree(rng, n_tokens));

    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let n_analyses = rng.random_range(cfg.analyses_min..=cfg.analyses_max);
    let correct_features: Vec<f64> = (0..cfg.n_functions)
        .map(|_| 2.0 * normal.sample(rng))
        .collect();

    // (correct?, spans, features) per analysis, correct one first for now.
    let mut drafts = Vec::with_capacity(n_analyses);
    drafts.push((true, gold.constituents.clone(), correct_features.clone()));
    for _ in 1..n_analyses {
        let spans = perturb_spans(&gold, n_tokens, rng).ok_or(SynthError::Impossible(id.clone()))?;
        let features = correct_features
            .iter()
            .zip(planted)
            .map(|(x, w)| x - w / norm_sq + cfg.noise_scale * normal.sample(rng))
            .collect();
        drafts.push((false, spans, features));
    }
    drafts.shuffle(rng);

    let n_triples = (n_tokens / 2).max(2);
    let n_rules = n_tokens / 3 + 1;
    let analyses = drafts
        .into_iter()
        .enumerate()
        .map(|(slot, (correct, spans, features))| Analysis {
            id: format!("a{slot}"),
            spans,
            triples: (0..n_triples)
                .map(|_| draw_triple(cfg, correct, rng))
                .collect(),
            rules: (0..n_rules).map(|_| draw_rule(cfg, correct, rng)).collect(),
            features: features
                .iter()
                .enumerate()
                .map(|(j, v)| (format!("f{j}"), *v))
                .collect(),
        })
        .collect();

    Ok(Sentence {
        id,
        tokens,
        gold,
        analyses,
    })
}

/// Random nested constituent tree over `n` tokens, rooted at the full span.
fn generate_tree(rng: &mut ChaCha8Rng, n: usize) -> Vec<Constituent> {
    let mut spans = vec![Constituent::new(0, n, Some(random_label(rng)))];
    subdivide(rng, 0, n, 0, &mut spans);
    spans
}

fn subdivide(rng: &mut ChaCha8Rng, start: usize, end: usize, depth: usize, out: &mut Vec<Constituent>) {
    if end - start < 2 || depth >= 4 || !rng.random_bool(0.85) {
        return;
    }
    let mid = rng.random_range(start + 1..end);
    for (s, e) in [(start, mid), (mid, end)] {
        if e - s >= 1 && rng.random_bool(0.7) {
            out.push(Constituent::new(s, e, Some(random_label(rng))));
        }
        subdivide(rng, s, e, depth + 1, out);
    }
}

fn random_label(rng: &mut ChaCha8Rng) -> Label {
    if rng.random_bool(0.5) {
        Label::A
    } else {
        Label::P
    }
}

/// Distractor spans: the gold tree with a span dropped, added, or moved,
/// guaranteed to induce a different segment set.
fn perturb_spans(
    gold: &SkeletalTree,
    n_tokens: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Constituent>> {
    let gold_segments = gold.segments();
    for _ in 0..32 {
        let mut spans = gold.constituents.clone();
        match rng.random_range(0..3) {
            0 if spans.len() >= 2 => {
                spans.remove(rng.random_range(0..spans.len()));
            }
            1 => {
                let start = rng.random_range(0..n_tokens);
                let end = rng.random_range(start + 1..=n_tokens);
                if gold_segments.contains(&(start, end)) {
                    continue;
                }
                spans.push(Constituent::new(start, end, Some(random_label(rng))));
            }
            _ => {
                let idx = rng.random_range(0..spans.len());
                let old = spans[idx];
                let start = rng.random_range(0..n_tokens);
                let end = rng.random_range(start + 1..=n_tokens);
                if gold_segments.contains(&(start, end)) {
                    continue;
                }
                spans[idx] = Constituent::new(start, end, old.label);
            }
        }
        let segments: std::collections::HashSet<(usize, usize)> =
            spans.iter().map(|c| c.segment()).collect();
        if segments != gold_segments && segments.len() == spans.len() {
            spans.sort();
            return Some(spans);
        }
    }
    // Deterministic fallback: add the first absent segment.
    for start in 0..n_tokens {
        for end in start + 1..=n_tokens {
            if !gold_segments.contains(&(start, end)) {
                let mut spans = gold.constituents.clone();
                spans.push(Constituent::new(start, end, Some(Label::A)));
                spans.sort();
                return Some(spans);
            }
        }
    }
    None
}

fn draw_triple(cfg: &SynthConfig, correct: bool, rng: &mut ChaCha8Rng) -> Triple {
    let h1 = draw_head(cfg, correct, rng);
    let h2 = draw_head(cfg, correct, rng);
    let r = format!("r{}", rng.random_range(0..cfg.relation_vocab));
    Triple::new(h1, r, h2)
}

/// Heads come from the correctness-specific half of the vocabulary with
/// probability `triple_signal`, otherwise from the full vocabulary.
fn draw_head(cfg: &SynthConfig, correct: bool, rng: &mut ChaCha8Rng) -> String {
    let half = cfg.head_vocab / 2;
    let idx = if rng.random_bool(cfg.triple_signal) {
        if correct {
            rng.random_range(0..half)
        } else {
            rng.random_range(half..cfg.head_vocab)
        }
    } else {
        rng.random_range(0..cfg.head_vocab)
    };
    format!("h{idx}")
}

fn draw_rule(cfg: &SynthConfig, correct: bool, rng: &mut ChaCha8Rng) -> String {
    let vocab = cfg.relation_vocab * 2;
    let half = vocab / 2;
    let idx = if rng.random_bool(cfg.triple_signal) {
        if correct {
            rng.random_range(0..half)
        } else {
            rng.random_range(half..vocab)
        }
    } else {
        rng.random_range(0..vocab)
    };
    format!("ru{idx}")
}

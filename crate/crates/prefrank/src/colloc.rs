//! Collocation statistics over `(H1, R, H2)` triples, and syntactic rule
//! costs.
//!
//! Triple counts are collected from the analyses ranked highest (or joint
//! highest) in training score; a tie between best analyses contributes each
//! sharer's triples with weight `1/|best set|`, so every sentence adds one
//! expected triple multiset. Five per-triple statistics are provided:
//!
//! - mutual information `ln(A / (P1(a) P2(b) P3(c)))`,
//! - signed chi-squared `|F-E| (F-E) / E`,
//! - signed chi `(F-E) / sqrt(E)`,
//! - mean distance: the average relativised training score of every
//!   analysis (best or not) containing the triple,
//! - a signed binomial log-likelihood ratio testing whether `H1` and `H2`
//!   are independent given `R`.
//!
//! Mutual information and the chi variants smooth the observed joint count
//! by adding 0.5; marginals are left unsmoothed. A trained [`CollocModel`]
//! freezes one statistic into a per-triple score table and scores an
//! analysis by averaging over its triple tokens and multiplying by the
//! sentence word count, which keeps scores comparable across analyses while
//! growing with sentence length like the count-valued functions do.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Analysis, Corpus, Triple};
use crate::score::{self, ScoreWeights};

#[derive(Debug, Error)]
pub enum CollocError {
    #[error("untrained model: {0}")]
    Untrained(String),
    #[error("no exactly-correct analyses in corpus")]
    NoCorrectAnalyses,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed model file: {0}")]
    Format(#[from] serde_json::Error),
}

/// How tied best analyses contribute to triple counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum TieWeighting {
    /// Each of `k` tied analyses contributes with weight `1/k`.
    #[default]
    Fractional,
    /// Every tied analysis contributes with weight 1.
    CountAll,
}

/// Counts over the designated triple population: joint counts per triple
/// and one marginal per position. `Σ joint = Σ m1 = Σ m2 = Σ m3 = n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TripleStats {
    pub joint: BTreeMap<Triple, f64>,
    pub m1: BTreeMap<String, f64>,
    pub m2: BTreeMap<String, f64>,
    pub m3: BTreeMap<String, f64>,
    pub n: f64,
}

impl TripleStats {
    pub fn joint_count(&self, t: &Triple) -> f64 {
        self.joint.get(t).copied().unwrap_or(0.0)
    }

    fn marginals(&self, t: &Triple) -> (f64, f64, f64) {
        (
            self.m1.get(&t.h1).copied().unwrap_or(0.0),
            self.m2.get(&t.r).copied().unwrap_or(0.0),
            self.m3.get(&t.h2).copied().unwrap_or(0.0),
        )
    }

    fn add(&mut self, t: &Triple, weight: f64) {
        *self.joint.entry(t.clone()).or_insert(0.0) += weight;
        *self.m1.entry(t.h1.clone()).or_insert(0.0) += weight;
        *self.m2.entry(t.r.clone()).or_insert(0.0) += weight;
        *self.m3.entry(t.h2.clone()).or_insert(0.0) += weight;
        self.n += weight;
    }
}

/// Collects triple counts from the best-scoring analyses of every sentence.
pub fn extract_triple_counts(corpus: &Corpus, weights: &ScoreWeights) -> TripleStats {
    extract_triple_counts_with(corpus, weights, TieWeighting::Fractional)
}

/// As [`extract_triple_counts`], with an explicit tie-weighting mode.
pub fn extract_triple_counts_with(
    corpus: &Corpus,
    weights: &ScoreWeights,
    ties: TieWeighting,
) -> TripleStats {
    let mut stats = TripleStats::default();
    for sentence in &corpus.sentences {
        let best = score::best_indices(sentence, weights);
        let weight = match ties {
            TieWeighting::Fractional => 1.0 / best.len() as f64,
            TieWeighting::CountAll => 1.0,
        };
        for i in best {
            for triple in &sentence.analyses[i].triples {
                stats.add(triple, weight);
            }
        }
    }
    stats
}

/// Mutual information of a triple under the three-way independence model,
/// with `smoothing` added to the observed joint count.
///
/// `None` when the population is empty or any marginal is zero.
pub fn mutual_information(stats: &TripleStats, t: &Triple, smoothing: f64) -> Option<f64> {
    if stats.n <= 0.0 {
        return None;
    }
    let (m1, m2, m3) = stats.marginals(t);
    if m1 <= 0.0 || m2 <= 0.0 || m3 <= 0.0 {
        return None;
    }
    let n = stats.n;
    let a = (stats.joint_count(t) + smoothing) / n;
    let independent = (m1 / n) * (m2 / n) * (m3 / n);
    Some((a / independent).ln())
}

fn observed_expected(stats: &TripleStats, t: &Triple, smoothing: f64) -> Option<(f64, f64)> {
    if stats.n <= 0.0 {
        return None;
    }
    let (m1, m2, m3) = stats.marginals(t);
    let n = stats.n;
    let expected = n * (m1 / n) * (m2 / n) * (m3 / n);
    if expected <= 0.0 {
        return None;
    }
    Some((stats.joint_count(t) + smoothing, expected))
}

/// Signed chi-squared `|F-E| (F-E) / E`, monotone in the observed count.
pub fn chi_squared_signed(stats: &TripleStats, t: &Triple, smoothing: f64) -> Option<f64> {
    let (f, e) = observed_expected(stats, t, smoothing)?;
    Some((f - e).abs() * (f - e) / e)
}

/// Signed chi `(F-E) / sqrt(E)`; less dominated by large `F-E` than the
/// chi-squared variant.
pub fn chi_signed(stats: &TripleStats, t: &Triple, smoothing: f64) -> Option<f64> {
    let (f, e) = observed_expected(stats, t, smoothing)?;
    Some((f - e) / e.sqrt())
}

/// Signed log-likelihood ratio for the hypothesis that `H1` and `H2` are
/// independent given `R`.
///
/// Over the population of triples sharing `t`'s relation, the 2x2 table
/// fixes `h1` on one margin and `h2` on the other; the statistic is
/// `-2 ln λ` comparing a single-rate binomial model against the two-rate
/// model, signed positive when the joint count exceeds its independence
/// expectation. `None` when the relation is unseen; 0 on a degenerate
/// table (a zero row or column).
pub fn likelihood_ratio(stats: &TripleStats, t: &Triple) -> Option<f64> {
    let n_r = stats.m2.get(&t.r).copied().unwrap_or(0.0);
    if n_r <= 0.0 {
        return None;
    }
    let mut row1 = 0.0;
    let mut col1 = 0.0;
    for (other, count) in &stats.joint {
        if other.r != t.r {
            continue;
        }
        if other.h1 == t.h1 {
            row1 += count;
        }
        if other.h2 == t.h2 {
            col1 += count;
        }
    }
    Some(signed_llr_2x2(stats.joint_count(t), row1, col1, n_r))
}

/// Signed `-2 ln λ` for a 2x2 table given its first cell, margins, and
/// total, computed in the Shannon form `2 Σ k ln(k N / (row col))`.
pub(crate) fn signed_llr_2x2(k11: f64, row1: f64, col1: f64, total: f64) -> f64 {
    let row2 = total - row1;
    let col2 = total - col1;
    if row1 <= 0.0 || col1 <= 0.0 || row2 <= 0.0 || col2 <= 0.0 {
        return 0.0;
    }
    let k12 = row1 - k11;
    let k21 = col1 - k11;
    let k22 = row2 - k21;

    let term = |k: f64, row: f64, col: f64| {
        if k <= 0.0 {
            0.0
        } else {
            k * (k * total / (row * col)).ln()
        }
    };
    let g2 = 2.0
        * (term(k11, row1, col1)
            + term(k12, row1, col2)
            + term(k21, row2, col1)
            + term(k22, row2, col2));
    let expected = row1 * col1 / total;
    if k11 >= expected {
        g2
    } else {
        -g2
    }
}

/// Mean relativised training score over every analysis in the corpus whose
/// triple multiset contains `t` (each qualifying analysis counted once).
///
/// For a triple never observed in any analysis, returns the corpus-wide
/// mean relativised score over all analyses.
pub fn mean_distance(corpus: &Corpus, weights: &ScoreWeights, t: &Triple) -> f64 {
    let mut sum = 0.0;
    let mut count = 0.0;
    let mut total_sum = 0.0;
    let mut total_count = 0.0;
    for sentence in &corpus.sentences {
        let rel = score::relativize(sentence, weights);
        for (i, analysis) in sentence.analyses.iter().enumerate() {
            total_sum += rel.g[i];
            total_count += 1.0;
            if analysis.triples.contains(t) {
                sum += rel.g[i];
                count += 1.0;
            }
        }
    }
    if count > 0.0 {
        sum / count
    } else if total_count > 0.0 {
        total_sum / total_count
    } else {
        0.0
    }
}

/// The five per-triple statistics a collocation model can be trained on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollocStatistic {
    MutualInfo,
    ChiSquared,
    Chi,
    MeanDistance,
    LikelihoodRatio,
}

impl CollocStatistic {
    pub const ALL: [CollocStatistic; 5] = [
        CollocStatistic::MutualInfo,
        CollocStatistic::ChiSquared,
        CollocStatistic::Chi,
        CollocStatistic::MeanDistance,
        CollocStatistic::LikelihoodRatio,
    ];

    /// Default added to observed joint counts for this statistic.
    pub fn default_smoothing(&self) -> f64 {
        match self {
            CollocStatistic::MutualInfo | CollocStatistic::ChiSquared | CollocStatistic::Chi => 0.5,
            CollocStatistic::MeanDistance | CollocStatistic::LikelihoodRatio => 0.0,
        }
    }
}

impl fmt::Display for CollocStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CollocStatistic::MutualInfo => "mutual_info",
            CollocStatistic::ChiSquared => "chi_squared",
            CollocStatistic::Chi => "chi",
            CollocStatistic::MeanDistance => "mean_distance",
            CollocStatistic::LikelihoodRatio => "likelihood_ratio",
        };
        write!(f, "{name}")
    }
}

impl FromStr for CollocStatistic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mutual_info" => Ok(CollocStatistic::MutualInfo),
            "chi_squared" => Ok(CollocStatistic::ChiSquared),
            "chi" => Ok(CollocStatistic::Chi),
            "mean_distance" => Ok(CollocStatistic::MeanDistance),
            "likelihood_ratio" => Ok(CollocStatistic::LikelihoodRatio),
            other => Err(format!(
                "unknown statistic {other:?} (expected mutual_info, chi_squared, chi, \
                 mean_distance, or likelihood_ratio)"
            )),
        }
    }
}

/// Knobs for collocation model training.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CollocOptions {
    /// Override of the per-statistic smoothing constant.
    pub smoothing: Option<f64>,
    /// Override of the unseen-triple score.
    pub default_value: Option<f64>,
    pub tie_weighting: TieWeighting,
}

/// A trained collocation preference function: one statistic frozen into a
/// per-triple score table, with a default for unseen triples.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocModel {
    pub statistic: CollocStatistic,
    pub table: BTreeMap<Triple, f64>,
    pub default_value: f64,
    pub smoothing: f64,
}

impl CollocModel {
    /// Trains a model on the corpus. The chi-family and likelihood-ratio
    /// statistics use the best-analysis triple population; mean distance
    /// uses every analysis.
    pub fn train(
        statistic: CollocStatistic,
        corpus: &Corpus,
        weights: &ScoreWeights,
        options: &CollocOptions,
    ) -> Result<CollocModel, CollocError> {
        let smoothing = options.smoothing.unwrap_or(statistic.default_smoothing());
        match statistic {
            CollocStatistic::MeanDistance => {
                Self::train_mean_distance(corpus, weights, options, smoothing)
            }
            _ => {
                let stats = extract_triple_counts_with(corpus, weights, options.tie_weighting);
                if stats.n <= 0.0 {
                    return Err(CollocError::Untrained(
                        "no triples in the best-analysis population".into(),
                    ));
                }
                let mut table = BTreeMap::new();
                for (triple, count) in &stats.joint {
                    if *count <= 0.0 {
                        continue;
                    }
                    let value = match statistic {
                        CollocStatistic::MutualInfo => {
                            mutual_information(&stats, triple, smoothing)
                        }
                        CollocStatistic::ChiSquared => {
                            chi_squared_signed(&stats, triple, smoothing)
                        }
                        CollocStatistic::Chi => chi_signed(&stats, triple, smoothing),
                        CollocStatistic::LikelihoodRatio => likelihood_ratio(&stats, triple),
                        CollocStatistic::MeanDistance => unreachable!(),
                    };
                    if let Some(value) = value {
                        table.insert(triple.clone(), value);
                    }
                }
                Ok(CollocModel {
                    statistic,
                    table,
                    default_value: options.default_value.unwrap_or(0.0),
                    smoothing,
                })
            }
        }
    }

    fn train_mean_distance(
        corpus: &Corpus,
        weights: &ScoreWeights,
        options: &CollocOptions,
        smoothing: f64,
    ) -> Result<CollocModel, CollocError> {
        let mut sums: BTreeMap<Triple, (f64, f64)> = BTreeMap::new();
        let mut total_sum = 0.0;
        let mut total_count = 0.0;
        for sentence in &corpus.sentences {
            let rel = score::relativize(sentence, weights);
            for (i, analysis) in sentence.analyses.iter().enumerate() {
                total_sum += rel.g[i];
                total_count += 1.0;
                // Membership, not multiplicity: an analysis counts once per
                // distinct triple it contains.
                let distinct: std::collections::BTreeSet<&Triple> =
                    analysis.triples.iter().collect();
                for triple in distinct {
                    let entry = sums.entry(triple.clone()).or_insert((0.0, 0.0));
                    entry.0 += rel.g[i];
                    entry.1 += 1.0;
                }
            }
        }
        if total_count == 0.0 {
            return Err(CollocError::Untrained("corpus has no analyses".into()));
        }
        let table = sums
            .into_iter()
            .map(|(triple, (sum, count))| (triple, sum / count))
            .collect();
        Ok(CollocModel {
            statistic: CollocStatistic::MeanDistance,
            table,
            default_value: options.default_value.unwrap_or(total_sum / total_count),
            smoothing,
        })
    }

    /// Per-triple score, falling back to the unseen default.
    pub fn triple_score(&self, t: &Triple) -> f64 {
        self.table.get(t).copied().unwrap_or(self.default_value)
    }

    /// Scores an analysis: the mean table score over its triple tokens,
    /// multiplied by the sentence word count. No triples scores 0.
    pub fn score_analysis(&self, analysis: &Analysis, sentence_word_count: usize) -> f64 {
        if analysis.triples.is_empty() {
            return 0.0;
        }
        let sum: f64 = analysis.triples.iter().map(|t| self.triple_score(t)).sum();
        sum / analysis.triples.len() as f64 * sentence_word_count as f64
    }

    pub fn to_writer(&self, writer: impl Write) -> Result<(), CollocError> {
        let file = CollocModelFile {
            statistic: self.statistic,
            smoothing: self.smoothing,
            default_value: self.default_value,
            table: self
                .table
                .iter()
                .map(|(t, v)| (t.h1.clone(), t.r.clone(), t.h2.clone(), *v))
                .collect(),
        };
        serde_json::to_writer(writer, &file)?;
        Ok(())
    }

    pub fn from_reader(reader: impl Read) -> Result<CollocModel, CollocError> {
        let file: CollocModelFile = serde_json::from_reader(reader)?;
        Ok(CollocModel {
            statistic: file.statistic,
            smoothing: file.smoothing,
            default_value: file.default_value,
            table: file
                .table
                .into_iter()
                .map(|(h1, r, h2, v)| (Triple::new(h1, r, h2), v))
                .collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CollocModelFile {
    statistic: CollocStatistic,
    smoothing: f64,
    default_value: f64,
    table: Vec<(String, String, String, f64)>,
}

/// Syntactic rule probabilities estimated from exactly-correct analyses,
/// with add-0.5 smoothing over the full rule vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleModel {
    pub probs: BTreeMap<String, f64>,
    pub floor: f64,
}

impl RuleModel {
    pub fn log_prob(&self, rule: &str) -> f64 {
        self.probs
            .get(rule)
            .copied()
            .unwrap_or(self.floor)
            .ln()
    }

    pub fn to_writer(&self, writer: impl Write) -> Result<(), CollocError> {
        serde_json::to_writer(writer, self)?;
        Ok(())
    }

    pub fn from_reader(reader: impl Read) -> Result<RuleModel, CollocError> {
        Ok(serde_json::from_reader(reader)?)
    }
}

/// Estimates `P(R)` as the smoothed share of rule `R` among all rule
/// occurrences in exactly-correct analyses:
/// `(count + 0.5) / (total + 0.5 * |vocabulary|)`, where the vocabulary is
/// every rule name seen anywhere in the corpus.
pub fn estimate_rule_probs(corpus: &Corpus) -> Result<RuleModel, CollocError> {
    let mut vocabulary: std::collections::BTreeSet<&String> = std::collections::BTreeSet::new();
    let mut counts: BTreeMap<&String, f64> = BTreeMap::new();
    let mut total = 0.0;
    let mut any_correct = false;

    for sentence in &corpus.sentences {
        for analysis in &sentence.analyses {
            vocabulary.extend(analysis.rules.iter());
            if score::exact_match(analysis, &sentence.gold) {
                any_correct = true;
                for rule in &analysis.rules {
                    *counts.entry(rule).or_insert(0.0) += 1.0;
                    total += 1.0;
                }
            }
        }
    }
    if !any_correct {
        return Err(CollocError::NoCorrectAnalyses);
    }
    if vocabulary.is_empty() {
        // No rules anywhere: every cost is 0.
        return Ok(RuleModel {
            probs: BTreeMap::new(),
            floor: 1.0,
        });
    }
    let denominator = total + 0.5 * vocabulary.len() as f64;
    let probs = counts
        .into_iter()
        .map(|(rule, count)| (rule.clone(), (count + 0.5) / denominator))
        .collect();
    Ok(RuleModel {
        probs,
        floor: 0.5 / denominator,
    })
}

/// Sum of log rule probabilities over an analysis's rule multiset; rules
/// outside the model contribute the smoothed floor.
pub fn syntactic_rule_cost(model: &RuleModel, analysis: &Analysis) -> f64 {
    analysis.rules.iter().map(|r| model.log_prob(r)).sum()
}

//! Scaling-factor computation: the normalized baseline, least squares via
//! the normal equations, and interval-based hill climbing.
//!
//! Least squares minimizes `Σ_i (g_i - Σ_j c_j z_ij)^2` over the relativised
//! training matrix; setting each partial derivative to zero yields a linear
//! system solved by Gaussian elimination with partial pivoting (plus a small
//! ridge when preference functions are collinear).
//!
//! The least-squares factors approximate training scores, but the real goal
//! is the number of sentences whose top-ranked analysis is correct, which
//! varies discontinuously with the factors. Hill climbing therefore alters
//! one factor at a time: holding the others fixed, every analysis score is
//! affine in the free factor, so each sentence yields an exact set of
//! intervals of factor values in which that sentence is disambiguated
//! correctly. Overlaying the interval sets for all sentences finds, per
//! factor, the value with the best corpus-wide count; the single best
//! alteration is applied and the sweep repeats until no alteration helps.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Sentence};
use crate::eval;
use crate::score::{self, ScoreWeights};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("function {0:?} is not declared in the corpus")]
    UnknownFunction(String),
    #[error("sentence {0:?} has no analyses")]
    EmptySentence(String),
    #[error("expected {expected} scaling factors, got {got}")]
    FactorCount { expected: usize, got: usize },
    #[error("factors file is missing declared function {0:?}")]
    MissingFactor(String),
    #[error("factors file names unknown function {0:?}")]
    UnknownFactor(String),
    #[error("factor for {0:?} is not finite")]
    NonFiniteFactor(String),
    #[error("hill climbing failed to converge within {0} iterations")]
    IterationCap(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed factors file: {0}")]
    Format(#[from] serde_json::Error),
}

/// How top-score ties affect whether a sentence counts as correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TieMode {
    /// A sentence is correct only if every top-scoring analysis is correct.
    #[default]
    Strict,
    /// A sentence is correct if any top-scoring analysis is correct.
    Lenient,
}

/// Scaling factors, ordered like the function-name list they were trained
/// against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFactors {
    pub c: Vec<f64>,
}

impl ScalingFactors {
    pub fn new(c: Vec<f64>) -> Self {
        ScalingFactors { c }
    }

    pub fn zeros(len: usize) -> Self {
        ScalingFactors { c: vec![0.0; len] }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Pairs factors with their function names.
    pub fn to_named(&self, names: &[String]) -> BTreeMap<String, f64> {
        names.iter().cloned().zip(self.c.iter().copied()).collect()
    }

    /// Builds a factor vector aligned with `names` from a name-to-value
    /// map. Every name must be present, every map key must be a known
    /// name, and all values must be finite.
    pub fn from_named(
        map: &BTreeMap<String, f64>,
        names: &[String],
    ) -> Result<ScalingFactors, TrainError> {
        for key in map.keys() {
            if !names.contains(key) {
                return Err(TrainError::UnknownFactor(key.clone()));
            }
        }
        let mut c = Vec::with_capacity(names.len());
        for name in names {
            let value = map
                .get(name)
                .copied()
                .ok_or_else(|| TrainError::MissingFactor(name.clone()))?;
            if !value.is_finite() {
                return Err(TrainError::NonFiniteFactor(name.clone()));
            }
            c.push(value);
        }
        Ok(ScalingFactors { c })
    }

    /// Re-aligns a factor vector from the `from` name order into the wider
    /// `into` order, filling absent functions with zero.
    pub fn embed(&self, from: &[String], into: &[String]) -> Result<ScalingFactors, TrainError> {
        if self.c.len() != from.len() {
            return Err(TrainError::FactorCount {
                expected: from.len(),
                got: self.c.len(),
            });
        }
        let mut c = vec![0.0; into.len()];
        for (name, value) in from.iter().zip(&self.c) {
            let idx = into
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| TrainError::UnknownFunction(name.clone()))?;
            c[idx] = *value;
        }
        Ok(ScalingFactors { c })
    }
}

/// Writes factors as a flat name-to-value JSON map.
pub fn write_factors(
    writer: impl Write,
    names: &[String],
    factors: &ScalingFactors,
) -> Result<(), TrainError> {
    if names.len() != factors.len() {
        return Err(TrainError::FactorCount {
            expected: names.len(),
            got: factors.len(),
        });
    }
    serde_json::to_writer_pretty(writer, &factors.to_named(names))?;
    Ok(())
}

/// Reads a flat name-to-value factors file, checked against `names`.
pub fn read_factors(reader: impl Read, names: &[String]) -> Result<ScalingFactors, TrainError> {
    let map: BTreeMap<String, f64> = serde_json::from_reader(reader)?;
    ScalingFactors::from_named(&map, names)
}

/// One row of the training matrix: the relativised training score and
/// relativised feature scores of a single analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRow {
    pub sentence_id: String,
    pub analysis_id: String,
    pub g: f64,
    pub z: Vec<f64>,
}

/// Relativised scores for every analysis in the corpus, with feature
/// columns ordered by the active function list.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingMatrix {
    pub function_names: Vec<String>,
    pub rows: Vec<MatrixRow>,
}

/// Builds the training matrix over the given active functions.
pub fn assemble_training_matrix(
    corpus: &Corpus,
    weights: &ScoreWeights,
    functions: &[String],
) -> Result<TrainingMatrix, TrainError> {
    for name in functions {
        if corpus.function_index(name).is_none() {
            return Err(TrainError::UnknownFunction(name.clone()));
        }
    }
    let mut rows = Vec::with_capacity(corpus.n_analyses());
    for sentence in &corpus.sentences {
        if sentence.analyses.is_empty() {
            return Err(TrainError::EmptySentence(sentence.id.clone()));
        }
        let rel = score::relativize(sentence, weights);
        for (i, analysis) in sentence.analyses.iter().enumerate() {
            rows.push(MatrixRow {
                sentence_id: sentence.id.clone(),
                analysis_id: analysis.id.clone(),
                g: rel.g[i],
                z: functions.iter().map(|name| rel.feature(i, name)).collect(),
            });
        }
    }
    Ok(TrainingMatrix {
        function_names: functions.to_vec(),
        rows,
    })
}

/// Sum of squared errors `Σ_i (g_i - Σ_j c_j z_ij)^2`.
pub fn sse(matrix: &TrainingMatrix, factors: &ScalingFactors) -> f64 {
    matrix
        .rows
        .iter()
        .map(|row| {
            let predicted: f64 = row.z.iter().zip(&factors.c).map(|(z, c)| c * z).sum();
            let err = row.g - predicted;
            err * err
        })
        .sum()
}

/// Analytic SSE gradient: component `k` is
/// `-2 Σ_i z_ik (g_i - Σ_j c_j z_ij)`.
pub fn sse_gradient(matrix: &TrainingMatrix, factors: &ScalingFactors) -> Vec<f64> {
    let k = matrix.function_names.len();
    let mut grad = vec![0.0; k];
    for row in &matrix.rows {
        let predicted: f64 = row.z.iter().zip(&factors.c).map(|(z, c)| c * z).sum();
        let residual = row.g - predicted;
        for (gk, zk) in grad.iter_mut().zip(&row.z) {
            *gk += -2.0 * zk * residual;
        }
    }
    grad
}

const PIVOT_TOL: f64 = 1e-10;

/// Least-squares scaling factors via the normal equations.
///
/// Near-singular systems are regularized by adding a small ridge
/// (`1e-8 * trace / m`) to the diagonal and re-solving, escalating the
/// ridge if necessary. An all-zero matrix yields all-zero factors with a
/// warning.
pub fn least_squares(matrix: &TrainingMatrix) -> ScalingFactors {
    let m = matrix.function_names.len();
    let mut normal = vec![vec![0.0; m]; m];
    let mut rhs = vec![0.0; m];
    for row in &matrix.rows {
        for (k, zk) in row.z.iter().enumerate() {
            rhs[k] += zk * row.g;
            for (j, zj) in row.z.iter().enumerate() {
                normal[k][j] += zk * zj;
            }
        }
    }
    let trace: f64 = (0..m).map(|i| normal[i][i]).sum();
    if trace <= 0.0 {
        log::warn!("all relativised feature scores are zero; returning zero factors");
        return ScalingFactors::zeros(m);
    }
    if let Some(c) = gauss_solve(normal.clone(), rhs.clone()) {
        return ScalingFactors::new(c);
    }
    // Collinear functions: ridge-regularize with an escalating lambda.
    let mut lambda = 1e-8 * trace / m as f64;
    for _ in 0..8 {
        let mut regularized = normal.clone();
        for (i, row) in regularized.iter_mut().enumerate() {
            row[i] += lambda;
        }
        if let Some(c) = gauss_solve(regularized, rhs.clone()) {
            return ScalingFactors::new(c);
        }
        lambda *= 10.0;
    }
    log::warn!("normal equations unsolvable even with ridge; returning zero factors");
    ScalingFactors::zeros(m)
}

/// Gaussian elimination with partial pivoting; `None` when a pivot falls
/// below tolerance.
#[allow(clippy::needless_range_loop)]
fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < PIVOT_TOL {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let sum: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - sum) / a[row][row];
    }
    Some(x)
}

/// The normalized baseline: each factor's magnitude is the inverse standard
/// deviation of the corresponding relativised feature column, signed by its
/// correlation with the relativised training score. Zero-variance columns
/// get a zero factor with a warning.
pub fn normalized_factors(matrix: &TrainingMatrix) -> ScalingFactors {
    let m = matrix.function_names.len();
    let n = matrix.rows.len() as f64;
    let mut c = vec![0.0; m];
    if matrix.rows.is_empty() {
        return ScalingFactors::new(c);
    }
    let g_mean: f64 = matrix.rows.iter().map(|r| r.g).sum::<f64>() / n;
    #[allow(clippy::needless_range_loop)]
    for j in 0..m {
        let mean: f64 = matrix.rows.iter().map(|r| r.z[j]).sum::<f64>() / n;
        let variance: f64 = matrix
            .rows
            .iter()
            .map(|r| (r.z[j] - mean) * (r.z[j] - mean))
            .sum::<f64>()
            / n;
        let std = variance.sqrt();
        if std <= 1e-12 * mean.abs().max(1.0) {
            log::warn!(
                "function {:?} has zero variance; its factor is 0",
                matrix.function_names[j]
            );
            continue;
        }
        let covariance: f64 = matrix
            .rows
            .iter()
            .map(|r| (r.z[j] - mean) * (r.g - g_mean))
            .sum::<f64>()
            / n;
        let sign = if covariance > 0.0 { 1.0 } else { -1.0 };
        c[j] = sign / std;
    }
    ScalingFactors::new(c)
}

/// Number of sentences whose entire top-scoring analysis set is exactly
/// correct, under the strict tie rule.
pub fn correct_count(corpus: &Corpus, factors: &ScalingFactors) -> usize {
    correct_count_with(corpus, factors, TieMode::Strict)
}

/// As [`correct_count`], with an explicit tie rule.
pub fn correct_count_with(corpus: &Corpus, factors: &ScalingFactors, tie: TieMode) -> usize {
    corpus
        .sentences
        .iter()
        .filter(|s| eval::sentence_correct(s, &corpus.function_names, factors, tie))
        .count()
}

/// An interval of factor values, possibly unbounded, with explicit
/// endpoint closedness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        (x > self.lower || (self.lower_closed && x == self.lower))
            && (x < self.upper || (self.upper_closed && x == self.upper))
    }
}

/// A sorted, disjoint set of intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    pub intervals: Vec<Interval>,
}

impl IntervalSet {
    /// The whole real line.
    pub fn full() -> Self {
        IntervalSet {
            intervals: vec![Interval {
                lower: f64::NEG_INFINITY,
                upper: f64::INFINITY,
                lower_closed: false,
                upper_closed: false,
            }],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    /// All finite interval endpoints.
    pub fn finite_endpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.intervals
            .iter()
            .flat_map(|i| [i.lower, i.upper])
            .filter(|x| x.is_finite())
    }
}

/// Affine score lines for one sentence when factor `j` is free: analysis
/// scores are `base + slope * x`.
struct SentenceLines {
    base: Vec<f64>,
    slope: Vec<f64>,
    correct: Vec<bool>,
}

impl SentenceLines {
    fn build(sentence: &Sentence, functions: &[String], factors: &ScalingFactors, j: usize) -> Self {
        let base = sentence
            .analyses
            .iter()
            .map(|a| {
                functions
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(k, name)| factors.c[k] * a.feature(name))
                    .sum()
            })
            .collect();
        let slope = sentence
            .analyses
            .iter()
            .map(|a| a.feature(&functions[j]))
            .collect();
        let correct = sentence
            .analyses
            .iter()
            .map(|a| score::exact_match(a, &sentence.gold))
            .collect();
        SentenceLines {
            base,
            slope,
            correct,
        }
    }

    /// Whether the sentence is disambiguated correctly at `x`.
    fn correct_at(&self, x: f64, tie: TieMode) -> bool {
        let mut max = f64::NEG_INFINITY;
        for (b, s) in self.base.iter().zip(&self.slope) {
            max = max.max(b + s * x);
        }
        let mut any_correct = false;
        let mut all_correct = true;
        for ((b, s), correct) in self.base.iter().zip(&self.slope).zip(&self.correct) {
            if b + s * x == max {
                any_correct |= correct;
                all_correct &= correct;
            }
        }
        match tie {
            TieMode::Strict => all_correct && any_correct,
            TieMode::Lenient => any_correct,
        }
    }

    /// Exact set of `x` values at which the sentence is correct.
    ///
    /// The winner order can only change where two score lines cross, so the
    /// crossing points partition the line into regions of constant outcome;
    /// each region midpoint and each crossing point is tested directly.
    fn feasible(&self, tie: TieMode) -> IntervalSet {
        if !self.correct.iter().any(|c| *c) {
            return IntervalSet::default();
        }
        if self.correct.iter().all(|c| *c) {
            return IntervalSet::full();
        }
        let n = self.base.len();
        let mut crossings = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.slope[a] != self.slope[b] {
                    let x = (self.base[b] - self.base[a]) / (self.slope[a] - self.slope[b]);
                    if x.is_finite() {
                        crossings.push(x);
                    }
                }
            }
        }
        crossings.sort_by(f64::total_cmp);
        crossings.dedup();

        if crossings.is_empty() {
            return if self.correct_at(0.0, tie) {
                IntervalSet::full()
            } else {
                IntervalSet::default()
            };
        }

        // Alternating sequence of regions and breakpoints with their
        // outcomes: (-inf, x0), {x0}, (x0, x1), {x1}, ..., (xk, +inf).
        enum Piece {
            Region(f64, f64),
            Point(f64),
        }
        let mut pieces = Vec::with_capacity(2 * crossings.len() + 1);
        pieces.push(Piece::Region(f64::NEG_INFINITY, crossings[0]));
        for (i, &x) in crossings.iter().enumerate() {
            pieces.push(Piece::Point(x));
            let upper = crossings.get(i + 1).copied().unwrap_or(f64::INFINITY);
            pieces.push(Piece::Region(x, upper));
        }

        let mut intervals = Vec::new();
        let mut open_start: Option<(f64, bool)> = None;
        for piece in &pieces {
            let (value, probe_lower) = match piece {
                Piece::Region(lo, hi) => {
                    let probe = region_probe(*lo, *hi);
                    (self.correct_at(probe, tie), (*lo, false))
                }
                Piece::Point(x) => (self.correct_at(*x, tie), (*x, true)),
            };
            match (value, open_start) {
                (true, None) => open_start = Some(probe_lower),
                (false, Some((lower, lower_closed))) => {
                    let (upper, upper_closed) = match piece {
                        Piece::Point(x) => (*x, false),
                        Piece::Region(lo, _) => (*lo, true),
                    };
                    intervals.push(Interval {
                        lower,
                        upper,
                        lower_closed,
                        upper_closed,
                    });
                    open_start = None;
                }
                _ => {}
            }
        }
        if let Some((lower, lower_closed)) = open_start {
            intervals.push(Interval {
                lower,
                upper: f64::INFINITY,
                lower_closed,
                upper_closed: false,
            });
        }
        IntervalSet { intervals }
    }
}

/// A representative point strictly inside `(lo, hi)` where possible.
fn region_probe(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (false, false) => 0.0,
        (false, true) => hi - 1.0,
        (true, false) => lo + 1.0,
        (true, true) => lo + (hi - lo) / 2.0,
    }
}

/// Exact set of values for factor `j` (all other factors held fixed) at
/// which the sentence's top-scoring analyses are correct.
pub fn feasible_intervals(
    sentence: &Sentence,
    functions: &[String],
    factors: &ScalingFactors,
    j: usize,
    tie: TieMode,
) -> IntervalSet {
    SentenceLines::build(sentence, functions, factors, j).feasible(tie)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillClimbOptions {
    pub tie_mode: TieMode,
    /// Iteration cap; defaults to 50 times the number of functions.
    pub max_iters: Option<usize>,
}

impl Default for HillClimbOptions {
    fn default() -> Self {
        HillClimbOptions {
            tie_mode: TieMode::Strict,
            max_iters: None,
        }
    }
}

/// Hill-climbing result: the refined factors and the corpus-wide correct
/// count after each applied alteration (so `counts[0]` is the count at the
/// starting factors).
#[derive(Debug, Clone, PartialEq)]
pub struct HillClimbOutcome {
    pub factors: ScalingFactors,
    pub counts: Vec<usize>,
    pub iterations: usize,
}

/// Refines scaling factors by coordinate-wise search.
///
/// Each iteration computes, for every factor, the per-sentence feasible
/// intervals and overlays them to find the candidate value with the best
/// corpus-wide correct count; the single alteration with the biggest
/// increase is applied (ties: lowest function index, then smallest change,
/// then smallest absolute value). Terminates when no alteration increases
/// the count; errors if the iteration cap is hit first.
pub fn hill_climb(
    corpus: &Corpus,
    start: &ScalingFactors,
    options: &HillClimbOptions,
) -> Result<HillClimbOutcome, TrainError> {
    let functions = &corpus.function_names;
    let m = functions.len();
    if start.len() != m {
        return Err(TrainError::FactorCount {
            expected: m,
            got: start.len(),
        });
    }
    let tie = options.tie_mode;
    let max_iters = options.max_iters.unwrap_or(50 * m.max(1));

    let mut factors = start.clone();
    let mut count = correct_count_with(corpus, &factors, tie);
    let mut counts = vec![count];

    for iteration in 0..=max_iters {
        // Per factor: the overlay's best candidate value, validated by a
        // direct recount so applied counts always carry correct_count
        // semantics (the affine evaluation can differ from the full dot
        // product by an ulp at razor-thin ties).
        let mut best: Option<Candidate> = None;
        for j in 0..m {
            let sets: Vec<IntervalSet> = corpus
                .sentences
                .par_iter()
                .map(|s| feasible_intervals(s, functions, &factors, j, tie))
                .collect();
            let Some(estimate) = best_value_for_factor(&sets, factors.c[j], j) else {
                continue;
            };
            if estimate.value == factors.c[j] {
                continue;
            }
            let mut probe = factors.clone();
            probe.c[j] = estimate.value;
            let candidate = Candidate {
                count: correct_count_with(corpus, &probe, tie),
                ..estimate
            };
            if candidate.better_than(best.as_ref()) {
                best = Some(candidate);
            }
        }
        match best {
            Some(candidate) if candidate.count > count => {
                if iteration == max_iters {
                    // Still improving at the cap: report rather than loop on.
                    return Err(TrainError::IterationCap(max_iters));
                }
                factors.c[candidate.j] = candidate.value;
                count = candidate.count;
                counts.push(count);
            }
            _ => {
                return Ok(HillClimbOutcome {
                    factors,
                    counts,
                    iterations: iteration,
                });
            }
        }
    }
    Err(TrainError::IterationCap(max_iters))
}

struct Candidate {
    count: usize,
    j: usize,
    value: f64,
    change: f64,
}

impl Candidate {
    /// Ordering: larger count, then lower function index; within a factor
    /// the candidate value was already chosen by smallest change then
    /// smallest absolute value.
    fn better_than(&self, other: Option<&Candidate>) -> bool {
        match other {
            None => true,
            Some(o) => self.count > o.count,
        }
    }
}

/// Overlays per-sentence interval sets and picks the best value for one
/// factor: candidates are every interval endpoint, the midpoints between
/// consecutive endpoints, and one probe beyond each extreme.
fn best_value_for_factor(sets: &[IntervalSet], current: f64, j: usize) -> Option<Candidate> {
    let mut endpoints: Vec<f64> = sets.iter().flat_map(|s| s.finite_endpoints()).collect();
    endpoints.sort_by(f64::total_cmp);
    endpoints.dedup();

    let mut candidates = Vec::with_capacity(2 * endpoints.len() + 2);
    candidates.push(current);
    if endpoints.is_empty() {
        // Every sentence is constant in this factor; only the current
        // value needs checking.
    } else {
        candidates.push(endpoints[0] - 1.0);
        candidates.push(endpoints[endpoints.len() - 1] + 1.0);
        candidates.extend(endpoints.iter().copied());
        for pair in endpoints.windows(2) {
            candidates.push(region_probe(pair[0], pair[1]));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // Count, for every candidate at once, how many interval sets contain
    // it: each interval contributes +1 over the candidate index range it
    // covers.
    let mut diff = vec![0i64; candidates.len() + 1];
    for set in sets {
        for interval in &set.intervals {
            let lo = if interval.lower_closed {
                candidates.partition_point(|&x| x < interval.lower)
            } else {
                candidates.partition_point(|&x| x <= interval.lower)
            };
            let hi = if interval.upper_closed {
                candidates.partition_point(|&x| x <= interval.upper)
            } else {
                candidates.partition_point(|&x| x < interval.upper)
            };
            if lo < hi {
                diff[lo] += 1;
                diff[hi] -= 1;
            }
        }
    }

    let mut best: Option<Candidate> = None;
    let mut running = 0i64;
    for (i, &value) in candidates.iter().enumerate() {
        running += diff[i];
        let count = running as usize;
        let change = (value - current).abs();
        let better = match &best {
            None => true,
            Some(b) => {
                count > b.count
                    || (count == b.count
                        && (change < b.change
                            || (change == b.change && value.abs() < b.value.abs())))
            }
        };
        if better {
            best = Some(Candidate {
                count,
                j,
                value,
                change,
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Analysis, Constituent, SkeletalTree};

    fn sentence(
        id: &str,
        analyses: Vec<(&str, bool, Vec<(&str, f64)>)>,
    ) -> Sentence {
        let gold = SkeletalTree::new(vec![Constituent::new(0, 4, None)]);
        Sentence {
            id: id.into(),
            tokens: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            gold,
            analyses: analyses
                .into_iter()
                .map(|(aid, correct, feats)| Analysis {
                    id: aid.into(),
                    spans: if correct {
                        vec![Constituent::new(0, 4, None)]
                    } else {
                        vec![Constituent::new(0, 4, None), Constituent::new(1, 3, None)]
                    },
                    triples: vec![],
                    rules: vec![],
                    features: feats
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), v))
                        .collect(),
                })
                .collect(),
        }
    }

    fn corpus(functions: &[&str], sentences: Vec<Sentence>) -> Corpus {
        Corpus {
            function_names: functions.iter().map(|s| s.to_string()).collect(),
            class_map: BTreeMap::new(),
            sentences,
        }
    }

    #[test]
    fn matrix_from_worked_sentence() {
        // Feature values relativize to f1' = (1, -1, -5), f2' = (-3, 3, 5)
        // when the first two analyses tie for best.
        let s = sentence(
            "s1",
            vec![
                ("q1", true, vec![("f1", 8.0), ("f2", 4.0)]),
                ("q2", true, vec![("f1", 6.0), ("f2", 10.0)]),
                ("q3", false, vec![("f1", 2.0), ("f2", 12.0)]),
            ],
        );
        let c = corpus(&["f1", "f2"], vec![s]);
        let m = assemble_training_matrix(&c, &ScoreWeights::default(), &c.function_names).unwrap();
        assert_eq!(m.rows.len(), 3);
        assert_eq!(m.rows[0].z, vec![1.0, -3.0]);
        assert_eq!(m.rows[1].z, vec![-1.0, 3.0]);
        assert_eq!(m.rows[2].z, vec![-5.0, 5.0]);
        assert_eq!((m.rows[0].g, m.rows[1].g, m.rows[2].g), (0.0, 0.0, -10.0));
    }

    #[test]
    fn single_analysis_sentences_yield_zero_matrix() {
        let c = corpus(
            &["f1"],
            vec![
                sentence("s1", vec![("a", true, vec![("f1", 3.0)])]),
                sentence("s2", vec![("a", false, vec![("f1", -2.0)])]),
            ],
        );
        let m = assemble_training_matrix(&c, &ScoreWeights::default(), &c.function_names).unwrap();
        assert!(m.rows.iter().all(|r| r.g == 0.0 && r.z == vec![0.0]));
    }

    #[test]
    fn unknown_active_function_is_rejected() {
        let c = corpus(&["f1"], vec![sentence("s1", vec![("a", true, vec![])])]);
        assert!(matches!(
            assemble_training_matrix(&c, &ScoreWeights::default(), &["nope".to_string()]),
            Err(TrainError::UnknownFunction(_))
        ));
    }

    fn matrix(names: &[&str], rows: Vec<(f64, Vec<f64>)>) -> TrainingMatrix {
        TrainingMatrix {
            function_names: names.iter().map(|s| s.to_string()).collect(),
            rows: rows
                .into_iter()
                .enumerate()
                .map(|(i, (g, z))| MatrixRow {
                    sentence_id: format!("s{i}"),
                    analysis_id: "a".into(),
                    g,
                    z,
                })
                .collect(),
        }
    }

    #[test]
    fn exact_fit_single_function() {
        let m = matrix(
            &["f"],
            vec![(1.0, vec![1.0]), (-2.0, vec![-2.0]), (0.5, vec![0.5])],
        );
        let c = least_squares(&m);
        assert!((c.c[0] - 1.0).abs() < 1e-12);
        assert!(sse(&m, &c) < 1e-20);
    }

    #[test]
    fn zero_targets_give_zero_factors() {
        let m = matrix(&["f1", "f2"], vec![(0.0, vec![1.0, 2.0]), (0.0, vec![2.0, 1.0])]);
        let c = least_squares(&m);
        assert_eq!(c.c, vec![0.0, 0.0]);
    }

    #[test]
    fn all_zero_matrix_warns_and_returns_zeros() {
        let m = matrix(&["f1"], vec![(0.0, vec![0.0]), (0.0, vec![0.0])]);
        assert_eq!(least_squares(&m).c, vec![0.0]);
    }

    #[test]
    fn two_function_system_solves_normal_equations() {
        // Rows z = (1,2), (2,1), (1,1) with g = (5,4,3): the normal
        // equations are [[6,5],[5,6]] c = (16,17), whose solution is (1,2).
        let m = matrix(
            &["f1", "f2"],
            vec![
                (5.0, vec![1.0, 2.0]),
                (4.0, vec![2.0, 1.0]),
                (3.0, vec![1.0, 1.0]),
            ],
        );
        let c = least_squares(&m);
        assert!((c.c[0] - 1.0).abs() < 1e-9, "{:?}", c.c);
        assert!((c.c[1] - 2.0).abs() < 1e-9, "{:?}", c.c);
        let grad = sse_gradient(&m, &c);
        assert!(grad.iter().all(|g| g.abs() < 1e-9));
    }

    #[test]
    fn collinear_functions_fall_back_to_ridge() {
        let m = matrix(
            &["f1", "f2"],
            vec![
                (1.0, vec![1.0, 1.0]),
                (2.0, vec![2.0, 2.0]),
                (-1.0, vec![-1.0, -1.0]),
            ],
        );
        let c = least_squares(&m);
        assert!(c.c.iter().all(|v| v.is_finite()));
        // The ridge solution still fits the (consistent) system well.
        assert!(sse(&m, &c) < 1e-6);
    }

    #[test]
    fn normalized_factors_match_inverse_stddev() {
        let g = [1.0, -1.0, 2.0, -2.0];
        let m = matrix(
            &["same", "anti", "flat"],
            g.iter()
                .map(|&v| (v, vec![v, -v, 7.0]))
                .collect(),
        );
        let c = normalized_factors(&m);
        let std = (g.iter().map(|v| v * v).sum::<f64>() / 4.0).sqrt();
        assert!((c.c[0] - 1.0 / std).abs() < 1e-12);
        assert!((c.c[1] + 1.0 / std).abs() < 1e-12);
        assert_eq!(c.c[2], 0.0);
    }

    #[test]
    fn correct_count_uses_strict_ties() {
        let c = corpus(
            &["f"],
            vec![
                // Unique correct top scorer.
                sentence("s1", vec![("a", true, vec![("f", 2.0)]), ("b", false, vec![("f", 1.0)])]),
                // Correct and incorrect tie at the top.
                sentence("s2", vec![("a", true, vec![("f", 1.0)]), ("b", false, vec![("f", 1.0)])]),
                // Incorrect wins outright.
                sentence("s3", vec![("a", true, vec![("f", 0.0)]), ("b", false, vec![("f", 1.0)])]),
            ],
        );
        let factors = ScalingFactors::new(vec![1.0]);
        assert_eq!(correct_count(&c, &factors), 1);
        assert_eq!(correct_count_with(&c, &factors, TieMode::Lenient), 2);
    }

    #[test]
    fn zero_factors_tie_everything() {
        let c = corpus(
            &["f"],
            vec![
                sentence("s1", vec![("a", true, vec![("f", 2.0)]), ("b", true, vec![("f", 1.0)])]),
                sentence("s2", vec![("a", true, vec![("f", 2.0)]), ("b", false, vec![("f", 1.0)])]),
            ],
        );
        let zero = ScalingFactors::zeros(1);
        // Only the sentence whose analyses are all correct counts.
        assert_eq!(correct_count(&c, &zero), 1);
    }

    #[test]
    fn feasible_intervals_trivial_cases() {
        let all = sentence("s", vec![("a", true, vec![("f", 1.0)]), ("b", true, vec![("f", 2.0)])]);
        let none = sentence("s", vec![("a", false, vec![("f", 1.0)])]);
        let functions = vec!["f".to_string()];
        let factors = ScalingFactors::new(vec![0.0]);
        assert_eq!(
            feasible_intervals(&all, &functions, &factors, 0, TieMode::Strict),
            IntervalSet::full()
        );
        assert!(feasible_intervals(&none, &functions, &factors, 0, TieMode::Strict).is_empty());
    }

    #[test]
    fn feasible_interval_from_crossing_lines() {
        // Equal bases; correct slope 1, incorrect slope 2: correct wins
        // exactly when x < 0.
        let s = sentence(
            "s",
            vec![("good", true, vec![("f", 1.0)]), ("bad", false, vec![("f", 2.0)])],
        );
        let functions = vec!["f".to_string()];
        let factors = ScalingFactors::new(vec![5.0]);
        let set = feasible_intervals(&s, &functions, &factors, 0, TieMode::Strict);
        assert_eq!(set.intervals.len(), 1);
        let interval = set.intervals[0];
        assert_eq!(interval.lower, f64::NEG_INFINITY);
        assert_eq!(interval.upper, 0.0);
        assert!(!interval.upper_closed);
        assert!(set.contains(-3.0));
        assert!(!set.contains(0.0));
        assert!(!set.contains(1.0));

        // Lenient mode closes the tie point.
        let lenient = feasible_intervals(&s, &functions, &factors, 0, TieMode::Lenient);
        assert!(lenient.contains(0.0));
        assert!(!lenient.contains(0.5));
    }

    #[test]
    fn interval_membership_matches_direct_rescoring() {
        // Three analyses with distinct slopes and bases produce a
        // non-trivial arrangement; membership must agree with rescoring
        // everywhere, including at the breakpoints themselves.
        let s = sentence(
            "s",
            vec![
                ("good", true, vec![("f", 1.0), ("g", 2.0)]),
                ("bad1", false, vec![("f", 2.0), ("g", -1.0)]),
                ("bad2", false, vec![("f", -1.0), ("g", 1.0)]),
            ],
        );
        let functions = vec!["f".to_string(), "g".to_string()];
        let factors = ScalingFactors::new(vec![0.5, 1.0]);
        for tie in [TieMode::Strict, TieMode::Lenient] {
            for j in 0..2 {
                let set = feasible_intervals(&s, &functions, &factors, j, tie);
                let lines = SentenceLines::build(&s, &functions, &factors, j);
                let mut probes: Vec<f64> = (-40..=40).map(|i| i as f64 / 4.0).collect();
                probes.extend(set.finite_endpoints());
                for x in probes {
                    assert_eq!(
                        set.contains(x),
                        lines.correct_at(x, tie),
                        "tie {tie:?} j {j} x {x}"
                    );
                }
            }
        }
    }

    #[test]
    fn hill_climb_leaves_perfect_factors_alone() {
        let c = corpus(
            &["f"],
            vec![
                sentence("s1", vec![("a", true, vec![("f", 2.0)]), ("b", false, vec![("f", 1.0)])]),
                sentence("s2", vec![("a", true, vec![("f", 3.0)]), ("b", false, vec![("f", -1.0)])]),
            ],
        );
        let start = ScalingFactors::new(vec![1.0]);
        let outcome = hill_climb(&c, &start, &HillClimbOptions::default()).unwrap();
        assert_eq!(outcome.factors, start);
        assert_eq!(outcome.counts, vec![2]);
    }

    #[test]
    fn hill_climb_flips_a_factor_to_fix_a_sentence() {
        // The correct analysis loses at c = 5 but wins for any x < 0.
        let c = corpus(
            &["f"],
            vec![sentence(
                "s1",
                vec![("good", true, vec![("f", 1.0)]), ("bad", false, vec![("f", 2.0)])],
            )],
        );
        let start = ScalingFactors::new(vec![5.0]);
        assert_eq!(correct_count(&c, &start), 0);
        let outcome = hill_climb(&c, &start, &HillClimbOptions::default()).unwrap();
        assert!(outcome.factors.c[0] < 0.0, "{:?}", outcome.factors);
        assert_eq!(correct_count(&c, &outcome.factors), 1);
        assert_eq!(outcome.counts, vec![0, 1]);
    }

    #[test]
    fn factors_round_trip_through_named_file_form() {
        let names = vec!["f1".to_string(), "f2".to_string()];
        let factors = ScalingFactors::new(vec![0.25, -3.5]);
        let mut buf = Vec::new();
        write_factors(&mut buf, &names, &factors).unwrap();
        let back = read_factors(buf.as_slice(), &names).unwrap();
        assert_eq!(back, factors);

        // A file missing a declared function is rejected.
        let partial: BTreeMap<String, f64> = BTreeMap::from([("f1".to_string(), 1.0)]);
        assert!(matches!(
            ScalingFactors::from_named(&partial, &names),
            Err(TrainError::MissingFactor(_))
        ));
    }

    #[test]
    fn embed_places_active_factors_in_wider_order() {
        let active = vec!["b".to_string()];
        let all = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let f = ScalingFactors::new(vec![2.0]);
        assert_eq!(f.embed(&active, &all).unwrap().c, vec![0.0, 2.0, 0.0]);
    }
}

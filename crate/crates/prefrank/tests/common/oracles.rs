//! Brute-force reference computations, independent of the library paths
//! they verify.

use std::collections::HashSet;

use prefrank::corpus::{Analysis, Corpus, SkeletalTree, Triple};
use prefrank::score::ScoreWeights;

/// Training score recomputed with direct set arithmetic.
pub fn raw_score(analysis: &Analysis, gold: &SkeletalTree, w: &ScoreWeights) -> f64 {
    let q: HashSet<(usize, usize)> = analysis.spans.iter().map(|c| (c.start, c.end)).collect();
    let t: HashSet<(usize, usize)> = gold.constituents.iter().map(|c| (c.start, c.end)).collect();
    let mut common = 0.0;
    let mut hallucinated = 0.0;
    for seg in &q {
        if t.contains(seg) {
            common += 1.0;
        } else {
            hallucinated += 1.0;
        }
    }
    let missing = t.iter().filter(|seg| !q.contains(*seg)).count() as f64;
    w.a1 * common - w.a2 * hallucinated - w.a3 * missing
}

/// The weighted token population of triples from best-scoring analyses:
/// each tied best analysis contributes its triples at weight `1/ties`.
pub fn best_population(corpus: &Corpus, w: &ScoreWeights) -> Vec<(Triple, f64)> {
    let mut population = Vec::new();
    for sentence in &corpus.sentences {
        let scores: Vec<f64> = sentence
            .analyses
            .iter()
            .map(|a| raw_score(a, &sentence.gold, w))
            .collect();
        let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let winners: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] == best).collect();
        let weight = 1.0 / winners.len() as f64;
        for i in winners {
            for triple in &sentence.analyses[i].triples {
                population.push((triple.clone(), weight));
            }
        }
    }
    population
}

fn total(population: &[(Triple, f64)]) -> f64 {
    population.iter().map(|(_, w)| w).sum()
}

fn joint(population: &[(Triple, f64)], t: &Triple) -> f64 {
    population
        .iter()
        .filter(|(p, _)| p == t)
        .map(|(_, w)| w)
        .sum()
}

fn marginal(population: &[(Triple, f64)], field: impl Fn(&Triple) -> &str, value: &str) -> f64 {
    population
        .iter()
        .filter(|(p, _)| field(p) == value)
        .map(|(_, w)| w)
        .sum()
}

pub fn oracle_mutual_information(
    population: &[(Triple, f64)],
    t: &Triple,
    smoothing: f64,
) -> Option<f64> {
    let n = total(population);
    if n <= 0.0 {
        return None;
    }
    let p1 = marginal(population, |t| &t.h1, &t.h1) / n;
    let p2 = marginal(population, |t| &t.r, &t.r) / n;
    let p3 = marginal(population, |t| &t.h2, &t.h2) / n;
    if p1 <= 0.0 || p2 <= 0.0 || p3 <= 0.0 {
        return None;
    }
    let a = (joint(population, t) + smoothing) / n;
    Some((a / (p1 * p2 * p3)).ln())
}

fn observed_expected(population: &[(Triple, f64)], t: &Triple, smoothing: f64) -> Option<(f64, f64)> {
    let n = total(population);
    if n <= 0.0 {
        return None;
    }
    let p1 = marginal(population, |t| &t.h1, &t.h1) / n;
    let p2 = marginal(population, |t| &t.r, &t.r) / n;
    let p3 = marginal(population, |t| &t.h2, &t.h2) / n;
    let e = n * p1 * p2 * p3;
    if e <= 0.0 {
        return None;
    }
    Some((joint(population, t) + smoothing, e))
}

pub fn oracle_chi_squared(
    population: &[(Triple, f64)],
    t: &Triple,
    smoothing: f64,
) -> Option<f64> {
    let (f, e) = observed_expected(population, t, smoothing)?;
    Some((f - e).abs() * (f - e) / e)
}

pub fn oracle_chi(population: &[(Triple, f64)], t: &Triple, smoothing: f64) -> Option<f64> {
    let (f, e) = observed_expected(population, t, smoothing)?;
    Some((f - e) / e.sqrt())
}

/// Signed `-2 ln lambda` via the binomial likelihood route: the likelihood
/// of the relation-`r` population under a single rate for `h2` versus
/// separate rates on the `h1` and non-`h1` rows.
pub fn oracle_likelihood_ratio(population: &[(Triple, f64)], t: &Triple) -> Option<f64> {
    let restricted: Vec<&(Triple, f64)> =
        population.iter().filter(|(p, _)| p.r == t.r).collect();
    let n: f64 = restricted.iter().map(|(_, w)| w).sum();
    if n <= 0.0 {
        return None;
    }
    let k11: f64 = restricted
        .iter()
        .filter(|(p, _)| p.h1 == t.h1 && p.h2 == t.h2)
        .map(|(_, w)| w)
        .sum();
    let row1: f64 = restricted
        .iter()
        .filter(|(p, _)| p.h1 == t.h1)
        .map(|(_, w)| w)
        .sum();
    let col1: f64 = restricted
        .iter()
        .filter(|(p, _)| p.h2 == t.h2)
        .map(|(_, w)| w)
        .sum();
    let row2 = n - row1;
    let col2 = n - col1;
    if row1 <= 0.0 || col1 <= 0.0 || row2 <= 0.0 || col2 <= 0.0 {
        return Some(0.0);
    }
    let k21 = col1 - k11;

    // log-likelihood of k successes in n trials at rate p, with the
    // conventions 0 ln 0 = 0.
    let ll = |p: f64, k: f64, n: f64| {
        let mut v = 0.0;
        if k > 0.0 {
            v += k * p.ln();
        }
        if n - k > 0.0 {
            v += (n - k) * (1.0 - p).ln();
        }
        v
    };
    let p = col1 / n;
    let p1 = k11 / row1;
    let p2 = k21 / row2;
    let llr = 2.0 * (ll(p1, k11, row1) + ll(p2, k21, row2) - ll(p, k11, row1) - ll(p, k21, row2));
    let e11 = row1 * col1 / n;
    Some(if k11 >= e11 { llr } else { -llr })
}

/// Mean relativised training score over analyses containing `t`, with the
/// relativization re-derived from raw scores; `None` when unseen.
pub fn oracle_mean_distance(corpus: &Corpus, w: &ScoreWeights, t: &Triple) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0.0;
    for sentence in &corpus.sentences {
        let scores: Vec<f64> = sentence
            .analyses
            .iter()
            .map(|a| raw_score(a, &sentence.gold, w))
            .collect();
        let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let winners: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] == best).collect();
        let mean_best = winners.iter().map(|&i| scores[i]).sum::<f64>() / winners.len() as f64;
        for (i, analysis) in sentence.analyses.iter().enumerate() {
            if analysis.triples.iter().any(|p| p == t) {
                sum += scores[i] - mean_best;
                count += 1.0;
            }
        }
    }
    if count > 0.0 {
        Some(sum / count)
    } else {
        None
    }
}

/// Mean relativised score over all analyses of the corpus (the fallback
/// value for unseen triples).
pub fn oracle_corpus_mean_distance(corpus: &Corpus, w: &ScoreWeights) -> f64 {
    let mut sum = 0.0;
    let mut count = 0.0;
    for sentence in &corpus.sentences {
        let scores: Vec<f64> = sentence
            .analyses
            .iter()
            .map(|a| raw_score(a, &sentence.gold, w))
            .collect();
        let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let winners: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] == best).collect();
        let mean_best = winners.iter().map(|&i| scores[i]).sum::<f64>() / winners.len() as f64;
        for s in &scores {
            sum += s - mean_best;
            count += 1.0;
        }
    }
    sum / count
}

/// Direct SSE evaluation over raw rows.
pub fn sse_direct(rows: &[(f64, Vec<f64>)], c: &[f64]) -> f64 {
    rows.iter()
        .map(|(g, z)| {
            let predicted: f64 = z.iter().zip(c).map(|(z, c)| z * c).sum();
            let err = g - predicted;
            err * err
        })
        .sum()
}

/// Brute-force SSE minimization: a coarse grid recentred and shrunk around
/// the best point. The SSE is convex, so this converges to the global
/// minimum.
pub fn grid_refine_sse(rows: &[(f64, Vec<f64>)], dims: usize, radius0: f64) -> (Vec<f64>, f64) {
    let mut center = vec![0.0; dims];
    let mut radius = radius0;
    let mut best = (center.clone(), sse_direct(rows, &center));
    const POINTS: i64 = 3; // 7 points per dimension: -3..=3
    for _ in 0..45 {
        let mut offsets = vec![-POINTS; dims];
        loop {
            let candidate: Vec<f64> = center
                .iter()
                .zip(&offsets)
                .map(|(c, o)| c + *o as f64 * radius / POINTS as f64)
                .collect();
            let value = sse_direct(rows, &candidate);
            if value < best.1 {
                best = (candidate, value);
            }
            // Advance the mixed-radix offset counter.
            let mut dim = 0;
            loop {
                if dim == dims {
                    break;
                }
                offsets[dim] += 1;
                if offsets[dim] <= POINTS {
                    break;
                }
                offsets[dim] = -POINTS;
                dim += 1;
            }
            if dim == dims {
                break;
            }
        }
        center = best.0.clone();
        radius *= 0.62;
    }
    best
}

/// Central finite difference of the SSE in direction `k`.
pub fn sse_central_difference(rows: &[(f64, Vec<f64>)], c: &[f64], k: usize, h: f64) -> f64 {
    let mut plus = c.to_vec();
    plus[k] += h;
    let mut minus = c.to_vec();
    minus[k] -= h;
    (sse_direct(rows, &plus) - sse_direct(rows, &minus)) / (2.0 * h)
}

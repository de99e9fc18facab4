//! Training scores against the gold skeletal tree, and per-sentence
//! relativization.
//!
//! The training score of an analysis with segment set `Q` against gold
//! segments `T` is
//!
//! ```text
//! a1*|Q ∩ T| - a2*|Q \ T| - a3*|T \ Q|
//! ```
//!
//! over unlabeled `(start, end)` pairs. The default weights `(1, 10, 0)`
//! penalize hallucinated constituents heavily and missing ones not at all.
//!
//! Relativization removes per-sentence variation: for every quantity (the
//! training score and each raw preference-function score) the mean over the
//! sentence's best-scoring analyses is subtracted, so the best analyses sit
//! at zero and everything else is measured as a distance from them.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{Analysis, Constituent, Sentence, SkeletalTree};

/// Weights `(a1, a2, a3)` of the training-score formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreWeights {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Default for ScoreWeights {
    fn default() -> Self {
        ScoreWeights {
            a1: 1.0,
            a2: 10.0,
            a3: 0.0,
        }
    }
}

impl ScoreWeights {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        ScoreWeights { a1, a2, a3 }
    }
}

/// Training score of segment set `Q` against gold segments `T`.
///
/// Sets are formed over unlabeled `(start, end)` pairs; duplicate spans and
/// labels have no effect.
pub fn training_score(q: &[Constituent], t: &[Constituent], w: &ScoreWeights) -> f64 {
    let q: BTreeSet<(usize, usize)> = q.iter().map(|c| c.segment()).collect();
    let t: BTreeSet<(usize, usize)> = t.iter().map(|c| c.segment()).collect();
    let common = q.intersection(&t).count() as f64;
    let hallucinated = q.difference(&t).count() as f64;
    let missing = t.difference(&q).count() as f64;
    w.a1 * common - w.a2 * hallucinated - w.a3 * missing
}

/// Training score of an analysis against the sentence's gold tree.
pub fn analysis_score(analysis: &Analysis, gold: &SkeletalTree, w: &ScoreWeights) -> f64 {
    training_score(&analysis.spans, &gold.constituents, w)
}

/// True iff the analysis induces exactly the gold segment set.
///
/// Labels are ignored; this is the correctness criterion used throughout
/// evaluation.
pub fn exact_match(analysis: &Analysis, gold: &SkeletalTree) -> bool {
    analysis.segments() == gold.segments()
}

/// Indices of the analyses with maximal raw training score.
///
/// Ties use exact equality: raw scores are sums of integer cardinalities
/// scaled by the weights, so equal inputs give bitwise-equal scores.
pub fn best_indices(sentence: &Sentence, w: &ScoreWeights) -> Vec<usize> {
    let scores: Vec<f64> = sentence
        .analyses
        .iter()
        .map(|a| analysis_score(a, &sentence.gold, w))
        .collect();
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    scores
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == best)
        .map(|(i, _)| i)
        .collect()
}

/// Ids of the analyses with maximal raw training score.
pub fn best_analyses(sentence: &Sentence, w: &ScoreWeights) -> BTreeSet<String> {
    best_indices(sentence, w)
        .into_iter()
        .map(|i| sentence.analyses[i].id.clone())
        .collect()
}

/// Per-sentence relativised quantities: training scores and every feature,
/// each with the mean over the best-scoring analyses subtracted.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativisedSentence {
    pub sentence_id: String,
    /// Relativised training score per analysis, in analysis order.
    pub g: Vec<f64>,
    /// Relativised feature scores per analysis; keys are the union of
    /// feature names present in the sentence, missing values read as 0.
    pub z: Vec<BTreeMap<String, f64>>,
    /// Ids of the analyses achieving the maximal raw training score.
    pub best_set: BTreeSet<String>,
}

impl RelativisedSentence {
    /// Relativised score of feature `name` for analysis index `i`.
    pub fn feature(&self, i: usize, name: &str) -> f64 {
        self.z[i].get(name).copied().unwrap_or(0.0)
    }
}

/// Relativizes one sentence: subtracts from each analysis's training score
/// and feature scores the mean of that quantity over the best-scoring
/// analyses (all of them, when the best score is shared).
pub fn relativize(sentence: &Sentence, w: &ScoreWeights) -> RelativisedSentence {
    assert!(
        !sentence.analyses.is_empty(),
        "sentence {} has no analyses",
        sentence.id
    );
    let raw: Vec<f64> = sentence
        .analyses
        .iter()
        .map(|a| analysis_score(a, &sentence.gold, w))
        .collect();
    let best = best_indices(sentence, w);
    let k = best.len() as f64;

    let score_mean = best.iter().map(|&i| raw[i]).sum::<f64>() / k;
    let g = raw.iter().map(|s| s - score_mean).collect();

    let names: BTreeSet<&String> = sentence
        .analyses
        .iter()
        .flat_map(|a| a.features.keys())
        .collect();
    let feature_means: BTreeMap<&String, f64> = names
        .iter()
        .map(|&name| {
            let mean = best
                .iter()
                .map(|&i| sentence.analyses[i].feature(name))
                .sum::<f64>()
                / k;
            (name, mean)
        })
        .collect();

    let z = sentence
        .analyses
        .iter()
        .map(|a| {
            names
                .iter()
                .map(|&name| (name.clone(), a.feature(name) - feature_means[name]))
                .collect()
        })
        .collect();

    RelativisedSentence {
        sentence_id: sentence.id.clone(),
        g,
        z,
        best_set: best
            .iter()
            .map(|&i| sentence.analyses[i].id.clone())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Label;

    fn span(start: usize, end: usize) -> Constituent {
        Constituent::new(start, end, None)
    }

    fn spans(pairs: &[(usize, usize)]) -> Vec<Constituent> {
        pairs.iter().map(|&(s, e)| span(s, e)).collect()
    }

    #[test]
    fn identical_sets_score_their_size() {
        let t = spans(&[(0, 4), (1, 2), (2, 4), (0, 1)]);
        let w = ScoreWeights::default();
        assert_eq!(training_score(&t, &t, &w), 4.0);
    }

    #[test]
    fn formula_arithmetic() {
        // |Q ∩ T| = 5, |Q \ T| = 2, |T \ Q| = 3.
        let q = spans(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 9), (1, 9)]);
        let t = spans(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)]);
        assert_eq!(training_score(&q, &t, &ScoreWeights::new(1.0, 10.0, 0.0)), -15.0);
        assert_eq!(training_score(&q, &t, &ScoreWeights::new(1.0, 10.0, 1.0)), -18.0);
    }

    fn three_analysis_sentence() -> Sentence {
        // Segment sets arranged so raw training scores are (10, 10, 4)
        // under weights (1, 10, 0): q1 and q2 match all 10 gold spans,
        // q3 keeps only the first 4 and hallucinates nothing.
        let gold_spans: Vec<(usize, usize)> = vec![
            (0, 12),
            (0, 6),
            (6, 12),
            (0, 3),
            (3, 6),
            (6, 9),
            (9, 12),
            (0, 1),
            (1, 2),
            (2, 3),
        ];
        let q3_spans: Vec<(usize, usize)> = gold_spans[..4].to_vec();
        let features = |f1: f64, f2: f64, phi: f64| {
            BTreeMap::from([
                ("f1".to_string(), f1),
                ("f2".to_string(), f2),
                ("phi".to_string(), phi),
            ])
        };
        Sentence {
            id: "s".into(),
            tokens: (0..12).map(|i| format!("w{i}")).collect(),
            gold: SkeletalTree::new(spans(&gold_spans)),
            analyses: vec![
                Analysis {
                    id: "q1".into(),
                    spans: spans(&gold_spans),
                    triples: vec![],
                    rules: vec![],
                    features: features(8.0, 4.0, 16.0),
                },
                Analysis {
                    id: "q2".into(),
                    spans: spans(&gold_spans),
                    triples: vec![],
                    rules: vec![],
                    features: features(6.0, 10.0, 16.0),
                },
                Analysis {
                    id: "q3".into(),
                    spans: spans(&q3_spans),
                    triples: vec![],
                    rules: vec![],
                    features: features(2.0, 12.0, 10.0),
                },
            ],
        }
    }

    #[test]
    fn relativize_matches_worked_table() {
        // Raw training scores (10, 10, 4), phi = (16, 16, 10),
        // f1 = (8, 6, 2), f2 = (4, 10, 12). Averaging over the tied best
        // pair and subtracting gives g = (0, 0, -6), phi' = (0, 0, -6),
        // f1' = (1, -1, -5), f2' = (-3, 3, 5).
        let sentence = three_analysis_sentence();
        let w = ScoreWeights::default();

        let raw: Vec<f64> = sentence
            .analyses
            .iter()
            .map(|a| analysis_score(a, &sentence.gold, &w))
            .collect();
        assert_eq!(raw, vec![10.0, 10.0, 4.0]);

        let rel = relativize(&sentence, &w);
        assert_eq!(rel.g, vec![0.0, 0.0, -6.0]);
        assert_eq!(
            (rel.feature(0, "phi"), rel.feature(1, "phi"), rel.feature(2, "phi")),
            (0.0, 0.0, -6.0)
        );
        assert_eq!(
            (rel.feature(0, "f1"), rel.feature(1, "f1"), rel.feature(2, "f1")),
            (1.0, -1.0, -5.0)
        );
        assert_eq!(
            (rel.feature(0, "f2"), rel.feature(1, "f2"), rel.feature(2, "f2")),
            (-3.0, 3.0, 5.0)
        );
        assert_eq!(rel.best_set, BTreeSet::from(["q1".to_string(), "q2".to_string()]));
    }

    #[test]
    fn tied_best_set_holds_both_sharers() {
        let sentence = three_analysis_sentence();
        let best = best_analyses(&sentence, &ScoreWeights::default());
        assert_eq!(best, BTreeSet::from(["q1".to_string(), "q2".to_string()]));
    }

    #[test]
    fn single_analysis_relativizes_to_zero() {
        let mut sentence = three_analysis_sentence();
        sentence.analyses.truncate(1);
        let rel = relativize(&sentence, &ScoreWeights::default());
        assert_eq!(rel.g, vec![0.0]);
        assert!(rel.z[0].values().all(|v| *v == 0.0));
    }

    #[test]
    fn identical_analyses_relativize_to_zero() {
        let mut sentence = three_analysis_sentence();
        let mut copy = sentence.analyses[0].clone();
        copy.id = "q1b".into();
        sentence.analyses = vec![sentence.analyses[0].clone(), copy];
        let rel = relativize(&sentence, &ScoreWeights::default());
        assert!(rel.g.iter().all(|v| *v == 0.0));
        assert!(rel.z.iter().all(|m| m.values().all(|v| *v == 0.0)));
    }

    #[test]
    fn exact_match_ignores_labels() {
        let gold = SkeletalTree::new(vec![
            Constituent::new(0, 7, Some(Label::P)),
            Constituent::new(1, 2, Some(Label::A)),
            Constituent::new(3, 4, Some(Label::A)),
            Constituent::new(4, 7, Some(Label::P)),
            Constituent::new(5, 7, Some(Label::A)),
        ]);
        let same_segments = Analysis {
            id: "a".into(),
            spans: spans(&[(0, 7), (1, 2), (3, 4), (4, 7), (5, 7)]),
            triples: vec![],
            rules: vec![],
            features: BTreeMap::new(),
        };
        assert!(exact_match(&same_segments, &gold));

        let mut missing_one = same_segments.clone();
        missing_one.spans.pop();
        assert!(!exact_match(&missing_one, &gold));
    }

    #[test]
    fn all_equal_scores_make_every_analysis_best() {
        let mut sentence = three_analysis_sentence();
        for a in &mut sentence.analyses {
            a.spans = sentence.gold.constituents.clone();
        }
        let best = best_analyses(&sentence, &ScoreWeights::default());
        assert_eq!(best.len(), 3);
    }
}

//! Training scores and per-sentence relativization.
//!
//! Builds a sentence with three analyses, two of which match the gold tree
//! exactly, and shows how subtracting the best-analysis average turns raw
//! scores into distances from a correct choice.
//!
//! ```bash
//! cargo run -p prefrank --example relativization
//! ```

use std::collections::BTreeMap;

use prefrank::corpus::{Analysis, Constituent, Sentence, SkeletalTree};
use prefrank::score::{analysis_score, relativize, ScoreWeights};

fn main() {
    // A 12-token sentence with ten nested gold constituents.
    let gold_segments = [
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
    let spans = |segments: &[(usize, usize)]| -> Vec<Constituent> {
        segments
            .iter()
            .map(|&(s, e)| Constituent::new(s, e, None))
            .collect()
    };
    let analysis = |id: &str, segments: &[(usize, usize)], phi: f64, f1: f64, f2: f64| Analysis {
        id: id.into(),
        spans: spans(segments),
        triples: vec![],
        rules: vec![],
        features: BTreeMap::from([
            ("phi".to_string(), phi),
            ("f1".to_string(), f1),
            ("f2".to_string(), f2),
        ]),
    };
    let sentence = Sentence {
        id: "example".into(),
        tokens: (0..12).map(|i| format!("w{i}")).collect(),
        gold: SkeletalTree::new(spans(&gold_segments)),
        analyses: vec![
            analysis("q1", &gold_segments, 16.0, 8.0, 4.0),
            analysis("q2", &gold_segments, 16.0, 6.0, 10.0),
            analysis("q3", &gold_segments[..4], 10.0, 2.0, 12.0),
        ],
    };

    let w = ScoreWeights::default();
    println!("weights: a1 = {}, a2 = {}, a3 = {}", w.a1, w.a2, w.a3);
    println!("\n{:<6}{:>10}{:>8}{:>8}{:>8}", "", "training", "phi", "f1", "f2");
    for a in &sentence.analyses {
        println!(
            "{:<6}{:>10}{:>8}{:>8}{:>8}",
            a.id,
            analysis_score(a, &sentence.gold, &w),
            a.feature("phi"),
            a.feature("f1"),
            a.feature("f2"),
        );
    }

    let rel = relativize(&sentence, &w);
    println!("\nbest-scoring set: {:?}", rel.best_set);
    println!("\nafter relativizing:");
    println!("{:<6}{:>10}{:>8}{:>8}{:>8}", "", "training", "phi", "f1", "f2");
    for (i, a) in sentence.analyses.iter().enumerate() {
        println!(
            "{:<6}{:>10}{:>8}{:>8}{:>8}",
            a.id,
            rel.g[i],
            rel.feature(i, "phi"),
            rel.feature(i, "f1"),
            rel.feature(i, "f2"),
        );
    }
    println!("\nthe hypothetical phi now predicts the relativised training score perfectly");
}

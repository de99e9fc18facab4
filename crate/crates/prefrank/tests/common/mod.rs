//! Shared fixtures and independent oracles for the integration suites.
//!
//! The oracles re-derive every quantity from first principles with their
//! own arithmetic (plain scans, direct SSE evaluation, binomial likelihood
//! forms) so they share no code path with the library implementations they
//! check.

#![allow(dead_code)]

pub mod oracles;

use std::collections::BTreeMap;

use prefrank::corpus::{Analysis, Constituent, Corpus, Sentence, SkeletalTree, Triple};

fn span(start: usize, end: usize) -> Constituent {
    Constituent::new(start, end, None)
}

/// A hand-built 20-sentence corpus exercising tied best analyses, repeated
/// triples, shared and sentence-specific vocabulary, and rule lists.
pub fn hand_corpus() -> Corpus {
    let heads = ["alpha", "beta", "gamma", "delta", "epsilon"];
    let relations = ["on", "of", "2"];
    let rules = ["np_v", "pp_att", "conj"];

    let mut sentences = Vec::new();
    for i in 0..20 {
        // A nested gold tree over 6 tokens.
        let gold = SkeletalTree::new(vec![span(0, 6), span(0, 3), span(3, 6), span(4, 6)]);
        let pick = |k: usize| heads[(i + k) % heads.len()].to_string();
        let rel = |k: usize| relations[(i + k) % relations.len()].to_string();
        let t = |a: usize, r: usize, b: usize| Triple::new(pick(a), rel(r), pick(b));

        // Correct analysis: spans equal gold.
        let correct = Analysis {
            id: "good".into(),
            spans: gold.constituents.clone(),
            triples: match i % 4 {
                0 => vec![t(0, 0, 1), t(0, 0, 1), t(1, 1, 2)], // repeated triple
                1 => vec![t(0, 0, 1), t(2, 0, 3)],
                2 => vec![t(1, 2, 4)],
                _ => vec![t(0, 1, 2), t(3, 0, 0)],
            },
            rules: vec![rules[i % 3].into(), rules[(i + 1) % 3].into()],
            features: BTreeMap::new(),
        };
        // Near miss: one gold span missing (score 3).
        let near = Analysis {
            id: "near".into(),
            spans: vec![span(0, 6), span(0, 3), span(3, 6)],
            triples: match i % 3 {
                0 => vec![t(2, 1, 3), t(2, 1, 3)],
                1 => vec![t(0, 0, 1)], // shares a triple with the correct one
                _ => vec![t(4, 2, 0), t(1, 0, 3)],
            },
            rules: vec![rules[(i + 2) % 3].into()],
            features: BTreeMap::new(),
        };
        // Far miss: hallucinates a span (score 4 - 10 = -6).
        let far = Analysis {
            id: "far".into(),
            spans: vec![span(0, 6), span(0, 3), span(3, 6), span(4, 6), span(1, 3)],
            triples: vec![t(3, 2, 4), t(4, 1, 1)],
            rules: vec![rules[i % 3].into(), rules[i % 3].into()],
            features: BTreeMap::new(),
        };

        let mut analyses = vec![correct, near, far];
        if i % 5 == 0 {
            // A second exactly-correct analysis: ties the best training
            // score, so triple counts go fractional.
            analyses.push(Analysis {
                id: "good2".into(),
                spans: gold.constituents.clone(),
                triples: vec![t(1, 1, 2), t(0, 2, 4)],
                rules: vec![rules[(i + 1) % 3].into()],
                features: BTreeMap::new(),
            });
        }
        sentences.push(Sentence {
            id: format!("s{i}"),
            tokens: (0..6).map(|k| format!("w{k}")).collect(),
            gold,
            analyses,
        });
    }
    Corpus {
        function_names: vec![],
        class_map: BTreeMap::new(),
        sentences,
    }
}

/// The seven-token attachment-ambiguity sentence with its two analyses and
/// four scaled component scores, in corpus file form.
pub fn dinner_corpus_text() -> String {
    [
        r#"{"function_names":["Low1","Low2","SynRules","SemColl"],"class_map":{}}"#,
        concat!(
            r#"{"id":"dinner","tokens":["do","i","get","dinner","on","this","flight"],"#,
            r#""gold":[[0,7,"P"],[1,2,"A"],[3,4,"A"],[4,7,"P"],[5,7,"A"]],"analyses":["#,
            r#"{"id":"qh","spans":[[0,7,"P"],[1,2,"A"],[3,4,"A"],[4,7,"P"],[5,7,"A"]],"triples":[["get_Acquire","2","personal"],["get_Acquire","3","cc_SpecificMeal"],["get_Acquire","on","flight_AirplaneTrip"]],"rules":[],"features":{"Low1":-9.08,"Low2":-2.8,"SynRules":-13.08,"SemColl":24.32}},"#,
            r#"{"id":"ql","spans":[[0,7,"P"],[1,2,"A"],[3,7,"A"],[4,7,"P"],[5,7,"A"]],"triples":[["get_Acquire","2","personal"],["get_Acquire","3","cc_SpecificMeal"],["cc_SpecificMeal","on","flight_AirplaneTrip"]],"rules":[],"features":{"Low1":-4.03,"Low2":0.0,"SynRules":-12.78,"SemColl":3.38}}]}"#
        ),
    ]
    .join("\n")
}

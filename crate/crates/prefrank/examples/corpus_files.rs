//! The corpus file format: build a corpus in code, write it, read it back,
//! validate it, and convert a bracketed tree.
//!
//! ```bash
//! cargo run -p prefrank --example corpus_files
//! ```

use std::collections::BTreeMap;

use prefrank::corpus::{
    apply_class_map, parse_bracketed_tree, read_corpus, validate, write_corpus, Analysis,
    Constituent, Corpus, Label, Sentence, Triple,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gold = prefrank::corpus::SkeletalTree::new(vec![
        Constituent::new(0, 4, Some(Label::P)),
        Constituent::new(1, 2, Some(Label::A)),
        Constituent::new(2, 4, Some(Label::A)),
    ]);
    let corpus = Corpus {
        function_names: vec!["Adjuncts".into(), "Ellipsis".into()],
        class_map: BTreeMap::from([("dinner_Meal".into(), "cc_SpecificMeal".into())]),
        sentences: vec![Sentence {
            id: "s1".into(),
            tokens: ["book", "a", "morning", "flight"].map(String::from).to_vec(),
            gold: gold.clone(),
            analyses: vec![
                Analysis {
                    id: "a1".into(),
                    spans: gold.constituents.clone(),
                    triples: vec![Triple::new("book_Reserve", "2", "flight_AirplaneTrip")],
                    rules: vec!["vp_np".into()],
                    features: BTreeMap::from([("Adjuncts".into(), 1.0)]),
                },
                Analysis {
                    id: "a2".into(),
                    spans: vec![Constituent::new(0, 4, Some(Label::P))],
                    triples: vec![Triple::new("book_Text", "2", "dinner_Meal")],
                    rules: vec!["np_frag".into()],
                    features: BTreeMap::from([("Adjuncts".into(), 3.0), ("Ellipsis".into(), 1.0)]),
                },
            ],
        }],
    };

    let mut bytes = Vec::new();
    write_corpus(&corpus, &mut bytes)?;
    println!("serialized corpus:\n{}", String::from_utf8_lossy(&bytes));

    let reloaded = read_corpus(bytes.as_slice())?;
    println!("round-trip equal: {}", reloaded == corpus);
    println!("validation findings: {:?}", validate(&reloaded));

    let mapped = apply_class_map(&reloaded);
    println!(
        "after class mapping, a2's triple: {}",
        mapped.sentences[0].analyses[1].triples[0]
    );

    let (tokens, tree) = parse_bracketed_tree("(P do (A I) get (A dinner) (P on (A this flight)))")?;
    println!("\nbracketed tree over {:?}:", tokens.join(" "));
    for c in &tree.constituents {
        println!(
            "  ({}, {}) {}",
            c.start,
            c.end,
            c.label.map(|l| l.to_string()).unwrap_or_default()
        );
    }
    Ok(())
}

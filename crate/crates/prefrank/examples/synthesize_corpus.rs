//! Generate a seeded synthetic corpus and write it in the corpus file
//! format.
//!
//! ```bash
//! cargo run -p prefrank --example synthesize_corpus
//! ```

use prefrank::corpus::{save_corpus, validate};
use prefrank::score::exact_match;
use prefrank::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SynthConfig {
        n_sentences: 50,
        analyses_min: 2,
        analyses_max: 4,
        n_functions: 6,
        noise_scale: 0.3,
        triple_signal: 0.8,
        seed: 42,
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?;

    let n_analyses = corpus.n_analyses();
    let n_correct: usize = corpus
        .sentences
        .iter()
        .map(|s| s.analyses.iter().filter(|a| exact_match(a, &s.gold)).count())
        .sum();
    println!(
        "generated {} sentences, {} analyses ({} exactly correct), {} preference functions",
        corpus.sentences.len(),
        n_analyses,
        n_correct,
        corpus.function_names.len()
    );
    println!("validation findings: {:?}", validate(&corpus));

    let sentence = &corpus.sentences[0];
    println!("\nfirst sentence ({} tokens):", sentence.tokens.len());
    for analysis in &sentence.analyses {
        println!(
            "  {}: {} spans, {} triples, {} rules, correct = {}",
            analysis.id,
            analysis.spans.len(),
            analysis.triples.len(),
            analysis.rules.len(),
            exact_match(analysis, &sentence.gold)
        );
    }

    let out = std::env::temp_dir().join("prefrank_synth_example.jsonl");
    save_corpus(&corpus, &out)?;
    println!("\nwrote {}", out.display());
    Ok(())
}

//! Train all five collocation statistics on a corpus with informative
//! triples and print the strongest and weakest collocations under each.
//!
//! ```bash
//! cargo run -p prefrank --example collocation_statistics
//! ```

use prefrank::colloc::{extract_triple_counts, CollocModel, CollocOptions, CollocStatistic};
use prefrank::score::ScoreWeights;
use prefrank::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SynthConfig {
        n_sentences: 200,
        triple_signal: 0.9,
        head_vocab: 12,
        relation_vocab: 3,
        seed: 11,
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?;
    let weights = ScoreWeights::default();

    let stats = extract_triple_counts(&corpus, &weights);
    println!(
        "best-analysis population: {} triple tokens, {} distinct triples",
        stats.n,
        stats.joint.len()
    );

    for statistic in CollocStatistic::ALL {
        let model = CollocModel::train(statistic, &corpus, &weights, &CollocOptions::default())?;
        let mut scored: Vec<_> = model.table.iter().collect();
        scored.sort_by(|a, b| b.1.total_cmp(a.1));
        let (top, top_v) = scored.first().unwrap();
        let (bottom, bottom_v) = scored.last().unwrap();
        println!(
            "\n{statistic} (smoothing {}, unseen default {:.3}):",
            model.smoothing, model.default_value
        );
        println!("  strongest {top}  {top_v:.3}");
        println!("  weakest   {bottom}  {bottom_v:.3}");
    }

    // Score one sentence's analyses with the mean-distance function alone.
    let model = CollocModel::train(
        CollocStatistic::MeanDistance,
        &corpus,
        &weights,
        &CollocOptions::default(),
    )?;
    let sentence = &corpus.sentences[0];
    println!("\nmean-distance scores for sentence {}:", sentence.id);
    for analysis in &sentence.analyses {
        println!(
            "  {}: {:.3} (correct = {})",
            analysis.id,
            model.score_analysis(analysis, sentence.tokens.len()),
            prefrank::score::exact_match(analysis, &sentence.gold)
        );
    }
    Ok(())
}

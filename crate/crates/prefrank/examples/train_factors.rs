//! Compare the three factor-training methods on one synthetic corpus:
//! the normalized baseline, least squares, and least squares refined by
//! hill climbing.
//!
//! ```bash
//! cargo run -p prefrank --example train_factors
//! ```

use prefrank::score::ScoreWeights;
use prefrank::synth::{generate, SynthConfig};
use prefrank::train::{
    assemble_training_matrix, correct_count, hill_climb, least_squares, normalized_factors, sse,
    HillClimbOptions,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SynthConfig {
        n_sentences: 300,
        analyses_min: 2,
        analyses_max: 4,
        n_functions: 8,
        noise_scale: 0.15,
        seed: 7,
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?;
    let weights = ScoreWeights::default();
    let matrix = assemble_training_matrix(&corpus, &weights, &corpus.function_names)?;

    let normalized = normalized_factors(&matrix);
    let lsq = least_squares(&matrix);
    let climbed = hill_climb(&corpus, &lsq, &HillClimbOptions::default())?;

    println!(
        "{:<16}{:>16}{:>14}",
        "method", "correct (strict)", "matrix SSE"
    );
    for (name, factors) in [
        ("normalized", &normalized),
        ("lsq", &lsq),
        ("lsq+hillclimb", &climbed.factors),
    ] {
        println!(
            "{:<16}{:>13}/{}{:>14.2}",
            name,
            correct_count(&corpus, factors),
            corpus.sentences.len(),
            sse(&matrix, factors)
        );
    }
    println!(
        "\nhill climbing applied {} alterations; counts per step: {:?}",
        climbed.iterations, climbed.counts
    );
    println!("\nfactors (function: normalized / lsq / hillclimb):");
    for (j, name) in corpus.function_names.iter().enumerate() {
        println!(
            "  {name}: {:+.4} / {:+.4} / {:+.4}",
            normalized.c[j], lsq.c[j], climbed.factors.c[j]
        );
    }
    Ok(())
}

//! Five-fold cross-validation comparing factor-training methods, with a
//! sign test on the held-out disagreements.
//!
//! ```bash
//! cargo run -p prefrank --example cross_validation
//! ```

use prefrank::eval::{cross_validate, random_baseline, sign_test, PipelineConfig, TrainMethod};
use prefrank::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SynthConfig {
        n_sentences: 600,
        analyses_min: 2,
        analyses_max: 4,
        n_functions: 10,
        noise_scale: 0.18,
        seed: 23,
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?;
    let seed = 5;

    let run = |method: TrainMethod| {
        let config = PipelineConfig {
            method,
            ..PipelineConfig::default()
        };
        cross_validate(&corpus, 5, &config, seed)
    };
    let normalized = run(TrainMethod::Normalized)?;
    let lsq = run(TrainMethod::LeastSquares)?;
    let hill = run(TrainMethod::LeastSquaresHillClimb)?;
    let random = random_baseline(&corpus);

    println!("{:<18}{:>16}{:>12}", "factor set", "number correct", "percent");
    for (name, report) in [
        ("random baseline", &random),
        ("normalized", &normalized.aggregate),
        ("least squares", &lsq.aggregate),
        ("hill climbing", &hill.aggregate),
    ] {
        println!(
            "{:<18}{:>16.1}{:>12.1}",
            name, report.correct_fractional, report.percentage
        );
    }

    println!("\nper-fold held-out percentages (hill climbing):");
    for fold in &hill.folds {
        println!(
            "  fold {}: {:>5.1}%  ({} sentences)",
            fold.fold, fold.report.percentage, fold.report.n_sentences
        );
    }

    let test = sign_test(
        &lsq.aggregate.strict_map(),
        &hill.aggregate.strict_map(),
    )?;
    println!(
        "\nsign test, least squares vs hill climbing: +{} -{} #SDs {:.1}",
        test.plus, test.minus, test.sds
    );
    Ok(())
}

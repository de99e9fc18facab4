//! The full pipeline on a train/held-out split: train collocation and
//! rule-cost models plus scaling factors on 80% of a corpus, then evaluate
//! on the remaining 20%.
//!
//! ```bash
//! cargo run -p prefrank --example holdout_pipeline
//! ```

use prefrank::colloc::CollocStatistic;
use prefrank::eval::{
    random_baseline, train_pipeline, DerivedFunction, DerivedKind, PipelineConfig, TrainMethod,
};
use prefrank::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SynthConfig {
        n_sentences: 500,
        analyses_min: 2,
        analyses_max: 4,
        n_functions: 6,
        noise_scale: 0.45,
        triple_signal: 0.55,
        seed: 3,
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?;

    // Deterministic 80/20 split.
    let cut = corpus.sentences.len() * 4 / 5;
    let mut training = corpus.clone();
    let heldout_sentences = training.sentences.split_off(cut);
    let mut heldout = corpus.clone();
    heldout.sentences = heldout_sentences;

    let config = PipelineConfig {
        method: TrainMethod::LeastSquaresHillClimb,
        derived: vec![
            DerivedFunction {
                name: "SemColl".to_string(),
                kind: DerivedKind::Colloc(CollocStatistic::MeanDistance),
            },
            DerivedFunction {
                name: "SynRules".to_string(),
                kind: DerivedKind::RuleCost,
            },
        ],
        ..PipelineConfig::default()
    };
    let trained = train_pipeline(&training, &config)?;

    println!("trained functions and factors:");
    for (name, factor) in trained.function_names.iter().zip(&trained.factors.c) {
        println!("  {name}: {factor:+.4}");
    }

    let train_report = trained.evaluate(&training);
    let heldout_report = trained.evaluate(&heldout);
    let baseline = random_baseline(&heldout);
    println!("\n{:<22}{:>10}{:>12}", "condition", "strict", "percent");
    println!(
        "{:<22}{:>7}/{}{:>12.1}",
        "training set",
        train_report.correct_strict,
        train_report.n_sentences,
        train_report.percentage
    );
    println!(
        "{:<22}{:>7}/{}{:>12.1}",
        "held out",
        heldout_report.correct_strict,
        heldout_report.n_sentences,
        heldout_report.percentage
    );
    println!(
        "{:<22}{:>10}{:>12.1}",
        "held out, random", "-", baseline.percentage
    );
    Ok(())
}

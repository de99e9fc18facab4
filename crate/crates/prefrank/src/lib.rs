//! Training and evaluation of weighted preference-function combinations for
//! ranking competing sentence analyses.
//!
//! A corpus supplies, for every sentence, a gold skeletal tree (a set of
//! nested constituent spans) and a list of candidate analyses. Each analysis
//! carries the spans it induces, semantic-collocation triples, the syntactic
//! rules used to build it, and raw preference-function scores. The crate
//! covers the full workflow:
//!
//! - [`corpus`] — data model, line-delimited corpus format, validation.
//! - [`score`] — training scores against the gold tree, per-sentence
//!   relativization, exact-match correctness.
//! - [`colloc`] — triple statistics (mutual information, signed chi-squared,
//!   signed chi, mean distance, likelihood ratio) and syntactic rule costs,
//!   each usable as a preference function.
//! - [`train`] — scaling factors: normalized baseline, least squares via
//!   normal equations, and interval-based hill-climbing refinement.
//! - [`eval`] — ranking, fractional-tie scoring, k-fold cross-validation,
//!   and sign-test comparisons.
//! - [`synth`] — seeded synthetic corpora with planted ground truth, so the
//!   pipeline is testable end to end at desk scale.
//!
//! The `prefrank` binary is a thin front end over these modules; the
//! `examples/` directory holds one runnable program per capability.

pub mod cli;
pub mod colloc;
pub mod corpus;
pub mod eval;
pub mod score;
pub mod synth;
pub mod train;

pub use corpus::{Analysis, Constituent, Corpus, Label, Sentence, SkeletalTree, Triple};
pub use score::ScoreWeights;
pub use train::ScalingFactors;

//! Seeded randomized error measurement against a double-precision oracle.

mod layer;
mod rng;
mod trials;

pub use layer::{measure_layer_error, LayerEvalConfig, LayerReport, LayerShape};
pub use rng::{gen_random, Distribution, Role};
pub use trials::{measure_error, measure_error_with, BatchRow, ErrorStats, NormKind, TrialConfig};

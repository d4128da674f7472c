//! Direct and Winograd convolution engines.
//!
//! Every engine computes valid cross-correlation,
//! `y[i] = sum_j g[j] * d[i + j]`, the convention used by CNN layers.

mod direct;
mod layer;
mod precision;
mod summation;
mod tensor;
mod winograd;

pub use direct::{direct_conv_1d, direct_conv_2d, direct_conv_layer};
pub use layer::{conv_layer, conv_layer_with, output_tiles};
pub use precision::{PrecisionMode, Real};
pub use summation::{sum_with_policy, SummationPolicy};
pub use tensor::{DType, Tensor};
pub use winograd::{winograd_conv_1d, winograd_conv_2d, PreparedTransforms};

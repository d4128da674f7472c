use serde::{Deserialize, Serialize};

use super::rng::{gen_random, Distribution, Role};
use super::trials::{l1, ErrorStats};
use crate::conv::{conv_layer_with, direct_conv_layer, PrecisionMode, PreparedTransforms, SummationPolicy};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::point::PointSet;
use crate::transform::build_transforms;

/// Shape of one synthetic convolution layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerShape {
    #[serde(rename = "C")]
    pub channels: usize,
    #[serde(rename = "K")]
    pub kernels: usize,
    #[serde(rename = "H")]
    pub height: usize,
    #[serde(rename = "W")]
    pub width: usize,
    pub r: usize,
}

impl LayerShape {
    pub fn parse_network(json: &str) -> Result<Vec<LayerShape>> {
        Ok(serde_json::from_str(json)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerEvalConfig {
    pub mode: PrecisionMode,
    pub sum_policy: SummationPolicy,
    pub images: usize,
    pub seed: u64,
    /// Inputs are uniform on `[-input_range, input_range)`.
    pub input_range: f64,
    /// Weights are uniform on `[-weight_range, weight_range)`; zero gives
    /// all-zero weights.
    pub weight_range: f64,
}

impl LayerEvalConfig {
    pub fn new(mode: PrecisionMode, sum_policy: SummationPolicy, images: usize, seed: u64) -> Self {
        Self {
            mode,
            sum_policy,
            images,
            seed,
            input_range: 1.0,
            weight_range: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerOutcome {
    Measured(ErrorStats),
    /// The layer could not run with this tile size (or kernel size).
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerReport {
    pub layers: Vec<LayerOutcome>,
    /// Sum of per-element L1 errors over measured layers and images divided by
    /// `images x measured layers`; `None` when no layer could run.
    pub aggregate: Option<f64>,
}

/// Runs every layer of a synthetic network on `cfg.images` random inputs
/// and measures the Winograd layer against a double-precision direct layer.
///
/// Layers are independent: each gets its own random weights (shared across
/// images) and its own random input per image.
pub fn measure_layer_error(
    network: &[LayerShape],
    points: &PointSet,
    cfg: &LayerEvalConfig,
    exec: Execution,
) -> Result<LayerReport> {
    if cfg.images == 0 {
        return Err(Error::BadShape("images must be at least 1".into()));
    }
    let prepared = PreparedTransforms::new(&build_transforms(points)?);
    let layers_len = network.len() as u64;
    let mut layers = Vec::with_capacity(network.len());
    let mut total = 0.0;
    let mut measured = 0usize;

    for (li, shape) in network.iter().enumerate() {
        if shape.r != points.k() {
            layers.push(LayerOutcome::Skipped(format!(
                "kernel {} does not match F({},{})",
                shape.r,
                points.m(),
                points.k()
            )));
            continue;
        }
        if shape.height < points.n() || shape.width < points.n() {
            let err = Error::TileTooLarge {
                m: points.m(),
                k: points.k(),
                h: shape.height,
                w: shape.width,
            };
            layers.push(LayerOutcome::Skipped(err.to_string()));
            continue;
        }
        let mode = cfg.mode;
        let weights = weights_for(shape, cfg, li as u64).map(|v| mode.store(v));
        let errors = exec.map(cfg.images, |image| {
            let index = image as u64 * layers_len + li as u64;
            let input = gen_random(
                &[shape.channels, shape.height, shape.width],
                cfg.seed,
                index,
                Role::LayerInput,
                Distribution::UniformSym { range: cfg.input_range },
            )
            .map(|v| mode.store(v));
            let subject = conv_layer_with(&input, &weights, &prepared, mode, cfg.sum_policy, Execution::Sequential)
                .expect("layer shape checked");
            let oracle = direct_conv_layer(&input, &weights, PrecisionMode::F64All).expect("layer shape checked");
            l1(subject.data(), &oracle)
        });
        for &(e, _) in &errors {
            total += e;
        }
        measured += 1;
        layers.push(LayerOutcome::Measured(ErrorStats::from_trials(&errors)));
    }

    let aggregate = (measured > 0).then(|| total / (cfg.images * measured) as f64);
    Ok(LayerReport { layers, aggregate })
}

fn weights_for(shape: &LayerShape, cfg: &LayerEvalConfig, layer: u64) -> crate::conv::Tensor {
    let dims = [shape.kernels, shape.channels, shape.r, shape.r];
    if cfg.weight_range == 0.0 {
        return crate::conv::Tensor::zeros(dims.to_vec());
    }
    gen_random(
        &dims,
        cfg.seed,
        layer,
        Role::LayerWeights,
        Distribution::UniformSym {
            range: cfg.weight_range,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(c: usize, k: usize, hw: usize) -> LayerShape {
        LayerShape {
            channels: c,
            kernels: k,
            height: hw,
            width: hw,
            r: 3,
        }
    }

    fn f43() -> PointSet {
        let c: f64 = 1.622;
        PointSet::parse(&format!("{},{},0,{},{},inf", -1.0 / c, -c, c, 1.0 / c), 4, 3).unwrap()
    }

    #[test]
    fn zero_weights_give_zero_error() {
        let mut cfg = LayerEvalConfig::new(PrecisionMode::F32All, SummationPolicy::Sequential, 3, 1);
        cfg.weight_range = 0.0;
        let report =
            measure_layer_error(&[shape(2, 2, 10), shape(2, 3, 8)], &f43(), &cfg, Execution::Parallel).unwrap();
        assert_eq!(report.aggregate, Some(0.0));
    }

    #[test]
    fn single_layer_aggregate_is_layer_mean() {
        let cfg = LayerEvalConfig::new(PrecisionMode::F32All, SummationPolicy::Sequential, 4, 2);
        let report = measure_layer_error(&[shape(3, 2, 12)], &f43(), &cfg, Execution::Parallel).unwrap();
        let LayerOutcome::Measured(stats) = &report.layers[0] else {
            panic!("layer skipped")
        };
        assert!(stats.mean_l1 > 0.0);
        assert_eq!(report.aggregate, Some(stats.mean_l1));
    }

    #[test]
    fn small_layers_are_skipped_not_fatal() {
        let cfg = LayerEvalConfig::new(PrecisionMode::F32All, SummationPolicy::Sequential, 2, 3);
        let net = [
            shape(2, 2, 4),
            shape(2, 2, 10),
            LayerShape {
                r: 5,
                ..shape(2, 2, 10)
            },
        ];
        let report = measure_layer_error(&net, &f43(), &cfg, Execution::Sequential).unwrap();
        assert!(matches!(report.layers[0], LayerOutcome::Skipped(_)));
        assert!(matches!(report.layers[1], LayerOutcome::Measured(_)));
        assert!(matches!(report.layers[2], LayerOutcome::Skipped(_)));
        assert!(report.aggregate.is_some());
    }

    #[test]
    fn network_spec_parses() {
        let net = LayerShape::parse_network(r#"[{"C":8,"K":8,"H":32,"W":32,"r":3}]"#).unwrap();
        assert_eq!(net, vec![shape(8, 8, 32)]);
    }
}

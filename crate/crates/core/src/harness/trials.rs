use std::io::Write;

use serde::{Deserialize, Serialize};

use super::rng::{gen_random, Distribution, Role};
use crate::conv::{direct_conv_1d, direct_conv_2d, PrecisionMode, PreparedTransforms, SummationPolicy, Tensor};
use crate::error::{bad_shape, Result};
use crate::exec::Execution;
use crate::point::PointSet;
use crate::transform::build_transforms;

pub const DEFAULT_TRIALS: usize = 5000;

/// One randomized error experiment. `points: None` measures direct
/// convolution in the subject precision instead of a Winograd algorithm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialConfig {
    pub m: usize,
    pub k: usize,
    pub dims: u8,
    pub points: Option<PointSet>,
    pub mode: PrecisionMode,
    pub sum_policy: SummationPolicy,
    pub trials: usize,
    pub seed: u64,
    pub dist: Distribution,
}

impl TrialConfig {
    /// Winograd configuration for `points` with the default trial count and
    /// input distribution.
    pub fn winograd(points: PointSet, dims: u8, mode: PrecisionMode, sum_policy: SummationPolicy, seed: u64) -> Self {
        Self {
            m: points.m(),
            k: points.k(),
            dims,
            points: Some(points),
            mode,
            sum_policy,
            trials: DEFAULT_TRIALS,
            seed,
            dist: Distribution::default(),
        }
    }

    /// Direct convolution of an `(m + k - 1)`-wide input.
    pub fn direct(m: usize, k: usize, dims: u8, mode: PrecisionMode, seed: u64) -> Self {
        Self {
            m,
            k,
            dims,
            points: None,
            mode,
            sum_policy: SummationPolicy::Sequential,
            trials: DEFAULT_TRIALS,
            seed,
            dist: Distribution::default(),
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_points(mut self, points: PointSet) -> Self {
        self.m = points.m();
        self.k = points.k();
        self.points = Some(points);
        self
    }

    pub fn n(&self) -> usize {
        self.m + self.k - 1
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(bad_shape("trials must be at least 1"));
        }
        if !(1..=2).contains(&self.dims) {
            return Err(bad_shape(format!("dims must be 1 or 2, got {}", self.dims)));
        }
        if self.m == 0 || self.k == 0 {
            return Err(bad_shape("m and k must be positive"));
        }
        let Distribution::UniformSym { range } = self.dist;
        if !(range > 0.0 && range.is_finite()) {
            return Err(bad_shape(format!("distribution range must be positive, got {range}")));
        }
        if let Some(p) = &self.points {
            if p.m() != self.m || p.k() != self.k {
                return Err(bad_shape(format!(
                    "points are for F({},{}) but config is F({},{})",
                    p.m(),
                    p.k(),
                    self.m,
                    self.k
                )));
            }
        }
        Ok(())
    }
}

/// How a trial's L1 error is normalised before averaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Sum,
    PerElement,
}

/// Aggregate of per-trial L1 errors (per element), in double precision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorStats {
    pub mean_l1: f64,
    pub std_l1: f64,
    pub max_l1: f64,
    pub trials: usize,
    pub norm: NormKind,
    /// Mean of the un-normalised per-trial L1 sums.
    pub mean_l1_sum: f64,
}

impl ErrorStats {
    /// Reduces per-trial `(per_element, sum)` errors in the given order.
    pub(crate) fn from_trials(errors: &[(f64, f64)]) -> Self {
        let count = errors.len();
        let mut total = 0.0;
        let mut total_sum = 0.0;
        let mut max = 0.0f64;
        for &(e, s) in errors {
            total += e;
            total_sum += s;
            max = max.max(e);
        }
        let mean = total / count as f64;
        let std = if count > 1 {
            let mut sq = 0.0;
            for &(e, _) in errors {
                sq += (e - mean) * (e - mean);
            }
            (sq / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean_l1: mean,
            std_l1: std,
            max_l1: max,
            trials: count,
            norm: NormKind::PerElement,
            mean_l1_sum: total_sum / count as f64,
        }
    }

    /// JSON document echoing the configuration.
    pub fn to_json(&self, cfg: &TrialConfig) -> Result<String> {
        #[derive(Serialize)]
        struct Report<'a> {
            config_echo: &'a TrialConfig,
            #[serde(flatten)]
            stats: &'a ErrorStats,
        }
        Ok(serde_json::to_string_pretty(&Report {
            config_echo: cfg,
            stats: self,
        })?)
    }
}

/// [`measure_error_with`] using the default execution.
pub fn measure_error(cfg: &TrialConfig) -> Result<ErrorStats> {
    measure_error_with(cfg, Execution::default())
}

/// Runs `cfg.trials` seeded trials. Each draws an input and kernel, rounds
/// them to the mode's storage precision, and compares the subject output to
/// a double-precision direct convolution of the same rounded values.
pub fn measure_error_with(cfg: &TrialConfig, exec: Execution) -> Result<ErrorStats> {
    cfg.validate()?;
    let prepared = match &cfg.points {
        Some(p) => Some(PreparedTransforms::new(&build_transforms(p)?)),
        None => None,
    };
    let (n, k) = (cfg.n(), cfg.k);
    let (d_shape, g_shape) = if cfg.dims == 1 {
        (vec![n], vec![k])
    } else {
        (vec![n, n], vec![k, k])
    };
    let mode = cfg.mode;

    let errors = exec.map(cfg.trials, |trial| {
        let trial = trial as u64;
        let d = gen_random(&d_shape, cfg.seed, trial, Role::Input, cfg.dist).map(|v| mode.store(v));
        let g = gen_random(&g_shape, cfg.seed, trial, Role::Kernel, cfg.dist).map(|v| mode.store(v));

        let (subject, oracle) = if cfg.dims == 1 {
            let subject = match &prepared {
                Some(t) => t.conv_1d(d.data(), g.data(), mode, cfg.sum_policy),
                None => direct_conv_1d(&d, &g, mode).expect("valid shape").into_data(),
            };
            (
                subject,
                direct_conv_1d(&d, &g, PrecisionMode::F64All).expect("valid shape"),
            )
        } else {
            let subject = match &prepared {
                Some(t) => t.conv_2d(d.data(), g.data(), mode, cfg.sum_policy),
                None => direct_conv_2d(&d, &g, mode).expect("valid shape").into_data(),
            };
            (
                subject,
                direct_conv_2d(&d, &g, PrecisionMode::F64All).expect("valid shape"),
            )
        };
        l1(&subject, &oracle)
    });
    Ok(ErrorStats::from_trials(&errors))
}

/// `(per_element, sum)` absolute difference.
pub(crate) fn l1(subject: &[f64], oracle: &Tensor) -> (f64, f64) {
    let sum: f64 = subject.iter().zip(oracle.data()).map(|(a, b)| (a - b).abs()).sum();
    (sum / subject.len() as f64, sum)
}

/// One row of a batch results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchRow {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub dims: u8,
    pub points: String,
    pub mode: PrecisionMode,
    pub policy: SummationPolicy,
    pub mean_l1: f64,
}

impl BatchRow {
    pub const HEADER: &'static str = "n,m,k,dims,points,mode,policy,mean_l1";

    pub fn new(cfg: &TrialConfig, stats: &ErrorStats) -> Self {
        Self {
            n: cfg.points.as_ref().map_or(0, PointSet::n),
            m: cfg.m,
            k: cfg.k,
            dims: cfg.dims,
            points: cfg
                .points
                .as_ref()
                .map_or_else(|| "direct".to_string(), ToString::to_string),
            mode: cfg.mode,
            policy: cfg.sum_policy,
            mean_l1: stats.mean_l1,
        }
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:e}",
            self.n, self.m, self.k, self.dims, self.points, self.mode, self.policy, self.mean_l1
        )
    }

    /// Appends to `path`, writing the header first if the file is new or empty.
    pub fn append_to(&self, path: &std::path::Path) -> Result<()> {
        let needs_header = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        if needs_header {
            writeln!(f, "{}", Self::HEADER)?;
        }
        writeln!(f, "{}", self.to_csv_line())?;
        Ok(())
    }
}

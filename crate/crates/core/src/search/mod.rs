//! Searches over symmetric point families: one-parameter sweeps, two-parameter
//! grid searches, subset enumeration and ranking.

mod template;

pub use template::{FamilyTemplate, Form, Param, Slot, C_FAMILY, DEGENERATE_GAP, D_FAMILY};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{bad_shape, Error, Result};
use crate::exec::Execution;
use crate::families::chebyshev_points;
use crate::harness::{measure_error_with, ErrorStats, TrialConfig};
use crate::point::{Point, PointSet};

/// Trials per grid point during sweeps.
pub const SWEEP_TRIALS: usize = 1000;
/// Trials used to re-measure a sweep's argmin.
pub const FINAL_TRIALS: usize = 5000;

/// A `(c, d)` grid coordinate; `d` is `None` for one-parameter templates.
pub type Params = (f64, Option<f64>);

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    pub mean_l1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub template: FamilyTemplate,
    /// Evaluated points in grid order (c ascending, then d ascending). For a
    /// grid search these are the refinement samples.
    pub samples: Vec<Sample>,
    /// Coarse samples of a grid search; empty for a sweep.
    pub coarse: Vec<Sample>,
    /// Degenerate parameters that were not evaluated.
    pub skipped: Vec<Params>,
    pub argmin: Sample,
}

impl SweepResult {
    fn new(template: &FamilyTemplate, samples: Vec<Sample>, coarse: Vec<Sample>, skipped: Vec<Params>) -> Result<Self> {
        let argmin = argmin(&samples).ok_or(Error::EmptyGrid)?;
        Ok(Self {
            template: template.clone(),
            samples,
            coarse,
            skipped,
            argmin,
        })
    }

    pub fn has_d(&self) -> bool {
        self.argmin.d.is_some()
    }

    /// `c,mean_l1` (or `c,d,mean_l1`) rows in grid order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(if self.has_d() { "c,d,mean_l1\n" } else { "c,mean_l1\n" });
        for s in &self.samples {
            match s.d {
                Some(d) => out.push_str(&format!("{:?},{:?},{:e}\n", s.c, d, s.mean_l1)),
                None => out.push_str(&format!("{:?},{:e}\n", s.c, s.mean_l1)),
            }
        }
        out
    }

    /// `{argmin, error, skipped_count}` plus the template.
    pub fn summary_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Argmin {
            c: f64,
            #[serde(skip_serializing_if = "Option::is_none")]
            d: Option<f64>,
        }
        #[derive(Serialize)]
        struct Summary<'a> {
            template: &'a FamilyTemplate,
            argmin: Argmin,
            error: f64,
            skipped_count: usize,
        }
        Ok(serde_json::to_string_pretty(&Summary {
            template: &self.template,
            argmin: Argmin {
                c: self.argmin.c,
                d: self.argmin.d,
            },
            error: self.argmin.mean_l1,
            skipped_count: self.skipped.len(),
        })?)
    }

    pub fn candidate(&self) -> Candidate {
        Candidate {
            template: self.template.clone(),
            c: self.argmin.c,
            d: self.argmin.d,
        }
    }
}

/// First minimum in grid order, so ties go to smaller c, then smaller d.
fn argmin(samples: &[Sample]) -> Option<Sample> {
    samples
        .iter()
        .copied()
        .reduce(|best, s| if s.mean_l1 < best.mean_l1 { s } else { best })
}

/// `min, min + step, ...` up to `max`, rounded to 12 decimals so that values
/// like 1.0 come out exact.
pub fn grid_values(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(bad_shape(format!("invalid range [{min}, {max}]")));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(bad_shape(format!("invalid step {step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| round12(min + i as f64 * step)).collect())
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Measures every parameter pair; degenerate instantiations are skipped.
fn evaluate(
    template: &FamilyTemplate,
    params: &[Params],
    cfg: &TrialConfig,
    exec: Execution,
) -> Result<(Vec<Sample>, Vec<Params>)> {
    let results = exec.map(params.len(), |i| {
        let (c, d) = params[i];
        match template.instantiate(cfg.k, c, d) {
            Ok(points) => {
                let run = cfg.clone().with_points(points);
                measure_error_with(&run, Execution::Sequential).map(|s| {
                    Some(Sample {
                        c,
                        d,
                        mean_l1: s.mean_l1,
                    })
                })
            }
            Err(Error::DegenerateFamily(_) | Error::DuplicatePoints(_) | Error::NonPositiveC(_)) => Ok(None),
            Err(e) => Err(e),
        }
    });
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for (r, &p) in results.into_iter().zip(params) {
        match r? {
            Some(s) => samples.push(s),
            None => {
                log::debug!("skipping degenerate parameters {p:?}");
                skipped.push(p);
            }
        }
    }
    Ok((samples, skipped))
}

/// Evaluates `template` at `c = c_min, c_min + step, ... <= c_max`.
///
/// `cfg` supplies the kernel size, dimensionality, precision, summation
/// policy, trial count and seed; every grid point uses the same seed.
pub fn sweep_c(
    template: &FamilyTemplate,
    c_min: f64,
    c_max: f64,
    step: f64,
    cfg: &TrialConfig,
    exec: Execution,
) -> Result<SweepResult> {
    if template.uses(Param::D) {
        return Err(bad_shape("sweep_c needs a template without d slots"));
    }
    let params: Vec<_> = grid_values(c_min, c_max, step)?
        .into_iter()
        .map(|c| (c, None))
        .collect();
    let (samples, skipped) = evaluate(template, &params, cfg, exec)?;
    SweepResult::new(template, samples, Vec::new(), skipped)
}

/// Coarse-to-fine search over `(c, d)`.
///
/// The coarse grid uses `steps.0`; the refinement uses `steps.1` within two
/// coarse cells of the coarse argmin, clipped to the ranges.
pub fn grid_search_cd(
    template: &FamilyTemplate,
    c_range: (f64, f64),
    d_range: (f64, f64),
    steps: (f64, f64),
    cfg: &TrialConfig,
    exec: Execution,
) -> Result<SweepResult> {
    if !(template.uses(Param::C) && template.uses(Param::D)) {
        return Err(bad_shape("grid_search_cd needs a template with c and d slots"));
    }
    let (coarse_step, fine_step) = steps;
    if !(fine_step > 0.0 && fine_step <= coarse_step) {
        return Err(bad_shape(format!(
            "fine step {fine_step} must be in (0, {coarse_step}]"
        )));
    }
    let cs = grid_values(c_range.0, c_range.1, coarse_step)?;
    let ds = grid_values(d_range.0, d_range.1, coarse_step)?;
    let params: Vec<_> = cs.iter().cartesian_product(&ds).map(|(&c, &d)| (c, Some(d))).collect();
    let (coarse, mut skipped) = evaluate(template, &params, cfg, exec)?;
    let centre = argmin(&coarse).ok_or(Error::EmptyGrid)?;

    let radius = (2.0 * coarse_step / fine_step).round() as i64;
    let around = |x0: f64, (lo, hi): (f64, f64)| -> Vec<f64> {
        (-radius..=radius)
            .map(|j| round12(x0 + j as f64 * fine_step))
            .filter(|&x| x >= lo && x <= hi)
            .collect()
    };
    let fine_params: Vec<_> = around(centre.c, c_range)
        .into_iter()
        .cartesian_product(around(centre.d.expect("d grid"), d_range))
        .map(|(c, d)| (c, Some(d)))
        .collect();
    let (samples, fine_skipped) = evaluate(template, &fine_params, cfg, exec)?;
    skipped.extend(fine_skipped);
    SweepResult::new(template, samples, coarse, skipped)
}

/// Every way of choosing `slots_needed` slots of `family` (in index order) to
/// join `base`. Finite base points come first and infinity last.
pub fn enumerate_subsets(base: &[Slot], family: &[Slot], slots_needed: usize) -> Result<Vec<FamilyTemplate>> {
    if slots_needed > family.len() {
        return Err(bad_shape(format!(
            "cannot choose {slots_needed} of {} slots",
            family.len()
        )));
    }
    let is_inf = |s: &&Slot| matches!(s, Slot::Fixed(Point::Infinity));
    family
        .iter()
        .combinations(slots_needed)
        .map(|chosen| {
            let mut slots: Vec<Slot> = base.iter().filter(|s| !is_inf(s)).copied().collect();
            slots.extend(chosen.into_iter().copied());
            slots.extend(base.iter().filter(is_inf).copied());
            FamilyTemplate::new(slots)
        })
        .collect()
}

/// A template with chosen parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub template: FamilyTemplate,
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
}

impl Candidate {
    pub fn new(template: FamilyTemplate, c: f64, d: Option<f64>) -> Self {
        Self { template, c, d }
    }

    pub fn point_set(&self, k: usize) -> Result<PointSet> {
        self.template.instantiate(k, self.c, self.d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedPointSet {
    pub rank: usize,
    pub candidate: Candidate,
    pub stats: ErrorStats,
}

/// Measures every candidate under `cfg` and sorts ascending by mean error
/// (stable, so equal errors keep their input order).
pub fn rank_point_sets(candidates: &[Candidate], cfg: &TrialConfig, exec: Execution) -> Result<Vec<RankedPointSet>> {
    let mut measured = candidates
        .iter()
        .map(|cand| {
            let run = cfg.clone().with_points(cand.point_set(cfg.k)?);
            Ok((cand.clone(), measure_error_with(&run, exec)?))
        })
        .collect::<Result<Vec<_>>>()?;
    measured.sort_by(|a, b| a.1.mean_l1.total_cmp(&b.1.mean_l1));
    Ok(measured
        .into_iter()
        .enumerate()
        .map(|(i, (candidate, stats))| RankedPointSet {
            rank: i + 1,
            candidate,
            stats,
        })
        .collect())
}

/// Sweeps every subset pattern completing `base` to `n` points and ranks the
/// patterns at their best `c`. Patterns with no valid `c` are dropped.
#[allow(clippy::too_many_arguments)]
pub fn pattern_report(
    base: &[Slot],
    family: &[Slot],
    n: usize,
    c_range: (f64, f64),
    step: f64,
    sweep_cfg: &TrialConfig,
    final_cfg: &TrialConfig,
    exec: Execution,
) -> Result<Vec<RankedPointSet>> {
    let needed = n
        .checked_sub(base.len())
        .ok_or_else(|| bad_shape(format!("base of {} points exceeds n = {n}", base.len())))?;
    let mut candidates = Vec::new();
    for template in enumerate_subsets(base, family, needed)? {
        match sweep_c(&template, c_range.0, c_range.1, step, sweep_cfg, exec) {
            Ok(sweep) => candidates.push(sweep.candidate()),
            Err(Error::EmptyGrid) => log::warn!("no valid c for pattern {template}"),
            Err(e) => return Err(e),
        }
    }
    rank_point_sets(&candidates, final_cfg, exec)
}

/// `n - 1` Chebyshev nodes plus infinity, for `F(m, k)` with `m + k - 1 = n`.
pub fn chebyshev_point_set(n: usize, m: usize, k: usize) -> Result<PointSet> {
    if n < 2 || m == 0 || k == 0 || m + k - 1 != n {
        return Err(bad_shape(format!("{n} points do not form F({m},{k})")));
    }
    let mut points: Vec<Point> = chebyshev_points(n - 1).into_iter().map(Point::Finite).collect();
    points.push(Point::Infinity);
    PointSet::new(points, m, k)
}

/// [`measure_error_with`] on the Chebyshev point set.
pub fn chebyshev_baseline(n: usize, m: usize, k: usize, cfg: &TrialConfig, exec: Execution) -> Result<ErrorStats> {
    let run = cfg.clone().with_points(chebyshev_point_set(n, m, k)?);
    measure_error_with(&run, exec)
}

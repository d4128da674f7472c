//! Published point sets and error values for kernel size 3, used by the
//! reproduction commands and the acceptance tests.

use crate::error::Result;
use crate::point::{Point, PointSet};
use crate::search::{Candidate, FamilyTemplate};

pub const KERNEL: usize = 3;
/// Tile width used for the direct-convolution rows.
pub const DIRECT_M: usize = 4;

/// How a point set is obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum PointSource {
    Direct,
    Fixed(Vec<f64>),
    Family(Candidate),
}

impl PointSource {
    /// `None` for direct convolution. Fixed lists get infinity appended.
    pub fn point_set(&self) -> Result<Option<PointSet>> {
        match self {
            PointSource::Direct => Ok(None),
            PointSource::Fixed(v) => {
                let n = v.len() + 1;
                let mut points: Vec<Point> = v.iter().copied().map(Point::Finite).collect();
                points.push(Point::Infinity);
                PointSet::new(points, n - KERNEL + 1, KERNEL).map(Some)
            }
            PointSource::Family(c) => c.point_set(KERNEL).map(Some),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PointSource::Direct => "direct".into(),
            PointSource::Fixed(v) => {
                let items: Vec<String> = v.iter().map(|x| format!("{x:?}")).chain(["inf".into()]).collect();
                items.join(" ")
            }
            PointSource::Family(c) => match c.d {
                Some(d) => format!("{} @ c={} d={}", c.template, c.c, d),
                None => format!("{} @ c={}", c.template, c.c),
            },
        }
    }
}

/// One row of the comparison against simple-fraction points.
#[derive(Debug, Clone, PartialEq)]
pub struct SotaRow {
    /// Number of points; 0 marks direct convolution.
    pub n: usize,
    pub baseline: PointSource,
    pub baseline_error: f64,
    pub proposed: PointSource,
    pub proposed_error: f64,
}

impl SotaRow {
    pub fn m(&self) -> usize {
        if self.n == 0 {
            DIRECT_M
        } else {
            self.n - KERNEL + 1
        }
    }
}

fn family(template: &str, c: f64, d: Option<f64>) -> PointSource {
    PointSource::Family(Candidate::new(template.parse().expect("valid template"), c, d))
}

const P4: [f64; 3] = [0.0, -1.0, 1.0];
const P8: [f64; 7] = [0.0, -1.0, 1.0, 0.5, -0.5, 2.0, -2.0];

fn p4_with(extra: &[f64]) -> PointSource {
    PointSource::Fixed(P4.iter().chain(extra).copied().collect())
}

fn p8_with(extra: &[f64]) -> PointSource {
    PointSource::Fixed(P8.iter().chain(extra).copied().collect())
}

/// Rows for 1D (`dims == 1`) or 2D convolution, `n = 0, 4, 5, ..., 10`.
pub fn sota_rows(dims: u8) -> Vec<SotaRow> {
    let row = |n, baseline, baseline_error, proposed, proposed_error| SotaRow {
        n,
        baseline,
        baseline_error,
        proposed,
        proposed_error,
    };
    let sym = "0,-1/c,-c,c,1/c,inf";
    let sym9 = "0,-1/c,-c,c,1/c,-1/d,-d,d,inf";
    let sym10 = "0,-1/c,-c,c,1/c,-1/d,-d,d,1/d,inf";
    if dims == 1 {
        vec![
            row(0, PointSource::Direct, 1.75e-8, PointSource::Direct, 1.75e-8),
            row(4, p4_with(&[]), 2.45e-8, family("0,-1,1/c,inf", 1.028, None), 3.06e-8),
            row(
                5,
                p4_with(&[0.5]),
                5.19e-8,
                family("0,1/2,-c,c,inf", 1.5, None),
                4.69e-8,
            ),
            row(6, p4_with(&[0.5, -3.0]), 6.92e-8, family(sym, 1.829, None), 5.65e-8),
            row(
                7,
                p4_with(&[0.5, -0.5, -3.0]),
                9.35e-8,
                family("0,-1/c,-c,c,1/c,d,inf", 2.22, Some(1.0)),
                1.07e-7,
            ),
            row(
                8,
                p8_with(&[]),
                1.15e-7,
                family("0,-1/c,-c,c,1/c,-d,d,inf", 2.0, Some(1.0)),
                1.16e-7,
            ),
            row(9, p8_with(&[-0.25]), 2.34e-7, family(sym9, 1.313, Some(2.478)), 2.29e-7),
            row(
                10,
                p8_with(&[-0.25, 4.0]),
                3.46e-7,
                family(sym10, 1.953, Some(1.229)),
                1.4e-7,
            ),
        ]
    } else {
        vec![
            row(0, PointSource::Direct, 4.63e-8, PointSource::Direct, 4.63e-8),
            row(4, p4_with(&[]), 7.65e-8, family("0,-1/c,1/c,inf", 1.054, None), 9.22e-8),
            row(5, p4_with(&[0.5]), 2.35e-8, family("0,1,-1,-c,inf", 2.0, None), 1.51e-7),
            row(6, p4_with(&[0.5, -2.0]), 3.29e-7, family(sym, 1.622, None), 2.37e-7),
            row(
                7,
                p4_with(&[0.5, -2.0, -0.5]),
                6.81e-7,
                family("0,-1/c,-c,c,1/c,d,inf", 2.0, Some(1.0)),
                7.72e-7,
            ),
            row(
                8,
                p8_with(&[]),
                8.79e-7,
                family("0,-1/c,-c,c,1/c,-1/d,d,inf", 2.0, Some(1.003)),
                8.79e-7,
            ),
            row(9, p8_with(&[-0.25]), 3.71e-6, family(sym9, 1.305, Some(2.485)), 3.06e-6),
            row(
                10,
                p8_with(&[-0.25, 4.0]),
                7.35e-6,
                family(sym10, 1.272, Some(2.099)),
                5.28e-6,
            ),
        ]
    }
}

/// Best `c` for one base-point choice of `F(m, 3)`, with `0` and infinity
/// implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalRow {
    pub m: usize,
    pub dims: u8,
    pub candidate: Candidate,
    pub error: f64,
}

/// Rows of the per-base-point optimum listings for `F(2,3)`, `F(3,3)` and
/// `F(4,3)` in 1D and 2D.
pub fn optimal_rows() -> Vec<OptimalRow> {
    let rows: [(usize, u8, &str, f64, f64); 32] = [
        (2, 1, "-1/c,1/c", 1.125, 3.11e-8),
        (2, 1, "1/2,-c", 1.5, 3.74e-8),
        (2, 1, "3,-1/c", 1.279, 4.82e-8),
        (2, 1, "-3,1/c", 1.292, 4.85e-8),
        (2, 1, "1,-c", 1.016, 3.13e-8),
        (2, 1, "-1,1/c", 1.028, 3.06e-8),
        (2, 2, "-1/c,1/c", 1.054, 9.22e-8),
        (2, 2, "1/2,-c", 1.224, 1.31e-7),
        (2, 2, "3,-1/c", 1.442, 2.02e-7),
        (2, 2, "-3,-1/c", 1.407, 2.01e-7),
        (2, 2, "1,-1/c", 1.133, 9.53e-8),
        (2, 2, "-1,1/c", 1.102, 9.56e-8),
        (3, 1, "-c,c,1/c", 1.64, 5.41e-8),
        (3, 1, "1/2,-c,c", 1.326, 4.20e-8),
        (3, 1, "3,-1/c,1/c", 1.363, 5.34e-8),
        (3, 1, "-3,-1/c,1/c", 1.298, 5.53e-8),
        (3, 1, "1,-1,c", 2.0, 5.04e-8),
        (3, 2, "-1/c,c,1/c", 1.571, 2.27e-7),
        (3, 2, "1/2,-c,c", 1.614, 1.89e-7),
        (3, 2, "3,-1/c,1/c", 1.38, 2.24e-7),
        (3, 2, "-3,-1/c,1/c", 1.334, 2.32e-7),
        (3, 2, "1,-1,-c", 2.0, 1.51e-7),
        (4, 1, "-1/c,-c,c,1/c", 1.829, 5.65e-8),
        (4, 1, "1/2,-1/c,-c,c", 1.736, 5.81e-8),
        (4, 1, "3,-1/c,-c,1/c", 1.613, 6.63e-8),
        (4, 1, "-3,-1/c,c,1/c", 1.636, 6.71e-8),
        (4, 1, "1,-1,-1/c,c", 2.431, 6.78e-8),
        (4, 2, "-1/c,-c,c,1/c", 1.622, 2.37e-7),
        (4, 2, "1/2,-1/c,-c,c", 1.614, 2.52e-7),
        (4, 2, "3,-1/c,-c,1/c", 1.567, 3.23e-7),
        (4, 2, "-3,-1/c,-c,1/c", 1.578, 3.22e-7),
        (4, 2, "1,-1,-1/c,c", 2.125, 3.30e-7),
    ];
    rows.iter()
        .map(|&(m, dims, slots, c, error)| {
            let template: FamilyTemplate = format!("0,{slots},inf").parse().expect("valid template");
            OptimalRow {
                m,
                dims,
                candidate: Candidate::new(template, c, None),
                error,
            }
        })
        .collect()
}

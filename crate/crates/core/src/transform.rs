//! Modified Toom-Cook transform matrices `A^T`, `G` and `B^T`.
//!
//! For finite points `a_0..a_{p-1}` (with `p = n` or `p = n - 1` when the
//! infinity point is present):
//!
//! * column `i` of `A^T` is `[1, a_i, ..., a_i^{m-1}]`,
//! * row `i` of `G` is `[1, a_i, ..., a_i^{k-1}] / N_i` with
//!   `N_i = prod_{j != i} (a_i - a_j)`,
//! * row `i` of `B^T` holds the coefficients of `M_i(x) = prod_{j != i} (x - a_j)`.
//!
//! The infinity point adds a last row `[0, .., 0, 1]` to `G`, a last column
//! `[0, .., 0, 1]` to `A^T`, and a last row to `B^T` holding the coefficients
//! of `M'(x) = prod_j (x - a_j)`.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{bad_shape, Error, Result};
use crate::point::{Point, PointSet};
use crate::poly::Polynomial;

/// Dense row-major `f64` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Plain `f64` matrix-vector product (sequential sums).
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row-major CSV, 17 significant digits per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|&v| format_sig17(v)).collect();
            writeln!(out, "{}", line.join(",")).unwrap();
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::Parse(format!("bad matrix entry `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(bad_shape("ragged CSV matrix"));
        }
        Ok(Self::from_rows(&rows))
    }
}

/// Positional decimal with 17 significant digits (`0` for zero).
pub fn format_sig17(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Lagrange denominator `N_i = prod_{j != i} (a_i - a_j)` over the finite
/// points of `points`. `i` indexes the finite points.
pub fn scaling_factor(points: &PointSet, i: usize) -> Result<f64> {
    let finite = points.finite_values();
    let Some(&ai) = finite.get(i) else {
        return Err(bad_shape(format!("index {i} is not a finite point")));
    };
    let mut prod = 1.0;
    for (j, &aj) in finite.iter().enumerate() {
        if j != i {
            prod *= ai - aj;
        }
    }
    if prod == 0.0 {
        return Err(Error::ZeroFactor(i));
    }
    Ok(prod)
}

/// The three transform matrices of an `F(m, k)` algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformSet {
    pub a_t: Matrix,
    pub g: Matrix,
    pub b_t: Matrix,
    pub points: PointSet,
}

impl TransformSet {
    pub fn m(&self) -> usize {
        self.points.m()
    }

    pub fn k(&self) -> usize {
        self.points.k()
    }

    pub fn n(&self) -> usize {
        self.points.n()
    }

    pub fn to_csv(&self) -> String {
        format!(
            "# A^T\n{}# G\n{}# B^T\n{}",
            self.a_t.to_csv(),
            self.g.to_csv(),
            self.b_t.to_csv()
        )
    }
}

/// Builds `A^T` (m x n), `G` (n x k) and `B^T` (n x n) for `points`.
///
/// Without an infinity point this is plain Toom-Cook on `n` finite points.
pub fn build_transforms(points: &PointSet) -> Result<TransformSet> {
    let (m, k, n) = (points.m(), points.k(), points.n());
    if n != m + k - 1 {
        return Err(bad_shape(format!("n = {n} but m + k - 1 = {}", m + k - 1)));
    }
    if let Some(pos) = points.points().iter().position(Point::is_infinity) {
        if pos != n - 1 {
            return Err(Error::InfinityNotLast);
        }
    }
    let finite = points.finite_values();
    for (i, a) in finite.iter().enumerate() {
        if finite[i + 1..].contains(a) {
            return Err(Error::DuplicatePoints(*a));
        }
    }

    let mut a_t = Matrix::zeros(m, n);
    let mut g = Matrix::zeros(n, k);
    let mut b_t = Matrix::zeros(n, n);

    for (i, &alpha) in finite.iter().enumerate() {
        let scale = scaling_factor(points, i)?;

        let mut pow = 1.0;
        for r in 0..m {
            a_t.set(r, i, pow);
            pow *= alpha;
        }

        let mut pow = 1.0;
        for c in 0..k {
            g.set(i, c, pow / scale);
            pow *= alpha;
        }

        let others: Vec<f64> = finite
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &a)| a)
            .collect();
        for (c, v) in Polynomial::from_roots(&others).padded(n).into_iter().enumerate() {
            b_t.set(i, c, v);
        }
    }

    if points.has_infinity() {
        let last = n - 1;
        a_t.set(m - 1, last, 1.0);
        g.set(last, k - 1, 1.0);
        for (c, v) in Polynomial::from_roots(&finite).padded(n).into_iter().enumerate() {
            b_t.set(last, c, v);
        }
    }

    Ok(TransformSet {
        a_t,
        g,
        b_t,
        points: points.clone(),
    })
}

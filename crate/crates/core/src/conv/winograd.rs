use super::precision::{PrecisionMode, Real};
use super::summation::SummationPolicy;
use super::tensor::Tensor;
use crate::error::{bad_shape, Result};
use crate::transform::{Matrix, TransformSet};

/// Row-major transform matrices converted to one floating-point type.
#[derive(Debug, Clone)]
pub(crate) struct Mats<T> {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    a_t: Vec<T>,
    g: Vec<T>,
    b_t: Vec<T>,
}

fn convert<T: Real>(m: &Matrix) -> Vec<T> {
    m.data().iter().map(|&v| T::from_f64(v)).collect()
}

/// `mat` (rows x cols) times `x` (cols x width), both row-major. Each output
/// entry is one policy-ordered dot product; structural zeros in `mat` are
/// skipped.
fn left_apply<T: Real>(
    mat: &[T],
    rows: usize,
    cols: usize,
    x: &[T],
    width: usize,
    policy: SummationPolicy,
    scratch: &mut Vec<T>,
) -> Vec<T> {
    let mut out = vec![T::ZERO; rows * width];
    let mut column = vec![T::ZERO; cols];
    for j in 0..width {
        for (l, c) in column.iter_mut().enumerate() {
            *c = x[l * width + j];
        }
        for r in 0..rows {
            out[r * width + j] = dot(&mat[r * cols..(r + 1) * cols], &column, policy, scratch);
        }
    }
    out
}

/// `x` (height x cols) times `mat^T` where `mat` is (rows x cols).
fn right_apply_transposed<T: Real>(
    x: &[T],
    height: usize,
    mat: &[T],
    rows: usize,
    cols: usize,
    policy: SummationPolicy,
    scratch: &mut Vec<T>,
) -> Vec<T> {
    let mut out = vec![T::ZERO; height * rows];
    for i in 0..height {
        let xr = &x[i * cols..(i + 1) * cols];
        for j in 0..rows {
            out[i * rows + j] = dot(xr, &mat[j * cols..(j + 1) * cols], policy, scratch);
        }
    }
    out
}

#[inline]
fn dot<T: Real>(coeffs: &[T], x: &[T], policy: SummationPolicy, scratch: &mut Vec<T>) -> T {
    scratch.clear();
    for (&c, &v) in coeffs.iter().zip(x) {
        if c != T::ZERO {
            scratch.push(c * v);
        }
    }
    policy.sum_in_place(scratch)
}

/// Element-wise product rounded through the Hadamard precision `H`.
#[inline]
pub(crate) fn hadamard<T: Real, H: Real>(u: T, v: T) -> T {
    T::from_f64((H::from_f64(u.to_f64()) * H::from_f64(v.to_f64())).to_f64())
}

impl<T: Real> Mats<T> {
    fn new(t: &TransformSet) -> Self {
        Self {
            m: t.m(),
            k: t.k(),
            n: t.n(),
            a_t: convert(&t.a_t),
            g: convert(&t.g),
            b_t: convert(&t.b_t),
        }
    }

    pub fn kernel_1d(&self, g: &[T], policy: SummationPolicy, s: &mut Vec<T>) -> Vec<T> {
        left_apply(&self.g, self.n, self.k, g, 1, policy, s)
    }

    pub fn input_1d(&self, d: &[T], policy: SummationPolicy, s: &mut Vec<T>) -> Vec<T> {
        left_apply(&self.b_t, self.n, self.n, d, 1, policy, s)
    }

    pub fn output_1d(&self, p: &[T], policy: SummationPolicy, s: &mut Vec<T>) -> Vec<T> {
        left_apply(&self.a_t, self.m, self.n, p, 1, policy, s)
    }

    /// `G g G^T`, n x n.
    pub fn kernel_2d(&self, g: &[T], policy: SummationPolicy, s: &mut Vec<T>) -> Vec<T> {
        let (n, k) = (self.n, self.k);
        let half = left_apply(&self.g, n, k, g, k, policy, s);
        right_apply_transposed(&half, n, &self.g, n, k, policy, s)
    }

    /// `B^T d B`, n x n.
    pub fn input_2d(&self, d: &[T], policy: SummationPolicy, s: &mut Vec<T>) -> Vec<T> {
        let n = self.n;
        let half = left_apply(&self.b_t, n, n, d, n, policy, s);
        right_apply_transposed(&half, n, &self.b_t, n, n, policy, s)
    }

    /// `A^T p A`, m x m.
    pub fn output_2d(&self, p: &[T], policy: SummationPolicy, s: &mut Vec<T>) -> Vec<T> {
        let (m, n) = (self.m, self.n);
        let half = left_apply(&self.a_t, m, n, p, n, policy, s);
        right_apply_transposed(&half, m, &self.a_t, m, n, policy, s)
    }

    fn conv_1d<H: Real>(&self, d: &[T], g: &[T], policy: SummationPolicy) -> Vec<T> {
        let mut s = Vec::with_capacity(self.n);
        let u = self.kernel_1d(g, policy, &mut s);
        let v = self.input_1d(d, policy, &mut s);
        let p: Vec<T> = u.iter().zip(&v).map(|(&a, &b)| hadamard::<T, H>(a, b)).collect();
        self.output_1d(&p, policy, &mut s)
    }

    fn conv_2d<H: Real>(&self, d: &[T], g: &[T], policy: SummationPolicy) -> Vec<T> {
        let mut s = Vec::with_capacity(self.n);
        let u = self.kernel_2d(g, policy, &mut s);
        let v = self.input_2d(d, policy, &mut s);
        let p: Vec<T> = u.iter().zip(&v).map(|(&a, &b)| hadamard::<T, H>(a, b)).collect();
        self.output_2d(&p, policy, &mut s)
    }
}

/// Transform matrices prepared in both precisions, reusable across calls.
#[derive(Debug, Clone)]
pub struct PreparedTransforms {
    pub(crate) f32: Mats<f32>,
    pub(crate) f64: Mats<f64>,
}

fn load<T: Real>(values: &[f64], mode: PrecisionMode) -> Vec<T> {
    values.iter().map(|&v| T::from_f64(mode.store(v))).collect()
}

fn unload<T: Real>(values: Vec<T>, mode: PrecisionMode) -> Vec<f64> {
    values.into_iter().map(|v| mode.store(v.to_f64())).collect()
}

impl PreparedTransforms {
    pub fn new(t: &TransformSet) -> Self {
        Self {
            f32: Mats::new(t),
            f64: Mats::new(t),
        }
    }

    pub fn m(&self) -> usize {
        self.f64.m
    }

    pub fn k(&self) -> usize {
        self.f64.k
    }

    pub fn n(&self) -> usize {
        self.f64.n
    }

    /// One `F(m, k)` tile: `d` has `n` values, `g` has `k`; returns `m`.
    pub fn conv_1d(&self, d: &[f64], g: &[f64], mode: PrecisionMode, policy: SummationPolicy) -> Vec<f64> {
        debug_assert_eq!(d.len(), self.n());
        debug_assert_eq!(g.len(), self.k());
        match mode {
            PrecisionMode::F32All => unload(self.f32.conv_1d::<f32>(&load(d, mode), &load(g, mode), policy), mode),
            PrecisionMode::MixedTransformF64HadamardF32 => {
                unload(self.f64.conv_1d::<f32>(&load(d, mode), &load(g, mode), policy), mode)
            }
            PrecisionMode::F64All => unload(self.f64.conv_1d::<f64>(&load(d, mode), &load(g, mode), policy), mode),
        }
    }

    /// One `F(m x m, k x k)` tile, row-major `n x n` input and `k x k` kernel.
    pub fn conv_2d(&self, d: &[f64], g: &[f64], mode: PrecisionMode, policy: SummationPolicy) -> Vec<f64> {
        debug_assert_eq!(d.len(), self.n() * self.n());
        debug_assert_eq!(g.len(), self.k() * self.k());
        match mode {
            PrecisionMode::F32All => unload(self.f32.conv_2d::<f32>(&load(d, mode), &load(g, mode), policy), mode),
            PrecisionMode::MixedTransformF64HadamardF32 => {
                unload(self.f64.conv_2d::<f32>(&load(d, mode), &load(g, mode), policy), mode)
            }
            PrecisionMode::F64All => unload(self.f64.conv_2d::<f64>(&load(d, mode), &load(g, mode), policy), mode),
        }
    }
}

/// `A^T [(G g) . (B^T d)]` for one tile.
pub fn winograd_conv_1d(
    t: &TransformSet,
    d: &Tensor,
    g: &Tensor,
    mode: PrecisionMode,
    policy: SummationPolicy,
) -> Result<Tensor> {
    d.expect_rank(1, "input")?;
    g.expect_rank(1, "kernel")?;
    if d.len() != t.n() || g.len() != t.k() {
        return Err(bad_shape(format!(
            "F({},{}) needs input {} and kernel {}, got {} and {}",
            t.m(),
            t.k(),
            t.n(),
            t.k(),
            d.len(),
            g.len()
        )));
    }
    let out = PreparedTransforms::new(t).conv_1d(d.data(), g.data(), mode, policy);
    Tensor::new(vec![t.m()], out)
}

/// `A^T [(G g G^T) . (B^T d B)] A` for one square tile.
pub fn winograd_conv_2d(
    t: &TransformSet,
    d: &Tensor,
    g: &Tensor,
    mode: PrecisionMode,
    policy: SummationPolicy,
) -> Result<Tensor> {
    d.expect_rank(2, "input")?;
    g.expect_rank(2, "kernel")?;
    let (n, k) = (t.n(), t.k());
    if d.shape() != [n, n] || g.shape() != [k, k] {
        return Err(bad_shape(format!(
            "F({m}x{m},{k}x{k}) needs input {n}x{n} and kernel {k}x{k}, got {:?} and {:?}",
            d.shape(),
            g.shape(),
            m = t.m()
        )));
    }
    let out = PreparedTransforms::new(t).conv_2d(d.data(), g.data(), mode, policy);
    Tensor::new(vec![t.m(), t.m()], out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conv::{direct_conv_1d, direct_conv_2d};
    use crate::point::PointSet;
    use crate::transform::build_transforms;

    fn transforms(list: &str, m: usize, k: usize) -> TransformSet {
        build_transforms(&PointSet::parse(list, m, k).unwrap()).unwrap()
    }

    fn symmetric(c: f64, m: usize) -> TransformSet {
        let list = format!("{},{},0,{},{},inf", -1.0 / c, -c, c, 1.0 / c);
        transforms(&list, m, 3)
    }

    /// Small deterministic pseudo-random values in [-1, 1).
    fn values(seed: u64, len: usize) -> Vec<f64> {
        let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        (0..len)
            .map(|_| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                (x >> 11) as f64 / (1u64 << 52) as f64 - 1.0
            })
            .collect()
    }

    fn rel_err(a: &[f64], b: &[f64]) -> f64 {
        let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        let scale = b.iter().fold(0.0f64, |m, y| m.max(y.abs()));
        diff / scale
    }

    #[test]
    fn f23_small_example() {
        let t = transforms("-1,0,1,inf", 2, 3);
        let d = Tensor::vector(vec![1.0, 2.0, 3.0, 4.0]);
        let g = Tensor::vector(vec![1.0; 3]);
        for policy in SummationPolicy::ALL {
            let y = winograd_conv_1d(&t, &d, &g, PrecisionMode::F64All, policy).unwrap();
            assert!((y.data()[0] - 6.0).abs() < 1e-12 && (y.data()[1] - 9.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_kernel_gives_exact_zeros() {
        let t = symmetric(1.829, 4);
        let d = Tensor::vector(values(3, 6));
        let g = Tensor::vector(vec![0.0; 3]);
        let d2 = Tensor::new(vec![6, 6], values(4, 36)).unwrap();
        let g2 = Tensor::new(vec![3, 3], vec![0.0; 9]).unwrap();
        for mode in PrecisionMode::ALL {
            for policy in SummationPolicy::ALL {
                let y = winograd_conv_1d(&t, &d, &g, mode, policy).unwrap();
                assert!(y.data().iter().all(|&v| v == 0.0));
                let y = winograd_conv_2d(&t, &d2, &g2, mode, policy).unwrap();
                assert!(y.data().iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn f43_symmetric_matches_oracle() {
        let t = symmetric(1.829, 4);
        for seed in 0..50 {
            let d = Tensor::vector(values(seed, 6));
            let g = Tensor::vector(values(seed + 1000, 3));
            let y = winograd_conv_1d(&t, &d, &g, PrecisionMode::F64All, SummationPolicy::HuffmanMinMagnitude).unwrap();
            let o = direct_conv_1d(&d, &g, PrecisionMode::F64All).unwrap();
            assert!(rel_err(y.data(), o.data()) <= 1e-10);
        }
    }

    #[test]
    fn two_dimensional_examples() {
        let t = transforms("-1,0,1,inf", 2, 3);
        let d = Tensor::new(vec![4, 4], (1..=16).map(|v| v as f64).collect()).unwrap();
        let g = Tensor::new(vec![3, 3], vec![1.0; 9]).unwrap();
        let y = winograd_conv_2d(&t, &d, &g, PrecisionMode::F64All, SummationPolicy::Sequential).unwrap();
        for (a, b) in y.data().iter().zip([54.0, 63.0, 90.0, 99.0]) {
            assert!((a - b).abs() < 1e-12);
        }

        let t = symmetric(1.622, 4);
        for seed in 0..50 {
            let d = Tensor::new(vec![6, 6], values(seed, 36)).unwrap();
            let g = Tensor::new(vec![3, 3], values(seed + 77, 9)).unwrap();
            let y = winograd_conv_2d(&t, &d, &g, PrecisionMode::F64All, SummationPolicy::Pairwise).unwrap();
            let o = direct_conv_2d(&d, &g, PrecisionMode::F64All).unwrap();
            assert!(rel_err(y.data(), o.data()) <= 1e-9);
        }
    }

    #[test]
    fn plain_toom_cook_without_infinity() {
        let t = transforms("-2,-1,-0.5,0.5,1,2", 4, 3);
        let d = Tensor::vector(values(9, 6));
        let g = Tensor::vector(values(10, 3));
        let y = winograd_conv_1d(&t, &d, &g, PrecisionMode::F64All, SummationPolicy::Sequential).unwrap();
        let o = direct_conv_1d(&d, &g, PrecisionMode::F64All).unwrap();
        assert!(rel_err(y.data(), o.data()) <= 1e-10);
    }

    #[test]
    fn linearity_in_kernel() {
        let t = symmetric(1.7, 4);
        let d = Tensor::vector(values(1, 6));
        let (g1, g2) = (values(2, 3), values(3, 3));
        let (a, b) = (0.75, -1.25);
        let mix = Tensor::vector(g1.iter().zip(&g2).map(|(x, y)| a * x + b * y).collect());
        let run = |g: &Tensor| winograd_conv_1d(&t, &d, g, PrecisionMode::F64All, SummationPolicy::Sequential).unwrap();
        let lhs = run(&mix);
        let y1 = run(&Tensor::vector(g1));
        let y2 = run(&Tensor::vector(g2));
        for i in 0..4 {
            let rhs = a * y1.data()[i] + b * y2.data()[i];
            assert!((lhs.data()[i] - rhs).abs() <= 1e-10);
        }
    }

    #[test]
    fn separable_kernel_nests_1d() {
        let t = symmetric(1.622, 4);
        let (u, v) = (values(5, 3), values(6, 3));
        let g = Tensor::new(vec![3, 3], (0..9).map(|i| u[i / 3] * v[i % 3]).collect()).unwrap();
        let d = values(7, 36);
        let y = winograd_conv_2d(
            &t,
            &Tensor::new(vec![6, 6], d.clone()).unwrap(),
            &g,
            PrecisionMode::F64All,
            SummationPolicy::Sequential,
        )
        .unwrap();

        // rows with v, then columns with u
        let mode = PrecisionMode::F64All;
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|r| {
                winograd_conv_1d(
                    &t,
                    &Tensor::vector(d[r * 6..r * 6 + 6].to_vec()),
                    &Tensor::vector(v.clone()),
                    mode,
                    SummationPolicy::Sequential,
                )
                .unwrap()
                .into_data()
            })
            .collect();
        for x in 0..4 {
            let col: Vec<f64> = rows.iter().map(|r| r[x]).collect();
            let out = winograd_conv_1d(
                &t,
                &Tensor::vector(col),
                &Tensor::vector(u.clone()),
                mode,
                SummationPolicy::Sequential,
            )
            .unwrap();
            for y_ in 0..4 {
                assert!((out.data()[y_] - y.data()[y_ * 4 + x]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn shape_errors() {
        let t = transforms("-1,0,1,inf", 2, 3);
        let d = Tensor::vector(vec![1.0; 5]);
        let g = Tensor::vector(vec![1.0; 3]);
        assert!(winograd_conv_1d(&t, &d, &g, PrecisionMode::F64All, SummationPolicy::Sequential).is_err());
        let d = Tensor::new(vec![4, 3], vec![0.0; 12]).unwrap();
        let g = Tensor::new(vec![3, 3], vec![0.0; 9]).unwrap();
        assert!(winograd_conv_2d(&t, &d, &g, PrecisionMode::F64All, SummationPolicy::Sequential).is_err());
    }
}

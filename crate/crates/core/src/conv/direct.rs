use super::precision::{PrecisionMode, Real};
use super::tensor::Tensor;
use crate::error::{bad_shape, Result};

/// Valid 1D cross-correlation, accumulated left to right.
pub fn direct_conv_1d(d: &Tensor, g: &Tensor, mode: PrecisionMode) -> Result<Tensor> {
    d.expect_rank(1, "input")?;
    g.expect_rank(1, "kernel")?;
    let (n, k) = (d.len(), g.len());
    if k == 0 || n < k {
        return Err(bad_shape(format!("input {n} shorter than kernel {k}")));
    }
    let out = match mode {
        PrecisionMode::F32All => correlate_1d::<f32>(d.data(), g.data(), mode),
        _ => correlate_1d::<f64>(d.data(), g.data(), mode),
    };
    Tensor::new(vec![n - k + 1], out)
}

fn correlate_1d<T: Real>(d: &[f64], g: &[f64], mode: PrecisionMode) -> Vec<f64> {
    let d: Vec<T> = d.iter().map(|&v| T::from_f64(mode.store(v))).collect();
    let g: Vec<T> = g.iter().map(|&v| T::from_f64(mode.store(v))).collect();
    (0..=d.len() - g.len())
        .map(|i| {
            let mut acc = g[0] * d[i];
            for j in 1..g.len() {
                acc = acc + g[j] * d[i + j];
            }
            mode.store(acc.to_f64())
        })
        .collect()
}

/// Valid 2D cross-correlation, kernel taps accumulated in row-major order.
pub fn direct_conv_2d(d: &Tensor, g: &Tensor, mode: PrecisionMode) -> Result<Tensor> {
    d.expect_rank(2, "input")?;
    g.expect_rank(2, "kernel")?;
    let (h, w) = (d.shape()[0], d.shape()[1]);
    let (r, s) = (g.shape()[0], g.shape()[1]);
    if r == 0 || s == 0 || h < r || w < s {
        return Err(bad_shape(format!("input {h}x{w} smaller than kernel {r}x{s}")));
    }
    let out = match mode {
        PrecisionMode::F32All => correlate_2d::<f32>(d.data(), w, g.data(), r, s, h, mode),
        _ => correlate_2d::<f64>(d.data(), w, g.data(), r, s, h, mode),
    };
    Tensor::new(vec![h - r + 1, w - s + 1], out)
}

fn correlate_2d<T: Real>(
    d: &[f64],
    w: usize,
    g: &[f64],
    r: usize,
    s: usize,
    h: usize,
    mode: PrecisionMode,
) -> Vec<f64> {
    let d: Vec<T> = d.iter().map(|&v| T::from_f64(mode.store(v))).collect();
    let g: Vec<T> = g.iter().map(|&v| T::from_f64(mode.store(v))).collect();
    let (ho, wo) = (h - r + 1, w - s + 1);
    let mut out = Vec::with_capacity(ho * wo);
    for y in 0..ho {
        for x in 0..wo {
            let mut acc = T::ZERO;
            for u in 0..r {
                for v in 0..s {
                    let term = g[u * s + v] * d[(y + u) * w + x + v];
                    acc = if u == 0 && v == 0 { term } else { acc + term };
                }
            }
            out.push(mode.store(acc.to_f64()));
        }
    }
    out
}

/// Multi-channel layer: `input` is `[C, H, W]`, `kernels` is `[K, C, R, S]`,
/// output `[K, H - R + 1, W - S + 1]`. Channels are the outermost sum.
pub fn direct_conv_layer(input: &Tensor, kernels: &Tensor, mode: PrecisionMode) -> Result<Tensor> {
    input.expect_rank(3, "layer input")?;
    kernels.expect_rank(4, "layer kernels")?;
    let (c, h, w) = (input.shape()[0], input.shape()[1], input.shape()[2]);
    let (kc, r, s) = (kernels.shape()[1], kernels.shape()[2], kernels.shape()[3]);
    let k = kernels.shape()[0];
    if kc != c {
        return Err(bad_shape(format!("kernels have {kc} channels, input has {c}")));
    }
    if r == 0 || s == 0 || h < r || w < s {
        return Err(bad_shape(format!("input {h}x{w} smaller than kernel {r}x{s}")));
    }
    let out = match mode {
        PrecisionMode::F32All => layer_sum::<f32>(input, kernels, mode),
        _ => layer_sum::<f64>(input, kernels, mode),
    };
    Tensor::new(vec![k, h - r + 1, w - s + 1], out)
}

fn layer_sum<T: Real>(input: &Tensor, kernels: &Tensor, mode: PrecisionMode) -> Vec<f64> {
    let (c, h, w) = (input.shape()[0], input.shape()[1], input.shape()[2]);
    let (k, r, s) = (kernels.shape()[0], kernels.shape()[2], kernels.shape()[3]);
    let d: Vec<T> = input.data().iter().map(|&v| T::from_f64(mode.store(v))).collect();
    let g: Vec<T> = kernels.data().iter().map(|&v| T::from_f64(mode.store(v))).collect();
    let (ho, wo) = (h - r + 1, w - s + 1);
    let mut out = Vec::with_capacity(k * ho * wo);
    for ki in 0..k {
        for y in 0..ho {
            for x in 0..wo {
                let mut acc = T::ZERO;
                for ci in 0..c {
                    for u in 0..r {
                        for v in 0..s {
                            let gv = g[((ki * c + ci) * r + u) * s + v];
                            acc = acc + gv * d[(ci * h + y + u) * w + x + v];
                        }
                    }
                }
                out.push(mode.store(acc.to_f64()));
            }
        }
    }
    out
}

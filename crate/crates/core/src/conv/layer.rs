use super::precision::{PrecisionMode, Real};
use super::summation::SummationPolicy;
use super::tensor::Tensor;
use super::winograd::{hadamard, Mats, PreparedTransforms};
use crate::error::{bad_shape, Error, Result};
use crate::exec::Execution;
use crate::transform::TransformSet;

/// Tiles per spatial axis for an output extent and tile size `m`.
pub fn output_tiles(extent: usize, m: usize) -> usize {
    extent.div_ceil(m)
}

/// Tiled Winograd convolution layer.
///
/// `input` is `[C, H, W]`, `kernels` is `[K, C, r, r]` with `r = t.k()`.
/// Input is cut into `n x n` tiles with stride `m`, zero-padded on the
/// bottom/right; channels are summed in the transform domain before one
/// output transform per tile and kernel. Output is `[K, H - r + 1, W - r + 1]`.
pub fn conv_layer(
    input: &Tensor,
    kernels: &Tensor,
    t: &TransformSet,
    mode: PrecisionMode,
    policy: SummationPolicy,
) -> Result<Tensor> {
    conv_layer_with(
        input,
        kernels,
        &PreparedTransforms::new(t),
        mode,
        policy,
        Execution::default(),
    )
}

/// [`conv_layer`] with prepared transforms and an explicit execution mode.
pub fn conv_layer_with(
    input: &Tensor,
    kernels: &Tensor,
    t: &PreparedTransforms,
    mode: PrecisionMode,
    policy: SummationPolicy,
    exec: Execution,
) -> Result<Tensor> {
    let geom = Geometry::check(input, kernels, t)?;
    let out = match mode {
        PrecisionMode::F32All => run::<f32, f32>(&t.f32, input, kernels, &geom, mode, policy, exec, false),
        PrecisionMode::MixedTransformF64HadamardF32 => {
            run::<f64, f32>(&t.f64, input, kernels, &geom, mode, policy, exec, false)
        }
        PrecisionMode::F64All => run::<f64, f64>(&t.f64, input, kernels, &geom, mode, policy, exec, false),
    };
    Tensor::new(vec![geom.k, geom.ho, geom.wo], out)
}

#[derive(Debug, Clone, Copy)]
struct Geometry {
    c: usize,
    h: usize,
    w: usize,
    k: usize,
    ho: usize,
    wo: usize,
    tiles_y: usize,
    tiles_x: usize,
}

impl Geometry {
    fn check(input: &Tensor, kernels: &Tensor, t: &PreparedTransforms) -> Result<Self> {
        input.expect_rank(3, "layer input")?;
        kernels.expect_rank(4, "layer kernels")?;
        let (c, h, w) = (input.shape()[0], input.shape()[1], input.shape()[2]);
        let (k, kc, r, s) = (
            kernels.shape()[0],
            kernels.shape()[1],
            kernels.shape()[2],
            kernels.shape()[3],
        );
        if kc != c {
            return Err(bad_shape(format!("kernels have {kc} channels, input has {c}")));
        }
        if r != t.k() || s != t.k() {
            return Err(bad_shape(format!("kernel {r}x{s} does not match F(m,{})", t.k())));
        }
        // a feature map smaller than one tile would be mostly padding
        if h < t.n() || w < t.n() {
            return Err(Error::TileTooLarge {
                m: t.m(),
                k: t.k(),
                h,
                w,
            });
        }
        let (ho, wo) = (h - r + 1, w - r + 1);
        Ok(Self {
            c,
            h,
            w,
            k,
            ho,
            wo,
            tiles_y: output_tiles(ho, t.m()),
            tiles_x: output_tiles(wo, t.m()),
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn run<T: Real, H: Real>(
    mats: &Mats<T>,
    input: &Tensor,
    kernels: &Tensor,
    geom: &Geometry,
    mode: PrecisionMode,
    policy: SummationPolicy,
    exec: Execution,
    reverse_tiles: bool,
) -> Vec<f64> {
    let (m, n, r) = (mats.m, mats.n, mats.k);
    let Geometry {
        c,
        h,
        w,
        k,
        ho,
        wo,
        tiles_y,
        tiles_x,
    } = *geom;
    let tiles = tiles_y * tiles_x;
    let data = input.data();

    // transformed kernels, [K][C][n*n]
    let kernel_t: Vec<Vec<Vec<T>>> = exec.map(k, |ki| {
        let mut s = Vec::new();
        (0..c)
            .map(|ci| {
                let off = (ki * c + ci) * r * r;
                let g: Vec<T> = kernels.data()[off..off + r * r]
                    .iter()
                    .map(|&v| T::from_f64(mode.store(v)))
                    .collect();
                mats.kernel_2d(&g, policy, &mut s)
            })
            .collect()
    });

    // transformed input tiles, [tile][C][n*n]
    let input_t: Vec<Vec<Vec<T>>> = exec.map(tiles, |tile| {
        let (ty, tx) = (tile / tiles_x, tile % tiles_x);
        let mut s = Vec::new();
        let mut patch = vec![T::ZERO; n * n];
        (0..c)
            .map(|ci| {
                for (u, row) in patch.chunks_mut(n).enumerate() {
                    let y = ty * m + u;
                    for (v, cell) in row.iter_mut().enumerate() {
                        let x = tx * m + v;
                        *cell = if y < h && x < w {
                            T::from_f64(mode.store(data[(ci * h + y) * w + x]))
                        } else {
                            T::ZERO
                        };
                    }
                }
                mats.input_2d(&patch, policy, &mut s)
            })
            .collect()
    });

    let order: Vec<usize> = if reverse_tiles {
        (0..tiles).rev().collect()
    } else {
        (0..tiles).collect()
    };

    let planes: Vec<Vec<f64>> = exec.map(k, |ki| {
        let mut plane = vec![0.0; ho * wo];
        let mut s = Vec::new();
        let mut terms = Vec::with_capacity(c);
        let mut acc = vec![T::ZERO; n * n];
        for &tile in &order {
            let (ty, tx) = (tile / tiles_x, tile % tiles_x);
            for (e, slot) in acc.iter_mut().enumerate() {
                terms.clear();
                terms.extend((0..c).map(|ci| hadamard::<T, H>(kernel_t[ki][ci][e], input_t[tile][ci][e])));
                *slot = policy.sum_in_place(&mut terms);
            }
            let y = mats.output_2d(&acc, policy, &mut s);
            for u in 0..m {
                let oy = ty * m + u;
                if oy >= ho {
                    break;
                }
                for v in 0..m {
                    let ox = tx * m + v;
                    if ox < wo {
                        plane[oy * wo + ox] = mode.store(y[u * m + v].to_f64());
                    }
                }
            }
        }
        plane
    });
    planes.concat()
}

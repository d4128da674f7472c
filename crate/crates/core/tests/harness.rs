use winograd_points::conv::{conv_layer, winograd_conv_2d, PrecisionMode, SummationPolicy, Tensor};
use winograd_points::exec::Execution;
use winograd_points::harness::{
    gen_random, measure_error, measure_error_with, measure_layer_error, Distribution, LayerEvalConfig, LayerShape,
    Role, TrialConfig,
};
use winograd_points::reference::{sota_rows, SotaRow};
use winograd_points::search::FamilyTemplate;
use winograd_points::{build_transforms, PointSet};

const HUFFMAN: SummationPolicy = SummationPolicy::HuffmanMinMagnitude;

fn table_configs() -> Vec<(SotaRow, u8, PointSet)> {
    let mut out = Vec::new();
    for dims in [1, 2] {
        for row in sota_rows(dims) {
            for src in [&row.baseline, &row.proposed] {
                if let Some(p) = src.point_set().unwrap() {
                    out.push((row.clone(), dims, p));
                }
            }
        }
    }
    out
}

#[test]
fn f64_beats_f32_for_every_table_set() {
    for (row, dims, p) in table_configs() {
        let f32_cfg = TrialConfig::winograd(p, dims, PrecisionMode::F32All, HUFFMAN, 3).with_trials(1000);
        let f64_cfg = TrialConfig {
            mode: PrecisionMode::F64All,
            ..f32_cfg.clone()
        };
        let e32 = measure_error(&f32_cfg).unwrap().mean_l1;
        let e64 = measure_error(&f64_cfg).unwrap().mean_l1;
        assert!(e64 < e32, "n={} dims={dims}: {e64} vs {e32}", row.n);
        assert!(e64 < 1e-12);
    }
}

#[test]
fn trial_count_stability() {
    for (row, dims, p) in table_configs() {
        let full = TrialConfig::winograd(p, dims, PrecisionMode::F32All, HUFFMAN, 100);
        let half = TrialConfig {
            seed: 200,
            ..full.clone()
        }
        .with_trials(2500);
        let a = measure_error(&full).unwrap().mean_l1;
        let b = measure_error(&half).unwrap().mean_l1;
        let rel = (a - b).abs() / a;
        assert!(rel < 0.10, "n={} dims={dims}: {a} vs {b}", row.n);
    }
}

#[test]
fn doubling_range_quadruples_1d_error() {
    let p = FamilyTemplate::symmetric().instantiate(3, 1.829, None).unwrap();
    let base = TrialConfig::winograd(p, 1, PrecisionMode::F32All, HUFFMAN, 4);
    let doubled = TrialConfig {
        dist: Distribution::UniformSym { range: 2.0 },
        ..base.clone()
    };
    let ratio = measure_error(&doubled).unwrap().mean_l1 / measure_error(&base).unwrap().mean_l1;
    assert!((ratio - 4.0).abs() <= 0.8, "ratio {ratio}");
}

#[test]
fn identical_configs_are_bitwise_identical() {
    let p = FamilyTemplate::symmetric_2()
        .instantiate(3, 1.272, Some(2.099))
        .unwrap();
    let cfg = TrialConfig::winograd(p, 2, PrecisionMode::MixedTransformF64HadamardF32, HUFFMAN, 5).with_trials(300);
    let a = measure_error_with(&cfg, Execution::Parallel).unwrap();
    let b = measure_error_with(&cfg, Execution::Sequential).unwrap();
    assert_eq!(a.mean_l1.to_bits(), b.mean_l1.to_bits());
    assert_eq!(a, b);
}

#[test]
fn random_streams() {
    let dist = Distribution::default();
    let a = gen_random(&[100_000], 1, 0, Role::Input, dist);
    assert_eq!(a, gen_random(&[100_000], 1, 0, Role::Input, dist));
    assert_ne!(a, gen_random(&[100_000], 1, 1, Role::Input, dist));
    assert_ne!(a, gen_random(&[100_000], 1, 0, Role::Kernel, dist));
    let mean = a.data().iter().sum::<f64>() / a.len() as f64;
    assert!(mean.abs() <= 0.01);
    assert!(a.data().iter().all(|v| (-1.0..1.0).contains(v)));
}

#[test]
fn single_tile_layer_equals_2d_convolution() {
    let c: f64 = 1.622;
    let t = build_transforms(&FamilyTemplate::symmetric().instantiate(3, c, None).unwrap()).unwrap();
    for seed in 0..20 {
        let d = gen_random(&[6, 6], seed, 0, Role::Input, Distribution::default());
        let g = gen_random(&[3, 3], seed, 0, Role::Kernel, Distribution::default());
        for mode in PrecisionMode::ALL {
            for policy in SummationPolicy::ALL {
                let direct = winograd_conv_2d(&t, &d, &g, mode, policy).unwrap();
                let input = Tensor::new(vec![1, 6, 6], d.data().to_vec()).unwrap();
                let kernels = Tensor::new(vec![1, 1, 3, 3], g.data().to_vec()).unwrap();
                let layer = conv_layer(&input, &kernels, &t, mode, policy).unwrap();
                assert_eq!(layer.data(), direct.data());
            }
        }
    }
}

#[test]
fn toy_network_prefers_symmetric_points_at_n6() {
    let layer = LayerShape {
        channels: 8,
        kernels: 8,
        height: 32,
        width: 32,
        r: 3,
    };
    let net = [layer; 3];
    let cfg = LayerEvalConfig::new(PrecisionMode::F32All, SummationPolicy::Sequential, 16, 9);
    let sym = FamilyTemplate::symmetric().instantiate(3, 1.622, None).unwrap();
    let simple = sota_rows(2)[3].baseline.point_set().unwrap().unwrap();
    let a = measure_layer_error(&net, &sym, &cfg, Execution::Parallel)
        .unwrap()
        .aggregate
        .unwrap();
    let b = measure_layer_error(&net, &simple, &cfg, Execution::Parallel)
        .unwrap()
        .aggregate
        .unwrap();
    assert!(a < b, "symmetric {a} vs simple {b}");
}

use proptest::prelude::*;
use winograd_points::conv::{direct_conv_1d, winograd_conv_1d, PrecisionMode, SummationPolicy, Tensor};
use winograd_points::{build_transforms, Point, PointSet};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-15 * a.abs().max(b.abs()).max(1.0)
}

/// Row of a matrix whose G row is proportional to `[1, p, p^2]`.
fn row_for(g: &winograd_points::Matrix, p: f64) -> usize {
    (0..g.rows())
        .find(|&r| g.get(r, 0) != 0.0 && close(g.get(r, 1) / g.get(r, 0), p))
        .expect("point present")
}

#[test]
fn f23_worked_matrices() {
    let t = build_transforms(&PointSet::parse("-1,0,1,inf", 2, 3).unwrap()).unwrap();
    assert_eq!(
        t.b_t.to_rows(),
        vec![
            vec![0.0, -1.0, 1.0, 0.0],
            vec![-1.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 1.0, 0.0],
            vec![0.0, -1.0, 0.0, 1.0],
        ]
    );
    assert_eq!(
        t.g.to_rows(),
        vec![
            vec![0.5, -0.5, 0.5],
            vec![-1.0, 0.0, 0.0],
            vec![0.5, 0.5, 0.5],
            vec![0.0, 0.0, 1.0],
        ]
    );
    assert_eq!(
        t.a_t.to_rows(),
        vec![vec![1.0, 1.0, 1.0, 0.0], vec![-1.0, 0.0, 1.0, 1.0]]
    );
}

#[test]
fn f43_symmetric_family_at_c2() {
    let c: f64 = 2.0;
    let set = PointSet::parse(&format!("{},{},0,{},{},inf", -1.0 / c, -c, c, 1.0 / c), 4, 3).unwrap();
    let t = build_transforms(&set).unwrap();
    let c2 = c * c;
    let c4 = c2 * c2;
    let q = (c4 + 1.0) / c2;
    // (point, B^T row, G row) in closed form
    let expected: [(f64, [f64; 6], [f64; 3]); 5] = [
        (-1.0 / c, [0.0, c, -c2, -1.0 / c, 1.0, 0.0], [-c4, c * c2, -c2]),
        (-c, [0.0, 1.0 / c, -1.0 / c2, -c, 1.0, 0.0], [1.0, -c, c2]),
        (0.0, [1.0, 0.0, -q, 0.0, 1.0, 0.0], [1.0, 0.0, 0.0]),
        (c, [0.0, -1.0 / c, -1.0 / c2, c, 1.0, 0.0], [1.0, c, c2]),
        (1.0 / c, [0.0, -c, -c2, 1.0 / c, 1.0, 0.0], [-c4, -c * c2, -c2]),
    ];
    let den = 2.0 * (c4 - 1.0);
    for (p, b_row, g_row) in expected {
        let r = row_for(&t.g, p);
        for (j, v) in b_row.iter().enumerate() {
            assert!(close(t.b_t.get(r, j), *v), "B^T[{r}][{j}] = {} vs {v}", t.b_t.get(r, j));
        }
        let scale = if p == 0.0 { 1.0 } else { den };
        for (j, v) in g_row.iter().enumerate() {
            assert!(close(t.g.get(r, j), v / scale), "G[{r}][{j}]");
        }
        for i in 0..4 {
            assert!(close(t.a_t.get(i, r), p.powi(i as i32)));
        }
    }
    assert_eq!(t.b_t.row(5), &[0.0, 1.0, 0.0, -q, 0.0, 1.0]);
    assert_eq!(t.b_t.get(2, 2), -17.0 / 4.0);
    assert_eq!(t.g.row(5), &[0.0, 0.0, 1.0]);
    assert_eq!(t.a_t.col(5), vec![0.0, 0.0, 0.0, 1.0]);
}

#[test]
fn csv_round_trip_preserves_bits() {
    let c: f64 = 1.829;
    let set = PointSet::parse(&format!("{},{},0,{},{},inf", -1.0 / c, -c, c, 1.0 / c), 4, 3).unwrap();
    let t = build_transforms(&set).unwrap();
    for m in [&t.a_t, &t.g, &t.b_t] {
        assert_eq!(&winograd_points::Matrix::from_csv(&m.to_csv()).unwrap(), m);
    }
}

fn point_sets() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..=4).prop_flat_map(|m| {
        let n = m + 2;
        (Just(m), prop::collection::vec(-3.0f64..3.0, n - 1))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn winograd_reproduces_correlation((m, finite) in point_sets(), seed in 0u64..1000) {
        let mut sorted = finite.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assume!(sorted.windows(2).all(|w| w[1] - w[0] > 0.2));
        let mut points: Vec<Point> = finite.into_iter().map(Point::Finite).collect();
        points.push(Point::Infinity);
        let t = build_transforms(&PointSet::new(points, m, 3).unwrap()).unwrap();
        let n = m + 2;
        let vals: Vec<f64> = (0..n + 3).map(|i| ((seed + i as u64) as f64 * 0.613).sin()).collect();
        let d = Tensor::vector(vals[..n].to_vec());
        let g = Tensor::vector(vals[n..].to_vec());
        let w = winograd_conv_1d(&t, &d, &g, PrecisionMode::F64All, SummationPolicy::Sequential).unwrap();
        let o = direct_conv_1d(&d, &g, PrecisionMode::F64All).unwrap();
        for (a, b) in w.data().iter().zip(o.data()) {
            prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn point_order_does_not_change_canonical_set(mut finite in prop::collection::vec(-5.0f64..5.0, 3)) {
        finite.sort_by(f64::total_cmp);
        prop_assume!(finite.windows(2).all(|w| w[1] - w[0] > 1e-6));
        let mut pts: Vec<Point> = finite.iter().copied().map(Point::Finite).collect();
        pts.push(Point::Infinity);
        let a = PointSet::new(pts.clone(), 2, 3).unwrap();
        pts.reverse();
        let b = PointSet::new(pts, 2, 3).unwrap();
        prop_assert_eq!(a, b);
    }
}

//! Point-set generators and multiply-count arithmetic.

use std::f64::consts::PI;

use num_rational::Ratio;

use crate::error::{bad_shape, Error, Result};

/// Chebyshev nodes `cos((2j - 1) pi / 2n)`, `j = 1..=n`, strictly decreasing.
///
/// Evaluated as `sin((n + 1 - 2j) pi / 2n)`, which is the same value but
/// gives an exact zero for the middle node and exact sign symmetry.
pub fn chebyshev_points(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|j| {
            let num = n as f64 + 1.0 - 2.0 * j as f64;
            (num * PI / (2.0 * n as f64)).sin()
        })
        .collect()
}

fn check_param(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveC(c))
    }
}

/// `[-1/c, -c, c, 1/c]`. Distinctness is checked when a point set is built.
pub fn symmetric_family(c: f64) -> Result<Vec<f64>> {
    check_param(c)?;
    Ok(vec![-1.0 / c, -c, c, 1.0 / c])
}

/// `[-1/d, -d, -1/c, -c, c, 1/c, d, 1/d]`, rejected unless all eight differ.
pub fn symmetric_family_2(c: f64, d: f64) -> Result<Vec<f64>> {
    check_param(c)?;
    check_param(d)?;
    let v = vec![-1.0 / d, -d, -1.0 / c, -c, c, 1.0 / c, d, 1.0 / d];
    for (i, a) in v.iter().enumerate() {
        if v[i + 1..].contains(a) {
            return Err(Error::DegenerateFamily(format!("c = {c}, d = {d} repeats {a}")));
        }
    }
    Ok(v)
}

/// Hadamard-product multiplies per output point for an input block of
/// `input_block` (per side) and a kernel of `kernel` (per side).
pub fn multiplies_per_output(input_block: usize, kernel: usize, dims: u32) -> Result<Ratio<u64>> {
    if kernel == 0 || input_block < kernel {
        return Err(bad_shape(format!(
            "input block {input_block} smaller than kernel {kernel}"
        )));
    }
    if !(1..=2).contains(&dims) {
        return Err(bad_shape(format!("dims must be 1 or 2, got {dims}")));
    }
    let n = input_block as u64;
    let m = (input_block - kernel + 1) as u64;
    Ok(Ratio::new(n.pow(dims), m.pow(dims)))
}

/// One cell of the 2D block-size table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockCost {
    pub input: usize,
    pub output: usize,
    pub kernel: usize,
    pub multiplies: Ratio<u64>,
}

/// 2D costs for 3x3 kernels with inputs 3..=10 and 5x5 kernels with 5..=10.
pub fn block_cost_table() -> Vec<BlockCost> {
    let mut rows = Vec::new();
    for kernel in [3usize, 5] {
        for input in kernel..=10 {
            rows.push(BlockCost {
                input,
                output: input - kernel + 1,
                kernel,
                multiplies: multiplies_per_output(input, kernel, 2).unwrap(),
            });
        }
    }
    rows
}

/// Two-decimal rendering, ties to even (`1.5625` prints as `1.56`).
pub fn format_ratio_2dp(r: Ratio<u64>) -> String {
    let hundredths = r * Ratio::from_integer(100);
    let floor = hundredths.floor().to_integer();
    let frac = hundredths - Ratio::from_integer(floor);
    let half = Ratio::new(1, 2);
    let rounded = if frac > half || (frac == half && floor % 2 == 1) {
        floor + 1
    } else {
        floor
    };
    format!("{}.{:02}", rounded / 100, rounded % 100)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_points(1), vec![0.0]);
        let two = chebyshev_points(2);
        assert!((two[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(two[1], -two[0]);
        let four = chebyshev_points(4);
        for (j, v) in four.iter().enumerate() {
            let expected = ((2 * j + 1) as f64 * PI / 8.0).cos();
            assert!((v - expected).abs() < 1e-15);
        }
        for n in 1..12 {
            let p = chebyshev_points(n);
            assert!(p.windows(2).all(|w| w[0] > w[1]));
            assert!(p.iter().all(|v| v.abs() < 1.0));
        }
    }

    #[test]
    fn symmetric_families() {
        assert_eq!(symmetric_family(2.0).unwrap(), vec![-0.5, -2.0, 2.0, 0.5]);
        assert_eq!(symmetric_family(1.0).unwrap(), vec![-1.0, -1.0, 1.0, 1.0]);
        let f = symmetric_family(1.829).unwrap();
        assert!((f[0] + 0.546_746_856_205_576_8).abs() < 1e-15);
        assert!(matches!(symmetric_family(0.0), Err(Error::NonPositiveC(_))));
        assert!(matches!(symmetric_family(-1.0), Err(Error::NonPositiveC(_))));

        assert_eq!(
            symmetric_family_2(2.0, 3.0).unwrap(),
            vec![-1.0 / 3.0, -3.0, -0.5, -2.0, 2.0, 0.5, 3.0, 1.0 / 3.0]
        );
        assert_eq!(symmetric_family_2(1.953, 1.229).unwrap().len(), 8);
        for (c, d) in [(2.0, 2.0), (2.0, 0.5), (1.0, 3.0), (3.0, 1.0)] {
            assert!(matches!(symmetric_family_2(c, d), Err(Error::DegenerateFamily(_))));
        }
    }

    #[test]
    fn multiply_counts() {
        assert_eq!(multiplies_per_output(6, 3, 2).unwrap(), Ratio::new(9, 4));
        assert_eq!(multiplies_per_output(4, 3, 2).unwrap(), Ratio::from_integer(4));
        assert_eq!(multiplies_per_output(3, 3, 2).unwrap(), Ratio::from_integer(9));
        assert_eq!(multiplies_per_output(6, 3, 1).unwrap(), Ratio::new(3, 2));
        assert!(multiplies_per_output(2, 3, 2).is_err());
        assert!(multiplies_per_output(4, 3, 3).is_err());
    }

    #[test]
    fn two_decimal_formatting() {
        assert_eq!(format_ratio_2dp(Ratio::new(100, 64)), "1.56");
        assert_eq!(format_ratio_2dp(Ratio::new(25, 9)), "2.78");
        assert_eq!(format_ratio_2dp(Ratio::new(81, 25)), "3.24");
        assert_eq!(format_ratio_2dp(Ratio::from_integer(25)), "25.00");
    }
}

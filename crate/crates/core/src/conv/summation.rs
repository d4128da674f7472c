use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::precision::Real;
use crate::error::{Error, Result};

/// Order in which the terms of a sum are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummationPolicy {
    /// Left to right.
    Sequential,
    /// Balanced binary tree.
    Pairwise,
    /// Repeatedly add the two partial sums of smallest magnitude, in the
    /// manner of building a Huffman tree. Ties go to the earlier entry.
    HuffmanMinMagnitude,
}

impl SummationPolicy {
    pub const ALL: [SummationPolicy; 3] = [
        SummationPolicy::Sequential,
        SummationPolicy::Pairwise,
        SummationPolicy::HuffmanMinMagnitude,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SummationPolicy::Sequential => "sequential",
            SummationPolicy::Pairwise => "pairwise",
            SummationPolicy::HuffmanMinMagnitude => "huffman",
        }
    }

    /// Sums `terms` in this order, consuming the buffer. Returns zero for an
    /// empty buffer.
    pub(crate) fn sum_in_place<T: Real>(self, terms: &mut Vec<T>) -> T {
        match terms.len() {
            0 => return T::ZERO,
            1 => return terms[0],
            _ => {}
        }
        match self {
            SummationPolicy::Sequential => {
                let mut acc = terms[0];
                for &t in &terms[1..] {
                    acc = acc + t;
                }
                acc
            }
            SummationPolicy::Pairwise => pairwise(terms),
            SummationPolicy::HuffmanMinMagnitude => huffman(terms),
        }
    }
}

fn pairwise<T: Real>(terms: &[T]) -> T {
    match terms.len() {
        1 => terms[0],
        2 => terms[0] + terms[1],
        len => {
            let (lo, hi) = terms.split_at(len.div_ceil(2));
            pairwise(lo) + pairwise(hi)
        }
    }
}

/// Greedy min-magnitude combination. The live partial sums are kept in a
/// small vector and scanned for the two smallest; dot products here are at
/// most a dozen terms so a binary heap would only add overhead.
fn huffman<T: Real>(terms: &mut Vec<T>) -> T {
    while terms.len() > 1 {
        let (first, second) = two_smallest(terms);
        let combined = terms[first] + terms[second];
        // keep the combined value where the earlier operand lived so later
        // ties still resolve by original position
        terms[first] = combined;
        terms.remove(second);
    }
    terms[0]
}

/// Indices `(a, b)` with `a < b` of the two smallest-magnitude entries.
fn two_smallest<T: Real>(terms: &[T]) -> (usize, usize) {
    let (mut best, mut next) = (0usize, 1usize);
    if terms[1].abs() < terms[0].abs() {
        (best, next) = (1, 0);
    }
    for (i, t) in terms.iter().enumerate().skip(2) {
        let a = t.abs();
        if a < terms[best].abs() {
            next = best;
            best = i;
        } else if a < terms[next].abs() {
            next = i;
        }
    }
    (best.min(next), best.max(next))
}

/// Sums `values` under `policy` in the precision of `T`.
pub fn sum_with_policy<T: Real>(values: &[T], policy: SummationPolicy) -> Result<T> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(policy.sum_in_place(&mut values.to_vec()))
}

impl FromStr for SummationPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sequential" | "seq" => Ok(SummationPolicy::Sequential),
            "pairwise" => Ok(SummationPolicy::Pairwise),
            "huffman" | "huffman_min_magnitude" => Ok(SummationPolicy::HuffmanMinMagnitude),
            _ => Err(Error::Parse(format!("unknown summation policy `{s}`"))),
        }
    }
}

impl std::fmt::Display for SummationPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_sums() {
        for p in SummationPolicy::ALL {
            assert_eq!(sum_with_policy(&[1.0f64, 2.0, 3.0], p).unwrap(), 6.0);
            assert_eq!(sum_with_policy(&[4.5f32], p).unwrap(), 4.5);
            assert!(matches!(sum_with_policy::<f64>(&[], p), Err(Error::EmptyInput)));
        }
    }

    #[test]
    fn f32_order_matters() {
        use SummationPolicy::*;
        assert_eq!(sum_with_policy(&[1e8f32, -1e8, 1.0], Sequential).unwrap(), 1.0);
        assert_eq!(sum_with_policy(&[1.0f32, 1e8, -1e8], Sequential).unwrap(), 0.0);
        // 1 is combined with one of the large terms first and is lost
        assert_eq!(sum_with_policy(&[1.0f32, 1e8, -1e8], HuffmanMinMagnitude).unwrap(), 0.0);
        assert_eq!(sum_with_policy(&[1e8f32, 1.0, -1e8], Pairwise).unwrap(), 0.0);
        assert_eq!(sum_with_policy(&[1e8f32, -1e8, 1.0], Pairwise).unwrap(), 1.0);
    }

    #[test]
    fn huffman_combines_small_terms_first() {
        // 0.5 + 0.5 and 1 + 1 are exact, so the 2 survives; left to right every
        // small term is rounded away
        let v = [16_777_216.0f32, 0.5, 0.5, 1.0];
        assert_eq!(
            sum_with_policy(&v, SummationPolicy::HuffmanMinMagnitude).unwrap(),
            16_777_218.0
        );
        assert_eq!(sum_with_policy(&v, SummationPolicy::Sequential).unwrap(), 16_777_216.0);
    }

    proptest! {
        #[test]
        fn policies_agree_on_small_integers(v in prop::collection::vec(-(1i64 << 40)..(1i64 << 40), 1..40)) {
            let vals: Vec<f64> = v.iter().map(|&x| x as f64).collect();
            let exact: i64 = v.iter().sum();
            for p in SummationPolicy::ALL {
                prop_assert_eq!(sum_with_policy(&vals, p).unwrap(), exact as f64);
            }
        }
    }
}

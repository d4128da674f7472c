//! Dense real polynomials with ascending coefficients.

/// `coeffs[i]` multiplies `x^i`. Never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        if coeffs.is_empty() {
            return Self { coeffs: vec![0.0] };
        }
        Self { coeffs }
    }

    /// Monic polynomial `(x - r0)(x - r1)...`; the empty product is `1`.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut coeffs = Vec::with_capacity(roots.len() + 1);
        coeffs.push(1.0);
        for &r in roots {
            // multiply by (x - r) in place, highest degree first
            coeffs.push(0.0);
            for i in (0..coeffs.len()).rev() {
                let shifted = if i > 0 { coeffs[i - 1] } else { 0.0 };
                coeffs[i] = shifted - r * coeffs[i];
            }
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Coefficients zero-padded (or truncated) to `len`.
    pub fn padded(&self, len: usize) -> Vec<f64> {
        let mut v = self.coeffs.clone();
        v.resize(len, 0.0);
        v
    }
}

/// Monic polynomial with exactly the given roots.
pub fn poly_from_roots(roots: &[f64]) -> Polynomial {
    Polynomial::from_roots(roots)
}

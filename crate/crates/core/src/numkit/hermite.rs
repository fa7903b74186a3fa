//! Probabilists' (Chebyshev–Hermite) polynomials `Heₙ`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::combinatorics::fact;

/// Polynomial with exact integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients rounded to binary64, lowest degree first.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        horner(&self.to_f64_coeffs(), x)
    }
}

pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `Heₙ(x) = n! Σ_k (−1)^k x^{n−2k} / (k! (n−2k)! 2^k)`.
pub fn hermite_he(n: usize) -> IntPolynomial {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for k in 0..=n / 2 {
        let den = fact(k) * fact(n - 2 * k) * (BigInt::from(1) << k);
        let c = fact(n) / den;
        coeffs[n - 2 * k] = if k % 2 == 0 { c } else { -c };
    }
    IntPolynomial::new(coeffs)
}

/// `He_0 ..= He_n`, each as binary64 coefficients.
pub(crate) fn hermite_table_f64(n: usize) -> Vec<Vec<f64>> {
    (0..=n).map(|k| hermite_he(k).to_f64_coeffs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// He_{n+1} = x·He_n − n·He_{n−1}, computed independently.
    fn by_recurrence(n: usize) -> Vec<Vec<BigInt>> {
        let mut table = vec![ints(&[1]), ints(&[0, 1])];
        for k in 1..n {
            let mut next = vec![BigInt::zero(); k + 2];
            for (i, c) in table[k].iter().enumerate() {
                next[i + 1] += c;
            }
            for (i, c) in table[k - 1].iter().enumerate() {
                next[i] -= c * BigInt::from(k);
            }
            table.push(next);
        }
        table
    }

    #[test]
    fn small_degrees() {
        assert_eq!(hermite_he(0).coeffs(), ints(&[1]).as_slice());
        assert_eq!(hermite_he(1).coeffs(), ints(&[0, 1]).as_slice());
        assert_eq!(hermite_he(3).coeffs(), ints(&[0, -3, 0, 1]).as_slice());
        assert_eq!(
            hermite_he(6).coeffs(),
            ints(&[-15, 0, 45, 0, -15, 0, 1]).as_slice()
        );
    }

    #[test]
    fn matches_three_term_recurrence() {
        let table = by_recurrence(13);
        for (n, expected) in table.iter().enumerate() {
            assert_eq!(hermite_he(n).coeffs(), expected.as_slice(), "n = {n}");
        }
    }

    #[test]
    fn horner_evaluation() {
        // He_4(x) = x⁴ − 6x² + 3
        let he4 = hermite_he(4);
        for x in [-2.5, -1.0, 0.0, 0.3, 2.0] {
            let direct = x * x * x * x - 6.0 * x * x + 3.0;
            assert!((he4.eval_f64(x) - direct).abs() < 1e-12);
        }
    }
}

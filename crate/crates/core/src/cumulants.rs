//! Moment → cumulant conversion over integer partitions, the closed-form
//! purity cumulants `κ₁..κ₅` used as an oracle, and the rescaling to
//! `μ, σ, γ_r, τ_r` consumed by the Edgeworth evaluator.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::numkit::{fact, multiplicity_vectors, Rational};
use crate::purity::DimensionPair;
use crate::{Error, Result};

/// Which distribution a cumulant sequence describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Purity(DimensionPair),
    MeyerWallach { qubits: usize },
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CumulantVector {
    source: Source,
    values: Vec<Rational>,
}

impl CumulantVector {
    pub fn new(source: Source, values: Vec<Rational>) -> Self {
        CumulantVector { source, values }
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// `κ₁..κ_N`
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `κ_n`, 1-based.
    pub fn kappa(&self, n: usize) -> Option<&Rational> {
        n.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `κ_n = n! Σ_k (−1)^{r−1}(r−1)! Π_m (1/k_m!)(μ_m/m!)^{k_m}`, summed over
/// multiplicity vectors `k` of weight `n` with `r = Σ k_m`.
///
/// `moments` holds `μ₁..μ_M`; cumulants `κ₁..κ_order` are returned.
pub fn moments_to_cumulants(
    source: Source,
    moments: &[Rational],
    order: usize,
) -> Result<CumulantVector> {
    if order < 1 {
        return Err(Error::Domain("cumulant order must be >= 1".into()));
    }
    if order > moments.len() {
        return Err(Error::Domain(format!(
            "cumulant order {order} needs {order} moments, got {}",
            moments.len()
        )));
    }
    // μ_m / m!
    let scaled: Vec<Rational> = moments
        .iter()
        .enumerate()
        .map(|(i, mu)| mu / &Rational::from(fact(i + 1)))
        .collect();
    let mut values = Vec::with_capacity(order);
    for n in 1..=order {
        let mut kappa = Rational::zero();
        for k in multiplicity_vectors(n)? {
            let r = k.size();
            let mut term = Rational::from(fact(r - 1));
            for (m, km) in k.nonzero() {
                term *= scaled[m - 1].pow(km as i32)?;
                term = term / Rational::from(fact(km));
            }
            if r % 2 == 0 {
                kappa -= &term;
            } else {
                kappa += &term;
            }
        }
        values.push(kappa * Rational::from(fact(n)));
    }
    Ok(CumulantVector::new(source, values))
}

fn big(x: usize) -> BigInt {
    BigInt::from(x)
}

/// Evaluates a bivariate integer polynomial given as `(coef, deg_p, deg_q)`.
fn poly(terms: &[(i64, u32, u32)], p: &BigInt, q: &BigInt) -> BigInt {
    terms
        .iter()
        .map(|&(c, i, j)| BigInt::from(c) * p.pow(i) * q.pow(j))
        .sum()
}

const A_PQ: &[(i64, u32, u32)] = &[
    (28, 0, 0),
    (-112, 2, 0),
    (-153, 1, 1),
    (-79, 3, 1),
    (-112, 0, 2),
    (-98, 2, 2),
    (-11, 4, 2),
    (-79, 1, 3),
    (-3, 3, 3),
    (1, 5, 3),
    (-11, 2, 4),
    (4, 4, 4),
    (1, 3, 5),
];

const B_PQ: &[(i64, u32, u32)] = &[
    (3528, 0, 0),
    (-6552, 2, 0),
    (-6343, 1, 1),
    (-449, 3, 1),
    (-6552, 0, 2),
    (1545, 2, 2),
    (1237, 4, 2),
    (-449, 1, 3),
    (1164, 3, 3),
    (132, 5, 3),
    (1237, 2, 4),
    (-274, 4, 4),
    (-41, 6, 4),
    (132, 3, 5),
    (-93, 5, 5),
    (1, 7, 5),
    (-41, 4, 6),
    (9, 6, 6),
    (1, 5, 7),
];

/// Quartic-cumulant numerator polynomial `A_{p,q}`.
pub fn a_pq(p: usize, q: usize) -> BigInt {
    poly(A_PQ, &big(p), &big(q))
}

/// Quintic-cumulant numerator polynomial `B_{p,q}`.
pub fn b_pq(p: usize, q: usize) -> BigInt {
    poly(B_PQ, &big(p), &big(q))
}

/// Closed-form purity cumulants `κ₁..κ₅` as rational functions of `p, q`.
pub fn closed_form_kappa(dims: DimensionPair, n: usize) -> Result<Rational> {
    let (p, q) = (big(dims.p()), big(dims.q()));
    let pq = &p * &q;
    let one = BigInt::one();
    let shifted = |i: usize| &pq + big(i);
    let rising = |to: usize| (1..=to).fold(BigInt::one(), |acc, i| acc * shifted(i));
    let common = (&p * &p - &one) * (&q * &q - &one);
    let (num, den) = match n {
        1 => (&p + &q, shifted(1)),
        2 => (
            BigInt::from(2) * &common,
            shifted(1).pow(2) * shifted(2) * shifted(3),
        ),
        3 => (
            BigInt::from(8) * &common * (&p + &q) * (&pq - 5),
            shifted(1).pow(3) * shifted(2) * shifted(3) * shifted(4) * shifted(5),
        ),
        4 => (
            BigInt::from(48) * &common * (&pq - 3) * a_pq(dims.p(), dims.q()),
            shifted(1).pow(3) * shifted(2) * shifted(3) * rising(7),
        ),
        5 => (
            BigInt::from(384) * &common * (&p + &q) * b_pq(dims.p(), dims.q()),
            shifted(1).pow(4) * shifted(2) * shifted(3) * rising(9),
        ),
        _ => {
            return Err(Error::Domain(format!(
                "closed-form cumulants exist for n in 1..=5, got {n}"
            )))
        }
    };
    Rational::new(num, den)
}

/// Mean, standard deviation and the two rescalings of the higher
/// cumulants: `γ_r = κ_r/σ^{2r−2}` and `τ_r = κ_r/σ^r` for `r ≥ 3`.
///
/// Floats are binary64, rounded to nearest from the exact values.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledCumulants {
    mu: f64,
    sigma: f64,
    gammas: Vec<f64>,
    taus: Vec<f64>,
    exact: Option<ExactRescaled>,
}

/// Exact counterparts of [`RescaledCumulants`]: `σ²` and `γ_r` are rational
/// even when `σ` and `τ_r` are not.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRescaled {
    pub mean: Rational,
    pub variance: Rational,
    pub gammas: Vec<Rational>,
}

impl RescaledCumulants {
    /// Builds from float values; `taus[0]` is `τ₃`.
    pub fn from_taus(mu: f64, sigma: f64, taus: Vec<f64>) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Degenerate(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        let gammas = taus
            .iter()
            .enumerate()
            .map(|(i, t)| t / sigma.powi(i as i32 + 1))
            .collect();
        Ok(RescaledCumulants {
            mu,
            sigma,
            gammas,
            taus,
            exact: None,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `γ_r`, defined for `3 ≤ r ≤ N`.
    pub fn gamma(&self, r: usize) -> Option<f64> {
        r.checked_sub(3).and_then(|i| self.gammas.get(i)).copied()
    }

    /// `τ_r`, defined for `3 ≤ r ≤ N`.
    pub fn tau(&self, r: usize) -> Option<f64> {
        r.checked_sub(3).and_then(|i| self.taus.get(i)).copied()
    }

    /// Highest cumulant order available.
    pub fn max_order(&self) -> usize {
        self.taus.len() + 2
    }

    pub fn exact(&self) -> Option<&ExactRescaled> {
        self.exact.as_ref()
    }
}

pub fn rescale(cumulants: &CumulantVector) -> Result<RescaledCumulants> {
    let values = cumulants.values();
    let (k1, k2) = match values {
        [k1, k2, ..] => (k1, k2),
        _ => {
            return Err(Error::Domain(
                "rescaling needs at least two cumulants".into(),
            ))
        }
    };
    if !k2.is_positive() {
        return Err(Error::Degenerate(format!("variance is {k2}")));
    }
    let sigma = k2.to_f64().sqrt();
    let mut gammas_exact = Vec::new();
    let mut gammas = Vec::new();
    let mut taus = Vec::new();
    for (idx, kr) in values.iter().enumerate().skip(2) {
        let r = (idx + 1) as i32;
        let g = kr / &k2.pow(r - 1)?;
        // τ_r² = κ_r²/κ₂^r is rational; take the root in floating point.
        let tau_sq = (kr * kr / k2.pow(r)?).to_f64();
        let tau = tau_sq.sqrt()
            * if kr.numerator().is_negative() {
                -1.0
            } else {
                1.0
            };
        gammas.push(g.to_f64());
        taus.push(tau);
        gammas_exact.push(g);
    }
    Ok(RescaledCumulants {
        mu: k1.to_f64(),
        sigma,
        gammas,
        taus,
        exact: Some(ExactRescaled {
            mean: k1.clone(),
            variance: k2.clone(),
            gammas: gammas_exact,
        }),
    })
}

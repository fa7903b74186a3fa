//! Meyer–Wallach entanglement `Q = 2(1 − (1/m) Σ_k R_k)` of an `m`-qubit
//! random pure state, where `R_k` is the purity of qubit `k` against the
//! other `m − 1`.
//!
//! Moments of `Q` beyond the first are computed under the approximation
//! `⟨R_i R_j⟩ = ⟨R_i⟩⟨R_j⟩` for `i ≠ j` (and likewise for higher mixed
//! moments), i.e. the single-qubit purities are treated as independent.
//! Only `⟨Q⟩` is exact; everything else is an approximation that has to be
//! checked against sampled states with statistical tolerances.

use num_bigint::BigInt;

use crate::cumulants::{moments_to_cumulants, rescale, CumulantVector, Source};
use crate::edgeworth::EdgeworthSeries;
use crate::numkit::{binomial, fact, multiplicity_vectors, Rational};
use crate::purity::{moment_r_p2, DimensionPair};
use crate::{Error, Result};

/// Largest qubit count the sampler will allocate a state vector for.
pub const MAX_SAMPLED_QUBITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitSystem {
    m: usize,
}

impl QubitSystem {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!("need at least 2 qubits, got {m}")));
        }
        if m >= usize::BITS as usize - 1 {
            return Err(Error::Domain(format!("{m} qubits overflow the dimension")));
        }
        Ok(QubitSystem { m })
    }

    pub fn qubits(&self) -> usize {
        self.m
    }

    /// `M = 2^m`
    pub fn dim(&self) -> usize {
        1 << self.m
    }

    /// `M/2`, the dimension of the complement of one qubit.
    pub fn q_half(&self) -> usize {
        1 << (self.m - 1)
    }

    /// One qubit against the rest.
    pub fn bipartition(&self) -> DimensionPair {
        DimensionPair::new(2, self.q_half()).expect("q_half >= 2")
    }
}

/// `⟨Q⟩, …, ⟨Q^N⟩` under the independence approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct QMomentVector {
    system: QubitSystem,
    values: Vec<Rational>,
}

impl QMomentVector {
    pub fn compute(system: QubitSystem, n_max: usize) -> Result<Self> {
        let purity: Vec<Rational> = (0..=n_max)
            .map(|i| moment_r_p2(system.q_half(), i))
            .collect::<Result<_>>()?;
        let values = (1..=n_max)
            .map(|n| q_moment_from(system, &purity, n))
            .collect::<Result<_>>()?;
        Ok(QMomentVector { system, values })
    }

    pub fn system(&self) -> QubitSystem {
        self.system
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// ```text
/// ⟨Qⁿ⟩ = 2ⁿ Σ_k C(n,k) (−1)^k k!/m^k Σ_{r} m!/(r₁!…r_k!(m−r)!) Π_i (⟨R^i⟩/i!)^{r_i}
/// ```
///
/// The inner sum runs over multiplicity vectors `(r₁,…,r_k)` of weight `k`;
/// those with `r = Σ rᵢ > m` contribute nothing and are skipped.
pub fn q_moment(system: QubitSystem, n: usize) -> Result<Rational> {
    let purity: Vec<Rational> = (0..=n)
        .map(|i| moment_r_p2(system.q_half(), i))
        .collect::<Result<_>>()?;
    q_moment_from(system, &purity, n)
}

/// `purity[i] = ⟨R^i⟩` for `i = 0..=n`.
fn q_moment_from(system: QubitSystem, purity: &[Rational], n: usize) -> Result<Rational> {
    let m = system.m;
    let scaled: Vec<Rational> = purity
        .iter()
        .enumerate()
        .map(|(i, r)| r / &Rational::from(fact(i)))
        .collect();
    let m_big = Rational::from(BigInt::from(m));
    let mut total = Rational::zero();
    for k in 0..=n {
        // ⟨(Σ R_i)^k⟩ / k! under independence.
        let inner = if k == 0 {
            Rational::one()
        } else {
            let mut acc = Rational::zero();
            for mv in multiplicity_vectors(k)? {
                let r = mv.size();
                if r > m {
                    continue;
                }
                let mut den = fact(m - r);
                let mut term = Rational::one();
                for (i, ri) in mv.nonzero() {
                    den *= fact(ri);
                    term *= scaled[i].pow(ri as i32)?;
                }
                acc += term * Rational::from(fact(m)) / Rational::from(den);
            }
            acc
        };
        let mut coef = Rational::from(binomial(n, k) * fact(k)) / m_big.pow(k as i32)?;
        if k % 2 == 1 {
            coef = -coef;
        }
        total += coef * inner;
    }
    Ok(total * Rational::from(BigInt::from(2).pow(n as u32)))
}

/// `κ^Q_1..κ^Q_N` from the approximate moments.
pub fn q_cumulants(system: QubitSystem, n: usize) -> Result<CumulantVector> {
    let moments = QMomentVector::compute(system, n)?;
    moments_to_cumulants(
        Source::MeyerWallach {
            qubits: system.qubits(),
        },
        moments.values(),
        n,
    )
}

/// Closed forms of `κ^Q_1..κ^Q_5` as rational functions of `M = 2^m` and
/// `m`.
pub fn closed_form_q_kappa(system: QubitSystem, n: usize) -> Result<Rational> {
    let big = BigInt::from(system.dim());
    let m = BigInt::from(system.qubits());
    let sh = |i: i64| &big + BigInt::from(i);
    let (num, den) = match n {
        1 => (sh(-2), sh(1)),
        2 => (BigInt::from(6) * sh(-2), sh(1).pow(2) * sh(3) * &m),
        3 => (
            BigInt::from(24) * (-(&big * &big) + BigInt::from(7) * &big - 10),
            sh(1).pow(3) * sh(3) * sh(5) * m.pow(2),
        ),
        4 => (
            BigInt::from(144)
                * (big.pow(4) - BigInt::from(12) * big.pow(3)
                    + BigInt::from(6) * big.pow(2)
                    + BigInt::from(133) * &big
                    - 210),
            sh(1).pow(4) * sh(3).pow(2) * sh(5) * sh(7) * m.pow(3),
        ),
        5 => (
            -BigInt::from(1152)
                * (BigInt::from(1890) - BigInt::from(1763) * &big
                    + BigInt::from(337) * big.pow(2)
                    + BigInt::from(78) * big.pow(3)
                    - BigInt::from(23) * big.pow(4)
                    + big.pow(5)),
            sh(1).pow(5) * sh(3).pow(2) * sh(5) * sh(7) * sh(9) * m.pow(4),
        ),
        _ => {
            return Err(Error::Domain(format!(
                "closed-form Q cumulants exist for n in 1..=5, got {n}"
            )))
        }
    };
    Rational::new(num, den)
}

/// Edgeworth series for `P(Q)` truncated at `order`.
pub fn q_density(system: QubitSystem, order: usize) -> Result<EdgeworthSeries> {
    let k = q_cumulants(system, order + 2)?;
    EdgeworthSeries::new(rescale(&k)?, order)
}

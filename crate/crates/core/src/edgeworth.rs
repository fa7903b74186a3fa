//! Truncated Edgeworth expansion of a density from its rescaled cumulants:
//!
//! ```text
//! P(x) = (1/σ) Z(z) [ 1 + Σ_{s=1}^{S} σ^s Σ_k He_{s+2t}(z) Π_m (1/k_m!) (γ_{m+2}/(m+2)!)^{k_m} ]
//! ```
//!
//! with `z = (x−μ)/σ`, `Z` the standard normal density, the inner sum over
//! multiplicity vectors `k` of weight `s`, and `t = Σ k_m`. Each term is
//! stored in the equivalent `τ` form `Π τ_{m+2}^{k_m} / (k_m! ((m+2)!)^{k_m})`.
//!
//! Truncations are not densities in general: they integrate to one but can
//! dip below zero in the tails. [`EdgeworthSeries::evaluate`] returns the
//! signed value.

use std::f64::consts::PI;
use std::fmt;

use crate::cumulants::RescaledCumulants;
use crate::numkit::{fact, hermite_table_f64, horner, multiplicity_vectors, Rational};
use crate::{Error, Result};

/// One term `weight · Π τ_r^{power} · He_degree(z)` of order `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub s: usize,
    pub degree: usize,
    /// Exact numeric prefactor `Π 1/(k_m! ((m+2)!)^{k_m})`.
    pub weight: Rational,
    /// `(r, power)` pairs of the `τ_r` monomial, ascending in `r`.
    pub tau_powers: Vec<(usize, usize)>,
    /// `weight · Π τ_r^{power}` in binary64.
    pub coefficient: f64,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.weight)?;
        for (r, pow) in &self.tau_powers {
            if *pow == 1 {
                write!(f, "·τ{r}")?;
            } else {
                write!(f, "·τ{r}^{pow}")?;
            }
        }
        write!(f, "·He{}", self.degree)
    }
}

#[derive(Debug, Clone)]
pub struct EdgeworthSeries {
    rescaled: RescaledCumulants,
    order: usize,
    terms: Vec<Term>,
    hermite: Vec<Vec<f64>>,
}

impl EdgeworthSeries {
    /// Needs cumulants through `order + 2`.
    pub fn new(rescaled: RescaledCumulants, order: usize) -> Result<Self> {
        if rescaled.max_order() < order + 2 {
            return Err(Error::Domain(format!(
                "order {order} needs cumulants through {}, have {}",
                order + 2,
                rescaled.max_order()
            )));
        }
        let mut terms = Vec::new();
        for s in 1..=order {
            for k in multiplicity_vectors(s)? {
                let t = k.size();
                let mut weight = Rational::one();
                let mut tau_powers = Vec::new();
                let mut coefficient = 1.0;
                for (m, km) in k.nonzero() {
                    let den = fact(km) * fact(m + 2).pow(km as u32);
                    weight = weight / Rational::from(den);
                    tau_powers.push((m + 2, km));
                    let tau = rescaled.tau(m + 2).expect("checked max_order");
                    coefficient *= tau.powi(km as i32);
                }
                coefficient *= weight.to_f64();
                terms.push(Term {
                    s,
                    degree: s + 2 * t,
                    weight,
                    tau_powers,
                    coefficient,
                });
            }
        }
        terms.sort_by_key(|t| (t.s, t.degree));
        let max_degree = terms.iter().map(|t| t.degree).max().unwrap_or(0);
        Ok(EdgeworthSeries {
            rescaled,
            order,
            terms,
            hermite: hermite_table_f64(max_degree),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rescaled(&self) -> &RescaledCumulants {
        &self.rescaled
    }

    pub fn mu(&self) -> f64 {
        self.rescaled.mu()
    }

    pub fn sigma(&self) -> f64 {
        self.rescaled.sigma()
    }

    /// Same series truncated at a lower order.
    pub fn truncated(&self, order: usize) -> Result<Self> {
        EdgeworthSeries::new(self.rescaled.clone(), order)
    }

    /// `σ^s Π (1/k_m!)(γ_{m+2}/(m+2)!)^{k_m}` for a term, computed from the
    /// `γ` rescaling rather than from `τ`.
    pub fn gamma_form_coefficient(&self, term: &Term) -> f64 {
        let mut c = self.sigma().powi(term.s as i32);
        for &(r, km) in &term.tau_powers {
            let g = self.rescaled.gamma(r).expect("term within order");
            let scale = crate::numkit::fact(r).pow(km as u32) * crate::numkit::fact(km);
            c *= g.powi(km as i32) / Rational::from(scale).to_f64();
        }
        c
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let sigma = self.sigma();
        let z = (x - self.mu()) / sigma;
        let base = (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * sigma);
        if base == 0.0 {
            return 0.0;
        }
        let correction: f64 = self
            .terms
            .iter()
            .map(|t| t.coefficient * horner(&self.hermite[t.degree], z))
            .sum();
        base * (1.0 + correction)
    }
}

/// All terms through the series' order, sorted by `(s, degree)`.
pub fn coefficient_table(series: &EdgeworthSeries) -> Vec<Term> {
    series.terms.clone()
}

//! Exact moments `⟨Rⁿ⟩` of the purity `R = Σ xᵢ²` of a random pure state on
//! `C^p ⊗ C^q`, where the Schmidt coefficients `xᵢ` follow the induced
//! (Haar) law `∝ Π_{i<j}(xᵢ−x_j)² Π x_k^{q−p} δ(1−Σx)`.
//!
//! Three independent formulations are provided and must agree exactly:
//! the composition sum ([`moment_r`]), its rearrangement that is symmetric
//! in `p` and `q` ([`moment_r_symmetric`]), and the `p = 2` binomial sum
//! over half-integer factorials ([`moment_r_p2`]). The Selberg-type
//! integrals [`appendix_j`] and [`appendix_i`] give a fourth, ratio-based
//! route that is used as a test oracle.

use num_bigint::BigInt;
use num_traits::One;

use crate::numkit::{binomial, compositions, fact, half_gamma, multinomial, Composition, Rational};
use crate::{Error, Result};

/// Bipartition dimensions with `1 ≤ p ≤ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DimensionPair {
    p: usize,
    q: usize,
}

impl DimensionPair {
    /// Swaps the arguments if `p > q`: the Schmidt spectrum only depends on
    /// the unordered pair of dimensions.
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        if p < 1 {
            return Err(Error::Domain("dimensions must be >= 1".into()));
        }
        Ok(DimensionPair { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `q − p`
    pub fn r(&self) -> usize {
        self.q - self.p
    }

    /// Support `[1/p, 1]` of the purity.
    pub fn support(&self) -> (f64, f64) {
        (1.0 / self.p as f64, 1.0)
    }
}

/// `⟨R⟩, ⟨R²⟩, …, ⟨R^N⟩` for fixed dimensions (`⟨R⁰⟩ = 1` is implicit).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    dims: DimensionPair,
    values: Vec<Rational>,
}

impl MomentVector {
    pub fn compute(dims: DimensionPair, n_max: usize) -> Self {
        let values = (1..=n_max).map(|n| moment_r_unchecked(dims, n)).collect();
        MomentVector { dims, values }
    }

    pub fn dims(&self) -> DimensionPair {
        self.dims
    }

    /// `μ₁..μ_N`
    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Schmidt coefficients of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector {
    coefficients: Vec<f64>,
}

impl SchmidtVector {
    pub fn new(coefficients: Vec<f64>) -> Self {
        SchmidtVector { coefficients }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn sum(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    pub fn purity(&self) -> f64 {
        self.coefficients.iter().map(|x| x * x).sum()
    }
}

/// `⟨Rⁿ⟩` as the finite sum over ordered compositions `(n₁,…,n_p)` of `n`:
///
/// ```text
/// (pq−1)!/(pq+2n−1)! Σ n!/(n₁!…n_p!) Π_i (q+2nᵢ−i)!/((q−i)!(i−1)!) Π_{i<j} (2nᵢ−i−2n_j+j)
/// ```
pub fn moment_r(dims: DimensionPair, n: usize) -> Result<Rational> {
    Ok(moment_r_unchecked(dims, n))
}

fn moment_r_unchecked(dims: DimensionPair, n: usize) -> Rational {
    let (p, q) = (dims.p, dims.q);
    if n == 0 || p == 1 {
        return Rational::one();
    }
    // Everything inside the sum is an integer; divide once at the end.
    let mut sum = BigInt::from(0);
    for c in compositions(n, p).expect("p >= 1") {
        let parts = c.parts();
        let mut term = multinomial(parts);
        for (i, &ni) in parts.iter().enumerate() {
            term *= fact(q + 2 * ni - (i + 1));
        }
        for i in 0..p {
            for j in i + 1..p {
                let d = (2 * parts[i] + j) as i64 - (2 * parts[j] + i) as i64;
                term *= d;
            }
        }
        sum += term;
    }
    let mut den = fact(p * q + 2 * n - 1);
    for i in 1..=p {
        den *= fact(q - i) * fact(i - 1);
    }
    Rational::from(sum * fact(p * q - 1)) / Rational::from(den)
}

/// `⟨Rⁿ⟩` via the form that treats `p` and `q` alike:
///
/// ```text
/// (pq−1)!/(pq+2n−1)! Σ n!/(n₁!…n_p!)
///     Π_{nᵢ≠0} [ (q+2nᵢ−i)!(p+2nᵢ−i)! / ((q−i)!(p−i)!(2nᵢ)!) · Π_{j<i} (1 − 2nᵢ/(2n_j+i−j)) ]
/// ```
pub fn moment_r_symmetric(dims: DimensionPair, n: usize) -> Result<Rational> {
    Ok(symmetric_sum(dims.p, dims.p, dims.q, n))
}

/// `parts` Schmidt indices; `a` and `b` are the two dimensions entering the
/// factorial product (in either order).
fn symmetric_sum(parts: usize, a: usize, b: usize, n: usize) -> Rational {
    if n == 0 || parts == 1 {
        return Rational::one();
    }
    let mut sum = Rational::zero();
    for c in compositions(n, parts).expect("parts >= 1") {
        let ns = c.parts();
        let mut term = Rational::from(multinomial(ns));
        for (idx, &ni) in ns.iter().enumerate() {
            if ni == 0 {
                continue;
            }
            let i = idx + 1;
            let num = fact(a + 2 * ni - i) * fact(b + 2 * ni - i);
            let den = fact(a - i) * fact(b - i) * fact(2 * ni);
            term *= Rational::from(num) / Rational::from(den);
            for (jdx, &nj) in ns[..idx].iter().enumerate() {
                let j = jdx + 1;
                let corr = Rational::new(2 * ni as i64, (2 * nj + i - j) as i64)
                    .expect("2n_j + i − j >= 1 for j < i");
                term *= Rational::one() - corr;
            }
        }
        sum += term;
    }
    let ab = a * b;
    sum * Rational::from(fact(ab - 1)) / Rational::from(fact(ab + 2 * n - 1))
}

/// `⟨Rⁿ⟩` for a qubit against a `q`-dimensional environment (`p = 2`):
///
/// ```text
/// Γ(q+½)/(√π 2^{n−1}) Σ_k C(n,k) (k+½)! / (q+k−½)!
/// ```
///
/// All `√π` factors cancel, so the result is exact.
pub fn moment_r_p2(q: usize, n: usize) -> Result<Rational> {
    if q < 2 {
        return Err(Error::Domain(format!(
            "p = 2 formula needs q >= 2, got {q}"
        )));
    }
    let prefactor = half_gamma(q) * Rational::new(2, BigInt::one() << n)?;
    let sum: Rational = (0..=n)
        .map(|k| Rational::from(binomial(n, k)) * half_gamma(k + 1) / half_gamma(q + k))
        .sum();
    Ok(prefactor * sum)
}

/// `J(n) = p! Π(r+nᵢ+i−1)! / (p²+rp+Σnᵢ−1)! · Π_{i<j}(n_j−nᵢ+j−i)`.
///
/// Sign convention: the Vandermonde factor is `Π_{i<j}(x_j − x_i)`, so that
/// `J(0) > 0`.
pub fn appendix_j(parts: &Composition, dims: DimensionPair) -> Result<Rational> {
    let p = dims.p;
    let r = dims.r();
    let ns = parts.parts();
    if ns.len() != p {
        return Err(Error::Domain(format!(
            "composition has {} parts, expected p = {p}",
            ns.len()
        )));
    }
    let mut num = fact(p);
    for (idx, &ni) in ns.iter().enumerate() {
        num *= fact(r + ni + idx);
    }
    for i in 0..p {
        for j in i + 1..p {
            num *= (ns[j] + j) as i64 - (ns[i] + i) as i64;
        }
    }
    let den = fact(p * p + r * p + parts.total() - 1);
    Ok(Rational::from(num) / Rational::from(den))
}

/// `I(n) = Σ_τ J(τ(n))` over all `p!` orderings of the entries, repeated
/// entries included. Under this convention `I(n)` is `p!` times the
/// integral of a single monomial, so only ratios `I(n)/I(0)` are
/// meaningful as probabilities.
pub fn appendix_i(parts: &Composition, dims: DimensionPair) -> Result<Rational> {
    if parts.len() != dims.p {
        return appendix_j(parts, dims);
    }
    let mut total = Rational::zero();
    let mut perm = parts.parts().to_vec();
    let mut err = None;
    for_each_permutation(&mut perm, &mut |ordering| match appendix_j(
        &Composition::new(ordering.to_vec()),
        dims,
    ) {
        Ok(v) => total += v,
        Err(e) => err = Some(e),
    });
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Heap's algorithm; visits all `len!` orderings (with repeats).
fn for_each_permutation(items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    fn heap(k: usize, items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            visit(items);
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, items, visit);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
        heap(k - 1, items, visit);
    }
    let k = items.len();
    heap(k, items, visit);
}

/// Exact normalization `A` of the `p = 2` density `A(1−R)^{q−2}√(2R−1)`:
/// `A = 2^{q−1} Γ(q+½) / (Γ(3/2) Γ(q−1))`.
pub fn density_p2_normalization(q: usize) -> Result<Rational> {
    if q < 2 {
        return Err(Error::Domain(format!(
            "p = 2 density needs q >= 2, got {q}"
        )));
    }
    let pow2 = Rational::from(BigInt::one() << (q - 1));
    Ok(pow2 * half_gamma(q) / half_gamma(1) / Rational::from(fact(q - 2)))
}

fn ln_density_p2_normalization(q: usize) -> f64 {
    let mut acc = (q - 1) as f64 * std::f64::consts::LN_2 - 0.5f64.ln();
    for i in 0..q {
        acc += (i as f64 + 0.5).ln();
    }
    for i in 1..q.saturating_sub(1) {
        acc -= (i as f64).ln();
    }
    acc
}

/// Exact density of the purity for `p = 2`: `A(1−R)^{q−2}√(2R−1)` on
/// `[1/2, 1]`, zero elsewhere.
pub fn density_p2(purity: f64, q: usize) -> Result<f64> {
    if q < 2 {
        return Err(Error::Domain(format!(
            "p = 2 density needs q >= 2, got {q}"
        )));
    }
    if !(0.5..=1.0).contains(&purity) {
        return Ok(0.0);
    }
    let mut ln = ln_density_p2_normalization(q) + 0.5 * (2.0 * purity - 1.0).ln();
    if q > 2 {
        ln += (q - 2) as f64 * (1.0 - purity).ln();
    }
    Ok(ln.exp())
}

/// CDF of the `p = 2` purity. With `u = 2R − 1 ~ Beta(3/2, q−1)` and an
/// integer second shape parameter, the regularized incomplete beta is the
/// finite positive sum `u^{3/2} Σ_{j<q−1} (3/2)_j/j! (1−u)^j`.
pub fn cdf_p2(purity: f64, q: usize) -> Result<f64> {
    if q < 2 {
        return Err(Error::Domain(format!(
            "p = 2 density needs q >= 2, got {q}"
        )));
    }
    if purity <= 0.5 {
        return Ok(0.0);
    }
    if purity >= 1.0 {
        return Ok(1.0);
    }
    let u = 2.0 * purity - 1.0;
    let v = 1.0 - u;
    let mut coef = 1.0;
    let mut pow = 1.0;
    let mut sum = 0.0;
    for j in 0..q - 1 {
        if j > 0 {
            coef *= (0.5 + j as f64) / j as f64;
            pow *= v;
        }
        sum += coef * pow;
    }
    Ok((u.powf(1.5) * sum).min(1.0))
}

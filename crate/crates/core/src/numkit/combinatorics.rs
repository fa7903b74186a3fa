use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use super::Rational;
use crate::Error;

static FACTORIALS: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();

/// `n!` as an exact integer. Negative input is a domain error.
pub fn factorial(n: i64) -> Result<BigInt, Error> {
    let n = usize::try_from(n).map_err(|_| Error::Domain(format!("factorial of negative {n}")))?;
    Ok(fact(n))
}

/// Memoized `n!`. The table only ever grows; readers never observe a
/// partially extended prefix.
pub(crate) fn fact(n: usize) -> BigInt {
    let table = FACTORIALS.get_or_init(|| RwLock::new(vec![BigInt::one()]));
    {
        let t = table.read().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = t.get(n) {
            return v.clone();
        }
    }
    let mut t = table.write().unwrap_or_else(|e| e.into_inner());
    while t.len() <= n {
        let k = t.len();
        let next = &t[k - 1] * BigInt::from(k);
        t.push(next);
    }
    t[n].clone()
}

/// `Γ(k + 1/2) / √π = (2k)! / (4^k k!)`, exact.
pub fn half_gamma(k: usize) -> Rational {
    let den = BigInt::from(4u32).pow(k as u32) * fact(k);
    Rational::from(fact(2 * k)) / Rational::from(den)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    fact(n) / (fact(k) * fact(n - k))
}

/// `(Σ parts)! / Π parts!`
pub fn multinomial(parts: &[usize]) -> BigInt {
    let total: usize = parts.iter().sum();
    parts.iter().fold(fact(total), |acc, &k| acc / fact(k))
}

/// Ordered tuple of non-negative integers with a fixed sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Self {
        Composition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Every part multiplied by `factor`.
    pub fn scaled(&self, factor: usize) -> Composition {
        Composition::new(self.parts.iter().map(|&x| x * factor).collect())
    }
}

/// Weak compositions of `total` into `len` parts, in lexicographically
/// decreasing order: `(n,0,…,0)` first, `(0,…,0,n)` last.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<usize>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        let p = cur.len();
        // Rightmost non-zero position that still has somewhere to move to.
        match (0..p.saturating_sub(1)).rev().find(|&i| cur[i] > 0) {
            Some(i) => {
                let tail: usize = cur[i + 1..].iter().sum();
                cur[i] -= 1;
                cur[i + 1] = tail + 1;
                for x in &mut cur[i + 2..] {
                    *x = 0;
                }
            }
            None => self.current = None,
        }
        Some(Composition::new(out))
    }
}

pub fn compositions(n: usize, p: usize) -> Result<Compositions, Error> {
    if p < 1 {
        return Err(Error::Domain("compositions need at least one part".into()));
    }
    let mut first = vec![0; p];
    first[0] = n;
    Ok(Compositions {
        current: Some(first),
    })
}

/// Multiplicities `(k₁, …, k_s)` of an integer partition: `k_j` copies of
/// part `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiplicityVector {
    counts: Vec<usize>,
}

impl MultiplicityVector {
    pub fn new(counts: Vec<usize>) -> Self {
        MultiplicityVector { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `Σ j·k_j`
    pub fn weight(&self) -> usize {
        self.counts
            .iter()
            .enumerate()
            .map(|(j, &k)| (j + 1) * k)
            .sum()
    }

    /// `Σ k_j`
    pub fn size(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Non-zero entries as `(part, multiplicity)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| (j + 1, k))
    }
}

/// All multiplicity vectors of weight `n` (one per integer partition of `n`),
/// each of length `n`. Ordered by the partitions' parts in decreasing
/// lexicographic order, so `(0,…,0,1)` (the partition `[n]`) comes first and
/// `(n,0,…,0)` last.
pub fn multiplicity_vectors(n: usize) -> Result<Vec<MultiplicityVector>, Error> {
    if n < 1 {
        return Err(Error::Domain(
            "multiplicity vectors need weight >= 1".into(),
        ));
    }
    let mut out = Vec::new();
    let mut counts = vec![0; n];
    partitions_rec(n, n, &mut counts, &mut out);
    Ok(out)
}

fn partitions_rec(
    remaining: usize,
    max_part: usize,
    counts: &mut [usize],
    out: &mut Vec<MultiplicityVector>,
) {
    if remaining == 0 {
        out.push(MultiplicityVector::new(counts.to_vec()));
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        counts[part - 1] += 1;
        partitions_rec(remaining - part, part, counts, out);
        counts[part - 1] -= 1;
    }
}

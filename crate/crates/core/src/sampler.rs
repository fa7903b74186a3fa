//! Monte Carlo oracle: Haar-random pure states, their Schmidt spectra,
//! purities and Meyer–Wallach entanglement, plus the statistics used to
//! compare samples against the analytic results.
//!
//! A Haar-random state is drawn as a vector of i.i.d. standard complex
//! Gaussians normalized to unit length, which has the same law as one
//! column of a Haar-random unitary.
//!
//! Random numbers come from ChaCha20 (`rand_chacha` 0.9). The key is
//! `ChaCha20Rng::seed_from_u64(seed)`; stream `i` of a multi-stream run uses
//! ChaCha's 64-bit stream id `i`. With one stream the output is the
//! canonical sequence for that seed, independent of thread count.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::meyer_wallach::{QubitSystem, MAX_SAMPLED_QUBITS};
use crate::purity::{DimensionPair, SchmidtVector};
use crate::{Error, Result};

/// What a batch of samples measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Descriptor {
    Purity(DimensionPair),
    MeyerWallach(QubitSystem),
}

impl Descriptor {
    /// Theoretical range of the sampled quantity.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Descriptor::Purity(d) => d.support(),
            Descriptor::MeyerWallach(_) => (0.0, 1.0),
        }
    }
}

/// `purity:p:q` or `mw:m`.
impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Purity(d) => write!(f, "purity:{}:{}", d.p(), d.q()),
            Descriptor::MeyerWallach(s) => write!(f, "mw:{}", s.qubits()),
        }
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad descriptor {s:?}"));
        let fields: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match fields.as_slice() {
            ["purity", p, q] => Ok(Descriptor::Purity(DimensionPair::new(num(p)?, num(q)?)?)),
            ["mw", m] => Ok(Descriptor::MeyerWallach(QubitSystem::new(num(m)?)?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub descriptor: Descriptor,
    pub seed: u64,
    pub values: Vec<f64>,
}

impl SampleBatch {
    pub fn count(&self) -> usize {
        self.values.len()
    }
}

/// Key from the seed, stream id from the stream index.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Fills `state` with a uniformly random unit vector.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, state: &mut [Complex64]) {
    loop {
        let mut norm_sq = 0.0;
        for z in state.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = Complex64::new(re, im);
            norm_sq += re * re + im * im;
        }
        if norm_sq > 0.0 {
            let inv = norm_sq.sqrt().recip();
            for z in state.iter_mut() {
                *z *= inv;
            }
            return;
        }
    }
}

/// Schmidt coefficients of `state` viewed as a `p × q` row-major matrix:
/// the squared singular values.
pub fn schmidt_vector(state: &[Complex64], dims: DimensionPair) -> SchmidtVector {
    let (p, q) = (dims.p(), dims.q());
    assert_eq!(state.len(), p * q, "state length must be p·q");
    if p == 1 {
        return SchmidtVector::new(vec![1.0]);
    }
    let mat = DMatrix::from_row_slice(p, q, state);
    let sv = mat.singular_values();
    SchmidtVector::new(sv.iter().map(|s| s * s).collect())
}

/// Purity of each qubit, from its 2×2 reduced density matrix.
pub fn qubit_purities(state: &[Complex64], system: QubitSystem) -> Vec<f64> {
    let m = system.qubits();
    assert_eq!(state.len(), system.dim(), "state length must be 2^m");
    (0..m)
        .map(|k| {
            let bit = 1usize << k;
            let (mut r00, mut r11) = (0.0, 0.0);
            let mut r01 = Complex64::new(0.0, 0.0);
            for idx in (0..state.len()).filter(|i| i & bit == 0) {
                let a = state[idx];
                let b = state[idx | bit];
                r00 += a.norm_sqr();
                r11 += b.norm_sqr();
                r01 += a * b.conj();
            }
            let r = r00 * r00 + r11 * r11 + 2.0 * r01.norm_sqr();
            r.clamp(0.5, 1.0)
        })
        .collect()
}

/// `Q = 2(1 − (1/m) Σ_k R_k)`.
pub fn meyer_wallach_q(state: &[Complex64], system: QubitSystem) -> f64 {
    let purities = qubit_purities(state, system);
    let mean = pairwise_sum(&purities) / purities.len() as f64;
    (2.0 * (1.0 - mean)).clamp(0.0, 1.0)
}

fn draw_chunk(descriptor: Descriptor, count: usize, rng: &mut ChaCha20Rng) -> Vec<f64> {
    match descriptor {
        Descriptor::Purity(dims) => {
            if dims.p() == 1 {
                return vec![1.0; count];
            }
            let lo = 1.0 / dims.p() as f64;
            let mut state = vec![Complex64::new(0.0, 0.0); dims.p() * dims.q()];
            (0..count)
                .map(|_| {
                    random_state(rng, &mut state);
                    schmidt_vector(&state, dims).purity().clamp(lo, 1.0)
                })
                .collect()
        }
        Descriptor::MeyerWallach(system) => {
            let mut state = vec![Complex64::new(0.0, 0.0); system.dim()];
            (0..count)
                .map(|_| {
                    random_state(rng, &mut state);
                    meyer_wallach_q(&state, system)
                })
                .collect()
        }
    }
}

/// Draws `count` values on `streams` independent ChaCha streams, one thread
/// per stream. Stream `i` produces a contiguous chunk; chunk sizes differ by
/// at most one, larger chunks first. Output depends only on
/// `(descriptor, count, seed, streams)`.
pub fn sample(
    descriptor: Descriptor,
    count: usize,
    seed: u64,
    streams: usize,
) -> Result<SampleBatch> {
    if count < 1 {
        return Err(Error::Domain("sample count must be >= 1".into()));
    }
    if streams < 1 {
        return Err(Error::Domain("need at least one stream".into()));
    }
    if let Descriptor::MeyerWallach(s) = descriptor {
        if s.qubits() > MAX_SAMPLED_QUBITS {
            return Err(Error::Domain(format!(
                "{} qubits exceeds the sampler limit of {MAX_SAMPLED_QUBITS}",
                s.qubits()
            )));
        }
    }
    let streams = streams.min(count);
    let base = count / streams;
    let extra = count % streams;
    let sizes: Vec<usize> = (0..streams)
        .map(|i| base + usize::from(i < extra))
        .collect();
    let values = if streams == 1 {
        draw_chunk(descriptor, count, &mut stream_rng(seed, 0))
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = sizes
                .iter()
                .enumerate()
                .map(|(i, &n)| {
                    scope.spawn(move || draw_chunk(descriptor, n, &mut stream_rng(seed, i as u64)))
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("sampler thread panicked"))
                .collect()
        })
    };
    Ok(SampleBatch {
        descriptor,
        seed,
        values,
    })
}

pub fn sample_purity(p: usize, q: usize, count: usize, seed: u64) -> Result<SampleBatch> {
    if q < p {
        return Err(Error::Domain(format!("need q >= p, got p={p} q={q}")));
    }
    sample(
        Descriptor::Purity(DimensionPair::new(p, q)?),
        count,
        seed,
        1,
    )
}

pub fn sample_mw(m: usize, count: usize, seed: u64) -> Result<SampleBatch> {
    sample(
        Descriptor::MeyerWallach(QubitSystem::new(m)?),
        count,
        seed,
        1,
    )
}

/// Pairwise (cascade) summation; the summation tree depends only on the
/// slice length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalMoment {
    pub order: usize,
    pub mean: f64,
    pub std_err: f64,
}

/// Sample means of `xⁿ` for `n = 1..=n_max`, with their standard errors.
pub fn empirical_moments(batch: &SampleBatch, n_max: usize) -> Result<Vec<EmpiricalMoment>> {
    let count = batch.values.len();
    if count == 0 {
        return Err(Error::Domain("empty batch".into()));
    }
    if n_max < 1 {
        return Err(Error::Domain("need n_max >= 1".into()));
    }
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let powers: Vec<f64> = batch.values.iter().map(|x| x.powi(n as i32)).collect();
        let mean = pairwise_sum(&powers) / count as f64;
        let std_err = if count < 2 {
            0.0
        } else {
            let dev: Vec<f64> = powers.iter().map(|x| (x - mean) * (x - mean)).collect();
            (pairwise_sum(&dev) / (count - 1) as f64 / count as f64).sqrt()
        };
        out.push(EmpiricalMoment {
            order: n,
            mean,
            std_err,
        });
    }
    Ok(out)
}

/// Equal-width histogram. Values outside `[first edge, last edge]` are not
/// counted; `total` is the number that were.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn from_values(values: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Self> {
        if bins < 2 {
            return Err(Error::Domain(format!("need at least 2 bins, got {bins}")));
        }
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Domain(format!("bad histogram range [{lo}, {hi}]")));
        }
        let (lo, hi) = if lo == hi {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        };
        let width = (hi - lo) / bins as f64;
        let bin_edges: Vec<f64> = (0..=bins)
            .map(|i| if i == bins { hi } else { lo + i as f64 * width })
            .collect();
        let mut counts = vec![0u64; bins];
        for &v in values {
            if !(lo..=hi).contains(&v) {
                continue;
            }
            let idx = (((v - lo) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        let total = counts.iter().sum();
        Ok(Histogram {
            bin_edges,
            counts,
            total,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self, bin: usize) -> f64 {
        self.bin_edges[bin + 1] - self.bin_edges[bin]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    /// `count / (total · width)` per bin.
    pub fn densities(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        (0..self.bins())
            .map(|i| self.counts[i] as f64 / (total * self.width(i)))
            .collect()
    }
}

/// Histogram over the descriptor's theoretical support.
pub fn histogram(batch: &SampleBatch, bins: usize) -> Result<Histogram> {
    let (lo, hi) = batch.descriptor.support();
    Histogram::from_values(&batch.values, bins, lo, hi)
}

/// Kolmogorov–Smirnov statistic `sup |F_n − F|` against a continuous CDF.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Domain("empty sample".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max))
}

/// `# <descriptor>,<seed>,<count>` then one value per line with 17
/// significant digits.
pub fn write_batch_csv<W: Write>(batch: &SampleBatch, mut out: W) -> Result<()> {
    writeln!(
        out,
        "# {},{},{}",
        batch.descriptor,
        batch.seed,
        batch.count()
    )?;
    for v in &batch.values {
        writeln!(out, "{}", format_f64(*v))?;
    }
    Ok(())
}

pub fn read_batch_csv<R: BufRead>(input: R) -> Result<SampleBatch> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing header".into()))??;
    let fields: Vec<&str> = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse(format!("header must start with '#': {header:?}")))?
        .trim()
        .split(',')
        .collect();
    let [descriptor, seed, count] = fields.as_slice() else {
        return Err(Error::Parse(format!("bad header {header:?}")));
    };
    let descriptor: Descriptor = descriptor.parse()?;
    let seed: u64 = seed
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad seed {seed:?}")))?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad count {count:?}")))?;
    let mut values = Vec::with_capacity(count);
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        values.push(
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad value {t:?}")))?,
        );
    }
    if values.len() != count {
        return Err(Error::Parse(format!(
            "header says {count} values, found {}",
            values.len()
        )));
    }
    Ok(SampleBatch {
        descriptor,
        seed,
        values,
    })
}

/// 17 significant digits, enough to round-trip any binary64.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

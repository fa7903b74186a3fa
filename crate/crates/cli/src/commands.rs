use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use entmom::compare::{analytic_series, compare as compare_batch, window, WINDOW_SIGMAS};
use entmom::cumulants::{closed_form_kappa, moments_to_cumulants, CumulantVector, Source};
use entmom::meyer_wallach::{closed_form_q_kappa, q_cumulants, QubitSystem};
use entmom::purity::{
    density_p2, moment_r, moment_r_p2, moment_r_symmetric, DimensionPair, MomentVector,
};
use entmom::sampler::{
    format_f64, sample as draw, write_batch_csv, Descriptor, Histogram, SampleBatch,
};

use crate::output::{Cell, Kind, OutputRecord};
use crate::{Format, Formula, Sampling, Target};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Run(#[from] entmom::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

type Result<T> = std::result::Result<T, CliError>;

/// What a command produced. `raw` is written verbatim after the record.
#[derive(Debug, Default)]
pub struct Outcome {
    pub record: Option<OutputRecord>,
    pub raw: Vec<u8>,
    /// Failed internal cross-checks; non-empty means a nonzero exit.
    pub failures: Vec<String>,
}

impl Outcome {
    fn record(record: OutputRecord) -> Self {
        Outcome {
            record: Some(record),
            ..Outcome::default()
        }
    }
}

impl Target {
    pub fn descriptor(&self) -> Result<Descriptor> {
        if self.mw {
            let m = self
                .qubits
                .ok_or_else(|| CliError::Usage("--mw needs --qubits".into()))?;
            return Ok(Descriptor::MeyerWallach(QubitSystem::new(m)?));
        }
        match (self.p, self.q) {
            (Some(p), Some(q)) => Ok(Descriptor::Purity(DimensionPair::new(p, q)?)),
            _ => Err(CliError::Usage(
                "give either --p and --q, or --mw --qubits".into(),
            )),
        }
    }
}

fn describe(record: &mut OutputRecord, descriptor: Descriptor) {
    match descriptor {
        Descriptor::Purity(d) => record.meta("p", d.p()).meta("q", d.q()),
        Descriptor::MeyerWallach(s) => record.meta("qubits", s.qubits()),
    };
}

pub fn moments(p: usize, q: usize, n_max: usize, formula: Option<Formula>) -> Result<Outcome> {
    let dims = DimensionPair::new(p, q)?;
    if formula == Some(Formula::P2) && dims.p() != 2 {
        return Err(CliError::Usage(format!(
            "--formula p2 needs p = 2, got p = {}",
            dims.p()
        )));
    }
    let mut record = OutputRecord::new(Kind::Moments, &["n", "exact", "value"]);
    describe(&mut record, Descriptor::Purity(dims));
    record.meta("n_max", n_max);
    let mut failures = Vec::new();
    for n in 0..=n_max {
        let value = match formula {
            Some(Formula::Rnferme) => moment_r(dims, n)?,
            Some(Formula::Symmetric) => moment_r_symmetric(dims, n)?,
            Some(Formula::P2) => moment_r_p2(dims.q(), n)?,
            None => {
                let a = moment_r(dims, n)?;
                let b = moment_r_symmetric(dims, n)?;
                if a != b {
                    failures.push(format!("n={n}: rnferme {a} != symmetric {b}"));
                }
                if dims.p() == 2 {
                    let c = moment_r_p2(dims.q(), n)?;
                    if a != c {
                        failures.push(format!("n={n}: rnferme {a} != p2 {c}"));
                    }
                }
                a
            }
        };
        let float = value.to_f64();
        record.push(vec![
            Cell::Int(n as u64),
            Cell::Exact(value),
            Cell::Float(float),
        ]);
    }
    match formula {
        Some(f) => record.meta("formula", format!("{f:?}").to_lowercase()),
        None => record.meta("formula", "all").meta(
            "cross_check",
            if failures.is_empty() {
                "passed"
            } else {
                "failed"
            },
        ),
    };
    Ok(Outcome {
        record: Some(record),
        failures,
        ..Outcome::default()
    })
}

pub fn cumulants(target: &Target, n_max: usize, check_closed_form: bool) -> Result<Outcome> {
    let descriptor = target.descriptor()?;
    let kappas: CumulantVector = match descriptor {
        Descriptor::Purity(d) => moments_to_cumulants(
            Source::Purity(d),
            MomentVector::compute(d, n_max).values(),
            n_max,
        )?,
        Descriptor::MeyerWallach(s) => q_cumulants(s, n_max)?,
    };
    let mut record = OutputRecord::new(Kind::Cumulants, &["n", "exact", "value"]);
    describe(&mut record, descriptor);
    record.meta("n_max", n_max);
    let mut failures = Vec::new();
    for (i, k) in kappas.values().iter().enumerate() {
        let n = i + 1;
        if check_closed_form && n <= 5 {
            let closed = match descriptor {
                Descriptor::Purity(d) => closed_form_kappa(d, n)?,
                Descriptor::MeyerWallach(s) => closed_form_q_kappa(s, n)?,
            };
            if &closed != k {
                failures.push(format!("kappa_{n}: pipeline {k} != closed form {closed}"));
            }
        }
        record.push(vec![
            Cell::Int(n as u64),
            Cell::Exact(k.clone()),
            Cell::Float(k.to_f64()),
        ]);
    }
    if check_closed_form {
        record.meta(
            "closed_form_check",
            if failures.is_empty() {
                "passed"
            } else {
                "failed"
            },
        );
    }
    Ok(Outcome {
        record: Some(record),
        failures,
        ..Outcome::default()
    })
}

fn grid_points(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + i as f64 * step })
}

pub fn pdf(target: &Target, order: usize, grid: usize, exact_p2: bool) -> Result<Outcome> {
    if grid < 2 {
        return Err(CliError::Usage(format!("--grid must be >= 2, got {grid}")));
    }
    let descriptor = target.descriptor()?;
    let mut record = OutputRecord::new(Kind::DensityCurve, &["x", "density"]);
    describe(&mut record, descriptor);
    record.meta("grid", grid);
    if exact_p2 {
        let q = match descriptor {
            Descriptor::Purity(d) if d.p() == 2 => d.q(),
            _ => return Err(CliError::Usage("--exact-p2 needs --p 2".into())),
        };
        // Equal steps in u = √(2R−1): the density is smooth in u but has a
        // square-root edge in R, which a uniform R grid resolves poorly.
        record
            .meta("density", "exact_p2")
            .meta("spacing", "uniform in sqrt(2R-1)");
        for u in grid_points(0.0, 1.0, grid) {
            let x = 0.5 * (1.0 + u * u);
            record.push(vec![Cell::Float(x), Cell::Float(density_p2(x, q)?)]);
        }
        return Ok(Outcome::record(record));
    }
    let series = analytic_series(descriptor, order)?;
    let (lo, hi) = window(
        series.mu(),
        series.sigma(),
        WINDOW_SIGMAS,
        descriptor.support(),
    );
    record
        .meta("density", "edgeworth")
        .meta("order", order)
        .meta("mu", format_f64(series.mu()))
        .meta("sigma", format_f64(series.sigma()));
    for x in grid_points(lo, hi, grid) {
        record.push(vec![Cell::Float(x), Cell::Float(series.evaluate(x))]);
    }
    Ok(Outcome::record(record))
}

fn sampling_meta(record: &mut OutputRecord, batch: &SampleBatch, sampling: &Sampling) {
    record
        .meta("descriptor", batch.descriptor)
        .meta("seed", batch.seed)
        .meta("count", batch.count())
        .meta("threads", sampling.threads);
}

/// `μ ± 6σ` of the Gaussian approximation within the support; the bare
/// support when the variance vanishes.
fn histogram_range(descriptor: Descriptor) -> (f64, f64) {
    match analytic_series(descriptor, 0) {
        Ok(s) => window(s.mu(), s.sigma(), WINDOW_SIGMAS, descriptor.support()),
        Err(_) => descriptor.support(),
    }
}

fn batch_csv(batch: &SampleBatch) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_batch_csv(batch, &mut buf)?;
    // The version line goes after the fixed header so readers of the batch
    // format still see the descriptor first.
    let split = buf.iter().position(|&b| b == b'\n').expect("header line") + 1;
    let mut out = buf[..split].to_vec();
    writeln!(out, "# version,{}", crate::VERSION)?;
    out.extend_from_slice(&buf[split..]);
    Ok(out)
}

pub fn sample(
    target: &Target,
    count: usize,
    sampling: &Sampling,
    bins: Option<usize>,
    out: Option<&Path>,
    format: Format,
) -> Result<Outcome> {
    let descriptor = target.descriptor()?;
    let batch = draw(descriptor, count, sampling.seed, sampling.threads)?;
    if let Some(path) = out {
        let mut file = BufWriter::new(File::create(path)?);
        file.write_all(&batch_csv(&batch)?)?;
        file.flush()?;
    }
    if let Some(bins) = bins {
        let (lo, hi) = histogram_range(descriptor);
        let hist = Histogram::from_values(&batch.values, bins, lo, hi)?;
        let mut record = OutputRecord::new(Kind::Histogram, &["bin_center", "density"]);
        sampling_meta(&mut record, &batch, sampling);
        record
            .meta("bins", bins)
            .meta("lo", format_f64(hist.bin_edges[0]))
            .meta("hi", format_f64(hist.bin_edges[bins]))
            .meta("in_range", hist.total);
        for (c, d) in hist.centers().into_iter().zip(hist.densities()) {
            record.push(vec![Cell::Float(c), Cell::Float(d)]);
        }
        return Ok(Outcome::record(record));
    }
    if out.is_some() {
        return Ok(Outcome::default());
    }
    match format {
        Format::Csv => Ok(Outcome {
            raw: batch_csv(&batch)?,
            ..Outcome::default()
        }),
        Format::Json => {
            let mut record = OutputRecord::new(Kind::Samples, &["value"]);
            sampling_meta(&mut record, &batch, sampling);
            for &v in &batch.values {
                record.push(vec![Cell::Float(v)]);
            }
            Ok(Outcome::record(record))
        }
    }
}

pub fn compare(
    target: &Target,
    orders: &[usize],
    count: usize,
    sampling: &Sampling,
    bins: usize,
) -> Result<Outcome> {
    if orders.is_empty() {
        return Err(CliError::Usage(
            "--orders must list at least one order".into(),
        ));
    }
    let descriptor = target.descriptor()?;
    let batch = draw(descriptor, count, sampling.seed, sampling.threads)?;
    let cmp = compare_batch(&batch, orders, bins)?;
    let mut columns = vec!["bin_center".to_string(), "empirical".to_string()];
    for s in orders {
        columns.push(format!("model_{s}"));
        columns.push(format!("diff_{s}"));
    }
    let mut record = OutputRecord::new(Kind::Comparison, &[]);
    record.columns = columns;
    sampling_meta(&mut record, &batch, sampling);
    record.meta("bins", bins);
    for (s, l1) in orders.iter().zip(&cmp.l1) {
        record.meta(&format!("l1_order_{s}"), format_f64(*l1));
    }
    for (b, center) in cmp.histogram.centers().into_iter().enumerate() {
        let e = cmp.empirical[b];
        let mut row = vec![Cell::Float(center), Cell::Float(e)];
        for model in &cmp.model {
            row.push(Cell::Float(model[b]));
            row.push(Cell::Float(e - model[b]));
        }
        record.push(row);
    }
    Ok(Outcome::record(record))
}

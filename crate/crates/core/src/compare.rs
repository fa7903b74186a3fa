//! Sampled histograms against truncated Edgeworth densities.

use crate::cumulants::{moments_to_cumulants, rescale, Source};
use crate::edgeworth::EdgeworthSeries;
use crate::meyer_wallach::q_density;
use crate::purity::MomentVector;
use crate::quad::simpson_composite;
use crate::sampler::{Descriptor, Histogram, SampleBatch};
use crate::{Error, Result};

/// Edgeworth series of the analytic distribution behind a descriptor.
pub fn analytic_series(descriptor: Descriptor, order: usize) -> Result<EdgeworthSeries> {
    match descriptor {
        Descriptor::Purity(dims) => {
            let mv = MomentVector::compute(dims, order + 2);
            let k = moments_to_cumulants(Source::Purity(dims), mv.values(), order + 2)?;
            EdgeworthSeries::new(rescale(&k)?, order)
        }
        Descriptor::MeyerWallach(system) => q_density(system, order),
    }
}

/// `[μ − width·σ, μ + width·σ]` clipped to `support`.
pub fn window(mu: f64, sigma: f64, width: f64, support: (f64, f64)) -> (f64, f64) {
    let lo = (mu - width * sigma).max(support.0);
    let hi = (mu + width * sigma).min(support.1);
    (lo, hi)
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub histogram: Histogram,
    pub empirical: Vec<f64>,
    pub orders: Vec<usize>,
    /// `model[i][b]`: bin-averaged density of truncation `orders[i]` in bin `b`.
    pub model: Vec<Vec<f64>>,
    /// `Σ_b |empirical − model| · width` per order.
    pub l1: Vec<f64>,
}

/// Half-width of the comparison window, in standard deviations.
pub const WINDOW_SIGMAS: f64 = 6.0;

/// Bins the batch over the `±6σ` window of the analytic mean and compares
/// the density histogram against each requested truncation order.
pub fn compare(batch: &SampleBatch, orders: &[usize], bins: usize) -> Result<Comparison> {
    let max_order = *orders
        .iter()
        .max()
        .ok_or_else(|| Error::Domain("no orders to compare".into()))?;
    let full = analytic_series(batch.descriptor, max_order)?;
    let (lo, hi) = window(
        full.mu(),
        full.sigma(),
        WINDOW_SIGMAS,
        batch.descriptor.support(),
    );
    let histogram = Histogram::from_values(&batch.values, bins, lo, hi)?;
    let empirical = histogram.densities();
    let mut model = Vec::with_capacity(orders.len());
    let mut l1 = Vec::with_capacity(orders.len());
    for &order in orders {
        let series = full.truncated(order)?;
        let row: Vec<f64> = (0..histogram.bins())
            .map(|b| {
                let (a, c) = (histogram.bin_edges[b], histogram.bin_edges[b + 1]);
                simpson_composite(|x| series.evaluate(x), a, c, 4) / (c - a)
            })
            .collect();
        let dist = row
            .iter()
            .zip(&empirical)
            .enumerate()
            .map(|(b, (m, e))| (m - e).abs() * histogram.width(b))
            .sum();
        model.push(row);
        l1.push(dist);
    }
    Ok(Comparison {
        histogram,
        empirical,
        orders: orders.to_vec(),
        model,
        l1,
    })
}

/// L1 distance between two density histograms on identical bins.
pub fn histogram_l1(a: &Histogram, b: &Histogram) -> Result<f64> {
    if a.bin_edges != b.bin_edges {
        return Err(Error::Domain("histograms have different bins".into()));
    }
    let (da, db) = (a.densities(), b.densities());
    Ok((0..a.bins())
        .map(|i| (da[i] - db[i]).abs() * a.width(i))
        .sum())
}

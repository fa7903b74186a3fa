//! Browser front end. Each operation is a plain function returning a JSON
//! string, wrapped for JavaScript by a `#[wasm_bindgen]` shim.
//!
//! Targets are written as descriptors: `purity:p:q` or `mw:m`.

use entmom::compare::{analytic_series, compare, window, WINDOW_SIGMAS};
use entmom::cumulants::{moments_to_cumulants, Source};
use entmom::meyer_wallach::{q_cumulants, QMomentVector};
use entmom::purity::{density_p2, MomentVector};
use entmom::sampler::{sample, Descriptor};
use entmom::Result;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Cap on samples per request so the page stays responsive.
pub const MAX_COUNT: usize = 200_000;

/// Exact moments and cumulants for `n = 1..=n_max`.
pub fn moment_table(descriptor: &str, n_max: usize) -> Result<String> {
    let d: Descriptor = descriptor.parse()?;
    let (moments, cumulants) = match d {
        Descriptor::Purity(dims) => {
            let mv = MomentVector::compute(dims, n_max);
            let k = moments_to_cumulants(Source::Purity(dims), mv.values(), n_max)?;
            (mv.values().to_vec(), k)
        }
        Descriptor::MeyerWallach(s) => (
            QMomentVector::compute(s, n_max)?.values().to_vec(),
            q_cumulants(s, n_max)?,
        ),
    };
    let rows: Vec<Value> = moments
        .iter()
        .zip(cumulants.values())
        .enumerate()
        .map(|(i, (m, k))| {
            json!({
                "n": i + 1,
                "moment": m.to_string(),
                "moment_f64": m.to_f64(),
                "cumulant": k.to_string(),
                "cumulant_f64": k.to_f64(),
            })
        })
        .collect();
    Ok(json!({ "descriptor": d.to_string(), "rows": rows }).to_string())
}

/// Truncations of order `0..=max_order` on a shared grid, plus the exact
/// density when the target is a `2 × q` purity.
pub fn edgeworth_curves(descriptor: &str, max_order: usize, grid: usize) -> Result<String> {
    let d: Descriptor = descriptor.parse()?;
    let grid = grid.max(2);
    let full = analytic_series(d, max_order)?;
    let (lo, hi) = window(full.mu(), full.sigma(), WINDOW_SIGMAS, d.support());
    let xs: Vec<f64> = (0..grid)
        .map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64)
        .collect();
    let curves = (0..=max_order)
        .map(|s| {
            let series = full.truncated(s)?;
            Ok(xs.iter().map(|&x| series.evaluate(x)).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let exact = match d {
        Descriptor::Purity(dims) if dims.p() == 2 => Some(
            xs.iter()
                .map(|&x| density_p2(x, dims.q()))
                .collect::<Result<Vec<f64>>>()?,
        ),
        _ => None,
    };
    Ok(json!({
        "descriptor": d.to_string(),
        "mu": full.mu(),
        "sigma": full.sigma(),
        "x": xs,
        "curves": curves,
        "exact": exact,
    })
    .to_string())
}

/// Sampled histogram against truncations `0..=max_order`, with L1 distances.
pub fn sampled_comparison(
    descriptor: &str,
    count: usize,
    seed: u64,
    bins: usize,
    max_order: usize,
) -> Result<String> {
    let d: Descriptor = descriptor.parse()?;
    let batch = sample(d, count.min(MAX_COUNT), seed, 1)?;
    let orders: Vec<usize> = (0..=max_order).collect();
    let c = compare(&batch, &orders, bins)?;
    Ok(json!({
        "descriptor": d.to_string(),
        "count": batch.count(),
        "seed": seed,
        "edges": c.histogram.bin_edges,
        "empirical": c.empirical,
        "model": c.model,
        "l1": c.l1,
    })
    .to_string())
}

fn js(r: Result<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = momentTable)]
pub fn moment_table_js(descriptor: &str, n_max: usize) -> std::result::Result<String, JsValue> {
    js(moment_table(descriptor, n_max))
}

#[wasm_bindgen(js_name = edgeworthCurves)]
pub fn edgeworth_curves_js(
    descriptor: &str,
    max_order: usize,
    grid: usize,
) -> std::result::Result<String, JsValue> {
    js(edgeworth_curves(descriptor, max_order, grid))
}

/// `seed` arrives as a JS number; integers up to 2^53 are exact.
#[wasm_bindgen(js_name = sampledComparison)]
pub fn sampled_comparison_js(
    descriptor: &str,
    count: usize,
    seed: f64,
    bins: usize,
    max_order: usize,
) -> std::result::Result<String, JsValue> {
    js(sampled_comparison(
        descriptor,
        count,
        seed as u64,
        bins,
        max_order,
    ))
}

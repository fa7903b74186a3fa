//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any fails.

use std::time::{Duration, Instant};

use entmom::compare::compare;
use entmom::cumulants::{closed_form_kappa, moments_to_cumulants, Source};
use entmom::edgeworth::{coefficient_table, EdgeworthSeries};
use entmom::meyer_wallach::{closed_form_q_kappa, q_cumulants, q_density, QubitSystem};
use entmom::numkit::{compositions, multinomial, Composition};
use entmom::purity::{
    appendix_i, appendix_j, cdf_p2, density_p2, moment_r, moment_r_p2, moment_r_symmetric,
    DimensionPair, MomentVector,
};
use entmom::quad::adaptive_simpson;
use entmom::sampler::{empirical_moments, ks_statistic, sample, Descriptor};
use entmom::Rational;

const STREAMS: usize = 4;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// `(s, degree, weight, τ powers)`
type TermKey = (usize, usize, String, Vec<(usize, usize)>);

fn dims(p: usize, q: usize) -> DimensionPair {
    DimensionPair::new(p, q).unwrap()
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    if elapsed <= limit {
        Ok(format!("{detail}; {:.2?} <= {limit:?}", elapsed))
    } else {
        Err(format!(
            "{detail}; runtime {:.2?} exceeds {limit:?}",
            elapsed
        ))
    }
}

/// 1. ⟨R⟩ = (p+q)/(1+pq) for 2 ≤ p ≤ q ≤ 8, in under a second.
fn lubkin_mean() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for p in 2..=8 {
        for q in p..=8 {
            let got = moment_r(dims(p, q), 1).unwrap();
            let want = Rational::new((p + q) as i64, (1 + p * q) as i64).unwrap();
            if got != want {
                return Err(format!("p={p} q={q}: {got} != {want}"));
            }
            checked += 1;
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(1),
        format!("{checked} pairs exact"),
    )
}

/// 2. Moment pipeline equals the closed-form κ₁..κ₅ for 2 ≤ p ≤ q ≤ 6.
fn cumulant_closed_forms() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for p in 2..=6 {
        for q in p..=6 {
            let d = dims(p, q);
            let mv = MomentVector::compute(d, 5);
            let k = moments_to_cumulants(Source::Purity(d), mv.values(), 5).unwrap();
            for n in 1..=5 {
                let want = closed_form_kappa(d, n).unwrap();
                if k.values()[n - 1] != want {
                    return Err(format!(
                        "p={p} q={q} n={n}: {} != {want}",
                        k.values()[n - 1]
                    ));
                }
                checked += 1;
            }
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(10),
        format!("{checked} cumulants exact"),
    )
}

/// 3. The three moment formulas agree exactly.
fn formula_triangulation() -> Outcome {
    let mut checked = 0;
    for p in 2..=6 {
        for q in p..=6 {
            for n in 0..=6 {
                let a = moment_r(dims(p, q), n).unwrap();
                let b = moment_r_symmetric(dims(p, q), n).unwrap();
                if a != b {
                    return Err(format!("p={p} q={q} n={n}: {a} != {b}"));
                }
                checked += 1;
            }
        }
    }
    for q in [2, 4, 8, 16, 32] {
        for n in 0..=6 {
            let a = moment_r(dims(2, q), n).unwrap();
            let b = moment_r_symmetric(dims(2, q), n).unwrap();
            let c = moment_r_p2(q, n).unwrap();
            if a != b || a != c {
                return Err(format!("q={q} n={n}: {a}, {b}, {c}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} equalities exact"))
}

/// 4. I-ratio construction reproduces ⟨Rⁿ⟩; J((0,0)) matches quadrature.
fn appendix_oracle() -> Outcome {
    let mut checked = 0;
    for p in 1..=4 {
        for q in p..=p + 2 {
            let d = dims(p, q);
            let i0 = appendix_i(&Composition::new(vec![0; p]), d).unwrap();
            for n in 0..=3 {
                let ratio: Rational = compositions(n, p)
                    .unwrap()
                    .map(|c| {
                        Rational::from(multinomial(c.parts()))
                            * appendix_i(&c.scaled(2), d).unwrap()
                            / &i0
                    })
                    .sum();
                let want = moment_r(d, n).unwrap();
                if ratio != want {
                    return Err(format!("p={p} q={q} n={n}: {ratio} != {want}"));
                }
                checked += 1;
            }
        }
    }
    // J((0,0)), p = 2, r = 0: 2! ∫₀¹ (x₂ − x₁) x₂ dx₂ with x₁ = 1 − x₂.
    let quad = 2.0 * adaptive_simpson(|t| (2.0 * t - 1.0) * t, 0.0, 1.0, 1e-12);
    let exact = appendix_j(&Composition::new(vec![0, 0]), dims(2, 2))
        .unwrap()
        .to_f64();
    if (quad - exact).abs() > 1e-8 {
        return Err(format!("J(0,0) = {exact}, quadrature {quad}"));
    }
    Ok(format!(
        "{checked} ratio equalities exact; |J − quad| = {:.1e}",
        (quad - exact).abs()
    ))
}

/// 5. Q cumulants equal the closed forms for m = 2..8, n ≤ 5.
fn mw_closed_forms() -> Outcome {
    let mut checked = 0;
    for m in 2..=8 {
        let s = QubitSystem::new(m).unwrap();
        let k = q_cumulants(s, 5).unwrap();
        for n in 1..=5 {
            let want = closed_form_q_kappa(s, n).unwrap();
            if k.values()[n - 1] != want {
                return Err(format!("m={m} n={n}: {} != {want}", k.values()[n - 1]));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} cumulants exact"))
}

/// 6. Sampled ⟨Rⁿ⟩, n = 1..3, within 5 standard errors at p = q = 4.
fn monte_carlo_moments() -> Outcome {
    let start = Instant::now();
    let d = dims(4, 4);
    let batch = sample(Descriptor::Purity(d), 100_000, 2024, STREAMS).unwrap();
    let emp = empirical_moments(&batch, 3).unwrap();
    let mut worst: f64 = 0.0;
    for e in &emp {
        let exact = moment_r(d, e.order).unwrap().to_f64();
        let z = (e.mean - exact).abs() / e.std_err;
        worst = worst.max(z);
        if z > 5.0 {
            return Err(format!("n={}: {} vs {exact}, {z:.2} SE", e.order, e.mean));
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(60),
        format!("max deviation {worst:.2} SE"),
    )
}

/// 7. KS distance to the exact p = 2, q = 8 CDF below 3 · 1.36/√N.
fn exact_p2_density() -> Outcome {
    let count = 100_000;
    let batch = sample(Descriptor::Purity(dims(2, 8)), count, 7, STREAMS).unwrap();
    let d = ks_statistic(&batch.values, |r| cdf_p2(r, 8).unwrap()).unwrap();
    let limit = 3.0 * 1.36 / (count as f64).sqrt();
    if d < limit {
        Ok(format!("KS = {d:.5} < {limit:.5}"))
    } else {
        Err(format!("KS = {d:.5} >= {limit:.5}"))
    }
}

fn l1_by_order(m: usize, count: usize, seed: u64) -> Outcome {
    let s = QubitSystem::new(m).unwrap();
    let batch = sample(Descriptor::MeyerWallach(s), count, seed, STREAMS).unwrap();
    let c = compare(&batch, &[0, 1, 2, 3], 50).unwrap();
    let l1 = &c.l1;
    let shown = format!(
        "m={m}: L1 = [{}]",
        l1.iter()
            .map(|x| format!("{x:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    if !l1.windows(2).all(|w| w[1] < w[0]) {
        return Err(format!("{shown} not decreasing"));
    }
    if l1[3] >= 0.1 {
        return Err(format!("{shown}, order 3 not below 0.1"));
    }
    Ok(shown)
}

/// 8. Sampled P(Q) vs truncations: L1 decreases with order, order 3 < 0.1.
fn sampled_q_vs_truncations() -> Outcome {
    let start = Instant::now();
    let a = l1_by_order(10, 10_000, 10)?;
    let b = l1_by_order(11, 3_000, 11)?;
    within(
        start.elapsed(),
        Duration::from_secs(300),
        format!("{a}; {b}"),
    )
}

/// 9. Term table through order 3 matches the printed coefficients.
fn edgeworth_structure() -> Outcome {
    let series = q_density(QubitSystem::new(10).unwrap(), 3).unwrap();
    let got: Vec<TermKey> = coefficient_table(&series)
        .into_iter()
        .map(|t| (t.s, t.degree, t.weight.to_string(), t.tau_powers))
        .collect();
    let want = vec![
        (1, 3, "1/6".to_string(), vec![(3, 1)]),
        (2, 4, "1/24".to_string(), vec![(4, 1)]),
        (2, 6, "1/72".to_string(), vec![(3, 2)]),
        (3, 5, "1/120".to_string(), vec![(5, 1)]),
        (3, 7, "1/144".to_string(), vec![(3, 1), (4, 1)]),
        (3, 9, "1/1296".to_string(), vec![(3, 3)]),
    ];
    if got == want {
        Ok(
            "6 terms: τ3/6·He3, τ4/24·He4, τ3²/72·He6, τ5/120·He5, τ3τ4/144·He7, τ3³/1296·He9"
                .into(),
        )
    } else {
        Err(format!("{got:?}"))
    }
}

/// 10. Every truncation and the exact p = 2 density integrate to one.
fn normalization() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut check = |series: &EdgeworthSeries, label: &str| -> Result<(), String> {
        let (mu, sigma) = (series.mu(), series.sigma());
        let total = adaptive_simpson(
            |x| series.evaluate(x),
            mu - 10.0 * sigma,
            mu + 10.0 * sigma,
            1e-10,
        );
        worst = worst.max((total - 1.0).abs());
        if (total - 1.0).abs() > 1e-8 {
            return Err(format!("{label}: ∫ = {total}"));
        }
        Ok(())
    };
    for order in 0..=4 {
        for m in [2, 5, 10, 11] {
            let s = q_density(QubitSystem::new(m).unwrap(), order).unwrap();
            check(&s, &format!("Q m={m} order={order}"))?;
        }
        for (p, q) in [(2, 2), (3, 4), (4, 4), (5, 6)] {
            let s =
                entmom::compare::analytic_series(Descriptor::Purity(dims(p, q)), order).unwrap();
            check(&s, &format!("R p={p} q={q} order={order}"))?;
        }
    }
    for q in [2, 3, 4, 8, 16, 32] {
        let total = adaptive_simpson(|r| density_p2(r, q).unwrap(), 0.5, 1.0, 1e-12);
        worst = worst.max((total - 1.0).abs());
        if (total - 1.0).abs() > 1e-8 {
            return Err(format!("density_p2 q={q}: ∫ = {total}"));
        }
    }
    Ok(format!("max |∫ − 1| = {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Lubkin mean", lubkin_mean),
        ("cumulant closed forms", cumulant_closed_forms),
        ("formula triangulation", formula_triangulation),
        ("appendix oracle", appendix_oracle),
        ("MW cumulant closed forms", mw_closed_forms),
        ("Monte Carlo moments", monte_carlo_moments),
        ("exact p=2 density (KS)", exact_p2_density),
        ("sampled Q vs truncations", sampled_q_vs_truncations),
        ("Edgeworth structure", edgeworth_structure),
        ("normalization", normalization),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("AC{:<2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("AC{:<2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

use std::process::{Command, Output};

fn entmom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entmom"))
        .args(args)
        .env_remove("ENTMOM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV record: everything after the metadata and header lines.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn floats(text: &str, col: usize) -> Vec<f64> {
    rows(text).iter().map(|r| r[col].parse().unwrap()).collect()
}

fn meta(text: &str, key: &str) -> Option<String> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .find_map(|l| l.strip_prefix(&format!("{key},")).map(str::to_string))
}

#[test]
fn moments_examples() {
    let out = stdout(&entmom(&[
        "moments", "--p", "2", "--q", "2", "--n-max", "1",
    ]));
    assert_eq!(rows(&out)[1], ["1", "4/5", "8.0000000000000004e-1"]);
    assert_eq!(meta(&out, "cross_check").as_deref(), Some("passed"));
    assert!(meta(&out, "version")
        .unwrap()
        .contains(env!("CARGO_PKG_VERSION")));

    let out = stdout(&entmom(&[
        "moments", "--p", "1", "--q", "9", "--n-max", "3",
    ]));
    assert!(rows(&out).iter().all(|r| r[1] == "1/1"));

    let out = stdout(&entmom(&[
        "moments",
        "--p",
        "2",
        "--q",
        "4",
        "--n-max",
        "2",
        "--formula",
        "p2",
    ]));
    assert_eq!(rows(&out)[2][1], "5/11");
}

#[test]
fn p2_formula_needs_p2() {
    let out = entmom(&["moments", "--p", "3", "--q", "4", "--formula", "p2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cumulants_examples() {
    let out = stdout(&entmom(&[
        "cumulants",
        "--p",
        "2",
        "--q",
        "2",
        "--n-max",
        "2",
    ]));
    assert_eq!(rows(&out)[1][1], "3/175");
    let out = stdout(&entmom(&[
        "cumulants",
        "--mw",
        "--qubits",
        "10",
        "--n-max",
        "1",
    ]));
    assert_eq!(rows(&out)[0][1], "1022/1025");
    let out = stdout(&entmom(&[
        "cumulants",
        "--p",
        "1",
        "--q",
        "5",
        "--n-max",
        "3",
    ]));
    let k: Vec<String> = rows(&out).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(k, ["1/1", "0/1", "0/1"]);
}

#[test]
fn closed_form_check_passes() {
    for args in [
        &["cumulants", "--p", "3", "--q", "5", "--check-closed-form"][..],
        &["cumulants", "--mw", "--qubits", "7", "--check-closed-form"][..],
    ] {
        let out = stdout(&entmom(args));
        assert_eq!(meta(&out, "closed_form_check").as_deref(), Some("passed"));
        assert_eq!(rows(&out).len(), 8);
    }
}

#[test]
fn target_is_required() {
    assert_eq!(entmom(&["cumulants", "--p", "2"]).status.code(), Some(2));
    assert_eq!(entmom(&["pdf", "--mw"]).status.code(), Some(2));
    assert_eq!(
        entmom(&["pdf", "--mw", "--qubits", "4", "--p", "2"])
            .status
            .code(),
        Some(2)
    );
}

fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / 2.0)
        .sum()
}

#[test]
fn exact_p2_curve_is_normalized() {
    let out = stdout(&entmom(&[
        "pdf",
        "--p",
        "2",
        "--q",
        "8",
        "--exact-p2",
        "--grid",
        "400",
    ]));
    let (x, y) = (floats(&out, 0), floats(&out, 1));
    assert_eq!(x.len(), 400);
    assert_eq!((x[0], x[399]), (0.5, 1.0));
    assert!((trapezoid(&x, &y) - 1.0).abs() < 1e-6);
    let bad = entmom(&["pdf", "--p", "3", "--q", "8", "--exact-p2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn order_zero_is_gaussian() {
    let out = stdout(&entmom(&[
        "pdf", "--p", "3", "--q", "5", "--order", "0", "--grid", "101",
    ]));
    let mu: f64 = meta(&out, "mu").unwrap().parse().unwrap();
    let sigma: f64 = meta(&out, "sigma").unwrap().parse().unwrap();
    for (x, y) in floats(&out, 0).into_iter().zip(floats(&out, 1)) {
        let z = (x - mu) / sigma;
        let g = (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt());
        assert!((y - g).abs() <= 1e-12 * g.max(1.0), "x={x}: {y} vs {g}");
    }
}

#[test]
fn mw_curve_stays_in_support() {
    let out = stdout(&entmom(&[
        "pdf", "--mw", "--qubits", "10", "--order", "3", "--grid", "512",
    ]));
    let x = floats(&out, 0);
    assert_eq!(x.len(), 512);
    assert!(x.iter().all(|&v| (0.0..=1.0).contains(&v)));
    assert!(x.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn trivial_sample() {
    let out = stdout(&entmom(&[
        "sample", "--p", "1", "--q", "4", "--count", "10",
    ]));
    let values: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(values.len(), 10);
    assert!(values.iter().all(|v| v.parse::<f64>().unwrap() == 1.0));
    assert_eq!(out.lines().next(), Some("# purity:1:4,0,10"));
}

#[test]
fn sampling_is_deterministic() {
    let args = [
        "sample", "--mw", "--qubits", "6", "--count", "200", "--seed", "7", "--bins", "20",
    ];
    let a = entmom(&args);
    let b = entmom(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = entmom(&[
        "sample", "--mw", "--qubits", "6", "--count", "200", "--seed", "8", "--bins", "20",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn seed_comes_from_environment() {
    let run = |seed: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_entmom"));
        cmd.args(["sample", "--p", "2", "--q", "3", "--count", "5"])
            .args(extra);
        match seed {
            Some(s) => cmd.env("ENTMOM_SEED", s),
            None => cmd.env_remove("ENTMOM_SEED"),
        };
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("42"), &[]), run(None, &["--seed", "42"]));
    assert_ne!(run(Some("42"), &[]), run(None, &[]));
}

#[test]
fn histogram_is_a_density() {
    let out = stdout(&entmom(&[
        "sample", "--mw", "--qubits", "10", "--count", "1000", "--seed", "7", "--bins", "50",
    ]));
    let (c, d) = (floats(&out, 0), floats(&out, 1));
    assert_eq!(c.len(), 50);
    let width = c[1] - c[0];
    let mass: f64 = d.iter().map(|v| v * width).sum();
    assert!((mass - 1.0).abs() < 1e-9, "{mass}");
}

#[test]
fn batch_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("entmom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("batch.csv");
    let out = entmom(&[
        "sample",
        "--p",
        "2",
        "--q",
        "5",
        "--count",
        "50",
        "--seed",
        "3",
        "--threads",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    let file = std::fs::read(&path).unwrap();
    let batch = entmom::sampler::read_batch_csv(&file[..]).unwrap();
    assert_eq!(batch.count(), 50);
    assert_eq!(batch.seed, 3);
    let again = entmom::sampler::sample(batch.descriptor, 50, 3, 3).unwrap();
    assert_eq!(batch, again);
    std::fs::remove_dir_all(&dir).unwrap();

    let unwritable = entmom(&[
        "sample",
        "--p",
        "2",
        "--q",
        "5",
        "--count",
        "5",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(unwritable.status.code(), Some(1));
}

#[test]
fn compare_improves_with_order() {
    let out = stdout(&entmom(&[
        "compare",
        "--mw",
        "--qubits",
        "10",
        "--orders",
        "0,1,2,3",
        "--count",
        "10000",
        "--seed",
        "1",
        "--bins",
        "50",
        "--threads",
        "4",
    ]));
    let l1: Vec<f64> = (0..4)
        .map(|s| {
            meta(&out, &format!("l1_order_{s}"))
                .unwrap()
                .parse()
                .unwrap()
        })
        .collect();
    assert!(l1[3] < l1[0], "{l1:?}");
    let r = rows(&out);
    assert_eq!(r.len(), 50);
    assert_eq!(r[0].len(), 2 + 2 * 4);
}

#[test]
fn compare_rejects_empty_orders() {
    let out = entmom(&["compare", "--mw", "--qubits", "4", "--orders", ""]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_and_csv_agree() {
    let base = ["cumulants", "--p", "3", "--q", "4", "--n-max", "4"];
    let csv = stdout(&entmom(&base));
    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&entmom(&json_args))).unwrap();
    assert_eq!(json["kind"], "cumulants");
    for (i, row) in rows(&csv).iter().enumerate() {
        let j = &json["rows"][i];
        assert_eq!(j[0].as_u64().unwrap().to_string(), row[0]);
        assert_eq!(j[1].as_str().unwrap(), row[1]);
        assert_eq!(j[2].as_f64().unwrap(), row[2].parse::<f64>().unwrap());
    }
}

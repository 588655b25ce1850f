use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_6;
use std::fs;
use std::path::Path;

use catenary_cli::emit::{read_csv, trace_table, write_csv, BASE_COLUMNS};
use catenary_cli::run;
use catenary_core::integrator::trace_catenary;
use catenary_core::revolution::{clairaut_constant, quadrature_v};
use catenary_core::{catalog_surface, CatenaryState};

fn run_args(args: &[&str]) -> i32 {
    run(std::iter::once("catenary").chain(args.iter().copied()))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sphere_trace_args(out: &str) -> Vec<String> {
    "trace --surface sphere --alpha 1 --u0 0.5 --v0 0 --phi0 1.2 --smax 20 --out"
        .split_whitespace()
        .map(String::from)
        .chain([out.to_string()])
        .collect()
}

fn run_owned(args: &[String]) -> i32 {
    run_args(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn sphere_trace_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.csv");
    assert_eq!(run_owned(&sphere_trace_args(path_str(&out))), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "s,u,v,phi,kappa,residual,clairaut_c");
    assert!(text.lines().count() > 10);
}

#[test]
fn unknown_surface_exits_2() {
    let code = run_args(&["trace", "--surface", "torus", "--u0", "1", "--phi0", "0", "--smax", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(run_args(&["trace", "--surface", "sphere"]), 2);
    assert_eq!(run_args(&["frobnicate"]), 2);
    assert_eq!(
        run_args(&[
            "trace",
            "--surface",
            "sphere",
            "--u0",
            "0.5",
            "--phi0",
            "1",
            "--smax",
            "1",
            "--tol",
            "1e-2"
        ]),
        2
    );
    assert_eq!(
        run_args(&[
            "trace",
            "--surface",
            "sphere",
            "--u0",
            "2",
            "--phi0",
            "1",
            "--smax",
            "1"
        ]),
        2
    );
}

#[test]
fn help_exits_0() {
    assert_eq!(run_args(&["--help"]), 0);
}

#[test]
fn unwritable_output_exits_1() {
    let code = run_args(&[
        "trace",
        "--surface",
        "plane",
        "--u0",
        "1",
        "--phi0",
        "1",
        "--smax",
        "1",
        "--out",
        "/nonexistent/dir/t.csv",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn validate_all_exits_0_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    assert_eq!(run_args(&["validate", "--all", "--out", path_str(&out)]), 0);
    let report: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["items"].as_array().unwrap().len(), 10);
    assert_eq!(report["thresholds"]["closed_form"], 1e-10);
    let residuals = &report["items"][0]["checks"];
    for c in residuals.as_array().unwrap() {
        assert!(c["value"].as_f64().unwrap() < 1e-10, "{c}");
    }
}

#[test]
fn validate_single_item() {
    assert_eq!(run_args(&["validate", "--item", "3"]), 0);
    assert_eq!(run_args(&["validate", "--item", "99"]), 2);
}

#[test]
fn csv_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.csv");
    assert_eq!(run_owned(&sphere_trace_args(path_str(&out))), 0);
    let table = read_csv(fs::File::open(&out).unwrap()).unwrap();

    let spec = catalog_surface("sphere", &BTreeMap::new()).unwrap();
    let trace = trace_catenary(&spec, 1.0, CatenaryState::new(0.5, 0.0, 1.2), 20.0, 1e-9).unwrap();
    assert_eq!(table.rows.len(), trace.samples.len());
    for (row, s) in table.rows.iter().zip(&trace.samples) {
        let expect = [s.s, s.u, s.v, s.phi, s.kappa, s.residual];
        for (a, b) in row.iter().zip(expect) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(run_owned(&sphere_trace_args(path_str(&a))), 0);
    assert_eq!(run_owned(&sphere_trace_args(path_str(&b))), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn embedded_sphere_rows_lie_on_unit_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.csv");
    let code = run_args(&[
        "trace",
        "--surface",
        "sphere",
        "--u0",
        "0.5",
        "--phi0",
        "1.2",
        "--smax",
        "20",
        "--embed",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    let table = read_csv(fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(table.columns.last().map(String::as_str), Some("z"));
    let (x, y, z) = (
        table.column("x").unwrap(),
        table.column("y").unwrap(),
        table.column("z").unwrap(),
    );
    for i in 0..x.len() {
        let r2 = x[i] * x[i] + y[i] * y[i] + z[i] * z[i];
        assert!((r2 - 1.0).abs() < 1e-9, "row {i}: {r2}");
    }
}

#[test]
fn embed_skipped_on_non_revolution_surface() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.csv");
    let code = run_args(&[
        "trace",
        "--surface",
        "grusin",
        "--u0",
        "1",
        "--phi0",
        "1",
        "--smax",
        "1",
        "--embed",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    let header = fs::read_to_string(&out).unwrap().lines().next().unwrap().to_string();
    assert!(!header.contains(",x,"), "{header}");
}

#[test]
fn catenoid_blowup_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("escape.json");
    let phi0 = FRAC_PI_6.to_string();
    let code = run_args(&[
        "trace",
        "--surface",
        "catenoid",
        "--u0",
        "1",
        "--phi0",
        &phi0,
        "--smax",
        "1e7",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["termination"], "blow_up");
    let last = doc["samples"].as_array().unwrap().last().unwrap().clone();
    let v = last["v"].as_f64().unwrap();
    let spec = catalog_surface("catenoid", &BTreeMap::new()).unwrap();
    let c = clairaut_constant(&spec, 1.0, &CatenaryState::new(1.0, 0.0, FRAC_PI_6)).unwrap();
    let bound = quadrature_v(&spec, 1.0, c, 1.0, f64::INFINITY).unwrap();
    assert!((v - bound).abs() < 1e-6 * bound, "{v} vs {bound}");
}

#[test]
fn single_sample_trace_has_one_row() {
    let spec = catalog_surface("plane", &BTreeMap::new()).unwrap();
    let mut trace = trace_catenary(&spec, 1.0, CatenaryState::new(1.0, 0.0, 0.3), 1.0, 1e-9).unwrap();
    trace.samples.truncate(1);
    let table = trace_table(&trace, &spec, 1.0, false);
    let mut bytes = Vec::new();
    write_csv(&table, &mut bytes).unwrap();
    let text = String::from_utf8(bytes).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], format!("{},clairaut_c", BASE_COLUMNS.join(",")));
}

#[test]
fn trace_graph_plane_is_cosh() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let code = run_args(&[
        "trace-graph",
        "--surface",
        "plane",
        "--u0",
        "1",
        "--du0",
        "0",
        "--v0",
        "0",
        "--v1",
        "2",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    let table = read_csv(fs::File::open(&out).unwrap()).unwrap();
    let (u, v) = (table.column("u").unwrap(), table.column("v").unwrap());
    for (u, v) in u.iter().zip(&v) {
        assert!((u - v.cosh()).abs() < 1e-7);
    }
}

#[test]
fn analysis_commands_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    assert_eq!(
        run_args(&["clairaut", "--surface", "sphere", "--c", "0.5", "--out", path_str(&out)]),
        0
    );
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["critical_parallels"].as_array().unwrap().len(), 1);
    assert_eq!(doc["turning_points"].as_array().unwrap().len(), 2);

    assert_eq!(
        run_args(&["stability", "--surface", "sphere", "--out", path_str(&out)]),
        0
    );
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["critical_parallels"][0]["stability"], "stable");

    assert_eq!(
        run_args(&[
            "stability",
            "--surface",
            "revolution_profile",
            "--poly",
            "5,-4,1",
            "--poly-range",
            "0.05,4",
            "--out",
            path_str(&out),
        ]),
        0
    );
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    let labels: Vec<_> = doc["critical_parallels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["stability"].as_str().unwrap().to_string())
        .collect();
    assert!(labels.contains(&"unstable".to_string()), "{labels:?}");

    let code = run_args(&[
        "quadrature",
        "--surface",
        "catenoid",
        "--c",
        "0.5",
        "--u0",
        "1",
        "--u1",
        "inf",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert!((doc["delta_v"].as_f64().unwrap() - 0.17705472353).abs() < 1e-9);
}

#[test]
fn profile_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("profile.csv");
    let mut text = String::from("u,a\n");
    for i in 0..=200 {
        let u = 0.1 + 1.3 * i as f64 / 200.0;
        text.push_str(&format!("{u},{}\n", u.cos()));
    }
    fs::write(&profile, text).unwrap();
    let out = dir.path().join("s.json");
    let code = run_args(&[
        "stability",
        "--surface",
        "revolution_profile",
        "--profile",
        path_str(&profile),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    let u = doc["critical_parallels"][0]["u"].as_f64().unwrap();
    assert!((u - 0.8603335890193797).abs() < 1e-4, "{u}");
}

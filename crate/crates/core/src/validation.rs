//! The self-check suite behind `catenary validate`.
//!
//! Each item cross-checks one property against an oracle and reports the
//! measured quantity next to its threshold. Items are independent and run
//! through [`batch::map`]; the report keeps suite order.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::batch;
use crate::closed_forms::{
    cone_blowup_v, cone_catenary, euclidean_catenary, grusin_catenary, validate_closed_form, ClosedFormFamily,
};
use crate::curvature::{criterion_sweep, CurveJet2};
use crate::error::Result;
use crate::integrator::{
    flow_jet, trace_catenary, trace_catenary_with, trace_graph, CatenaryState, Extremum, Termination, Trace,
    TraceOptions,
};
use crate::metric::SurfaceSpec;
use crate::oracles::{conformal_geodesic, sphere_critical_root};
use crate::revolution::{clairaut_constant, critical_parallels, quadrature_v, turning_points, Stability};

/// Fixed acceptance thresholds, reported alongside the results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub closed_form: f64,
    pub trace_plane: f64,
    pub trace_family: f64,
    pub root_oracle: f64,
    pub root_anchor: f64,
    pub conservation: f64,
    pub extrema_spread: f64,
    pub turning_agreement: f64,
    pub stability_band: f64,
    pub cauchy: f64,
    pub escape_factor: f64,
    pub cross_oracle: f64,
    pub residual_equivalence: f64,
    pub curvature_equivalence: f64,
    pub geodesic_curvature: f64,
}

pub const THRESHOLDS: Thresholds = Thresholds {
    closed_form: 1e-10,
    trace_plane: 1e-7,
    trace_family: 1e-6,
    root_oracle: 1e-10,
    root_anchor: 5e-3,
    conservation: 1e-6,
    extrema_spread: 1e-4,
    turning_agreement: 1e-5,
    stability_band: 0.05,
    cauchy: 1e-8,
    escape_factor: 2.0,
    cross_oracle: 1e-5,
    residual_equivalence: 1e-9,
    curvature_equivalence: 1e-8,
    geodesic_curvature: 1e-8,
};

/// Trace tolerance used throughout the suite.
pub const SUITE_TOL: f64 = 1e-9;
/// Random jets per surface for the criterion-equivalence item.
pub const JETS_PER_SURFACE: usize = 10_000;
const SEED: u64 = 0x5eed_ca7e;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value < threshold`.
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value < threshold,
        }
    }

    /// Passes when `value <= threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            passed: value <= threshold,
            ..Self::below(name, value, threshold)
        }
    }

    /// A yes/no property; `value` is 1 when it holds.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            threshold: 1.0,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationItem {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub thresholds: Thresholds,
    pub items: Vec<ValidationItem>,
}

type ItemFn = fn() -> Result<Vec<Check>>;

const SUITE: [(u8, &str, ItemFn); 10] = [
    (1, "closed_form_residuals", closed_form_residuals),
    (2, "trace_vs_closed_form", trace_vs_closed_form),
    (3, "sphere_critical_parallel", sphere_critical_parallel),
    (4, "clairaut_conservation", clairaut_conservation),
    (5, "sphere_oscillation", sphere_oscillation),
    (6, "stability_dynamics", stability_dynamics),
    (7, "catenoid_escape", catenoid_escape),
    (8, "oracle_consistency", oracle_consistency),
    (9, "criterion_equivalence", criterion_equivalence),
    (10, "isometry_invariance", isometry_invariance),
];

pub fn item_names() -> Vec<&'static str> {
    SUITE.iter().map(|(_, n, _)| *n).collect()
}

/// Runs the items whose ids are in `only`, or all of them when `only` is empty.
pub fn run_suite(only: &[u8]) -> ValidationReport {
    let selected: Vec<_> = SUITE
        .iter()
        .filter(|(id, _, _)| only.is_empty() || only.contains(id))
        .collect();
    let items = batch::map(&selected, |(id, name, f)| run_item(*id, name, *f));
    ValidationReport {
        passed: items.iter().all(|i| i.passed),
        thresholds: THRESHOLDS,
        items,
    }
}

pub fn run_all() -> ValidationReport {
    run_suite(&[])
}

fn run_item(id: u8, name: &'static str, f: ItemFn) -> ValidationItem {
    log::info!("validation item {id}: {name}");
    match f() {
        Ok(checks) => ValidationItem {
            id,
            name,
            passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
            checks,
            error: None,
        },
        Err(e) => ValidationItem {
            id,
            name,
            passed: false,
            checks: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

fn families() -> Result<Vec<ClosedFormFamily>> {
    Ok(vec![
        ClosedFormFamily::Euclidean { mu: 1.0, nu: 0.0 },
        ClosedFormFamily::Euclidean { mu: 0.6, nu: -0.5 },
        ClosedFormFamily::Cone { mu: 1.0, nu: 0.0 },
        ClosedFormFamily::Cone { mu: 2.5, nu: 0.7 },
        ClosedFormFamily::GrusinCatenary { mu: 1.0, nu: 1.0 },
        ClosedFormFamily::GrusinCatenary { mu: 0.3, nu: 2.0 },
        ClosedFormFamily::GrusinGeodesic { u0: 1.0, v0: 0.0 },
        ClosedFormFamily::GrusinGeodesic { u0: 0.4, v0: 1.5 },
        ClosedFormFamily::HyperbolicQuadrature {
            r: 1.0,
            alpha: 1.0,
            c: 0.5,
        },
    ])
}

pub fn closed_form_residuals() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for fam in families()? {
        let grid = fam.default_grid(100)?;
        let (spec, alpha) = fam.natural_surface()?;
        let mut ode = 0.0f64;
        for &t in &grid {
            ode = ode.max(fam.ode_residual(t)?.abs());
        }
        let label = serde_label(&fam);
        if !matches!(fam, ClosedFormFamily::HyperbolicQuadrature { .. }) {
            checks.push(Check::below(format!("{label} ode"), ode, THRESHOLDS.closed_form));
        }
        checks.push(Check::below(
            format!("{label} catenary criterion"),
            validate_closed_form(&fam, &spec, alpha, &grid)?,
            THRESHOLDS.closed_form,
        ));
    }
    Ok(checks)
}

fn serde_label(fam: &ClosedFormFamily) -> String {
    match *fam {
        ClosedFormFamily::Euclidean { mu, nu }
        | ClosedFormFamily::Cone { mu, nu }
        | ClosedFormFamily::GrusinCatenary { mu, nu } => format!("{} μ={mu} ν={nu}", fam.name()),
        ClosedFormFamily::GrusinGeodesic { u0, v0 } => format!("{} u0={u0} v0={v0}", fam.name()),
        ClosedFormFamily::HyperbolicQuadrature { r, alpha, c } => format!("{} r={r} α={alpha} c={c}", fam.name()),
    }
}

fn graph_error<F: Fn(f64) -> Result<f64>>(trace: &Trace, exact: F) -> Result<f64> {
    let mut worst = 0.0f64;
    for s in &trace.samples {
        worst = worst.max((s.u - exact(s.v)?).abs());
    }
    Ok(worst)
}

pub fn trace_vs_closed_form() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let t = trace_graph(&SurfaceSpec::plane(), 1.0, 1.0, 0.0, (0.0, 2.0), SUITE_TOL)?;
    checks.push(Check::holds(
        "plane span reached",
        t.termination == Termination::ReachedSmax,
    ));
    checks.push(Check::below(
        "plane |u − cosh v|",
        graph_error(&t, |v| euclidean_catenary(1.0, 0.0, v))?,
        THRESHOLDS.trace_plane,
    ));

    let cone = SurfaceSpec::cone(1.0 / SQRT_2)?;
    let v_end = 0.9 * cone_blowup_v(0.0);
    let t = trace_graph(&cone, 1.0, 1.0, 0.0, (0.0, v_end), SUITE_TOL)?;
    checks.push(Check::holds(
        "cone span reached",
        t.termination == Termination::ReachedSmax,
    ));
    checks.push(Check::below(
        "cone |u − μ/√cos|",
        graph_error(&t, |v| cone_catenary(1.0, 0.0, v))?,
        THRESHOLDS.trace_family,
    ));

    let t = trace_graph(&SurfaceSpec::grusin(), 1.0, 1.0, 1.0, (0.0, 2.0), SUITE_TOL)?;
    checks.push(Check::holds(
        "grusin span reached",
        t.termination == Termination::ReachedSmax,
    ));
    checks.push(Check::below(
        "grusin |u − μ√(2v+ν)|",
        graph_error(&t, |v| grusin_catenary(1.0, 1.0, v))?,
        THRESHOLDS.trace_family,
    ));
    Ok(checks)
}

pub fn sphere_critical_parallel() -> Result<Vec<Check>> {
    let cps = critical_parallels(&SurfaceSpec::sphere(), 1.0, None)?;
    let mut checks = vec![Check::holds("exactly one critical parallel", cps.len() == 1)];
    if let Some(cp) = cps.first() {
        checks.push(Check::below(
            "|u* − bisection oracle|",
            (cp.u - sphere_critical_root()).abs(),
            THRESHOLDS.root_oracle,
        ));
        checks.push(Check::below("|u* − 0.86|", (cp.u - 0.86).abs(), THRESHOLDS.root_anchor));
        checks.push(Check::holds(
            "λ > 0",
            cp.lambda > 0.0 && cp.stability == Stability::Stable,
        ));
    }
    Ok(checks)
}

fn clairaut_drift(spec: &SurfaceSpec, alpha: f64, start: CatenaryState, s_max: f64) -> Result<(f64, Trace)> {
    let trace = trace_catenary(spec, alpha, start, s_max, SUITE_TOL)?;
    let c0 = clairaut_constant(spec, alpha, &start)?;
    let mut worst = 0.0f64;
    for s in &trace.samples {
        let c = clairaut_constant(
            spec,
            alpha,
            &CatenaryState {
                u: s.u,
                v: s.v,
                phi: s.phi,
                s: s.s,
            },
        )?;
        worst = worst.max((c - c0).abs());
    }
    Ok((worst / c0.abs().max(1e-12), trace))
}

pub fn clairaut_conservation() -> Result<Vec<Check>> {
    let cases = [
        ("sphere", SurfaceSpec::sphere(), CatenaryState::new(0.5, 0.0, 1.2)),
        (
            "cone",
            SurfaceSpec::cone(1.0 / SQRT_2)?,
            CatenaryState::new(1.0, 0.0, 1.0),
        ),
        ("catenoid", SurfaceSpec::catenoid(), CatenaryState::new(0.5, 0.0, 1.4)),
    ];
    let mut checks = Vec::new();
    for (name, spec, start) in cases {
        let (drift, trace) = clairaut_drift(&spec, 1.0, start, 10.0)?;
        checks.push(Check::holds(
            format!("{name} arc length 10 reached"),
            trace.termination == Termination::ReachedSmax,
        ));
        checks.push(Check::below(
            format!("{name} relative drift of c"),
            drift,
            THRESHOLDS.conservation,
        ));
    }
    Ok(checks)
}

/// Start on the sphere at `u*` with Clairaut constant `c`.
pub fn sphere_start(c: f64) -> CatenaryState {
    let u = sphere_critical_root();
    CatenaryState::new(u, 0.0, (c / (u * u.cos())).asin())
}

fn spread(xs: &[f64]) -> f64 {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if xs.is_empty() {
        f64::INFINITY
    } else {
        hi - lo
    }
}

pub fn sphere_oscillation() -> Result<Vec<Check>> {
    let spec = SurfaceSpec::sphere();
    let trace = trace_catenary(&spec, 1.0, sphere_start(0.5), 100.0, SUITE_TOL)?;
    let tps = trace.turning_points();
    let maxima: Vec<f64> = tps.iter().filter(|t| t.kind == Extremum::Max).map(|t| t.u).collect();
    let minima: Vec<f64> = tps.iter().filter(|t| t.kind == Extremum::Min).map(|t| t.u).collect();
    let roots = turning_points(&spec, 1.0, 0.5)?;
    let u_star = sphere_critical_root();
    let mut checks = vec![
        Check::holds("arc length 100 reached", trace.termination == Termination::ReachedSmax),
        Check::holds("several maxima and minima", maxima.len() >= 3 && minima.len() >= 3),
        Check::below("spread of maxima", spread(&maxima), THRESHOLDS.extrema_spread),
        Check::below("spread of minima", spread(&minima), THRESHOLDS.extrema_spread),
        Check::holds("two turning points from ρ = c", roots.len() == 2),
    ];
    if roots.len() == 2 {
        let (um, u_big) = (roots[0], roots[1]);
        checks.push(Check::holds("u_m < u* < u_M", um < u_star && u_star < u_big));
        let dmax = maxima.iter().map(|u| (u - u_big).abs()).fold(0.0, f64::max);
        let dmin = minima.iter().map(|u| (u - um).abs()).fold(0.0, f64::max);
        checks.push(Check::below("maxima vs u_M", dmax, THRESHOLDS.turning_agreement));
        checks.push(Check::below("minima vs u_m", dmin, THRESHOLDS.turning_agreement));
    }
    Ok(checks)
}

/// Largest `|u − u₀|` over the trace, and the first `s` where it exceeds
/// `band`.
fn band_exit(trace: &Trace, u0: f64, band: f64) -> (f64, Option<f64>) {
    let mut worst = 0.0f64;
    let mut exit = None;
    for s in &trace.samples {
        let d = (s.u - u0).abs();
        worst = worst.max(d);
        if d > band && exit.is_none() {
            exit = Some(s.s);
        }
    }
    (worst, exit)
}

/// The abstract profile `a(u) = 1 + (u − 2)²`.
pub fn custom_profile() -> Result<SurfaceSpec> {
    SurfaceSpec::polynomial_profile(vec![5.0, -4.0, 1.0], 0.05, 4.0)
}

pub fn stability_dynamics() -> Result<Vec<Check>> {
    let u_star = sphere_critical_root();
    let start = CatenaryState::new(u_star + 0.01, 0.0, FRAC_PI_2);
    let trace = trace_catenary(&SurfaceSpec::sphere(), 1.0, start, 50.0, SUITE_TOL)?;
    let (worst, _) = band_exit(&trace, u_star, THRESHOLDS.stability_band);

    let u_unstable = 5.0 / 3.0;
    let start = CatenaryState::new(u_unstable + 0.01, 0.0, FRAC_PI_2);
    let custom = trace_catenary(&custom_profile()?, 1.0, start, 50.0, SUITE_TOL)?;
    let (_, exit) = band_exit(&custom, u_unstable, THRESHOLDS.stability_band);
    Ok(vec![
        Check::holds(
            "sphere trace reaches s = 50",
            trace.termination == Termination::ReachedSmax,
        ),
        Check::at_most("sphere max |u − u*|", worst, THRESHOLDS.stability_band),
        Check::holds(
            "custom profile leaves the band before s = 50",
            exit.is_some_and(|s| s < 50.0),
        ),
    ])
}

/// `(φ₀, Δv bound)` for the catenoid catenary from `u = 1` with Clairaut
/// constant `c`, heading outward.
pub fn catenoid_escape_start(c: f64) -> CatenaryState {
    CatenaryState::new(1.0, 0.0, (c / SQRT_2).asin())
}

pub fn catenoid_escape() -> Result<Vec<Check>> {
    let spec = SurfaceSpec::catenoid();
    let c = 0.5;
    let bound = quadrature_v(&spec, 1.0, c, 1.0, f64::INFINITY)?;
    let truncations: Vec<f64> = (1..=8)
        .map(|k| quadrature_v(&spec, 1.0, c, 1.0, 10f64.powi(k)))
        .collect::<Result<_>>()?;
    let last_step = (truncations[7] - truncations[6]).abs();
    let to_limit = (bound - truncations[7]).abs();
    let monotone = truncations.windows(2).all(|w| w[1] >= w[0]);

    let mut opts = TraceOptions::new(SUITE_TOL);
    opts.max_steps = 1_000_000;
    let trace = trace_catenary_with(&spec, 1.0, catenoid_escape_start(c), 1e7, &opts)?;
    let v_end = trace.last().v;
    Ok(vec![
        Check::holds("truncations increase", monotone),
        Check::below("|I(1e8) − I(1e7)|", last_step, THRESHOLDS.cauchy),
        Check::below("|I(∞) − I(1e8)|", to_limit, THRESHOLDS.cauchy),
        Check::holds("trace ends in blow_up", trace.termination == Termination::BlowUp),
        Check::at_most(
            "v at blow-up / quadrature bound",
            v_end / bound,
            THRESHOLDS.escape_factor,
        ),
        Check::at_most(
            "quadrature bound / v at blow-up",
            bound / v_end,
            THRESHOLDS.escape_factor,
        ),
    ])
}

// du/dv of the unit-speed state.
fn graph_slope(spec: &SurfaceSpec, st: &[f64; 3]) -> Result<f64> {
    let g = spec.eval(st[0], st[1])?.g;
    Ok(g * st[2].cos() / st[2].sin())
}

/// Compares the three formulations on one monotone arc `v ∈ [va, vb]` of
/// `trace`, and the conformal oracle against the trace up to `s_oracle`.
#[allow(clippy::too_many_arguments)]
fn cross_check(
    label: &str,
    spec: &SurfaceSpec,
    c: f64,
    trace: &Trace,
    va: f64,
    vb: f64,
    start: CatenaryState,
    s_oracle: f64,
) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let s_a = (0..trace.samples.len())
        .find(|&k| trace.samples[k].v >= va)
        .map(|k| trace.samples[k].s)
        .unwrap_or(0.0);
    let state_a = trace
        .state_at(s_a)
        .ok_or(crate::CatenaryError::Config("arc outside trace".into()))?;
    let (u_a, v_a) = (state_a[0], state_a[1]);
    let graph = trace_graph(spec, 1.0, u_a, graph_slope(spec, &state_a)?, (v_a, vb), SUITE_TOL)?;
    let mut graph_gap = 0.0f64;
    let mut quad_gap = 0.0f64;
    let n = 50;
    for k in 1..=n {
        let v = v_a + (vb - v_a) * k as f64 / n as f64;
        let (Some(u_graph), Some(u_trace)) = (graph.u_at_v(v), trace.u_at_v(v)) else {
            graph_gap = f64::INFINITY;
            break;
        };
        graph_gap = graph_gap.max((u_graph - u_trace).abs());
        // v increases along the arc whichever way u moves.
        let dv = quadrature_v(spec, 1.0, c, u_a, u_trace)?.abs();
        quad_gap = quad_gap.max((dv - (v - v_a)).abs());
    }
    checks.push(Check::below(
        format!("{label} graph vs arc-length u(v)"),
        graph_gap,
        THRESHOLDS.cross_oracle,
    ));
    checks.push(Check::below(
        format!("{label} quadrature vs traced Δv"),
        quad_gap,
        THRESHOLDS.cross_oracle,
    ));

    let oracle = conformal_geodesic(spec, 1.0, start, s_oracle, 1e-3)?;
    let mut oracle_gap = 0.0f64;
    for p in &oracle {
        let Some(y) = trace.state_at(p.s) else { continue };
        oracle_gap = oracle_gap.max((y[0] - p.u).abs()).max((y[1] - p.v).abs());
    }
    let covered = oracle.last().is_some_and(|p| p.s >= s_oracle);
    checks.push(Check::holds(
        format!("{label} conformal oracle covers the span"),
        covered,
    ));
    checks.push(Check::below(
        format!("{label} conformal oracle vs trace"),
        oracle_gap,
        THRESHOLDS.cross_oracle,
    ));
    Ok(checks)
}

pub fn oracle_consistency() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let sphere = SurfaceSpec::sphere();
    let c = 0.5;
    let start = sphere_start(c);
    let trace = trace_catenary(&sphere, 1.0, start, 20.0, SUITE_TOL)?;
    let tps = trace.turning_points();
    if tps.len() >= 2 {
        let (a, b) = (tps[0], tps[1]);
        // Full half-period between consecutive extrema. The endpoints are the
        // roots of ρ = c: Δv is only √-sensitive to them.
        let roots = turning_points(&sphere, 1.0, c)?;
        let dv = match roots[..] {
            [um, u_big] => quadrature_v(&sphere, 1.0, c, um, u_big)?,
            _ => f64::NAN,
        };
        checks.push(Check::below(
            "sphere half-period Δv",
            (dv - (b.v - a.v)).abs(),
            THRESHOLDS.cross_oracle,
        ));
        // Interior of the monotone arc; the graph slope is unbounded at its ends.
        let width = b.v - a.v;
        checks.extend(cross_check(
            "sphere",
            &sphere,
            c,
            &trace,
            a.v + 0.1 * width,
            b.v - 0.1 * width,
            start,
            10.0,
        )?);
    } else {
        checks.push(Check::holds("sphere trace has two turning points", false));
    }

    let cat = SurfaceSpec::catenoid();
    let start = catenoid_escape_start(c);
    let trace = trace_catenary(&cat, 1.0, start, 50.0, SUITE_TOL)?;
    checks.extend(cross_check("catenoid", &cat, c, &trace, 0.0, 0.15, start, 3.0)?);
    Ok(checks)
}

pub fn catalog_for_jets() -> Result<Vec<(&'static str, SurfaceSpec)>> {
    Ok(vec![
        ("plane", SurfaceSpec::plane()),
        ("cylinder", SurfaceSpec::cylinder()),
        ("sphere", SurfaceSpec::sphere()),
        ("hyperbolic", SurfaceSpec::hyperbolic(1.0)?),
        ("cone", SurfaceSpec::cone(1.0 / SQRT_2)?),
        ("catenoid", SurfaceSpec::catenoid()),
        ("helicoid", SurfaceSpec::helicoid()),
        ("binormal", SurfaceSpec::binormal(0.5)?),
        ("grusin", SurfaceSpec::grusin()),
    ])
}

/// `n` jets on `spec` with `α` drawn from the seeded generator: the first
/// half arbitrary, the second half α-catenary jets at random speed and
/// tangential acceleration.
pub fn random_jets(spec: &SurfaceSpec, alpha: f64, n: usize, seed: u64) -> Vec<CurveJet2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = spec.domain();
    let u_lo = d.u_min.max(0.0) + 0.05;
    let u_hi = if d.u_max.is_finite() { d.u_max - 0.05 } else { 3.0 };
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let u = rng.gen_range(u_lo..u_hi);
        let v = rng.gen_range(-3.0..3.0);
        let Ok(m) = spec.eval(u, v) else { continue };
        let jet = if out.len() < n / 2 {
            CurveJet2 {
                u,
                v,
                du: rng.gen_range(-2.0..2.0),
                dv: rng.gen_range(-2.0..2.0),
                ddu: rng.gen_range(-3.0..3.0),
                ddv: rng.gen_range(-3.0..3.0),
            }
        } else {
            let phi = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let unit = flow_jet(&m, alpha, u, v, phi);
            let speed = rng.gen_range(0.2..5.0);
            let tangential = rng.gen_range(-3.0..3.0);
            let j = unit.rescaled(speed);
            CurveJet2 {
                ddu: j.ddu + tangential * j.du,
                ddv: j.ddv + tangential * j.dv,
                ..j
            }
        };
        if (jet.du * jet.du + m.g * m.g * jet.dv * jet.dv).sqrt() < 1e-3 {
            continue;
        }
        out.push(jet);
    }
    out
}

pub fn criterion_equivalence() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (k, (name, spec)) in catalog_for_jets()?.into_iter().enumerate() {
        let alpha = 1.0 + 0.25 * k as f64;
        let jets = random_jets(&spec, alpha, JETS_PER_SURFACE, SEED + k as u64);
        let pairs = criterion_sweep(&spec, alpha, &jets);
        let mut mismatches = 0usize;
        let mut catenaries = 0usize;
        let mut evaluated = 0usize;
        for p in pairs.iter().flatten() {
            evaluated += 1;
            let by_residual = p.residual.abs() < THRESHOLDS.residual_equivalence;
            let by_curvature = p.curvature_gap.abs() < THRESHOLDS.curvature_equivalence;
            if by_residual != by_curvature {
                mismatches += 1;
            }
            if by_residual {
                catenaries += 1;
            }
        }
        checks.push(Check::holds(
            format!("{name} all jets evaluated"),
            evaluated == jets.len(),
        ));
        checks.push(Check::holds(
            format!("{name} both classes present"),
            catenaries >= jets.len() / 2 && catenaries < jets.len(),
        ));
        checks.push(Check::at_most(
            format!("{name} criterion mismatches"),
            mismatches as f64,
            0.0,
        ));

        let start = CatenaryState::new(if spec.domain().u_max.is_finite() { 0.4 } else { 1.0 }, 0.1, 0.9);
        let trace = trace_catenary(&spec, 0.0, start, 5.0, SUITE_TOL)?;
        let kappa = trace.samples.iter().map(|s| s.kappa.abs()).fold(0.0, f64::max);
        checks.push(Check::below(
            format!("{name} α=0 max |κ|"),
            kappa,
            THRESHOLDS.geodesic_curvature,
        ));
    }
    Ok(checks)
}

pub fn isometry_invariance() -> Result<Vec<Check>> {
    let starts = [
        CatenaryState::new(0.5, 0.0, 1.4),
        CatenaryState::new(1.0, 0.3, 2.5),
        CatenaryState::new(2.0, -1.0, -0.7),
    ];
    let helicoid = SurfaceSpec::helicoid();
    let catenoid = SurfaceSpec::catenoid();
    let binormal = SurfaceSpec::binormal(1.0)?;
    let mut checks = Vec::new();
    for (k, st) in starts.iter().enumerate() {
        let h = trace_catenary(&helicoid, 1.0, *st, 10.0, SUITE_TOL)?;
        let c = trace_catenary(&catenoid, 1.0, *st, 10.0, SUITE_TOL)?;
        let b = trace_catenary(&binormal, 1.0, *st, 10.0, SUITE_TOL)?;
        checks.push(Check::holds(
            format!("start {k}: helicoid = catenoid"),
            h.samples == c.samples,
        ));
        checks.push(Check::holds(
            format!("start {k}: binormal(1) = helicoid"),
            b.samples == h.samples,
        ));
    }
    Ok(checks)
}

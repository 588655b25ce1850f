//! Tracing α-catenaries as initial value problems.
//!
//! Two independent formulations are provided:
//!
//! * [`trace_catenary`] integrates the unit-speed tangent-angle flow
//!   `u′ = cos φ`, `v′ = sin φ / G`, `φ′ = −sin φ (α/u + G_u/G)` in arc length `s`,
//!   where `φ` is measured from `∂u` toward `∂v`. Unit speed holds by
//!   construction.
//! * [`trace_graph`] integrates the second-order graph equation for `u(v)`.
//!
//! Both use the Dormand–Prince 5(4) stepper from [`crate::ode`] and stop on
//! the events listed in [`Termination`]. Events are localized by bisection on
//! the continuous extension of the step in which they occur.

use serde::Serialize;

use crate::batch;
use crate::curvature::{residual_with, CurveJet2};
use crate::error::{CatenaryError, Result};
use crate::metric::{MetricValue, SurfaceSpec};
use crate::ode::{DenseSegment, Dopri5, OdeSystem, StepError, StepperOptions};

/// A point of a unit-speed catenary with its tangent angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatenaryState {
    pub u: f64,
    pub v: f64,
    pub phi: f64,
    pub s: f64,
}

impl CatenaryState {
    pub fn new(u: f64, v: f64, phi: f64) -> Self {
        Self { u, v, phi, s: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The requested end of the span was reached.
    ReachedSmax,
    HitLowerU,
    BlowUp,
    LeftDomain,
    /// Step size underflow, or the step budget ran out.
    StepUnderflow,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::ReachedSmax => "reached_smax",
            Termination::HitLowerU => "hit_lower_u",
            Termination::BlowUp => "blow_up",
            Termination::LeftDomain => "left_domain",
            Termination::StepUnderflow => "step_underflow",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSample {
    pub s: f64,
    pub u: f64,
    pub v: f64,
    pub phi: f64,
    pub kappa: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct TraceStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    pub max_abs_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// State `(u, v, φ)` over arc length.
    ArcLength,
    /// State `(u, du/dv, s)` over `v`.
    Graph,
}

/// Whether a turning point is a local maximum or minimum of `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoint {
    pub s: f64,
    pub u: f64,
    pub v: f64,
    pub kind: Extremum,
}

/// A traced curve. Immutable once returned.
#[derive(Debug, Clone, Serialize)]
pub struct Trace {
    pub samples: Vec<TraceSample>,
    pub termination: Termination,
    /// Set by [`trace_graph`] when `|du/dv|` exceeded `1/tol`.
    pub vertical_tangent: bool,
    pub formulation: Formulation,
    pub stats: TraceStats,
    #[serde(skip)]
    dense: Vec<DenseSegment<3>>,
}

/// Limits and thresholds of a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub tol: f64,
    /// Blow-up once `u > blowup_factor · u₀`.
    pub blowup_factor: f64,
    /// Blow-up once `|dφ/ds|` exceeds this.
    pub max_turn_rate: f64,
    /// Events fire at `u_min + margin` and `u_max − margin`.
    pub margin: f64,
    /// Event localization tolerance in the independent variable, relative
    /// to its magnitude once that exceeds 1.
    pub event_tol: f64,
    pub max_steps: usize,
    pub h_max: f64,
}

impl TraceOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            blowup_factor: 1e6,
            max_turn_rate: 1e12,
            margin: 1e-9,
            event_tol: 1e-12,
            max_steps: 10_000_000,
            h_max: f64::INFINITY,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(1e-12..=1e-3).contains(&self.tol) {
            return Err(CatenaryError::Config(format!(
                "tolerance must lie in [1e-12, 1e-3], got {}",
                self.tol
            )));
        }
        if !(self.blowup_factor > 1.0) || !(self.h_max > 0.0) || !(self.margin >= 0.0) {
            return Err(CatenaryError::Config("invalid trace options".into()));
        }
        Ok(())
    }
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self::new(1e-9)
    }
}

/// `(du/ds, dv/ds, dφ/ds)` of the unit-speed α-catenary flow.
pub fn catenary_rhs(spec: &SurfaceSpec, alpha: f64, state: &CatenaryState) -> Result<[f64; 3]> {
    if !(state.u > 0.0) {
        return Err(CatenaryError::Domain { u: state.u, v: state.v });
    }
    let m = spec.eval(state.u, state.v)?;
    Ok(flow(&m, alpha, state.u, state.phi))
}

fn flow(m: &MetricValue, alpha: f64, u: f64, phi: f64) -> [f64; 3] {
    let (sin, cos) = phi.sin_cos();
    [cos, sin / m.g, -sin * (alpha / u + m.g_u / m.g)]
}

/// Exact 2-jet (in arc length) of the flow through `(u, v, φ)`.
pub fn flow_jet(m: &MetricValue, alpha: f64, u: f64, v: f64, phi: f64) -> CurveJet2 {
    let (sin, cos) = phi.sin_cos();
    let [du, dv, dphi] = flow(m, alpha, u, phi);
    let ddu = -sin * dphi;
    let ddv = cos * dphi / m.g - sin * (m.g_u * du + m.g_v * dv) / (m.g * m.g);
    CurveJet2 { u, v, du, dv, ddu, ddv }
}

/// Right-hand side `ü` of the graph equation for `u(v)`.
fn graph_acceleration(m: &MetricValue, alpha: f64, u: f64, p: f64) -> f64 {
    let g2 = m.g * m.g;
    (alpha * m.g / u * (p * p + g2) + m.g_v * p + 2.0 * m.g_u * p * p + g2 * m.g_u) / m.g
}

struct ArcLengthFlow<'a> {
    spec: &'a SurfaceSpec,
    alpha: f64,
}

impl OdeSystem<3> for ArcLengthFlow<'_> {
    fn rhs(&self, _s: f64, y: &[f64; 3]) -> Option<[f64; 3]> {
        let m = self.spec.eval(y[0], y[1]).ok()?;
        Some(flow(&m, self.alpha, y[0], y[2]))
    }
}

struct GraphFlow<'a> {
    spec: &'a SurfaceSpec,
    alpha: f64,
}

impl OdeSystem<3> for GraphFlow<'_> {
    fn rhs(&self, v: f64, y: &[f64; 3]) -> Option<[f64; 3]> {
        let (u, p) = (y[0], y[1]);
        let m = self.spec.eval(u, v).ok()?;
        Some([p, graph_acceleration(&m, self.alpha, u, p), (p * p + m.g * m.g).sqrt()])
    }
}

// Signed event function: positive once the event has happened.
type EventFn<'a> = Box<dyn Fn(f64, &[f64; 3]) -> f64 + 'a>;

struct Event<'a> {
    f: EventFn<'a>,
    termination: Termination,
    vertical: bool,
}

fn locate(seg: &DenseSegment<3>, f: &EventFn<'_>, tol: f64) -> f64 {
    let (mut lo, mut hi) = (seg.t0, seg.t1());
    if f(lo, &seg.eval(lo)) > 0.0 {
        return lo;
    }
    while hi - lo > tol * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid, &seg.eval(mid)) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // The inside bracket, so the recorded point is still evaluable.
    lo
}

struct Run {
    segments: Vec<DenseSegment<3>>,
    end_t: f64,
    end_y: [f64; 3],
    termination: Termination,
    vertical: bool,
    stats: TraceStats,
}

fn drive<S: OdeSystem<3>>(
    sys: &S,
    t0: f64,
    t_end: f64,
    y0: [f64; 3],
    opts: &TraceOptions,
    events: &[Event<'_>],
) -> Run {
    let mut stepper_opts = StepperOptions::with_tol(opts.tol);
    stepper_opts.h_max = opts.h_max;
    let mut run = Run {
        segments: Vec::new(),
        end_t: t0,
        end_y: y0,
        termination: Termination::ReachedSmax,
        vertical: false,
        stats: TraceStats::default(),
    };
    let Some(mut stepper) = Dopri5::new(sys, t0, y0, stepper_opts) else {
        run.termination = Termination::LeftDomain;
        return run;
    };

    loop {
        if stepper.t() >= t_end {
            run.termination = Termination::ReachedSmax;
            break;
        }
        if run.segments.len() >= opts.max_steps {
            log::warn!("step budget of {} exhausted", opts.max_steps);
            run.termination = Termination::StepUnderflow;
            break;
        }
        let seg = match stepper.step(t_end) {
            Ok(seg) => seg,
            Err(StepError::Underflow) => {
                run.termination = Termination::StepUnderflow;
                break;
            }
        };
        let (t1, y1) = (seg.t1(), seg.end());
        // Earliest event in this step wins.
        let fired = events
            .iter()
            .filter(|e| (e.f)(t1, &y1) > 0.0)
            .map(|e| (locate(&seg, &e.f, opts.event_tol), e))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        match fired {
            Some((t_ev, ev)) => {
                run.end_t = t_ev;
                run.end_y = seg.eval(t_ev);
                if t_ev > seg.t0 {
                    run.segments.push(seg);
                }
                run.termination = ev.termination;
                run.vertical = ev.vertical;
                break;
            }
            None => run.segments.push(seg),
        }
    }
    if matches!(run.termination, Termination::ReachedSmax | Termination::StepUnderflow) {
        run.end_t = stepper.t();
        run.end_y = stepper.y();
    }
    run.stats.accepted_steps = stepper.stats.accepted;
    run.stats.rejected_steps = stepper.stats.rejected;
    run.stats.rhs_evaluations = stepper.stats.evaluations;
    run
}

fn domain_events<'a>(
    spec: &'a SurfaceSpec,
    opts: &TraceOptions,
    u0: f64,
    u_index: usize,
    v_of: fn(f64, &[f64; 3]) -> f64,
) -> Vec<Event<'a>> {
    let d = spec.domain();
    let margin = opts.margin;
    let blow = opts.blowup_factor * u0;
    let mut events: Vec<Event<'a>> = vec![
        Event {
            f: Box::new(move |_, y| d.u_min + margin - y[u_index]),
            termination: Termination::HitLowerU,
            vertical: false,
        },
        Event {
            f: Box::new(move |_, y| y[u_index] - blow),
            termination: Termination::BlowUp,
            vertical: false,
        },
    ];
    if d.u_max.is_finite() {
        events.push(Event {
            f: Box::new(move |_, y| y[u_index] - (d.u_max - margin)),
            termination: Termination::LeftDomain,
            vertical: false,
        });
    }
    if d.v_max.is_finite() {
        events.push(Event {
            f: Box::new(move |t, y| v_of(t, y) - d.v_max),
            termination: Termination::LeftDomain,
            vertical: false,
        });
    }
    if d.v_min.is_finite() {
        events.push(Event {
            f: Box::new(move |t, y| d.v_min - v_of(t, y)),
            termination: Termination::LeftDomain,
            vertical: false,
        });
    }
    events
}

fn check_start(spec: &SurfaceSpec, u: f64, v: f64) -> Result<MetricValue> {
    if !(u > 0.0) {
        return Err(CatenaryError::Config(format!(
            "starting point must have u > 0, got u = {u}"
        )));
    }
    spec.eval(u, v)
}

/// Traces the α-catenary through `start` over arc length up to `s_max`.
pub fn trace_catenary(spec: &SurfaceSpec, alpha: f64, start: CatenaryState, s_max: f64, tol: f64) -> Result<Trace> {
    trace_catenary_with(spec, alpha, start, s_max, &TraceOptions::new(tol))
}

pub fn trace_catenary_with(
    spec: &SurfaceSpec,
    alpha: f64,
    start: CatenaryState,
    s_max: f64,
    opts: &TraceOptions,
) -> Result<Trace> {
    opts.validate()?;
    if !alpha.is_finite() || !start.phi.is_finite() || !start.s.is_finite() {
        return Err(CatenaryError::Config("non-finite alpha or start state".into()));
    }
    if !(s_max > start.s) {
        return Err(CatenaryError::Config(format!(
            "s_max ({s_max}) must exceed the starting arc length ({})",
            start.s
        )));
    }
    check_start(spec, start.u, start.v)?;

    let sys = ArcLengthFlow { spec, alpha };
    let mut events = domain_events(spec, opts, start.u, 0, |_, y| y[1]);
    let rate = opts.max_turn_rate;
    events.push(Event {
        f: Box::new(move |_, y| match spec.eval(y[0], y[1]) {
            Ok(m) => flow(&m, alpha, y[0], y[2])[2].abs() - rate,
            Err(_) => -1.0,
        }),
        termination: Termination::BlowUp,
        vertical: false,
    });

    let y0 = [start.u, start.v, start.phi];
    let run = drive(&sys, start.s, s_max, y0, opts, &events);

    let sample = |s: f64, y: &[f64; 3]| -> Option<TraceSample> {
        let m = spec.eval(y[0], y[1]).ok()?;
        let jet = flow_jet(&m, alpha, y[0], y[1], y[2]);
        let kappa = crate::curvature::geodesic_curvature(spec, &jet).ok()?;
        Some(TraceSample {
            s,
            u: y[0],
            v: y[1],
            phi: y[2],
            kappa,
            residual: residual_with(&m, alpha, &jet).ok()?,
        })
    };
    Ok(assemble(run, Formulation::ArcLength, sample))
}

fn assemble<F>(run: Run, formulation: Formulation, sample: F) -> Trace
where
    F: Fn(f64, &[f64; 3]) -> Option<TraceSample>,
{
    let mut samples = Vec::with_capacity(run.segments.len() + 2);
    if let Some(first) = run.segments.first() {
        samples.extend(sample(first.t0, &first.start()));
    }
    for seg in &run.segments {
        if seg.t1() < run.end_t {
            samples.extend(sample(seg.t1(), &seg.end()));
        }
    }
    match samples.last() {
        Some(last) if last_param(last, formulation) >= run.end_t => {}
        _ => samples.extend(sample(run.end_t, &run.end_y)),
    }
    if samples.is_empty() {
        samples.extend(sample(run.end_t, &run.end_y));
    }
    let mut stats = run.stats;
    stats.max_abs_residual = samples.iter().map(|s| s.residual.abs()).fold(0.0, f64::max);
    Trace {
        samples,
        termination: run.termination,
        vertical_tangent: run.vertical,
        formulation,
        stats,
        dense: run.segments,
    }
}

fn last_param(sample: &TraceSample, formulation: Formulation) -> f64 {
    match formulation {
        Formulation::ArcLength => sample.s,
        Formulation::Graph => sample.v,
    }
}

/// Traces the α-catenary `u = u(v)` from `u(v₀) = u₀`, `u′(v₀) = du₀` over
/// `v_span = (v₀, v₁)`, `v₁ > v₀`.
pub fn trace_graph(spec: &SurfaceSpec, alpha: f64, u0: f64, du0: f64, v_span: (f64, f64), tol: f64) -> Result<Trace> {
    trace_graph_with(spec, alpha, u0, du0, v_span, &TraceOptions::new(tol))
}

pub fn trace_graph_with(
    spec: &SurfaceSpec,
    alpha: f64,
    u0: f64,
    du0: f64,
    v_span: (f64, f64),
    opts: &TraceOptions,
) -> Result<Trace> {
    opts.validate()?;
    let (v0, v1) = v_span;
    if !alpha.is_finite() || !du0.is_finite() || !(v1 > v0) {
        return Err(CatenaryError::Config(format!(
            "graph trace needs finite data and an increasing span, got ({v0}, {v1})"
        )));
    }
    let d = spec.domain();
    if v0 < d.v_min || v1 > d.v_max {
        return Err(CatenaryError::Config(format!(
            "span ({v0}, {v1}) leaves the surface's v-range ({}, {})",
            d.v_min, d.v_max
        )));
    }
    check_start(spec, u0, v0)?;

    let sys = GraphFlow { spec, alpha };
    let mut events = domain_events(spec, opts, u0, 0, |v, _| v);
    let steep = 1.0 / opts.tol;
    events.push(Event {
        f: Box::new(move |_, y| y[1].abs() - steep),
        termination: Termination::LeftDomain,
        vertical: true,
    });
    let run = drive(&sys, v0, v1, [u0, du0, 0.0], opts, &events);

    let sample = |v: f64, y: &[f64; 3]| -> Option<TraceSample> {
        let (u, p) = (y[0], y[1]);
        let m = spec.eval(u, v).ok()?;
        let jet = CurveJet2::graph(u, v, p, graph_acceleration(&m, alpha, u, p));
        Some(TraceSample {
            s: y[2],
            u,
            v,
            phi: m.g.atan2(p),
            kappa: crate::curvature::geodesic_curvature(spec, &jet).ok()?,
            residual: residual_with(&m, alpha, &jet).ok()?,
        })
    };
    Ok(assemble(run, Formulation::Graph, sample))
}

/// Traces many catenaries from different starts; parallel with the
/// `parallel` feature. Results are in input order.
pub fn trace_many(
    spec: &SurfaceSpec,
    alpha: f64,
    starts: &[CatenaryState],
    s_max: f64,
    opts: &TraceOptions,
) -> Vec<Result<Trace>> {
    batch::map(starts, |st| trace_catenary_with(spec, alpha, *st, s_max, opts))
}

pub fn trace_many_sequential(
    spec: &SurfaceSpec,
    alpha: f64,
    starts: &[CatenaryState],
    s_max: f64,
    opts: &TraceOptions,
) -> Vec<Result<Trace>> {
    batch::map_sequential(starts, |st| trace_catenary_with(spec, alpha, *st, s_max, opts))
}

impl Trace {
    pub fn first(&self) -> &TraceSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &TraceSample {
        &self.samples[self.samples.len() - 1]
    }

    /// Range of the independent variable covered by the dense output.
    pub fn span(&self) -> Option<(f64, f64)> {
        Some((self.dense.first()?.t0, self.dense.last()?.t1()))
    }

    /// Interpolated raw state at parameter `t` (`s` for arc-length traces,
    /// `v` for graph traces).
    pub fn state_at(&self, t: f64) -> Option<[f64; 3]> {
        let k = self.dense.partition_point(|seg| seg.t1() < t);
        let seg = self.dense.get(k)?;
        (t >= seg.t0 && t <= seg.t1()).then(|| seg.eval(t))
    }

    fn v_component(&self, t: f64, y: &[f64; 3]) -> f64 {
        match self.formulation {
            Formulation::ArcLength => y[1],
            Formulation::Graph => t,
        }
    }

    /// `u` where the curve passes through the given `v`; the first crossing
    /// is returned. `None` if the trace does not reach `v`.
    pub fn u_at_v(&self, v: f64) -> Option<f64> {
        match self.formulation {
            Formulation::Graph => self.state_at(v).map(|y| y[0]),
            Formulation::ArcLength => {
                for seg in &self.dense {
                    let (va, vb) = (seg.start()[1], seg.end()[1]);
                    if (va - v) * (vb - v) > 0.0 {
                        continue;
                    }
                    let sign = if vb >= va { 1.0 } else { -1.0 };
                    let (mut lo, mut hi) = (seg.t0, seg.t1());
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if sign * (seg.eval(mid)[1] - v) < 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                        if hi - lo <= 1e-15 * mid.abs().max(1.0) {
                            break;
                        }
                    }
                    return Some(seg.eval(0.5 * (lo + hi))[0]);
                }
                None
            }
        }
    }

    /// Local extrema of `u` along the trace, located on the dense output.
    pub fn turning_points(&self) -> Vec<TurningPoint> {
        // Sign of du/dt: cos φ over arc length, u′ over v.
        let rate = |y: &[f64; 3]| match self.formulation {
            Formulation::ArcLength => y[2].cos(),
            Formulation::Graph => y[1],
        };
        let mut out = Vec::new();
        for seg in &self.dense {
            let (ra, rb) = (rate(&seg.start()), rate(&seg.end()));
            if ra == 0.0 || ra * rb >= 0.0 {
                continue;
            }
            let (mut lo, mut hi) = (seg.t0, seg.t1());
            while hi - lo > 1e-13 * hi.abs().max(1.0) {
                let mid = 0.5 * (lo + hi);
                if rate(&seg.eval(mid)) * ra > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            let y = seg.eval(t);
            let s = match self.formulation {
                Formulation::ArcLength => t,
                Formulation::Graph => y[2],
            };
            out.push(TurningPoint {
                s,
                u: y[0],
                v: self.v_component(t, &y),
                kind: if ra > 0.0 { Extremum::Max } else { Extremum::Min },
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    const U_STAR: f64 = 0.860_333_589_019_379_8;

    #[test]
    fn rhs_examples() {
        let plane = SurfaceSpec::plane();
        let r = catenary_rhs(&plane, 1.0, &CatenaryState::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(r, [1.0, 0.0, -0.0]);
        let r = catenary_rhs(&plane, 1.0, &CatenaryState::new(1.0, 0.0, FRAC_PI_2)).unwrap();
        assert!((r[0]).abs() < 1e-16 && (r[1] - 1.0).abs() < 1e-16 && (r[2] + 1.0).abs() < 1e-16);

        let sphere = SurfaceSpec::sphere();
        let r = catenary_rhs(&sphere, 1.0, &CatenaryState::new(U_STAR, 0.0, FRAC_PI_2)).unwrap();
        assert!(r[0].abs() < 1e-16);
        assert!((r[1] - 1.0 / U_STAR.cos()).abs() < 1e-14);
        assert!(r[2].abs() < 1e-15);

        assert!(catenary_rhs(&plane, 1.0, &CatenaryState::new(0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn flow_jet_satisfies_residual() {
        let spec = SurfaceSpec::catenoid();
        for k in 0..50 {
            let phi = -3.0 + 0.12 * k as f64;
            let m = spec.eval(0.7, 0.2).unwrap();
            let jet = flow_jet(&m, 1.3, 0.7, 0.2, phi);
            let r = crate::curvature::catenary_residual(&spec, 1.3, &jet).unwrap();
            assert!(r.abs() < 1e-14, "phi={phi} r={r}");
        }
    }

    #[test]
    fn meridian_start_keeps_v() {
        let t = trace_catenary(
            &SurfaceSpec::sphere(),
            1.0,
            CatenaryState::new(0.3, 0.25, 0.0),
            1.0,
            1e-10,
        )
        .unwrap();
        assert!(t.samples.iter().all(|s| s.v == 0.25));
        assert_eq!(t.termination, Termination::ReachedSmax);
    }

    #[test]
    fn plane_arc_length_trace_is_cosh() {
        let t = trace_catenary(
            &SurfaceSpec::plane(),
            1.0,
            CatenaryState::new(1.0, 0.0, FRAC_PI_2),
            2.0,
            1e-10,
        )
        .unwrap();
        assert_eq!(t.termination, Termination::ReachedSmax);
        let u1 = t.u_at_v(1.0).unwrap();
        assert!((u1 - 1f64.cosh()).abs() < 1e-7, "{u1}");
        for s in &t.samples {
            assert!((s.u - s.v.cosh()).abs() < 1e-7);
            assert!(s.residual.abs() < 1e-9);
        }
        assert!(t.samples.windows(2).all(|w| w[1].s > w[0].s));
    }

    #[test]
    fn graph_trace_cosh() {
        let t = trace_graph(&SurfaceSpec::plane(), 1.0, 1.0, 0.0, (0.0, 1.0), 1e-9).unwrap();
        assert_eq!(t.termination, Termination::ReachedSmax);
        assert_eq!(t.last().v, 1.0);
        assert!((t.last().u - 1f64.cosh()).abs() < 1e-8);
        // arc length of cosh on [0,1] is sinh(1)
        assert!((t.last().s - 1f64.sinh()).abs() < 1e-8);
    }

    #[test]
    fn bad_configuration() {
        let p = SurfaceSpec::plane();
        let st = CatenaryState::new(1.0, 0.0, 0.5);
        assert!(matches!(
            trace_catenary(&p, 1.0, st, 1.0, 1e-2),
            Err(CatenaryError::Config(_))
        ));
        assert!(matches!(
            trace_catenary(&p, 1.0, st, 1.0, 1e-13),
            Err(CatenaryError::Config(_))
        ));
        assert!(matches!(
            trace_catenary(&p, 1.0, st, -1.0, 1e-9),
            Err(CatenaryError::Config(_))
        ));
        let bad = CatenaryState::new(0.0, 0.0, 0.5);
        assert!(matches!(
            trace_catenary(&p, 1.0, bad, 1.0, 1e-9),
            Err(CatenaryError::Config(_))
        ));
        assert!(matches!(
            trace_graph(&p, 1.0, 1.0, 0.0, (1.0, 0.0), 1e-9),
            Err(CatenaryError::Config(_))
        ));
    }

    #[test]
    fn lower_boundary_event() {
        // Straight down the meridian into u = 0.
        let t = trace_catenary(
            &SurfaceSpec::plane(),
            1.0,
            CatenaryState::new(1.0, 0.0, std::f64::consts::PI),
            5.0,
            1e-9,
        )
        .unwrap();
        assert_eq!(t.termination, Termination::HitLowerU);
        let last = t.last();
        assert!((last.u - 1e-9).abs() < 1e-11, "{}", last.u);
        assert!((last.s - (1.0 - 1e-9)).abs() < 1e-11);
    }

    #[test]
    fn vertical_tangent_on_graph() {
        // α = −1 on the plane: semicircles u² + v² = 1, vertical at v = 1.
        let t = trace_graph(&SurfaceSpec::plane(), -1.0, 1.0, 0.0, (0.0, 5.0), 1e-6).unwrap();
        assert_eq!(t.termination, Termination::LeftDomain);
        assert!(t.vertical_tangent);
        assert!((t.last().v - 1.0).abs() < 1e-5);
        for s in t.samples.iter().filter(|s| s.v < 0.99) {
            assert!((s.u - (1.0 - s.v * s.v).sqrt()).abs() < 1e-5);
        }
    }

    #[test]
    fn graph_turning_points() {
        // Sphere c = 0.5 catenary written as u(v) from its lowest point.
        let spec = SurfaceSpec::sphere();
        let um = 0.610_031_284_464_176;
        let t = trace_graph(&spec, 1.0, um, 0.0, (0.0, 6.0), 1e-10).unwrap();
        assert_eq!(t.termination, Termination::ReachedSmax);
        let tps = t.turning_points();
        assert_eq!(tps[0].kind, Extremum::Max);
        assert!((tps[0].u - 1.098_008_876_796_153_4).abs() < 1e-8);
        assert!((tps[0].v - 2.462_136_688_528_000_3).abs() < 1e-7);
        assert_eq!(tps[1].kind, Extremum::Min);
        assert!((tps[1].u - um).abs() < 1e-8);
    }
}

//! Rotationally symmetric metrics `G = a(u)`: the Clairaut first integral,
//! critical parallels and their stability, turning points, solution by
//! quadrature, conformal coordinates and the Euclidean embedding.
//!
//! Every operation here works on the abstract metric; only
//! [`embed_revolution`] needs `|a′| ≤ 1`.

use serde::Serialize;

use crate::error::{CatenaryError, Result};
use crate::integrator::CatenaryState;
use crate::metric::{SurfaceKind, SurfaceSpec};
use crate::quadrature::{integrate, integrate_sqrt_ends, integrate_to_infinity, QuadOptions};
use crate::roots::{bisect, log_grid, roots_on_grid};

pub const SCAN_PER_DECADE: usize = 1000;
pub const ROOT_XTOL: f64 = 1e-12;
/// Relative distance of `ρ(u)` from `c` within which a quadrature endpoint
/// counts as a turning point.
pub const TURNING_SNAP: f64 = 1e-9;
/// `|λ|` below this is reported as degenerate.
pub const DEGENERATE_LAMBDA: f64 = 1e-10;

const INFINITE_SCAN_LIMIT: f64 = 1e3;
const ZERO_SCAN_START: f64 = 1e-6;

fn require_rotational(spec: &SurfaceSpec) -> Result<()> {
    if spec.is_rotational() {
        Ok(())
    } else {
        Err(CatenaryError::Kind(spec.name()))
    }
}

/// `c = u^α a(u) sin φ`, conserved along α-catenaries.
pub fn clairaut_constant(spec: &SurfaceSpec, alpha: f64, state: &CatenaryState) -> Result<f64> {
    require_rotational(spec)?;
    if !(state.u > 0.0) {
        return Err(CatenaryError::Domain { u: state.u, v: state.v });
    }
    let a = spec.eval(state.u, state.v)?.g;
    Ok(state.u.powf(alpha) * a * state.phi.sin())
}

/// `ρ(u) = a(u) u^α`.
pub fn clairaut_radius(spec: &SurfaceSpec, alpha: f64, u: f64) -> Result<f64> {
    require_rotational(spec)?;
    let (a, _, _) = spec.profile3(u)?;
    Ok(a * u.powf(alpha))
}

/// `(ρ, ρ′, ρ″)` at `u`.
pub fn clairaut_radius3(spec: &SurfaceSpec, alpha: f64, u: f64) -> Result<(f64, f64, f64)> {
    require_rotational(spec)?;
    let (a, da, dda) = spec.profile3(u)?;
    let p0 = u.powf(alpha);
    let p1 = alpha * u.powf(alpha - 1.0);
    let p2 = alpha * (alpha - 1.0) * u.powf(alpha - 2.0);
    Ok((p0 * a, p1 * a + p0 * da, p2 * a + 2.0 * p1 * da + p0 * dda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
    Degenerate,
}

impl Stability {
    pub fn from_lambda(lambda: f64) -> Self {
        if lambda.abs() < DEGENERATE_LAMBDA {
            Stability::Degenerate
        } else if lambda > 0.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalParallel {
    pub u: f64,
    pub lambda: f64,
    pub stability: Stability,
}

/// The scan interval used when none is given: the domain, with the
/// `u = 0` end replaced by `1e-6` and an infinite end by `1e3`.
pub fn default_scan_range(spec: &SurfaceSpec) -> (f64, f64) {
    let d = spec.domain();
    let lo = if d.u_min <= 0.0 {
        ZERO_SCAN_START
    } else {
        d.u_min * (1.0 + 1e-12) + 1e-15
    };
    let hi = if d.u_max.is_finite() {
        d.u_max - 1e-9 * d.u_max.abs().max(1.0)
    } else {
        INFINITE_SCAN_LIMIT.max(10.0 * lo)
    };
    (lo, hi)
}

// αa + u a′: same sign as ρ′ for u > 0 without the u^{α−1} factor.
fn rho_slope_sign(spec: &SurfaceSpec, alpha: f64, u: f64) -> (f64, f64) {
    match spec.profile3(u) {
        Ok((a, da, _)) => (alpha * a + u * da, (alpha * a).abs() + (u * da).abs()),
        Err(_) => (f64::NAN, 0.0),
    }
}

/// Roots of `ρ′` in `u_range` with their stability exponents.
pub fn critical_parallels(
    spec: &SurfaceSpec,
    alpha: f64,
    u_range: Option<(f64, f64)>,
) -> Result<Vec<CriticalParallel>> {
    require_rotational(spec)?;
    let (lo, hi) = u_range.unwrap_or_else(|| default_scan_range(spec));
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(CatenaryError::Config(format!("invalid scan range ({lo}, {hi})")));
    }
    let grid = log_grid(lo, hi, SCAN_PER_DECADE);
    // Cancellation noise (Grušin with α = 1 has ρ′ ≡ 0) must not read as
    // sign changes.
    let f = |u: f64| {
        let (s, scale) = rho_slope_sign(spec, alpha, u);
        if s.abs() <= 1e-12 * scale {
            0.0
        } else {
            s
        }
    };
    let roots = roots_on_grid(f, &grid, 0.0, ROOT_XTOL);
    let mut out = Vec::with_capacity(roots.len());
    for u in roots {
        let lambda = stability_lambda(spec, alpha, u)?;
        out.push(CriticalParallel {
            u,
            lambda,
            stability: Stability::from_lambda(lambda),
        });
    }
    Ok(out)
}

fn stability_lambda(spec: &SurfaceSpec, alpha: f64, u: f64) -> Result<f64> {
    let (a, da, _) = spec.profile3(u)?;
    let (rho, drho, ddrho) = clairaut_radius3(spec, alpha, u)?;
    // d/dz = a d/du
    let bar1 = a * drho;
    let bar2 = a * (da * drho + a * ddrho);
    let c = rho;
    Ok(-2.0 * (rho * bar2 + bar1 * bar1) / (c * c * c * c))
}

/// `λ = V″(z*)/c²` for `V = −ρ̄²/c²` at a critical parallel `u*`.
pub fn stability_exponent(spec: &SurfaceSpec, alpha: f64, u_star: f64) -> Result<f64> {
    require_rotational(spec)?;
    let (rho, drho, _) = clairaut_radius3(spec, alpha, u_star)?;
    if !(drho.abs() <= 1e-8 * (rho / u_star).abs().max(1.0)) {
        return Err(CatenaryError::NotCritical {
            u: u_star,
            derivative: drho,
        });
    }
    stability_lambda(spec, alpha, u_star)
}

/// `ρ` together with its critical parallels.
#[derive(Debug, Clone)]
pub struct ClairautProfile {
    pub alpha: f64,
    pub spec: SurfaceSpec,
    pub critical_parallels: Vec<CriticalParallel>,
}

impl ClairautProfile {
    pub fn new(spec: &SurfaceSpec, alpha: f64) -> Result<Self> {
        Ok(Self {
            alpha,
            spec: spec.clone(),
            critical_parallels: critical_parallels(spec, alpha, None)?,
        })
    }

    pub fn rho(&self, u: f64) -> Result<f64> {
        clairaut_radius(&self.spec, self.alpha, u)
    }

    pub fn a(&self, u: f64) -> Result<f64> {
        Ok(self.spec.profile3(u)?.0)
    }
}

/// All `u` with `ρ(u) = c`, sorted.
pub fn turning_points(spec: &SurfaceSpec, alpha: f64, c: f64) -> Result<Vec<f64>> {
    require_rotational(spec)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(CatenaryError::Config(format!("turning points need c > 0, got {c}")));
    }
    let (lo, hi) = default_scan_range(spec);
    let grid = log_grid(lo, hi, SCAN_PER_DECADE);
    let g = |u: f64| clairaut_radius(spec, alpha, u).map(|r| r - c).unwrap_or(f64::NAN);
    let mut out = roots_on_grid(g, &grid, 0.0, ROOT_XTOL);
    // Tangency: ρ touches c at a critical parallel without crossing.
    for cp in critical_parallels(spec, alpha, Some((lo, hi)))? {
        let rho = clairaut_radius(spec, alpha, cp.u)?;
        if (rho - c).abs() <= 1e-12 * c.max(1.0) {
            out.push(cp.u);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
    Ok(out)
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_intervals: 2000,
    }
}

// c / (a √(ρ² − c²)) = dv/du, written without ρ² to avoid overflow; zero where rounding makes the radicand
// non-positive at a turning point.
fn dv_du(spec: &SurfaceSpec, alpha: f64, c: f64, t: f64) -> f64 {
    let Ok((a, _, _)) = spec.profile3(t) else {
        return f64::NAN;
    };
    let rho = a * t.powf(alpha);
    let q = c / rho;
    let rad = (1.0 - q) * (1.0 + q);
    if rad <= 0.0 {
        0.0
    } else {
        q / (a * rad.sqrt())
    }
}

/// `Δv` between `u₀` and `u₁` along the α-catenary with Clairaut constant
/// `c` that moves monotonically in `u`. `u₁` may be `+∞`.
pub fn quadrature_v(spec: &SurfaceSpec, alpha: f64, c: f64, u0: f64, u1: f64) -> Result<f64> {
    require_rotational(spec)?;
    if u0 == u1 || c == 0.0 {
        return Ok(0.0);
    }
    if !(u0 > 0.0 && u1 > 0.0) || !u0.is_finite() || u1.is_nan() {
        return Err(CatenaryError::Domain { u: u0.min(u1), v: 0.0 });
    }
    if u1.is_infinite() {
        let split = 2.0 * u0;
        check_accessible(spec, alpha, c, u0, split)?;
        let head = quadrature_finite(spec, alpha, c, u0, split)?;
        let tail = integrate_to_infinity(|t| dv_du(spec, alpha, c, t), split, &quad_opts())?;
        return Ok(head + tail.value);
    }
    check_accessible(spec, alpha, c, u0.min(u1), u0.max(u1))?;
    quadrature_finite(spec, alpha, c, u0, u1)
}

fn check_accessible(spec: &SurfaceSpec, alpha: f64, c: f64, lo: f64, hi: f64) -> Result<()> {
    const PROBES: usize = 64;
    for k in 1..PROBES {
        let t = lo + (hi - lo) * k as f64 / PROBES as f64;
        let rho = clairaut_radius(spec, alpha, t)?;
        if rho < c.abs() * (1.0 - 1e-12) {
            return Err(CatenaryError::InaccessibleRegion { u: t });
        }
    }
    Ok(())
}

fn quadrature_finite(spec: &SurfaceSpec, alpha: f64, c: f64, u0: f64, u1: f64) -> Result<f64> {
    let (lo, hi, sign) = if u0 < u1 { (u0, u1, 1.0) } else { (u1, u0, -1.0) };
    // Long ranges are cut geometrically so each piece has O(1) relative width.
    let mut cuts = vec![lo];
    while hi / cuts[cuts.len() - 1] > 16.0 {
        let next = cuts[cuts.len() - 1] * 8.0;
        cuts.push(next);
    }
    cuts.push(hi);
    let n = cuts.len() - 1;
    let mut total = 0.0;
    for (k, w) in cuts.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let c_lo = if k == 0 { snapped(spec, alpha, c, a)? } else { c };
        let c_hi = if k == n - 1 { snapped(spec, alpha, c, b)? } else { c };
        for (x, y, cc) in [(a, mid, c_lo), (mid, b, c_hi)] {
            let piece = integrate_sqrt_ends(|t| dv_du(spec, alpha, cc, t), x, y, &quad_opts())?;
            if !piece.value.is_finite() {
                return Err(CatenaryError::Quadrature {
                    a: x,
                    b: y,
                    error: piece.error,
                });
            }
            total += piece.value;
        }
    }
    Ok(sign * total)
}

// At a turning point ρ(u) = c holds only to root precision; near it the
// integrand then has a √-kink. Using ρ(u) itself as the constant keeps the
// substituted integrand smooth and moves Δv by O(|ρ(u) − c|) only.
fn snapped(spec: &SurfaceSpec, alpha: f64, c: f64, u: f64) -> Result<f64> {
    let rho = clairaut_radius(spec, alpha, u)?;
    Ok(if (rho - c.abs()).abs() <= TURNING_SNAP * c.abs() {
        rho.copysign(c)
    } else {
        c
    })
}

/// `z(u) = ∫_{u_ref}^{u} dt / a(t)`. The anchor may sit on the closure of
/// the domain when `a` is finite there.
pub fn conformal_coordinate(spec: &SurfaceSpec, u: f64, u_ref: f64) -> Result<f64> {
    require_rotational(spec)?;
    let d = spec.domain();
    if !d.contains_u(u) {
        return Err(CatenaryError::Domain { u, v: 0.0 });
    }
    if !(u_ref >= d.u_min && u_ref <= d.u_max) {
        return Err(CatenaryError::Domain { u: u_ref, v: 0.0 });
    }
    let res = integrate(
        |t| spec.profile3(t).map(|(a, _, _)| 1.0 / a).unwrap_or(f64::NAN),
        u_ref,
        u,
        &quad_opts(),
    )?;
    if !res.value.is_finite() {
        return Err(CatenaryError::Domain { u, v: 0.0 });
    }
    Ok(res.value)
}

/// `(a cos v, a sin v, b(u))` with `b(u) = ∫ √(1 − a′²)` from the lower end
/// of the domain.
pub fn embed_revolution(spec: &SurfaceSpec, u: f64, v: f64) -> Result<[f64; 3]> {
    require_rotational(spec)?;
    let d = spec.domain();
    if !(u >= d.u_min && u <= d.u_max) {
        return Err(CatenaryError::Domain { u, v });
    }
    let u_ref = d.u_min.max(0.0);
    const PROBES: usize = 256;
    for k in 0..=PROBES {
        let t = u_ref + (u - u_ref) * k as f64 / PROBES as f64;
        if let Ok((_, da, _)) = spec.profile3(t) {
            if da.abs() > 1.0 {
                return Err(CatenaryError::NotRealizable { u: t, slope: da });
            }
        }
    }
    let (a, _, _) = spec.profile3(u)?;
    let b = integrate(
        |t| match spec.profile3(t) {
            Ok((_, da, _)) => (1.0 - da * da).max(0.0).sqrt(),
            Err(_) => f64::NAN,
        },
        u_ref,
        u,
        &quad_opts(),
    )?
    .value;
    let (s, c) = v.sin_cos();
    Ok([a * c, a * s, b])
}

/// Whether [`embed_revolution`] will succeed on the whole `u` range of the
/// surface, ignoring an infinite tail beyond `u_hi`.
pub fn is_realizable(spec: &SurfaceSpec, u_hi: f64) -> bool {
    if !spec.is_rotational() || matches!(spec.kind(), SurfaceKind::Ruled(_)) {
        return false;
    }
    embed_revolution(spec, u_hi, 0.0).is_ok()
}

/// Bisection on `ρ − c` inside `(lo, hi)`; helper for callers that already
/// know a bracket.
pub fn refine_turning_point(spec: &SurfaceSpec, alpha: f64, c: f64, lo: f64, hi: f64) -> Option<f64> {
    bisect(
        |u| clairaut_radius(spec, alpha, u).map(|r| r - c).unwrap_or(f64::NAN),
        lo,
        hi,
        ROOT_XTOL,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    const U_STAR: f64 = 0.860_333_589_019_379_8;
    const U_M: f64 = 0.610_031_284_464_176;
    const U_BIG_M: f64 = 1.098_008_876_796_153_4;

    fn custom() -> SurfaceSpec {
        // a = 1 + (u − 2)² = 5 − 4u + u²
        SurfaceSpec::polynomial_profile(vec![5.0, -4.0, 1.0], 0.05, 4.0).unwrap()
    }

    #[test]
    fn clairaut_constant_examples() {
        let s = SurfaceSpec::sphere();
        assert_eq!(
            clairaut_constant(&s, 1.0, &CatenaryState::new(0.5, 0.0, 0.0)).unwrap(),
            0.0
        );
        let c = clairaut_constant(&s, 1.0, &CatenaryState::new(0.5, 0.0, FRAC_PI_2)).unwrap();
        assert!((c - 0.5 * 0.5f64.cos()).abs() < 1e-16);
        let ruled = SurfaceSpec::ruled(vec![0.0, 1.0, 2.0, 3.0], vec![0.0; 4], vec![1.0; 4]).unwrap();
        assert!(matches!(
            clairaut_constant(&ruled, 1.0, &CatenaryState::new(0.5, 1.0, 0.3)),
            Err(CatenaryError::Kind(_))
        ));
    }

    #[test]
    fn sphere_critical_parallel() {
        let cps = critical_parallels(&SurfaceSpec::sphere(), 1.0, None).unwrap();
        assert_eq!(cps.len(), 1);
        assert!((cps[0].u - U_STAR).abs() < 1e-11);
        assert_eq!(cps[0].stability, Stability::Stable);
        assert!((cps[0].lambda - 10.003_238_027_73).abs() < 1e-8);
    }

    #[test]
    fn no_critical_parallels() {
        assert!(critical_parallels(&SurfaceSpec::cone(0.7).unwrap(), 1.0, None)
            .unwrap()
            .is_empty());
        assert!(critical_parallels(&SurfaceSpec::catenoid(), 1.0, None)
            .unwrap()
            .is_empty());
        assert!(critical_parallels(&SurfaceSpec::grusin(), 1.0, None)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn custom_profile_stability() {
        let spec = custom();
        assert!(spec.realizability_warning());
        let cps = critical_parallels(&spec, 1.0, None).unwrap();
        assert_eq!(cps.len(), 2);
        assert!((cps[0].u - 1.0).abs() < 1e-11);
        assert!((cps[0].lambda - 2.0).abs() < 1e-9);
        assert_eq!(cps[0].stability, Stability::Stable);
        assert!((cps[1].u - 5.0 / 3.0).abs() < 1e-11);
        assert!((cps[1].lambda + 0.7776).abs() < 1e-9);
        assert_eq!(cps[1].stability, Stability::Unstable);
        assert!(matches!(
            stability_exponent(&spec, 1.0, 1.3),
            Err(CatenaryError::NotCritical { .. })
        ));
    }

    #[test]
    fn sphere_turning_points() {
        let s = SurfaceSpec::sphere();
        let tp = turning_points(&s, 1.0, 0.5).unwrap();
        assert_eq!(tp.len(), 2);
        assert!((tp[0] - U_M).abs() < 1e-11);
        assert!((tp[1] - U_BIG_M).abs() < 1e-11);
        let rho_star = U_STAR * U_STAR.cos();
        let tp = turning_points(&s, 1.0, rho_star).unwrap();
        assert_eq!(tp.len(), 1);
        assert!((tp[0] - U_STAR).abs() < 1e-6);
        let tp = turning_points(&SurfaceSpec::cylinder(), 1.0, 2.0).unwrap();
        assert_eq!(tp.len(), 1);
        assert!((tp[0] - 2.0).abs() < 1e-11);
    }

    #[test]
    fn quadrature_examples() {
        let cyl = SurfaceSpec::cylinder();
        assert_eq!(quadrature_v(&cyl, 1.0, 1.0, 1.5, 1.5).unwrap(), 0.0);
        let dv = quadrature_v(&cyl, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert!((dv - 2f64.acosh()).abs() < 1e-11, "{dv}");
        let dv = quadrature_v(&cyl, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert!((dv + 2f64.acosh()).abs() < 1e-11);

        let cat = SurfaceSpec::catenoid();
        let dv = quadrature_v(&cat, 1.0, 0.5, 1.0, f64::INFINITY).unwrap();
        assert!((dv - 0.177_054_723_530_331_9).abs() < 1e-11, "{dv}");
        let dv = quadrature_v(&cat, 1.0, 1.0, 1.0, f64::INFINITY).unwrap();
        assert!((dv - 0.384_265_575_944_684).abs() < 1e-11, "{dv}");

        assert!(quadrature_v(&cyl, 1.0, 1.0, 1.0, f64::INFINITY).is_err());
        assert!(matches!(
            quadrature_v(&SurfaceSpec::sphere(), 1.0, 0.5, 0.3, 1.2),
            Err(CatenaryError::InaccessibleRegion { .. })
        ));
    }

    #[test]
    fn sphere_half_period() {
        let dv = quadrature_v(&SurfaceSpec::sphere(), 1.0, 0.5, U_M, U_BIG_M).unwrap();
        assert!((dv - 2.462_136_688_528_000_3).abs() < 1e-9, "{dv}");
    }

    #[test]
    fn conformal_examples() {
        let z = conformal_coordinate(&SurfaceSpec::cylinder(), 1.7, 0.0).unwrap();
        assert!((z - 1.7).abs() < 1e-14);
        let z = conformal_coordinate(&SurfaceSpec::sphere(), 1.0, 0.0).unwrap();
        assert!((z - (0.5 + FRAC_PI_4).tan().ln()).abs() < 1e-12);
        assert!((z - 1.226_191_170_883_517).abs() < 1e-12);
        let z = conformal_coordinate(&SurfaceSpec::catenoid(), 2.0, 0.0).unwrap();
        assert!((z - 2f64.asinh()).abs() < 1e-13);
        assert!(conformal_coordinate(&SurfaceSpec::sphere(), 2.0, 0.0).is_err());
    }

    #[test]
    fn embedding_examples() {
        let p = embed_revolution(&SurfaceSpec::cylinder(), 1.0, 0.0).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1] == 0.0 && (p[2] - 1.0).abs() < 1e-14);
        let p = embed_revolution(&SurfaceSpec::sphere(), 1e-300, 0.0).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-15 && p[2].abs() < 1e-15);
        let p = embed_revolution(&SurfaceSpec::sphere(), 0.9, 1.1).unwrap();
        assert!((p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 1.0).abs() < 1e-12);
        // a′(u) = 2(u − 2) reaches 1.2 at u = 2.6
        assert!(matches!(
            embed_revolution(&custom(), 2.6, 0.0),
            Err(CatenaryError::NotRealizable { .. })
        ));
    }
}

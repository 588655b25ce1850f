//! Exact solution families, used as oracles.
//!
//! Each family gives its value and first and second derivatives
//! analytically, so residual checks see only formula errors.
//!
//! * Euclidean catenary `u = cosh(μv + ν)/μ` on the plane, `α = 1`.
//! * Cone catenary `u = μ/√cos(√2 v + ν)` on the cone `G = u/√2`, `α = 1`,
//!   the solutions of `u ü = 3u̇² + u²`.
//! * Grušin catenary `u = μ√(2v + ν)`, `α = 1`, solving `u ü + u̇² = 0`.
//! * Grušin geodesic through `(u₀, v₀)` in arc length `s`.
//! * Hyperbolic quadrature: the catenary `v(u)` on `G = cosh(u/r)` with
//!   Clairaut constant `c`.

use serde::Serialize;

use crate::curvature::{catenary_residual, CurveJet2};
use crate::error::{CatenaryError, Result};
use crate::metric::SurfaceSpec;
use crate::quadrature::{integrate_sqrt_ends, QuadOptions};
use crate::roots::bisect;

use std::f64::consts::{FRAC_PI_2, SQRT_2, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ClosedFormFamily {
    Euclidean { mu: f64, nu: f64 },
    Cone { mu: f64, nu: f64 },
    GrusinCatenary { mu: f64, nu: f64 },
    GrusinGeodesic { u0: f64, v0: f64 },
    HyperbolicQuadrature { r: f64, alpha: f64, c: f64 },
}

/// `(f, f′, f″)`.
pub type Jet1 = [f64; 3];

pub fn euclidean_catenary(mu: f64, nu: f64, t: f64) -> Result<f64> {
    Ok(euclidean_jet(mu, nu, t)?[0])
}

pub fn euclidean_jet(mu: f64, nu: f64, t: f64) -> Result<Jet1> {
    if !(mu > 0.0) {
        return Err(CatenaryError::Config(format!(
            "euclidean catenary needs μ > 0, got {mu}"
        )));
    }
    let x = mu * t + nu;
    let (sh, ch) = (x.sinh(), x.cosh());
    Ok([ch / mu, sh, mu * ch])
}

// Angle of the cone family reduced to the branch containing ν.
fn cone_angle(nu: f64, v: f64) -> f64 {
    let theta = SQRT_2 * v + nu;
    theta - TAU * (nu / TAU).round()
}

pub fn cone_catenary(mu: f64, nu: f64, v: f64) -> Result<f64> {
    Ok(cone_jet(mu, nu, v)?[0])
}

pub fn cone_jet(mu: f64, nu: f64, v: f64) -> Result<Jet1> {
    if !(mu > 0.0) {
        return Err(CatenaryError::Config(format!("cone catenary needs μ > 0, got {mu}")));
    }
    let theta = cone_angle(nu, v);
    let cos = theta.cos();
    if !(theta.abs() < FRAC_PI_2) || !(cos > 0.0) {
        return Err(CatenaryError::Domain { u: f64::INFINITY, v });
    }
    let sin = theta.sin();
    let inv = 1.0 / cos.sqrt();
    let u = mu * inv;
    let du = mu / SQRT_2 * sin * inv / cos;
    let ddu = mu * (inv + 1.5 * sin * sin * inv / (cos * cos));
    Ok([u, du, ddu])
}

pub fn grusin_catenary(mu: f64, nu: f64, v: f64) -> Result<f64> {
    Ok(grusin_jet(mu, nu, v)?[0])
}

pub fn grusin_jet(mu: f64, nu: f64, v: f64) -> Result<Jet1> {
    if !(mu > 0.0) {
        return Err(CatenaryError::Config(format!("Grušin catenary needs μ > 0, got {mu}")));
    }
    let w = 2.0 * v + nu;
    if !(w > 0.0) {
        return Err(CatenaryError::Domain { u: 0.0, v });
    }
    let r = w.sqrt();
    Ok([mu * r, mu / r, -mu / (w * r)])
}

/// `(u, v)` on the non-vertical Grušin geodesic through `(u₀, v₀)`.
pub fn grusin_geodesic(u0: f64, v0: f64, s: f64) -> Result<(f64, f64)> {
    let j = grusin_geodesic_jet(u0, v0, s)?;
    Ok((j.u, j.v))
}

pub fn grusin_geodesic_jet(u0: f64, v0: f64, s: f64) -> Result<CurveJet2> {
    if !(u0 > 0.0) {
        return Err(CatenaryError::Config(format!("Grušin geodesic needs u₀ > 0, got {u0}")));
    }
    let x = s / u0;
    if !(x.abs() < FRAC_PI_2) {
        return Err(CatenaryError::Domain { u: u0 * x.cos(), v: v0 });
    }
    let (sin, cos) = x.sin_cos();
    Ok(CurveJet2 {
        u: u0 * cos,
        v: v0 - 0.5 * u0 * u0 * (x + sin * cos),
        du: -sin,
        dv: -u0 * cos * cos,
        ddu: -cos / u0,
        ddv: 2.0 * sin * cos,
    })
}

fn hyperbolic_check(r: f64, c: f64) -> Result<()> {
    if !(r > 0.0) || !(c != 0.0) || !c.is_finite() {
        return Err(CatenaryError::Config(format!(
            "hyperbolic quadrature needs r > 0 and c ≠ 0, got r = {r}, c = {c}"
        )));
    }
    Ok(())
}

// Q = u^{2α} cosh²(u/r) − c², as (Q, Q′).
fn hyperbolic_q(r: f64, alpha: f64, c: f64, u: f64) -> (f64, f64) {
    let (sh, ch) = ((u / r).sinh(), (u / r).cosh());
    let p = u.powf(2.0 * alpha);
    let q = p * ch * ch - c * c;
    let dq = 2.0 * alpha * u.powf(2.0 * alpha - 1.0) * ch * ch + p * 2.0 * ch * sh / r;
    (q, dq)
}

/// `(dv/du, d²v/du²)` along the hyperbolic catenary.
pub fn hyperbolic_slope(r: f64, alpha: f64, c: f64, u: f64) -> Result<(f64, f64)> {
    hyperbolic_check(r, c)?;
    let (q, dq) = hyperbolic_q(r, alpha, c, u);
    if !(q > 0.0) || !(u > 0.0) {
        return Err(CatenaryError::InaccessibleRegion { u });
    }
    let ch = (u / r).cosh();
    let w = c / (ch * q.sqrt());
    let dw = w * (-(u / r).tanh() / r - 0.5 * dq / q);
    Ok((w, dw))
}

/// `Δv = c ∫_{u₀}^{u₁} du / (cosh(u/r) √(u^{2α}cosh²(u/r) − c²))`.
pub fn hyperbolic_quadrature(r: f64, alpha: f64, c: f64, u0: f64, u1: f64) -> Result<f64> {
    hyperbolic_check(r, c)?;
    if u0 == u1 {
        return Ok(0.0);
    }
    if !(u0 > 0.0 && u1 > 0.0 && u0.is_finite() && u1.is_finite()) {
        return Err(CatenaryError::Domain { u: u0.min(u1), v: 0.0 });
    }
    let (lo, hi) = (u0.min(u1), u0.max(u1));
    for k in 1..64 {
        let t = lo + (hi - lo) * k as f64 / 64.0;
        if hyperbolic_q(r, alpha, c, t).0 < -1e-12 * c * c {
            return Err(CatenaryError::InaccessibleRegion { u: t });
        }
    }
    let f = |t: f64| {
        let (q, _) = hyperbolic_q(r, alpha, c, t);
        if q <= 0.0 {
            0.0
        } else {
            c / ((t / r).cosh() * q.sqrt())
        }
    };
    let opts = QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_intervals: 2000,
    };
    Ok(integrate_sqrt_ends(f, u0, u1, &opts)?.value)
}

/// Smallest `u` with `u^α cosh(u/r) = |c|` for `α > 0`.
pub fn hyperbolic_turning_point(r: f64, alpha: f64, c: f64) -> Result<f64> {
    hyperbolic_check(r, c)?;
    if !(alpha > 0.0) {
        return Err(CatenaryError::Config("turning point needs α > 0".into()));
    }
    let f = |u: f64| hyperbolic_q(r, alpha, c, u).0;
    let mut hi = 1.0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
    }
    bisect(f, 0.0, hi, 1e-15).ok_or(CatenaryError::InaccessibleRegion { u: hi })
}

impl ClosedFormFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedFormFamily::Euclidean { .. } => "euclidean",
            ClosedFormFamily::Cone { .. } => "cone",
            ClosedFormFamily::GrusinCatenary { .. } => "grusin_catenary",
            ClosedFormFamily::GrusinGeodesic { .. } => "grusin_geodesic",
            ClosedFormFamily::HyperbolicQuadrature { .. } => "hyperbolic_quadrature",
        }
    }

    /// The surface and `α` the family solves.
    pub fn natural_surface(&self) -> Result<(SurfaceSpec, f64)> {
        Ok(match *self {
            ClosedFormFamily::Euclidean { .. } => (SurfaceSpec::plane(), 1.0),
            ClosedFormFamily::Cone { .. } => (SurfaceSpec::cone(1.0 / SQRT_2)?, 1.0),
            ClosedFormFamily::GrusinCatenary { .. } => (SurfaceSpec::grusin(), 1.0),
            ClosedFormFamily::GrusinGeodesic { .. } => (SurfaceSpec::grusin(), 0.0),
            ClosedFormFamily::HyperbolicQuadrature { r, alpha, .. } => (SurfaceSpec::hyperbolic(r)?, alpha),
        })
    }

    /// Exact 2-jet at parameter `t`: `v` for graph families, `s` for the
    /// geodesic, `u` for the hyperbolic family.
    pub fn jet(&self, t: f64) -> Result<CurveJet2> {
        match *self {
            ClosedFormFamily::Euclidean { mu, nu } => {
                let [u, du, ddu] = euclidean_jet(mu, nu, t)?;
                Ok(CurveJet2::graph(u, t, du, ddu))
            }
            ClosedFormFamily::Cone { mu, nu } => {
                let [u, du, ddu] = cone_jet(mu, nu, t)?;
                Ok(CurveJet2::graph(u, t, du, ddu))
            }
            ClosedFormFamily::GrusinCatenary { mu, nu } => {
                let [u, du, ddu] = grusin_jet(mu, nu, t)?;
                Ok(CurveJet2::graph(u, t, du, ddu))
            }
            ClosedFormFamily::GrusinGeodesic { u0, v0 } => grusin_geodesic_jet(u0, v0, t),
            ClosedFormFamily::HyperbolicQuadrature { r, alpha, c } => {
                let (w, dw) = hyperbolic_slope(r, alpha, c, t)?;
                // v itself is irrelevant to a v-independent metric.
                Ok(CurveJet2 {
                    u: t,
                    v: 0.0,
                    du: 1.0,
                    dv: w,
                    ddu: 0.0,
                    ddv: dw,
                })
            }
        }
    }

    /// Residual of the family's own governing ODE.
    pub fn ode_residual(&self, t: f64) -> Result<f64> {
        let j = self.jet(t)?;
        Ok(match self {
            // u ü = 1 + u̇²
            ClosedFormFamily::Euclidean { .. } => j.u * j.ddu - 1.0 - j.du * j.du,
            ClosedFormFamily::Cone { .. } => j.u * j.ddu - 3.0 * j.du * j.du - j.u * j.u,
            ClosedFormFamily::GrusinCatenary { .. } => j.u * j.ddu + j.du * j.du,
            ClosedFormFamily::GrusinGeodesic { .. } => {
                let a = j.ddu + j.dv * j.dv / (j.u * j.u * j.u);
                let b = j.ddv - 2.0 * j.du * j.dv / j.u;
                a.abs().max(b.abs())
            }
            ClosedFormFamily::HyperbolicQuadrature { .. } => {
                let (spec, alpha) = self.natural_surface()?;
                catenary_residual(&spec, alpha, &j)?
            }
        })
    }

    /// `n` parameters spread over the interior of the family's domain.
    pub fn default_grid(&self, n: usize) -> Result<Vec<f64>> {
        let lin =
            |lo: f64, hi: f64| -> Vec<f64> { (0..n).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64).collect() };
        Ok(match *self {
            ClosedFormFamily::Euclidean { mu, nu } => lin((-2.0 - nu) / mu, (2.0 - nu) / mu),
            ClosedFormFamily::Cone { nu, .. } => {
                // θ = √2 v + ν over 0.95 of the branch around the reduced ν
                let shift = nu - TAU * (nu / TAU).round();
                let span = 0.95 * FRAC_PI_2;
                lin((-span - shift) / SQRT_2, (span - shift) / SQRT_2)
            }
            ClosedFormFamily::GrusinCatenary { nu, .. } => lin((0.05 - nu) / 2.0, (4.0 - nu) / 2.0),
            ClosedFormFamily::GrusinGeodesic { u0, .. } => lin(-1.45 * u0, 1.45 * u0),
            ClosedFormFamily::HyperbolicQuadrature { r, alpha, c } => {
                let ut = hyperbolic_turning_point(r, alpha, c)?;
                lin(ut * (1.0 + 1e-3), ut + 2.0)
            }
        })
    }
}

/// Geodesic residual `(ü + Γ¹₂₂v̇², v̈ + 2Γ²₁₂u̇v̇ + Γ²₂₂v̇²)`, max-norm.
pub fn geodesic_residual(spec: &SurfaceSpec, j: &CurveJet2) -> Result<f64> {
    let g = spec.christoffel(j.u, j.v)?;
    let a = j.ddu + g.g1_22 * j.dv * j.dv;
    let b = j.ddv + 2.0 * g.g2_12 * j.du * j.dv + g.g2_22 * j.dv * j.dv;
    Ok(a.abs().max(b.abs()))
}

/// Max residual of the family's exact jets on `grid`, measured by
/// [`catenary_residual`] on `spec` with `α` (by [`geodesic_residual`] for
/// the geodesic family).
pub fn validate_closed_form(family: &ClosedFormFamily, spec: &SurfaceSpec, alpha: f64, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(CatenaryError::Config("validation grid is empty".into()));
    }
    let mut worst = 0.0f64;
    for &t in grid {
        let j = family.jet(t)?;
        let r = match family {
            ClosedFormFamily::GrusinGeodesic { .. } => geodesic_residual(spec, &j)?,
            _ => catenary_residual(spec, alpha, &j)?,
        };
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// The `v` at which the cone family with phase `ν` blows up.
pub fn cone_blowup_v(nu: f64) -> f64 {
    let shift = nu - TAU * (nu / TAU).round();
    (FRAC_PI_2 - shift) / SQRT_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean_catenary(1.0, 0.0, 0.0).unwrap(), 1.0);
        assert!((euclidean_catenary(1.0, 0.0, 1.0).unwrap() - 1.543_080_634_815_243_8).abs() < 1e-15);
        assert!(matches!(
            euclidean_catenary(0.0, 0.0, 1.0),
            Err(CatenaryError::Config(_))
        ));
        assert!(matches!(
            euclidean_catenary(-1.0, 0.0, 1.0),
            Err(CatenaryError::Config(_))
        ));
    }

    #[test]
    fn euclidean_residuals() {
        let fam = ClosedFormFamily::Euclidean { mu: 1.3, nu: -0.4 };
        let grid = fam.default_grid(100).unwrap();
        for &t in &grid {
            assert!(fam.ode_residual(t).unwrap().abs() < 1e-12);
        }
        let plane = SurfaceSpec::plane();
        assert!(validate_closed_form(&fam, &plane, 1.0, &grid).unwrap() < 1e-10);
        assert!(validate_closed_form(&fam, &plane, 2.0, &grid).unwrap() > 1e-3);
        assert!(matches!(
            validate_closed_form(&fam, &plane, 1.0, &[]),
            Err(CatenaryError::Config(_))
        ));
    }

    #[test]
    fn first_integral_along_euclidean() {
        let (mu, nu) = (0.8, 0.3);
        let q0 = {
            let [u, du, _] = euclidean_jet(mu, nu, 0.0).unwrap();
            (1.0 + du * du) / (u * u)
        };
        assert!((q0 - mu * mu).abs() < 1e-14);
        for k in 0..100 {
            let [u, du, _] = euclidean_jet(mu, nu, -2.0 + 0.04 * k as f64).unwrap();
            assert!(((1.0 + du * du) / (u * u) - q0).abs() < 1e-10);
        }
    }

    #[test]
    fn cone_family() {
        assert_eq!(cone_catenary(1.0, 0.0, 0.0).unwrap(), 1.0);
        let fam = ClosedFormFamily::Cone { mu: 0.7, nu: 0.2 };
        for t in fam.default_grid(100).unwrap() {
            let j = fam.jet(t).unwrap();
            let rel = fam.ode_residual(t).unwrap() / (j.u * j.u + j.du * j.du);
            assert!(rel.abs() < 1e-13, "{rel}");
        }
        let (spec, alpha) = fam.natural_surface().unwrap();
        let grid = fam.default_grid(100).unwrap();
        assert!(validate_closed_form(&fam, &spec, alpha, &grid).unwrap() < 1e-10);
        let edge = FRAC_PI_2 / SQRT_2;
        assert!(cone_catenary(1.0, 0.0, edge * (1.0 - 1e-9)).unwrap() > 1e4);
        assert!(matches!(
            cone_catenary(1.0, 0.0, edge),
            Err(CatenaryError::Domain { .. })
        ));
        // Branch containing ν = 2π behaves like ν = 0.
        assert!((cone_catenary(1.0, TAU, 0.3).unwrap() - cone_catenary(1.0, 0.0, 0.3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn grusin_family() {
        assert_eq!(grusin_catenary(1.0, 1.0, 0.0).unwrap(), 1.0);
        assert!(matches!(
            grusin_catenary(1.0, 1.0, -0.5),
            Err(CatenaryError::Domain { .. })
        ));
        let fam = ClosedFormFamily::GrusinCatenary { mu: 1.7, nu: 0.4 };
        let grid = fam.default_grid(100).unwrap();
        for &t in &grid {
            assert!(fam.ode_residual(t).unwrap().abs() < 1e-12);
            // ū = u², v̄ = 2v lies on ū = μ²(v̄ + ν)
            let u = grusin_catenary(1.7, 0.4, t).unwrap();
            assert!((u * u - 1.7 * 1.7 * (2.0 * t + 0.4)).abs() < 1e-12 * u * u);
        }
        let (spec, alpha) = fam.natural_surface().unwrap();
        assert!(validate_closed_form(&fam, &spec, alpha, &grid).unwrap() < 1e-10);
    }

    #[test]
    fn grusin_geodesics() {
        assert_eq!(grusin_geodesic(0.8, 0.3, 0.0).unwrap(), (0.8, 0.3));
        let fam = ClosedFormFamily::GrusinGeodesic { u0: 0.8, v0: 0.3 };
        let grid = fam.default_grid(100).unwrap();
        for &s in &grid {
            assert!(fam.ode_residual(s).unwrap() < 1e-10);
            let j = fam.jet(s).unwrap();
            // unit speed
            assert!((j.du * j.du + j.dv * j.dv / (j.u * j.u) - 1.0).abs() < 1e-13);
        }
        assert!(validate_closed_form(&fam, &SurfaceSpec::grusin(), 0.0, &grid).unwrap() < 1e-10);
        assert!(grusin_geodesic(0.8, 0.0, 0.8 * FRAC_PI_2).is_err());
        // horizontal line
        let spec = SurfaceSpec::grusin();
        for k in 1..50 {
            let j = CurveJet2 {
                u: 0.1 * k as f64,
                v: 0.7,
                du: 1.0,
                dv: 0.0,
                ddu: 0.0,
                ddv: 0.0,
            };
            assert_eq!(geodesic_residual(&spec, &j).unwrap(), 0.0);
        }
    }

    #[test]
    fn hyperbolic_family() {
        assert_eq!(hyperbolic_quadrature(1.0, 1.0, 0.5, 1.0, 1.0).unwrap(), 0.0);
        let ut = hyperbolic_turning_point(1.0, 1.0, 0.5).unwrap();
        let d1 = hyperbolic_quadrature(1.0, 1.0, 0.5, ut, 1.0).unwrap();
        let d2 = hyperbolic_quadrature(1.0, 1.0, 0.5, ut, 1.5).unwrap();
        assert!(0.0 < d1 && d1 < d2);
        let fam = ClosedFormFamily::HyperbolicQuadrature {
            r: 1.0,
            alpha: 1.0,
            c: 0.5,
        };
        let (spec, alpha) = fam.natural_surface().unwrap();
        let grid = fam.default_grid(100).unwrap();
        assert!(validate_closed_form(&fam, &spec, alpha, &grid).unwrap() < 1e-10);
        assert!(matches!(
            hyperbolic_quadrature(1.0, 1.0, 0.5, 0.1, 1.0),
            Err(CatenaryError::InaccessibleRegion { .. })
        ));
        // agrees with the general revolution quadrature
        let general = crate::revolution::quadrature_v(&spec, 1.0, 0.5, ut, 1.5).unwrap();
        assert!((general - d2).abs() < 1e-11);
    }
}

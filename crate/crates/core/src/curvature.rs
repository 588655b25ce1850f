//! Signed geodesic curvature in semi-geodesic coordinates and the equivalent
//! α-catenary criteria.
//!
//! Sign convention: `κ = −[v̇(G_v u̇v̇ + 2G_u u̇² + G²G_u v̇²) + G(u̇v̈ − üv̇)] / ‖γ̇‖³`.
//! With it a curve is an α-catenary iff `κ = α G v̇ / (u ‖γ̇‖)`.

use serde::Serialize;

use crate::batch;
use crate::error::{CatenaryError, Result};
use crate::metric::{MetricValue, SurfaceSpec};

/// Position, velocity and acceleration of a curve `t ↦ (u(t), v(t))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveJet2 {
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
    pub ddu: f64,
    pub ddv: f64,
}

impl CurveJet2 {
    /// Jet of the graph `v ↦ (u(v), v)`.
    pub fn graph(u: f64, v: f64, du: f64, ddu: f64) -> Self {
        Self {
            u,
            v,
            du,
            dv: 1.0,
            ddu,
            ddv: 0.0,
        }
    }

    /// Reparametrizes by `t ↦ c t`: velocities scale by `c`, accelerations by `c²`.
    pub fn rescaled(&self, c: f64) -> Self {
        Self {
            du: c * self.du,
            dv: c * self.dv,
            ddu: c * c * self.ddu,
            ddv: c * c * self.ddv,
            ..*self
        }
    }
}

fn speed(m: &MetricValue, j: &CurveJet2) -> Result<f64> {
    let n2 = j.du * j.du + m.g * m.g * j.dv * j.dv;
    if n2 > 0.0 && n2.is_finite() {
        Ok(n2.sqrt())
    } else {
        Err(CatenaryError::SingularJet)
    }
}

// Numerator of κ without the leading minus sign.
fn curvature_numerator(m: &MetricValue, j: &CurveJet2) -> f64 {
    let g = m.g;
    j.dv * (m.g_v * j.du * j.dv + 2.0 * m.g_u * j.du * j.du + g * g * m.g_u * j.dv * j.dv)
        + g * (j.du * j.ddv - j.ddu * j.dv)
}

pub fn geodesic_curvature(spec: &SurfaceSpec, jet: &CurveJet2) -> Result<f64> {
    let m = spec.eval(jet.u, jet.v)?;
    curvature_with(&m, jet)
}

fn curvature_with(m: &MetricValue, jet: &CurveJet2) -> Result<f64> {
    let n = speed(m, jet)?;
    Ok(-curvature_numerator(m, jet) / (n * n * n))
}

/// Curvature an α-catenary must have at this jet: `α G v̇ / (u ‖γ̇‖)`.
pub fn catenary_target_curvature(spec: &SurfaceSpec, alpha: f64, jet: &CurveJet2) -> Result<f64> {
    let m = spec.eval(jet.u, jet.v)?;
    let n = speed(&m, jet)?;
    Ok(alpha * m.g * jet.dv / (jet.u * n))
}

/// Euler–Lagrange residual of the α-catenary equation divided by `‖γ̇‖³`,
/// so it does not depend on the parametrization speed.
pub fn catenary_residual(spec: &SurfaceSpec, alpha: f64, jet: &CurveJet2) -> Result<f64> {
    let m = spec.eval(jet.u, jet.v)?;
    residual_with(&m, alpha, jet)
}

pub(crate) fn residual_with(m: &MetricValue, alpha: f64, jet: &CurveJet2) -> Result<f64> {
    let n = speed(m, jet)?;
    let raw = alpha * jet.dv * m.g / jet.u * n * n + curvature_numerator(m, jet);
    Ok(raw / (n * n * n))
}

/// `(κ, residual)` with a single metric evaluation.
pub fn curvature_and_residual(spec: &SurfaceSpec, alpha: f64, jet: &CurveJet2) -> Result<(f64, f64)> {
    let m = spec.eval(jet.u, jet.v)?;
    Ok((curvature_with(&m, jet)?, residual_with(&m, alpha, jet)?))
}

/// `⟨n, ∂u⟩ = −v̇ G / ‖γ̇‖` with `n = (−v̇G ∂u + (u̇/G) ∂v)/‖γ̇‖`.
pub fn normal_transversality(spec: &SurfaceSpec, jet: &CurveJet2) -> Result<f64> {
    let m = spec.eval(jet.u, jet.v)?;
    let n = speed(&m, jet)?;
    Ok(-jet.dv * m.g / n)
}

/// Default absolute tolerance of [`parallel_catenary_check`].
pub const PARALLEL_CHECK_TOL: f64 = 1e-9;

/// Whether the parallel `u = u₀` is an α-catenary: `αG + u₀G_u = 0` at every
/// sampled `v`.
pub fn parallel_catenary_check(spec: &SurfaceSpec, alpha: f64, u0: f64, v_samples: &[f64]) -> Result<bool> {
    parallel_catenary_check_tol(spec, alpha, u0, v_samples, PARALLEL_CHECK_TOL)
}

pub fn parallel_catenary_check_tol(
    spec: &SurfaceSpec,
    alpha: f64,
    u0: f64,
    v_samples: &[f64],
    tol: f64,
) -> Result<bool> {
    for &v in v_samples {
        let m = spec.eval(u0, v)?;
        if (alpha * m.g + u0 * m.g_u).abs() >= tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of comparing the residual and curvature criteria on one jet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionPair {
    pub residual: f64,
    pub curvature_gap: f64,
}

/// Evaluates `catenary_residual` and `κ − target` on many jets. Jets that
/// leave the domain or are singular yield `None`.
pub fn criterion_sweep(spec: &SurfaceSpec, alpha: f64, jets: &[CurveJet2]) -> Vec<Option<CriterionPair>> {
    batch::map(jets, |j| criterion_pair(spec, alpha, j))
}

pub fn criterion_sweep_sequential(spec: &SurfaceSpec, alpha: f64, jets: &[CurveJet2]) -> Vec<Option<CriterionPair>> {
    batch::map_sequential(jets, |j| criterion_pair(spec, alpha, j))
}

fn criterion_pair(spec: &SurfaceSpec, alpha: f64, j: &CurveJet2) -> Option<CriterionPair> {
    let m = spec.eval(j.u, j.v).ok()?;
    let n = speed(&m, j).ok()?;
    let kappa = -curvature_numerator(&m, j) / (n * n * n);
    let target = alpha * m.g * j.dv / (j.u * n);
    Some(CriterionPair {
        residual: residual_with(&m, alpha, j).ok()?,
        curvature_gap: kappa - target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::DEFAULT_CONE_SLOPE;

    #[test]
    fn circle_in_plane_has_curvature_minus_one() {
        let plane = SurfaceSpec::plane();
        for k in 0..20 {
            let t = 0.3 * k as f64;
            let (s, c) = t.sin_cos();
            let jet = CurveJet2 {
                u: 2.0 + c,
                v: s,
                du: -s,
                dv: c,
                ddu: -c,
                ddv: -s,
            };
            assert!((geodesic_curvature(&plane, &jet).unwrap() + 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn meridian_direction_is_straight() {
        let jet = CurveJet2 {
            u: 0.4,
            v: 0.0,
            du: 1.3,
            dv: 0.0,
            ddu: 2.0,
            ddv: 0.0,
        };
        for s in [SurfaceSpec::sphere(), SurfaceSpec::catenoid(), SurfaceSpec::grusin()] {
            assert_eq!(geodesic_curvature(&s, &jet).unwrap(), 0.0);
            assert_eq!(catenary_residual(&s, 1.0, &jet).unwrap(), 0.0);
            assert_eq!(catenary_target_curvature(&s, 1.0, &jet).unwrap(), 0.0);
        }
    }

    #[test]
    fn sphere_parallel_curvature_is_tan() {
        let sphere = SurfaceSpec::sphere();
        for u0 in [0.2, 0.7, 1.3] {
            let jet = CurveJet2 {
                u: u0,
                v: 0.0,
                du: 0.0,
                dv: 1.0,
                ddu: 0.0,
                ddv: 0.0,
            };
            let k = geodesic_curvature(&sphere, &jet).unwrap();
            assert!((k - f64::tan(u0)).abs() < 1e-13);
        }
    }

    #[test]
    fn target_curvature_examples() {
        let jet = CurveJet2 {
            u: 2.0,
            v: 0.0,
            du: 0.0,
            dv: 1.0,
            ddu: 0.0,
            ddv: 0.0,
        };
        let t = catenary_target_curvature(&SurfaceSpec::plane(), 1.0, &jet).unwrap();
        assert_eq!(t, 0.5);

        // Unit-speed parallel on the sphere at the critical parallel.
        let u_star = 0.860_333_589_019_379_8_f64;
        let jet = CurveJet2 {
            u: u_star,
            v: 0.0,
            du: 0.0,
            dv: 1.0 / u_star.cos(),
            ddu: 0.0,
            ddv: 0.0,
        };
        let t = catenary_target_curvature(&SurfaceSpec::sphere(), 1.0, &jet).unwrap();
        assert!((t - 1.162_339_832_784_878).abs() < 1e-12);
    }

    #[test]
    fn residual_examples() {
        let plane = SurfaceSpec::plane();
        for k in -10..=10 {
            let t = 0.2 * k as f64;
            let jet = CurveJet2::graph(t.cosh(), t, t.sinh(), t.cosh());
            assert!(catenary_residual(&plane, 1.0, &jet).unwrap().abs() < 1e-15);
        }
        let line = CurveJet2::graph(2.0, 0.0, 0.0, 0.0);
        assert_eq!(catenary_residual(&plane, 1.0, &line).unwrap(), 0.5);
    }

    #[test]
    fn transversality_examples() {
        let plane = SurfaceSpec::plane();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let jet = CurveJet2 {
            u: 1.0,
            v: 0.0,
            du: s,
            dv: s,
            ddu: 0.0,
            ddv: 0.0,
        };
        assert!((normal_transversality(&plane, &jet).unwrap() + s).abs() < 1e-15);

        let sphere = SurfaceSpec::sphere();
        let par = CurveJet2 {
            u: 0.5,
            v: 0.0,
            du: 0.0,
            dv: 1.0 / 0.5f64.cos(),
            ddu: 0.0,
            ddv: 0.0,
        };
        assert!((normal_transversality(&sphere, &par).unwrap() + 1.0).abs() < 1e-15);
        let mer = CurveJet2 {
            dv: 0.0,
            du: 1.0,
            ..par
        };
        assert_eq!(normal_transversality(&sphere, &mer).unwrap(), 0.0);
    }

    #[test]
    fn singular_jet_is_rejected() {
        let jet = CurveJet2 {
            u: 1.0,
            v: 0.0,
            du: 0.0,
            dv: 0.0,
            ddu: 1.0,
            ddv: 1.0,
        };
        let plane = SurfaceSpec::plane();
        assert_eq!(geodesic_curvature(&plane, &jet), Err(CatenaryError::SingularJet));
        assert_eq!(catenary_residual(&plane, 1.0, &jet), Err(CatenaryError::SingularJet));
        let outside = CurveJet2 {
            u: -1.0,
            du: 1.0,
            ..jet
        };
        assert!(matches!(
            catenary_target_curvature(&plane, 1.0, &outside),
            Err(CatenaryError::Domain { .. })
        ));
    }

    #[test]
    fn parallel_checks() {
        let u_star = 0.860_333_589_019_379_8_f64;
        let vs = [0.0, 1.0, 2.5, -3.0];
        assert!(parallel_catenary_check(&SurfaceSpec::sphere(), 1.0, u_star, &vs).unwrap());
        assert!(!parallel_catenary_check(&SurfaceSpec::sphere(), 1.0, 0.5, &vs).unwrap());
        for u0 in [0.1, 1.0, 7.0] {
            assert!(!parallel_catenary_check(&SurfaceSpec::cylinder(), 1.0, u0, &vs).unwrap());
            let cone = SurfaceSpec::cone(DEFAULT_CONE_SLOPE).unwrap();
            assert!(!parallel_catenary_check(&cone, 1.0, u0, &vs).unwrap());
        }
        assert!(parallel_catenary_check(&SurfaceSpec::sphere(), 1.0, 0.0, &vs).is_err());
    }
}

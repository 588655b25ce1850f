//! Independent reference computations, deliberately simpler than the
//! production paths they check.
//!
//! α-catenaries of `du² + G² dv²` are the geodesics of the conformal metric
//! `u^{2α}(du² + G² dv²)`. [`conformal_geodesic`] integrates those geodesic
//! equations with fixed-step classical RK4, sharing nothing with the
//! adaptive tangent-angle flow except the metric evaluation.

use serde::Serialize;

use crate::error::{CatenaryError, Result};
use crate::integrator::CatenaryState;
use crate::metric::SurfaceSpec;
use crate::roots::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSample {
    /// Arc length in the original metric.
    pub s: f64,
    pub u: f64,
    pub v: f64,
}

// State (u, v, u̇, v̇, s) over the conformal geodesic parameter.
fn geodesic_rhs(spec: &SurfaceSpec, alpha: f64, y: &[f64; 5]) -> Result<[f64; 5]> {
    let [u, v, du, dv, _] = *y;
    let m = spec.eval(u, v)?;
    let (g, gu, gv) = (m.g, m.g_u, m.g_v);
    let ddu = -(alpha / u) * du * du + (alpha * g * g / u + g * gu) * dv * dv;
    let ddv = -2.0 * (alpha / u + gu / g) * du * dv - (gv / g) * dv * dv;
    Ok([du, dv, ddu, ddv, (du * du + g * g * dv * dv).sqrt()])
}

fn axpy(y: &[f64; 5], h: f64, k: &[f64; 5]) -> [f64; 5] {
    std::array::from_fn(|i| y[i] + h * k[i])
}

/// Conformal-geodesic polyline from `start` until the original arc length
/// reaches `s_max` or the curve leaves the domain. The conformal parameter
/// advances by `h` per step; the initial velocity has unit length in the
/// original metric.
pub fn conformal_geodesic(
    spec: &SurfaceSpec,
    alpha: f64,
    start: CatenaryState,
    s_max: f64,
    h: f64,
) -> Result<Vec<OracleSample>> {
    if !(h > 0.0) || !(s_max > start.s) {
        return Err(CatenaryError::Config("oracle needs h > 0 and s_max > s₀".into()));
    }
    let m = spec.eval(start.u, start.v)?;
    let (sin, cos) = start.phi.sin_cos();
    let mut y = [start.u, start.v, cos, sin / m.g, start.s];
    let mut out = vec![OracleSample {
        s: y[4],
        u: y[0],
        v: y[1],
    }];
    while y[4] < s_max {
        let step = || -> Result<[f64; 5]> {
            let k1 = geodesic_rhs(spec, alpha, &y)?;
            let k2 = geodesic_rhs(spec, alpha, &axpy(&y, 0.5 * h, &k1))?;
            let k3 = geodesic_rhs(spec, alpha, &axpy(&y, 0.5 * h, &k2))?;
            let k4 = geodesic_rhs(spec, alpha, &axpy(&y, h, &k3))?;
            Ok(std::array::from_fn(|i| {
                y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            }))
        };
        match step() {
            Ok(next) if spec.domain().contains(next[0], next[1]) => y = next,
            _ => break,
        }
        out.push(OracleSample {
            s: y[4],
            u: y[0],
            v: y[1],
        });
    }
    Ok(out)
}

/// The root of `cos u = u sin u` in `(0, π/2)`.
pub fn sphere_critical_root() -> f64 {
    bisect(|u| u.cos() - u * u.sin(), 0.1, 1.5, 0.0).expect("sign change on [0.1, 1.5]")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root() {
        assert!((sphere_critical_root() - 0.860_333_589_019_379_8).abs() < 1e-15);
    }

    #[test]
    fn plane_oracle_is_cosh() {
        let start = CatenaryState::new(1.0, 0.0, std::f64::consts::FRAC_PI_2);
        let pts = conformal_geodesic(&SurfaceSpec::plane(), 1.0, start, 1.5, 1e-3).unwrap();
        for p in &pts {
            assert!((p.u - p.v.cosh()).abs() < 1e-11, "{p:?}");
            assert!((p.s - p.v.sinh()).abs() < 1e-11);
        }
        assert!(pts.last().unwrap().s >= 1.5);
    }

    #[test]
    fn alpha_zero_is_a_geodesic() {
        // Meridians are great circles.
        let start = CatenaryState::new(0.3, 0.0, 0.0);
        let pts = conformal_geodesic(&SurfaceSpec::sphere(), 0.0, start, 1.0, 1e-3).unwrap();
        for p in &pts {
            assert!(p.v.abs() < 1e-15);
            assert!((p.u - 0.3 - p.s).abs() < 1e-12);
        }
    }
}

//! Semi-geodesic metrics `ds² = du² + G(u,v)² dv²`.
//!
//! A [`SurfaceSpec`] bundles a kind (one of the catalog surfaces, a tabulated
//! or polynomial profile of a surface of revolution, or a ruled surface given
//! by sampled `f = ⟨c′,W′⟩`, `g = ‖W′‖²`) with its open coordinate domain.
//! The reference curve is always the coordinate curve `u = 0`, which need not
//! itself lie in the domain.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::io::Read;

use serde::Serialize;

use crate::error::{CatenaryError, Result};
use crate::interp::MonotoneCubic;

/// `G` and its first partials at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricValue {
    pub g: f64,
    pub g_u: f64,
    pub g_v: f64,
}

/// The Christoffel symbols that do not vanish identically for a
/// semi-geodesic metric: `Γ¹₂₂ = −G G_u`, `Γ²₁₂ = G_u / G`, `Γ²₂₂ = G_v / G`.
/// `Γ¹₁₁`, `Γ¹₁₂` and `Γ²₁₁` are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Christoffel {
    pub g1_22: f64,
    pub g2_12: f64,
    pub g2_22: f64,
}

/// Open rectangle `(u_min, u_max) × (v_min, v_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Domain {
    pub fn half_plane() -> Self {
        Self::strip(0.0, f64::INFINITY)
    }

    pub fn strip(u_min: f64, u_max: f64) -> Self {
        Self {
            u_min,
            u_max,
            v_min: f64::NEG_INFINITY,
            v_max: f64::INFINITY,
        }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u > self.u_min && u < self.u_max && v > self.v_min && v < self.v_max
    }

    pub fn contains_u(&self, u: f64) -> bool {
        u > self.u_min && u < self.u_max
    }
}

/// Profile `a(u)` of a surface of revolution that is not in the catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// Monotone cubic through measured `(u, a)` samples.
    Tabulated(MonotoneCubic),
    /// `a(u) = Σ coeffs[k] u^k`.
    Polynomial(Vec<f64>),
}

impl Profile {
    /// `(a, a′, a″)` at `u`.
    pub fn eval3(&self, u: f64) -> (f64, f64, f64) {
        match self {
            Profile::Tabulated(p) => p.eval3(u),
            Profile::Polynomial(c) => {
                // Horner for the value and both derivatives at once.
                let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
                for &ck in c.iter().rev() {
                    ddp = ddp * u + 2.0 * dp;
                    dp = dp * u + p;
                    p = p * u + ck;
                }
                (p, dp, ddp)
            }
        }
    }
}

/// Sampled data of a ruled surface `ψ(u,v) = c(v) + u W(v)`:
/// `f(v) = ⟨c′,W′⟩` and `g(v) = ‖W′‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct RuledData {
    f: MonotoneCubic,
    g: MonotoneCubic,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceKind {
    Plane,
    Cylinder,
    /// Unit sphere, `u` measured from the equator. `extended` widens the
    /// domain to `(0, π)`; points with `G ≤ 0` are still rejected.
    Sphere {
        extended: bool,
    },
    Hyperbolic {
        r: f64,
    },
    /// Circular cone `a(u) = slope · u`, `u` measured from the apex.
    Cone {
        slope: f64,
    },
    Catenoid,
    Helicoid,
    Binormal {
        tau: f64,
    },
    Grusin,
    Revolution(Profile),
    Ruled(RuledData),
}

/// An immutable surface description; evaluation is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSpec {
    kind: SurfaceKind,
    domain: Domain,
    realizability_warning: bool,
}

/// Default cone slope: generating line at 45° to the axis.
pub const DEFAULT_CONE_SLOPE: f64 = FRAC_1_SQRT_2;

impl SurfaceSpec {
    pub fn plane() -> Self {
        Self::simple(SurfaceKind::Plane, Domain::half_plane())
    }

    pub fn cylinder() -> Self {
        Self::simple(SurfaceKind::Cylinder, Domain::half_plane())
    }

    pub fn sphere() -> Self {
        Self::simple(SurfaceKind::Sphere { extended: false }, Domain::strip(0.0, FRAC_PI_2))
    }

    pub fn sphere_extended() -> Self {
        Self::simple(SurfaceKind::Sphere { extended: true }, Domain::strip(0.0, PI))
    }

    pub fn hyperbolic(r: f64) -> Result<Self> {
        positive("r", r)?;
        Ok(Self::simple(SurfaceKind::Hyperbolic { r }, Domain::half_plane()))
    }

    pub fn cone(slope: f64) -> Result<Self> {
        positive("slope", slope)?;
        let mut s = Self::simple(SurfaceKind::Cone { slope }, Domain::half_plane());
        s.realizability_warning = slope > 1.0;
        Ok(s)
    }

    pub fn catenoid() -> Self {
        Self::simple(SurfaceKind::Catenoid, Domain::half_plane())
    }

    pub fn helicoid() -> Self {
        Self::simple(SurfaceKind::Helicoid, Domain::half_plane())
    }

    pub fn binormal(tau: f64) -> Result<Self> {
        positive("tau", tau)?;
        Ok(Self::simple(SurfaceKind::Binormal { tau }, Domain::half_plane()))
    }

    pub fn grusin() -> Self {
        Self::simple(SurfaceKind::Grusin, Domain::half_plane())
    }

    /// Surface of revolution with a polynomial profile on `(u_lo, u_hi)`.
    /// `a` must stay positive there (checked on a grid).
    pub fn polynomial_profile(coeffs: Vec<f64>, u_lo: f64, u_hi: f64) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(CatenaryError::Config(
                "polynomial profile needs finite coefficients".into(),
            ));
        }
        if !(u_lo >= 0.0 && u_hi > u_lo && u_hi.is_finite()) {
            return Err(CatenaryError::Config(format!(
                "polynomial profile needs a finite range with 0 <= u_lo < u_hi, got ({u_lo}, {u_hi})"
            )));
        }
        let profile = Profile::Polynomial(coeffs);
        let warn = check_profile(&profile, u_lo, u_hi)?;
        Ok(Self {
            kind: SurfaceKind::Revolution(profile),
            domain: Domain::strip(u_lo, u_hi),
            realizability_warning: warn,
        })
    }

    /// Ruled surface from samples of `f = ⟨c′,W′⟩` and `g = ‖W′‖²` over `v`.
    pub fn ruled(v: Vec<f64>, f: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        if v.len() < 2 {
            return Err(CatenaryError::Config("ruled surface needs at least 2 samples".into()));
        }
        if g.iter().any(|&x| x < 0.0) {
            return Err(CatenaryError::Config("g = |W'|^2 must be nonnegative".into()));
        }
        let f = MonotoneCubic::new(v.clone(), f)?;
        let g = MonotoneCubic::new(v.clone(), g)?;
        let domain = Domain {
            u_min: 0.0,
            u_max: f64::INFINITY,
            v_min: v[0],
            v_max: v[v.len() - 1],
        };
        Ok(Self::simple(SurfaceKind::Ruled(RuledData { f, g }), domain))
    }

    fn simple(kind: SurfaceKind, domain: Domain) -> Self {
        Self {
            kind,
            domain,
            realizability_warning: false,
        }
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Set when the profile has `|a′| > 1` somewhere: the metric is valid but
    /// has no arc-length generating curve in Euclidean space.
    pub fn realizability_warning(&self) -> bool {
        self.realizability_warning
    }

    pub fn name(&self) -> String {
        match &self.kind {
            SurfaceKind::Plane => "plane".into(),
            SurfaceKind::Cylinder => "cylinder".into(),
            SurfaceKind::Sphere { extended: false } => "sphere".into(),
            SurfaceKind::Sphere { extended: true } => "sphere(extended)".into(),
            SurfaceKind::Hyperbolic { r } => format!("hyperbolic(r={r})"),
            SurfaceKind::Cone { slope } => format!("cone(slope={slope})"),
            SurfaceKind::Catenoid => "catenoid".into(),
            SurfaceKind::Helicoid => "helicoid".into(),
            SurfaceKind::Binormal { tau } => format!("binormal(tau={tau})"),
            SurfaceKind::Grusin => "grusin".into(),
            SurfaceKind::Revolution(Profile::Tabulated(_)) => "revolution_profile".into(),
            SurfaceKind::Revolution(Profile::Polynomial(c)) => {
                format!("revolution_profile(poly={c:?})")
            }
            SurfaceKind::Ruled(_) => "ruled".into(),
        }
    }

    /// `G`, `G_u`, `G_v` at a point strictly inside the domain.
    pub fn eval(&self, u: f64, v: f64) -> Result<MetricValue> {
        if !self.domain.contains(u, v) {
            return Err(CatenaryError::Domain { u, v });
        }
        self.eval_unchecked(u, v)
    }

    /// Like [`eval`](Self::eval) without the domain test; still rejects
    /// `G ≤ 0`. Used for limits at the domain closure (e.g. `u = 0`).
    pub fn eval_unchecked(&self, u: f64, v: f64) -> Result<MetricValue> {
        let m = match &self.kind {
            SurfaceKind::Plane | SurfaceKind::Cylinder => MetricValue {
                g: 1.0,
                g_u: 0.0,
                g_v: 0.0,
            },
            SurfaceKind::Sphere { .. } => {
                let (s, c) = u.sin_cos();
                MetricValue {
                    g: c,
                    g_u: -s,
                    g_v: 0.0,
                }
            }
            SurfaceKind::Hyperbolic { r } => MetricValue {
                g: (u / r).cosh(),
                g_u: (u / r).sinh() / r,
                g_v: 0.0,
            },
            SurfaceKind::Cone { slope } => MetricValue {
                g: slope * u,
                g_u: *slope,
                g_v: 0.0,
            },
            SurfaceKind::Catenoid => {
                let g = (1.0 + u * u).sqrt();
                MetricValue {
                    g,
                    g_u: u / g,
                    g_v: 0.0,
                }
            }
            // Helicoid: c(v) = (0,0,v), W(v) = (cos v, sin v, 0), so f = 0, g = 1.
            SurfaceKind::Helicoid => ruled_value(u, 0.0, 1.0, 0.0, 0.0, v)?,
            SurfaceKind::Binormal { tau } => ruled_value(u, 0.0, tau * tau, 0.0, 0.0, v)?,
            SurfaceKind::Grusin => MetricValue {
                g: 1.0 / u,
                g_u: -1.0 / (u * u),
                g_v: 0.0,
            },
            SurfaceKind::Revolution(p) => {
                let (a, da, _) = p.eval3(u);
                MetricValue {
                    g: a,
                    g_u: da,
                    g_v: 0.0,
                }
            }
            SurfaceKind::Ruled(data) => {
                let (f, df, _) = data.f.eval3(v);
                let (g, dg, _) = data.g.eval3(v);
                ruled_value(u, f, g, df, dg, v)?
            }
        };
        if m.g > 0.0 && m.g.is_finite() {
            Ok(m)
        } else {
            Err(CatenaryError::DegenerateMetric {
                u,
                v,
                radicand: m.g * m.g.abs(),
            })
        }
    }

    pub fn christoffel(&self, u: f64, v: f64) -> Result<Christoffel> {
        let m = self.eval(u, v)?;
        Ok(Christoffel {
            g1_22: -m.g * m.g_u,
            g2_12: m.g_u / m.g,
            g2_22: m.g_v / m.g,
        })
    }

    /// True when `G` does not depend on `v` (every kind except ruled).
    pub fn is_rotational(&self) -> bool {
        !matches!(self.kind, SurfaceKind::Ruled(_))
    }

    /// `(a, a′, a″)` for a `v`-independent metric `G = a(u)`, without the
    /// domain test.
    pub fn profile3(&self, u: f64) -> Result<(f64, f64, f64)> {
        let second = match &self.kind {
            SurfaceKind::Plane | SurfaceKind::Cylinder | SurfaceKind::Cone { .. } => 0.0,
            SurfaceKind::Sphere { .. } => -u.cos(),
            SurfaceKind::Hyperbolic { r } => (u / r).cosh() / (r * r),
            SurfaceKind::Catenoid | SurfaceKind::Helicoid => {
                let g = (1.0 + u * u).sqrt();
                1.0 / (g * g * g)
            }
            SurfaceKind::Binormal { tau } => {
                let g = (1.0 + tau * tau * u * u).sqrt();
                tau * tau / (g * g * g)
            }
            SurfaceKind::Grusin => 2.0 / (u * u * u),
            SurfaceKind::Revolution(p) => p.eval3(u).2,
            SurfaceKind::Ruled(_) => return Err(CatenaryError::Kind(self.name())),
        };
        let m = self.eval_unchecked(u, 0.0)?;
        Ok((m.g, m.g_u, second))
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(CatenaryError::Config(format!(
            "parameter `{name}` must be positive, got {x}"
        )))
    }
}

// G = √(1 + 2uf + u²g) with its partials; f′ and g′ are v-derivatives.
fn ruled_value(u: f64, f: f64, g: f64, df: f64, dg: f64, v: f64) -> Result<MetricValue> {
    let radicand = 1.0 + 2.0 * u * f + u * u * g;
    if !(radicand > 0.0) {
        return Err(CatenaryError::DegenerateMetric { u, v, radicand });
    }
    let big_g = radicand.sqrt();
    Ok(MetricValue {
        g: big_g,
        g_u: (f + u * g) / big_g,
        g_v: (u * df + 0.5 * u * u * dg) / big_g,
    })
}

/// `G = √(1 + 2u f(v) + u² g(v))` for a ruled surface with `⟨c′,W⟩ = 0` and
/// arc-length base curve, where `f = ⟨c′,W′⟩` and `g = ‖W′‖²`.
pub fn ruled_metric<F, H>(f: F, g: H, u: f64, v: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    ruled_value(u, f(v), g(v), 0.0, 0.0, v).map(|m| m.g)
}

// Positivity on a grid; returns the realizability flag.
fn check_profile(profile: &Profile, lo: f64, hi: f64) -> Result<bool> {
    const N: usize = 2000;
    let mut warn = false;
    for i in 0..=N {
        let u = lo + (hi - lo) * i as f64 / N as f64;
        let (a, da, _) = profile.eval3(u);
        if !(a > 0.0) && (i > 0 || lo > 0.0) {
            return Err(CatenaryError::Config(format!(
                "profile a(u) must be positive, a({u}) = {a}"
            )));
        }
        if da.abs() > 1.0 {
            warn = true;
        }
    }
    Ok(warn)
}

/// Surface of revolution from measured `(u, a)` samples.
pub fn tabulated_profile(samples: &[(f64, f64)]) -> Result<SurfaceSpec> {
    if samples.len() < 4 {
        return Err(CatenaryError::Config(format!(
            "tabulated profile needs at least 4 samples, got {}",
            samples.len()
        )));
    }
    if let Some(&(u, a)) = samples.iter().find(|(_, a)| !(*a > 0.0)) {
        return Err(CatenaryError::Config(format!(
            "profile a(u) must be positive, a({u}) = {a}"
        )));
    }
    if samples.iter().any(|&(u, _)| u < 0.0) {
        return Err(CatenaryError::Config("profile u values must be >= 0".into()));
    }
    let (u, a): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
    let interp = MonotoneCubic::new(u, a)?;
    let (lo, hi) = (interp.x_min(), interp.x_max());
    let profile = Profile::Tabulated(interp);
    let warn = check_profile(&profile, lo, hi)?;
    if warn {
        log::warn!("tabulated profile has |a'| > 1: metric is not realizable in E^3");
    }
    Ok(SurfaceSpec {
        kind: SurfaceKind::Revolution(profile),
        domain: Domain::strip(lo, hi),
        realizability_warning: warn,
    })
}

/// Reads a two-column `u,a` CSV (with header) into a tabulated profile.
pub fn tabulated_profile_csv<R: Read>(reader: R) -> Result<SurfaceSpec> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| CatenaryError::Config(format!("profile csv: {e}")))?
        .clone();
    if headers.len() != 2 || &headers[0] != "u" || &headers[1] != "a" {
        return Err(CatenaryError::Config("profile csv must have header `u,a`".into()));
    }
    let mut samples = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CatenaryError::Config(format!("profile csv: {e}")))?;
        let parse = |i: usize| -> Result<f64> {
            record[i]
                .parse::<f64>()
                .map_err(|e| CatenaryError::Config(format!("profile csv row {}: {e}", line + 2)))
        };
        samples.push((parse(0)?, parse(1)?));
    }
    tabulated_profile(&samples)
}

/// One catalog row, for listing.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub kind: &'static str,
    pub metric: &'static str,
    pub domain: &'static str,
    pub params: &'static str,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    let e = |kind, metric, domain, params| CatalogEntry {
        kind,
        metric,
        domain,
        params,
    };
    vec![
        e("plane", "G = 1", "u > 0", ""),
        e("cylinder", "G = 1", "u > 0", ""),
        e("sphere", "G = cos u", "0 < u < pi/2", "extended=1 widens to (0, pi)"),
        e("hyperbolic", "G = cosh(u/r)", "u > 0", "r > 0 (required)"),
        e("cone", "G = slope * u", "u > 0", "slope > 0 (default 1/sqrt 2)"),
        e("catenoid", "G = sqrt(1 + u^2)", "u > 0", ""),
        e("helicoid", "G = sqrt(1 + u^2)", "u > 0", ""),
        e("binormal", "G = sqrt(1 + tau^2 u^2)", "u > 0", "tau > 0 (required)"),
        e("grusin", "G = 1/u", "u > 0", ""),
        e(
            "revolution_profile",
            "G = a(u), monotone cubic",
            "sample range",
            "u,a csv",
        ),
        e(
            "ruled",
            "G = sqrt(1 + 2u f(v) + u^2 g(v))",
            "u > 0, sample v range",
            "v,f,g csv",
        ),
    ]
}

/// Builds a catalog surface from its kind name and numeric parameters.
pub fn catalog_surface(kind: &str, params: &BTreeMap<String, f64>) -> Result<SurfaceSpec> {
    let get = |name: &str| -> Result<f64> {
        params
            .get(name)
            .copied()
            .ok_or_else(|| CatenaryError::Config(format!("surface `{kind}` needs parameter `{name}`")))
    };
    let allowed: &[&str] = match kind {
        "sphere" => &["extended"],
        "hyperbolic" => &["r"],
        "cone" => &["slope"],
        "binormal" => &["tau"],
        _ => &[],
    };
    if let Some(extra) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(CatenaryError::Config(format!(
            "surface `{kind}` does not take parameter `{extra}`"
        )));
    }
    match kind {
        "plane" => Ok(SurfaceSpec::plane()),
        "cylinder" => Ok(SurfaceSpec::cylinder()),
        "sphere" => match params.get("extended") {
            Some(&x) if x != 0.0 => Ok(SurfaceSpec::sphere_extended()),
            _ => Ok(SurfaceSpec::sphere()),
        },
        "hyperbolic" => SurfaceSpec::hyperbolic(get("r")?),
        "cone" => SurfaceSpec::cone(params.get("slope").copied().unwrap_or(DEFAULT_CONE_SLOPE)),
        "catenoid" => Ok(SurfaceSpec::catenoid()),
        "helicoid" => Ok(SurfaceSpec::helicoid()),
        "binormal" => SurfaceSpec::binormal(get("tau")?),
        "grusin" => Ok(SurfaceSpec::grusin()),
        "revolution_profile" | "ruled" => Err(CatenaryError::Config(format!(
            "surface `{kind}` is built from sample data, not parameters"
        ))),
        other => Err(CatenaryError::Config(format!("unknown surface kind `{other}`"))),
    }
}

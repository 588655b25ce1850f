use thiserror::Error;

/// Errors raised by the library. Runtime exits of a trace are not errors;
/// they are reported through [`crate::integrator::Termination`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatenaryError {
    #[error("point (u={u}, v={v}) is outside the surface domain")]
    Domain { u: f64, v: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate metric at (u={u}, v={v}): G^2 = {radicand} is not positive")]
    DegenerateMetric { u: f64, v: f64, radicand: f64 },

    #[error("singular jet: the velocity has zero length")]
    SingularJet,

    #[error("surface kind `{0}` is not rotationally symmetric")]
    Kind(String),

    #[error("region rho(u) < c is crossed near u={u}")]
    InaccessibleRegion { u: f64 },

    #[error("u={u} is not a critical parallel (rho'={derivative:e})")]
    NotCritical { u: f64, derivative: f64 },

    #[error("profile is not realizable as a surface of revolution: |a'({u})| = {slope} > 1")]
    NotRealizable { u: f64, slope: f64 },

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {error:e})")]
    Quadrature { a: f64, b: f64, error: f64 },
}

pub type Result<T> = std::result::Result<T, CatenaryError>;

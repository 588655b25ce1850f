//! α-catenaries on surfaces in semi-geodesic coordinates.
//!
//! A curve `γ` in a surface with metric `du² + G(u,v)² dv²` is an α-catenary
//! when it is a critical point of `∫ u^α ds`, the length weighted by the
//! `α`-th power of the distance to the reference curve `u = 0`. For `α = 1`
//! this is the hanging chain; `α = 0` gives geodesics.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod closed_forms;
pub mod curvature;
pub mod error;
pub mod integrator;
pub mod interp;
pub mod metric;
pub mod ode;
pub mod oracles;
pub mod quadrature;
pub mod revolution;
pub mod roots;
pub mod validation;

pub use curvature::CurveJet2;
pub use error::{CatenaryError, Result};
pub use integrator::{CatenaryState, Termination, Trace, TraceOptions, TraceSample};
pub use metric::{catalog_surface, SurfaceKind, SurfaceSpec};

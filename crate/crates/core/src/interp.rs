//! Shape-preserving (Fritsch–Carlson) cubic Hermite interpolation.

use crate::error::{CatenaryError, Result};

/// Monotone piecewise-cubic interpolant through `(x, y)` samples.
///
/// Interior slopes start from the three-point parabolic estimate and are then
/// limited so that the interpolant is monotone wherever the data are. Local
/// extrema of the data get a zero slope, so no overshoot is introduced.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(CatenaryError::Config(format!(
                "interpolation needs as many abscissae ({n}) as values ({})",
                y.len()
            )));
        }
        if n < 2 {
            return Err(CatenaryError::Config("interpolation needs at least 2 samples".into()));
        }
        if x.iter().chain(y.iter()).any(|t| !t.is_finite()) {
            return Err(CatenaryError::Config("non-finite sample".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CatenaryError::Config(
                "sample abscissae must be strictly increasing".into(),
            ));
        }

        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];

        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] <= 0.0 {
                    d[i] = 0.0;
                } else {
                    d[i] = (h[i] * delta[i - 1] + h[i - 1] * delta[i]) / (h[i - 1] + h[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);

            for k in 0..n - 1 {
                if delta[k] == 0.0 {
                    d[k] = 0.0;
                    d[k + 1] = 0.0;
                    continue;
                }
                let a = d[k] / delta[k];
                let b = d[k + 1] / delta[k];
                let r2 = a * a + b * b;
                if r2 > 9.0 {
                    let tau = 3.0 / r2.sqrt();
                    d[k] = tau * a * delta[k];
                    d[k + 1] = tau * b * delta[k];
                }
            }
        }

        Ok(Self { x, y, d })
    }

    pub fn x_min(&self) -> f64 {
        self.x[0]
    }

    pub fn x_max(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.x, &self.y)
    }

    fn segment(&self, t: f64) -> usize {
        match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            k => (k - 1).min(self.x.len() - 2),
        }
    }

    /// Value, first and second derivative at `t`. Outside the sample range the
    /// end cubic is extended.
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        let k = self.segment(t);
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (y0, y1) = (self.y[k], self.y[k + 1]);
        let (m0, m1) = (self.d[k] * h, self.d[k + 1] * h);

        let s2 = s * s;
        let s3 = s2 * s;
        let value =
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
        let first = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h;
        let second =
            ((12.0 * s - 6.0) * y0 + (6.0 * s - 4.0) * m0 + (-12.0 * s + 6.0) * y1 + (6.0 * s - 2.0) * m1) / (h * h);
        (value, first, second)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval3(t).0
    }
}

// One-sided three-point slope, kept shape preserving.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

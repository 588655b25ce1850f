//! Dormand–Prince 5(4) stepper with PI step-size control and the standard
//! fourth-order continuous extension.
//!
//! The stepper only advances; event handling is the caller's job, using the
//! [`DenseSegment`] of every accepted step.

/// Right-hand side of `y′ = f(t, y)`. `None` means the state left the region
/// where `f` is defined; the stepper then retries with a smaller step.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N]) -> Option<[f64; N]>;
}

#[derive(Debug, Clone, Copy)]
pub struct StepperOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    /// Smallest step, relative to `max(1, |t|)`.
    pub h_min_rel: f64,
    pub safety: f64,
    pub fac_min: f64,
    pub fac_max: f64,
    pub beta: f64,
}

impl StepperOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            h_max: f64::INFINITY,
            h_min_rel: 1e-14,
            safety: 0.9,
            fac_min: 0.2,
            fac_max: 10.0,
            beta: 0.04,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Continuous extension over one accepted step `[t0, t0 + h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn start(&self) -> [f64; N] {
        self.r[0]
    }

    pub fn end(&self) -> [f64; N] {
        let mut y = self.r[0];
        for (yi, di) in y.iter_mut().zip(self.r[1].iter()) {
            *yi += di;
        }
        y
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        std::array::from_fn(|i| {
            let r = |k: usize| self.r[k][i];
            r(0) + th * (r(1) + th1 * (r(2) + th * (r(3) + th1 * r(4))))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepError {
    /// The step size fell below the minimum.
    Underflow,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StepperStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

pub struct Dopri5<'a, const N: usize, S: OdeSystem<N>> {
    sys: &'a S,
    opts: StepperOptions,
    t: f64,
    y: [f64; N],
    f: [f64; N],
    h: f64,
    fac_old: f64,
    last_rejected: bool,
    pub stats: StepperStats,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl<'a, const N: usize, S: OdeSystem<N>> Dopri5<'a, N, S> {
    /// Returns `None` when the right-hand side is undefined at the start.
    pub fn new(sys: &'a S, t0: f64, y0: [f64; N], opts: StepperOptions) -> Option<Self> {
        let f0 = sys.rhs(t0, &y0)?;
        let mut st = Self {
            sys,
            opts,
            t: t0,
            y: y0,
            f: f0,
            h: 0.0,
            fac_old: 1e-4,
            last_rejected: false,
            stats: StepperStats {
                evaluations: 1,
                ..Default::default()
            },
        };
        st.h = st.initial_step();
        Some(st)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> [f64; N] {
        self.y
    }

    pub fn derivative(&self) -> [f64; N] {
        self.f
    }

    fn norm(&self, v: &[f64; N], scale_from: &[f64; N]) -> f64 {
        let mut acc = 0.0;
        for i in 0..N {
            let sk = self.opts.atol + self.opts.rtol * scale_from[i].abs();
            acc += (v[i] / sk).powi(2);
        }
        (acc / N as f64).sqrt()
    }

    // Hairer–Nørsett–Wanner starting step heuristic.
    fn initial_step(&mut self) -> f64 {
        let d0 = self.norm(&self.y, &self.y);
        let d1 = self.norm(&self.f, &self.y);
        let mut h0 = if d0 < 1e-10 || d1 < 1e-10 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(self.opts.h_max);
        let y1 = axpy(&self.y, h0, &[(1.0, &self.f)]);
        self.stats.evaluations += 1;
        let Some(f1) = self.sys.rhs(self.t + h0, &y1) else {
            return 0.1 * h0;
        };
        let mut diff = [0.0; N];
        for i in 0..N {
            diff[i] = f1[i] - self.f[i];
        }
        let d2 = self.norm(&diff, &self.y) / h0;
        let dmax = d1.max(d2);
        let h1 = if dmax <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / dmax).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.opts.h_max)
    }

    /// Advances one accepted step, never past `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<DenseSegment<N>, StepError> {
        let expo1 = 0.2 - 0.75 * self.opts.beta;
        let facc1 = 1.0 / self.opts.fac_min;
        let facc2 = 1.0 / self.opts.fac_max;
        loop {
            let h_min = self.opts.h_min_rel * self.t.abs().max(1.0);
            let mut h = self.h.min(self.opts.h_max);
            let remaining = t_end - self.t;
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            if h < h_min && !last {
                return Err(StepError::Underflow);
            }

            match self.attempt(h) {
                None => {
                    // A stage left the region of definition.
                    self.stats.rejected += 1;
                    self.last_rejected = true;
                    self.h = 0.25 * h;
                    if self.h < h_min {
                        return Err(StepError::Underflow);
                    }
                }
                Some((y1, f1, err, seg)) => {
                    let fac11 = err.powf(expo1);
                    if err <= 1.0 {
                        let mut fac = fac11 / self.fac_old.powf(self.opts.beta);
                        fac = facc2.max(facc1.min(fac / self.opts.safety));
                        let mut h_new = h / fac;
                        self.fac_old = err.max(1e-4);
                        if self.last_rejected {
                            h_new = h_new.min(h);
                        }
                        self.last_rejected = false;
                        self.stats.accepted += 1;
                        self.t = if last { t_end } else { self.t + h };
                        self.y = y1;
                        self.f = f1;
                        // Keep the step proposal from a shortened final step.
                        self.h = if last { h_new.max(self.h) } else { h_new };
                        return Ok(seg);
                    }
                    self.stats.rejected += 1;
                    self.last_rejected = true;
                    self.h = h / facc1.min(fac11 / self.opts.safety);
                    if self.h < h_min {
                        return Err(StepError::Underflow);
                    }
                }
            }
        }
    }

    #[allow(clippy::type_complexity)]
    fn attempt(&mut self, h: f64) -> Option<([f64; N], [f64; N], f64, DenseSegment<N>)> {
        let (t, y, k1) = (self.t, self.y, self.f);
        let sys = self.sys;
        let mut eval = |dt: f64, yy: &[f64; N]| {
            self.stats.evaluations += 1;
            sys.rhs(t + dt, yy)
        };
        let k2 = eval(C2 * h, &axpy(&y, h, &[(A21, &k1)]))?;
        let k3 = eval(C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = eval(C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = eval(C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
        let k6 = eval(
            h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        )?;
        let y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = eval(h, &y1)?;

        let mut e = [0.0; N];
        let mut scale = [0.0; N];
        for i in 0..N {
            e[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            scale[i] = y[i].abs().max(y1[i].abs());
        }
        let err = self.norm(&e, &scale);
        if !err.is_finite() || y1.iter().any(|x| !x.is_finite()) {
            return None;
        }

        let mut r = [[0.0; N]; 5];
        for i in 0..N {
            let dy = y1[i] - y[i];
            let bspl = h * k1[i] - dy;
            r[0][i] = y[i];
            r[1][i] = dy;
            r[2][i] = bspl;
            r[3][i] = dy - h * k7[i] - bspl;
            r[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        Some((y1, k7, err, DenseSegment { t0: t, h, r }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Oscillator;
    impl OdeSystem<2> for Oscillator {
        fn rhs(&self, _t: f64, y: &[f64; 2]) -> Option<[f64; 2]> {
            Some([y[1], -y[0]])
        }
    }

    #[test]
    fn harmonic_oscillator_to_tolerance() {
        let sys = Oscillator;
        let mut st = Dopri5::new(&sys, 0.0, [1.0, 0.0], StepperOptions::with_tol(1e-10)).unwrap();
        let mut max_dense = 0.0f64;
        while st.t() < 10.0 {
            let seg = st.step(10.0).unwrap();
            for k in 0..=10 {
                let t = seg.t0 + seg.h * k as f64 / 10.0;
                max_dense = max_dense.max((seg.eval(t)[0] - t.cos()).abs());
            }
            let end = seg.end();
            assert!((end[0] - st.y()[0]).abs() < 1e-15);
        }
        assert_eq!(st.t(), 10.0);
        assert!((st.y()[0] - 10f64.cos()).abs() < 1e-8);
        assert!(max_dense < 1e-8, "dense error {max_dense}");
    }

    struct Bounded;
    impl OdeSystem<1> for Bounded {
        fn rhs(&self, _t: f64, y: &[f64; 1]) -> Option<[f64; 1]> {
            (y[0] < 1.0).then_some([1.0 / (1.0 - y[0])])
        }
    }

    #[test]
    fn undefined_region_shrinks_until_underflow() {
        // y = 1 − √(1 − 2t) reaches the singular point at t = 1/2.
        let sys = Bounded;
        let mut st = Dopri5::new(&sys, 0.0, [0.0], StepperOptions::with_tol(1e-8)).unwrap();
        let mut outcome = Ok(());
        for _ in 0..100_000 {
            match st.step(1.0) {
                Ok(_) => {}
                Err(e) => {
                    outcome = Err(e);
                    break;
                }
            }
        }
        assert_eq!(outcome, Err(StepError::Underflow));
        assert!((st.t() - 0.5).abs() < 1e-6, "t = {} y = {:?}", st.t(), st.y());
    }
}

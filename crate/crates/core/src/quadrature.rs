//! Adaptive Gauss–Kronrod (10/21-point) quadrature with endpoint
//! substitutions for inverse-square-root singularities and infinite tails.

// Node and weight tables are kept exactly as published.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{CatenaryError, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_540,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * half;
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    (result, err, 3.0 * (resasc.abs() + result.abs()) * f64::EPSILON)
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(CatenaryError::Quadrature { a, b, error: f64::NAN });
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut evaluations = 0;
    let mut eval = |x: f64| {
        evaluations += 1;
        f(x)
    };
    let (value, error, round) = gk21(&mut eval, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, value, error });
    let (mut total, mut total_err, mut round_err) = (value, error, round);
    let mut count = 1;
    loop {
        if !total.is_finite() {
            return Err(CatenaryError::Quadrature { a, b, error: total_err });
        }
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target || total_err <= round_err {
            break;
        }
        if count >= opts.max_intervals {
            return Err(CatenaryError::Quadrature { a, b, error: total_err });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(CatenaryError::Quadrature { a, b, error: total_err });
        }
        let (v1, e1, r1) = gk21(&mut eval, worst.a, mid);
        let (v2, e2, r2) = gk21(&mut eval, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        round_err += r1 + r2;
        heap.push(Interval {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        count += 1;
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    let value = heap.iter().map(|i| i.value).sum();
    let error = heap.iter().map(|i| i.error).sum();
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}

/// Integral over `[a, b]` of an integrand that may blow up like
/// `|x − endpoint|^{-1/2}` at either end. Each half is mapped with
/// `x = endpoint ± ξ²`.
pub fn integrate_sqrt_ends<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mid = 0.5 * (lo + hi);
    let w = (mid - lo).sqrt();
    let left = integrate(|xi| 2.0 * xi * f(lo + xi * xi), 0.0, w, opts)?;
    let right = integrate(|xi| 2.0 * xi * f(hi - xi * xi), 0.0, (hi - mid).sqrt(), opts)?;
    Ok(QuadResult {
        value: sign * (left.value + right.value),
        error: left.error + right.error,
        evaluations: left.evaluations + right.evaluations,
    })
}

/// Integral of `f` over `[a, ∞)`, `a > 0`, via `x = a/t`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(CatenaryError::Quadrature {
            a,
            b: f64::INFINITY,
            error: f64::NAN,
        });
    }
    let res = integrate(
        |t| {
            if t <= 0.0 {
                0.0
            } else {
                let x = a / t;
                f(x) * x / t
            }
        },
        0.0,
        1.0,
        opts,
    )
    .map_err(|_| CatenaryError::Quadrature {
        a,
        b: f64::INFINITY,
        error: f64::NAN,
    })?;
    if !res.value.is_finite() {
        return Err(CatenaryError::Quadrature {
            a,
            b: f64::INFINITY,
            error: res.error,
        });
    }
    Ok(res)
}

//! Bracketing and bisection on scalar functions.

use crate::batch;

/// Bisection on a sign-changing bracket. Returns `None` without a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if !(flo * fhi < 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Logarithmically spaced grid on `[lo, hi]`, `0 < lo < hi`.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(2);
    let (l0, l1) = (lo.ln(), hi.ln());
    let mut grid: Vec<f64> = (0..=n).map(|k| (l0 + (l1 - l0) * k as f64 / n as f64).exp()).collect();
    grid[0] = lo;
    grid[n] = hi;
    grid
}

/// Uniform grid with `n + 1` points.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    let mut grid: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    grid[n] = hi;
    grid
}

/// Brackets of sign changes of `values` over `grid`. Values with magnitude
/// at or below `noise` count as zero and never start a bracket on their own.
pub fn sign_change_brackets(grid: &[f64], values: &[f64], noise: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for (&x, &y) in grid.iter().zip(values) {
        if !y.is_finite() || y.abs() <= noise {
            continue;
        }
        if let Some((xl, yl)) = last {
            if (yl < 0.0) != (y < 0.0) {
                out.push((xl, x));
            }
        }
        last = Some((x, y));
    }
    out
}

/// All roots of `f` on the grid, found by bisecting each sign change.
/// The grid is evaluated through [`batch::map`].
pub fn roots_on_grid<F>(f: F, grid: &[f64], noise: f64, xtol: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let values = batch::map(grid, |&x| f(x));
    sign_change_brackets(grid, &values, noise)
        .into_iter()
        .filter_map(|(a, b)| bisect(&f, a, b, xtol))
        .collect()
}

pub fn roots_on_grid_sequential<F>(f: F, grid: &[f64], noise: f64, xtol: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    sign_change_brackets(grid, &values, noise)
        .into_iter()
        .filter_map(|(a, b)| bisect(&f, a, b, xtol))
        .collect()
}

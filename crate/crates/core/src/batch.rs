//! Batch evaluation helpers.
//!
//! With the `parallel` feature (on by default) [`map`] fans out over the rayon
//! pool; without it, it falls back to a plain iterator. [`map_sequential`] is
//! always sequential so both paths can be compared in one build. Output order
//! always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_sequential(items, f)
}

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Evaluates `f` on every point of `grid`, splitting the grid into chunks.
pub fn eval_grid<F>(grid: &[f64], f: F) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    const CHUNK: usize = 512;
    let chunks: Vec<&[f64]> = grid.chunks(CHUNK).collect();
    map(&chunks, |c| c.iter().map(|&x| f(x)).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}

pub fn eval_grid_sequential<F>(grid: &[f64], f: F) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    grid.iter().map(|&x| f(x)).collect()
}

/// True when the crate was built with the rayon backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..10_000).collect();
        let a = map(&xs, |x| x * x);
        let b = map_sequential(&xs, |x| x * x);
        assert_eq!(a, b);
    }

    #[test]
    fn grid_chunks_match_sequential() {
        let grid: Vec<f64> = (0..2049).map(|i| i as f64 * 0.01).collect();
        assert_eq!(eval_grid(&grid, f64::sin), eval_grid_sequential(&grid, f64::sin));
    }
}

//! Degree-level data parallelism.
//!
//! Slices at distinct degrees are independent, so scans over a degree range
//! fan out across a rayon pool when the `parallel` feature (default) is
//! enabled; without it `scan` degrades to the sequential loop. `scan_serial`
//! is always sequential and exists so benchmarks can compare both paths.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn scan<T, F>(items: &[usize], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(|&d| f(d)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        scan_serial(items, f)
    }
}

pub fn scan_serial<T, F>(items: &[usize], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    items.iter().map(|&d| f(d)).collect()
}

/// Configure the global worker count. A count of 0 leaves the default.
/// Returns false if a pool was already installed (harmless; later calls
/// keep the existing pool).
pub fn set_workers(workers: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        if workers == 0 {
            return true;
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        true
    }
}

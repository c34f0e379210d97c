//! Trial-level execution: rayon data-parallel by default, with a sequential
//! path that stays compiled so benchmarks can compare the two.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    /// Rayon work-stealing pool (falls back to sequential when the crate is
    /// built without the `parallel` feature).
    Parallel,
    Sequential,
}

impl ExecMode {
    pub fn default_mode() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Maps `f` over 0..count, preserving index order in the output.
pub fn map_trials<T, F>(mode: ExecMode, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..count).map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                (0..count).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..count).map(f).collect()
            }
        }
    }
}

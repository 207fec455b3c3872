//! Data-parallel execution with a sequential fallback.
//!
//! Every helper returns results in input order, so parallel and sequential
//! runs produce identical output.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Rayon's global pool; falls back to sequential when the `parallel`
    /// feature is disabled.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn map_range<R, F>(self, range: Range<u64>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => range.into_par_iter().map(f).collect(),
            _ => range.map(f).collect(),
        }
    }

    pub fn map_slice<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Concatenation of per-index outputs, in index order.
    pub fn flat_map_range<R, F>(self, range: Range<u64>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> Vec<R> + Sync + Send,
    {
        self.map_range(range, f).into_iter().flatten().collect()
    }

    /// First error in index order, or all outputs.
    pub fn try_map_range<R, E, F>(self, range: Range<u64>, f: F) -> Result<Vec<R>, E>
    where
        R: Send,
        E: Send,
        F: Fn(u64) -> Result<R, E> + Sync + Send,
    {
        self.map_range(range, f).into_iter().collect()
    }
}

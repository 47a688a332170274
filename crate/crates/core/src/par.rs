//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the work is spread over the rayon pool; the
//! worker count can be set with `DOODLE_THREADS`. Without the feature, or
//! with [`Execution::Sequential`], everything runs on the calling thread.

use std::sync::Once;

pub const THREADS_ENV: &str = "DOODLE_THREADS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Configures the global pool from `DOODLE_THREADS`, once. Returns the
/// number of workers in use.
pub fn init_from_env() -> usize {
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        #[cfg(feature = "parallel")]
        if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
            // Fails only if a pool already exists, in which case keep it.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    });
    workers()
}

pub fn workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Maps every item and folds the results with an associative, commutative
/// `combine`. `fold` accumulates items into a per-worker state.
pub fn fold_reduce<T, S, F, C, I>(items: &[T], exec: Execution, init: I, fold: F, combine: C) -> S
where
    T: Sync,
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(S, &T) -> S + Sync + Send,
    C: Fn(S, S) -> S + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().fold(&init, &fold).reduce(&init, &combine)
        }
        _ => {
            let _ = &combine;
            items.iter().fold(init(), fold)
        }
    }
}

/// Order-preserving map.
pub fn map<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

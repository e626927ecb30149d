//! Data-parallel execution with a sequential fallback.
//!
//! Work items are addressed by index and results are always returned in index
//! order, so the output of a run does not depend on the worker count. With the
//! `parallel` feature disabled every [`Exec`] runs sequentially.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Rayon on the global pool.
    #[default]
    Parallel,
    /// Rayon on a dedicated pool of this many threads.
    Workers(usize),
}

impl Exec {
    /// Maps `f` over `range`, returning results in index order.
    pub fn map<T, F>(&self, range: Range<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match *self {
            Exec::Sequential => range.map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => par_map(range, f),
            #[cfg(feature = "parallel")]
            Exec::Workers(k) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k.max(1))
                    .build()
                    .expect("thread pool");
                pool.install(|| par_map(range, f))
            }
            #[cfg(not(feature = "parallel"))]
            Exec::Parallel | Exec::Workers(_) => range.map(f).collect(),
        }
    }

    /// Like [`Exec::map`] for fallible work; the error of the lowest failing
    /// index wins.
    pub fn try_map<T, E, F>(&self, range: Range<usize>, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map(range, f).into_iter().collect()
    }

    pub fn describe(&self) -> String {
        match self {
            Exec::Sequential => "sequential".into(),
            Exec::Parallel if cfg!(feature = "parallel") => "parallel".into(),
            Exec::Workers(k) if cfg!(feature = "parallel") => format!("parallel({k})"),
            _ => "sequential (parallel feature disabled)".into(),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    range.into_par_iter().map(f).collect()
}

/// Splits `0..total` into `shards` contiguous, nearly equal ranges.
pub fn shard_ranges(total: u64, shards: usize) -> Vec<Range<u64>> {
    let shards = shards.max(1) as u64;
    let base = total / shards;
    let extra = total % shards;
    let mut start = 0;
    (0..shards)
        .map(|k| {
            let len = base + u64::from(k < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

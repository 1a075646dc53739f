//! Chunked map over index ranges, run on rayon when the `parallel` feature is
//! on. Chunk boundaries depend only on the absolute index, and results always
//! come back in ascending chunk order, so output never depends on the thread
//! count.

use std::ops::RangeInclusive;

#[cfg(feature = "parallel")]
use crate::error::Error;
use crate::error::Result;

pub const DEFAULT_CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[default]
    Sequential,
    /// `threads == 0` uses rayon's global pool.
    Parallel { threads: usize },
}

impl Exec {
    pub fn from_threads(threads: usize) -> Self {
        if threads <= 1 {
            Exec::Sequential
        } else {
            Exec::Parallel { threads }
        }
    }
}

/// Split `range` into blocks aligned to multiples of `chunk`.
pub fn chunks(range: RangeInclusive<u64>, chunk: u64) -> Vec<RangeInclusive<u64>> {
    let (lo, hi) = (*range.start(), *range.end());
    let mut out = Vec::new();
    if lo > hi || chunk == 0 {
        return out;
    }
    let mut a = lo;
    loop {
        let b = ((a / chunk) + 1).saturating_mul(chunk).saturating_sub(1).min(hi);
        out.push(a..=b);
        if b == hi {
            break;
        }
        a = b + 1;
    }
    out
}

/// Apply `f` to every chunk, returning results in chunk order.
pub fn map_chunks<T, F>(exec: Exec, range: RangeInclusive<u64>, chunk: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RangeInclusive<u64>) -> Result<T> + Sync + Send,
{
    let parts = chunks(range, chunk);
    match exec {
        Exec::Sequential => parts.into_iter().map(f).collect(),
        Exec::Parallel { threads } => run_parallel(parts, threads, f),
    }
}

#[cfg(feature = "parallel")]
fn run_parallel<T, F>(parts: Vec<RangeInclusive<u64>>, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RangeInclusive<u64>) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    let go = || parts.into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    if threads == 0 {
        return go();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(go)
}

#[cfg(not(feature = "parallel"))]
fn run_parallel<T, F>(parts: Vec<RangeInclusive<u64>>, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RangeInclusive<u64>) -> Result<T> + Sync + Send,
{
    let _ = threads;
    parts.into_iter().map(f).collect()
}

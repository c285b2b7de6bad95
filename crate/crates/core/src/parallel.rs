//! Order-preserving map over an integer range, serial or on a fixed-size pool.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// `f(lo), f(lo + 1), …, f(hi)` in order. `threads == 1` runs on the calling
/// thread; otherwise a dedicated pool of `threads` workers is used (0 lets
/// rayon pick).
pub fn map_range<T, F>(lo: u64, hi: u64, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if lo > hi {
        return Ok(Vec::new());
    }
    if threads == 1 {
        return Ok((lo..=hi).map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let len = (hi - lo + 1) as usize;
    Ok(pool.install(|| {
        (0..len)
            .into_par_iter()
            .with_min_len(256)
            .map(|i| f(lo + i as u64))
            .collect()
    }))
}

/// Like [`map_range`] for fallible `f`; the first error in range order wins.
pub fn try_map_range<T, F>(lo: u64, hi: u64, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    map_range(lo, hi, threads, f)?.into_iter().collect()
}

//! Deterministic reduction over index ranges.
//!
//! Sums are split into fixed-size chunks; each chunk is reduced sequentially
//! and the partial sums are combined in chunk order.  The result is therefore
//! bit-identical for any thread count (including the sequential fallback used
//! without the `parallel` feature).

use alloc::vec::Vec;
use num_complex::Complex64;

pub const CHUNK: u64 = 1 << 13;

/// Sums `f(i)` for `i` in `0..len` with the fixed chunked reduction order.
pub fn sum_indexed<F>(len: u64, f: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    let chunks: Vec<(u64, u64)> = (0..len)
        .step_by(CHUNK as usize)
        .map(|lo| (lo, (lo + CHUNK).min(len)))
        .collect();
    let partials = map_chunks(&chunks, |&(lo, hi)| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += f(i);
        }
        acc
    });
    let mut total = Complex64::new(0.0, 0.0);
    for p in partials {
        total += p;
    }
    total
}

#[cfg(feature = "parallel")]
fn map_chunks<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_chunks<T, U, F: Fn(&T) -> U>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Parallel map over an index range, order-preserving.
pub fn collect_indexed<U: Send, F>(len: u64, f: F) -> Vec<U>
where
    F: Fn(u64) -> U + Sync,
{
    let idx: Vec<u64> = (0..len).collect();
    map_chunks(&idx, |&i| f(i))
}

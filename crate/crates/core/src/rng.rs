//! Seeded random streams.
//!
//! Every Monte Carlo workload is cut into fixed-size batches and batch `b`
//! draws from ChaCha stream `b` of a seed derived from the master seed and a
//! purpose tag. Results therefore do not depend on how rayon schedules the
//! batches, or on how many worker threads exist.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used by every simulation path.
pub type SimRng = ChaCha8Rng;

/// SplitMix64 finalizer, used to derive independent seeds from a master seed.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed for a named purpose.
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    tag.bytes()
        .fold(mix64(seed), |acc, b| mix64(acc ^ u64::from(b)))
}

/// Generator for substream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `n` work items into `(stream, start, len)` batches of at most `batch` items.
pub fn batches(n: usize, batch: usize) -> impl Iterator<Item = (u64, usize, usize)> {
    let batch = batch.max(1);
    (0..n.div_ceil(batch)).map(move |b| {
        let start = b * batch;
        (b as u64, start, batch.min(n - start))
    })
}

/// Worker count for parallel sections: `SMNUC_WORKERS` if set, else rayon's default.
pub fn worker_count() -> usize {
    std::env::var("SMNUC_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Sizes rayon's global pool from [`worker_count`]. Results never depend on
/// the pool size; only wall time does. Call once, before any parallel work.
pub fn configure_workers() -> usize {
    let n = worker_count();
    // an already-initialized pool keeps its size
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    rayon::current_num_threads()
}

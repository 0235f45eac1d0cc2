//! Deterministic randomness: sample `i` of a run seeded with `seed` always
//! draws from ChaCha8 stream `i`, independent of thread scheduling.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type SampleRng = ChaCha8Rng;

/// The generator for substream `index` of `seed`.
pub fn substream(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `f` on substreams `0..count` in parallel and returns the results in
/// sample order.
pub fn par_samples<T, F>(seed: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SampleRng, usize) -> T + Sync + Send,
{
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i as u64);
            f(&mut rng, i)
        })
        .collect()
}

/// Fills `out` with independent Rademacher signs (±1).
pub fn rademacher<R: RngCore + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for chunk in out.chunks_mut(64) {
        let bits = rng.next_u64();
        for (b, v) in chunk.iter_mut().enumerate() {
            *v = if (bits >> b) & 1 == 1 { 1.0 } else { -1.0 };
        }
    }
}

/// Point uniform in the closed Euclidean ball of radius `r` in `R^k`.
pub fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, k: usize, r: f64) -> Vec<f64> {
    use rand_distr::StandardNormal;
    let mut v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let radius = r * rng.random::<f64>().powf(1.0 / k as f64);
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x *= radius / norm);
    }
    v
}

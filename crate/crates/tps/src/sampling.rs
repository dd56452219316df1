//! Seeded random points and vectors.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tps_core::chart::phase_dim;
use tps_core::{DarbouxPoint, TangentVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on `[−2, −0.1] ∪ [0.1, 2]`, which keeps every coordinate away
/// from zero so gauges such as `1/p1` stay regular.
pub fn coordinate<R: Rng>(rng: &mut R) -> f64 {
    let magnitude = rng.gen_range(0.1..=2.0);
    if rng.gen_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

pub fn point<R: Rng>(rng: &mut R, n: usize) -> DarbouxPoint {
    let coords = (0..phase_dim(n)).map(|_| coordinate(rng)).collect();
    DarbouxPoint::from_coords(n, coords).expect("finite coordinates")
}

pub fn points<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<DarbouxPoint> {
    (0..count).map(|_| point(rng, n)).collect()
}

/// Components uniform in `[−1, 1]`.
pub fn vector<R: Rng>(rng: &mut R, n: usize) -> TangentVector {
    let coords = (0..phase_dim(n)).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    TangentVector::new(n, coords).expect("dimension")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_avoid_zero_and_repeat_per_seed() {
        let mut a = rng(7);
        let mut b = rng(7);
        for _ in 0..1000 {
            let x = coordinate(&mut a);
            assert!((0.1..=2.0).contains(&x.abs()));
            assert_eq!(x, coordinate(&mut b));
        }
    }
}

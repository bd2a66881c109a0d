//! Deterministic sampling: per-index random streams and low-discrepancy
//! directions on the Euclidean sphere.
//!
//! Every sample index owns an independent ChaCha stream, so the first `k`
//! samples of a run with budget `n > k` coincide with a run of budget `k`.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::spaces::NormSpec;
use crate::vector::Vector;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Random stream number `index` of the generator seeded by `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard Gaussian vector.
pub fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Uniform draw from `[lo, hi)`.
pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Gaussian vector normalized in the given norm, redrawn until nonzero.
pub fn random_unit(space: &NormSpec, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let v = Vector::from_raw(gaussian(rng, space.dim()));
        if let Some(u) = space.normalize(&v) {
            return u;
        }
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Shifted Halton directions on the Euclidean unit sphere.
///
/// In the plane the angle follows the van der Corput sequence; in higher
/// dimensions Halton points are pushed through the inverse normal CDF and
/// normalized. A seeded Cranley–Patterson shift decorrelates runs.
#[derive(Debug, Clone)]
pub struct SphereSequence {
    dim: usize,
    shift: Vec<f64>,
}

impl SphereSequence {
    pub fn new(dim: usize, seed: u64) -> Self {
        let mut rng = stream(seed, u64::MAX);
        let shift = (0..dim).map(|_| rng.random::<f64>()).collect();
        Self { dim, shift }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `k`-th direction, of unit Euclidean length.
    pub fn direction(&self, k: u64) -> Vec<f64> {
        match self.dim {
            1 => vec![if (radical_inverse(k + 1, 2) + self.shift[0]).fract() < 0.5 { 1.0 } else { -1.0 }],
            2 => {
                let t = std::f64::consts::TAU * (radical_inverse(k + 1, 2) + self.shift[0]).fract();
                vec![t.cos(), t.sin()]
            }
            n => {
                let normal = Normal::standard();
                let z: Vec<f64> = (0..n)
                    .map(|j| {
                        let u = (radical_inverse(k + 1, PRIMES[j]) + self.shift[j]).fract();
                        normal.inverse_cdf(u.clamp(1e-12, 1.0 - 1e-12))
                    })
                    .collect();
                let r = z.iter().map(|v| v * v).sum::<f64>().sqrt();
                if r == 0.0 {
                    let mut e = vec![0.0; n];
                    e[0] = 1.0;
                    return e;
                }
                z.into_iter().map(|v| v / r).collect()
            }
        }
    }

    /// The `k`-th direction renormalized to the unit sphere of `space`.
    pub fn unit_point(&self, space: &NormSpec, k: u64) -> Vector {
        let d = Vector::from_raw(self.direction(k));
        space.normalize(&d).expect("directions are nonzero")
    }
}

/// The first `count` points of the seeded sphere sequence, normalized in `space`.
pub fn sphere_points(space: &NormSpec, count: usize, seed: u64) -> Vec<Vector> {
    let seq = SphereSequence::new(space.dim(), seed);
    (0..count as u64).map(|k| seq.unit_point(space, k)).collect()
}

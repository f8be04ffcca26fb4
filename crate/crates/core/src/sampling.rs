//! Seeded exact sample draws.
//!
//! Points are drawn on a dyadic grid inside a box with Q(√2) corners, so
//! every sample is exact and reproducible from the seed.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::QSqrt2;
use crate::geometry::{Point2, SimplePolygon, Location};

/// Environment variable overriding the default sampling seed.
pub const SEED_ENV: &str = "OCTABILL_SEED";
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Grid resolution: samples are `lo + (hi - lo)·n/2^RESOLUTION_BITS`.
const RESOLUTION_BITS: u32 = 24;

/// The seed from [`SEED_ENV`], falling back to [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn unit(&mut self) -> BigRational {
        let n: u64 = self.rng.gen_range(1..(1u64 << RESOLUTION_BITS));
        BigRational::new(BigInt::from(n), BigInt::from(1u64 << RESOLUTION_BITS))
    }

    /// A point of the open box `(lo, hi)`.
    pub fn in_box(&mut self, lo: &Point2, hi: &Point2) -> Point2 {
        let tx = self.unit();
        let ty = self.unit();
        Point2::new(
            &lo.x + &(&hi.x - &lo.x).scale(&tx),
            &lo.y + &(&hi.y - &lo.y).scale(&ty),
        )
    }

    /// Rejection sampling from the bounding box until `accept` holds.
    pub fn filtered<F: Fn(&Point2) -> bool>(
        &mut self,
        lo: &Point2,
        hi: &Point2,
        count: usize,
        accept: F,
    ) -> Vec<Point2> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let p = self.in_box(lo, hi);
            if accept(&p) {
                out.push(p);
            }
        }
        out
    }

    /// Interior points of a polygon.
    pub fn in_polygon(&mut self, poly: &SimplePolygon, count: usize) -> Vec<Point2> {
        let (lo, hi) = bounding_box(poly.vertices());
        self.filtered(&lo, &hi, count, |p| poly.locate(p) == Location::Interior)
    }
}

/// Exact axis-aligned bounding box.
pub fn bounding_box(pts: &[Point2]) -> (Point2, Point2) {
    let min = |f: fn(&Point2) -> &QSqrt2| pts.iter().map(f).min().expect("nonempty").clone();
    let max = |f: fn(&Point2) -> &QSqrt2| pts.iter().map(f).max().expect("nonempty").clone();
    (
        Point2::new(min(|p| &p.x), min(|p| &p.y)),
        Point2::new(max(|p| &p.x), max(|p| &p.y)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_points() {
        let lo = Point2::from_ints(0, 0, 0, 0);
        let hi = Point2::from_ints(1, 1, 1, 1);
        let a: Vec<_> = (0..5).map({
            let mut s = Sampler::new(7);
            move |_| s.in_box(&lo, &hi)
        }).collect();
        let lo = Point2::from_ints(0, 0, 0, 0);
        let hi = Point2::from_ints(1, 1, 1, 1);
        let mut s = Sampler::new(7);
        let b: Vec<_> = (0..5).map(|_| s.in_box(&lo, &hi)).collect();
        assert_eq!(a, b);
    }
}

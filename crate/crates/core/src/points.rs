//! Deterministic sample points for evaluation-identity checks.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed of the canonical verification grid.
pub const VERIFICATION_SEED: u64 = 0x5eed_57e1;

/// Number of points in the canonical grid.
pub const VERIFICATION_COUNT: usize = 20;

const MIN_MODULUS: f64 = 0.1;
const MAX_MODULUS: f64 = 10.0;
/// Minimum angular distance from the negative real axis.
const AXIS_CLEARANCE: f64 = 0.1;

/// `count` points with `|z|` log-uniform in `[0.1, 10]` and `|arg z| <= pi - 0.1`.
pub fn verification_points(count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let log_r = rng.random_range(libm::log(MIN_MODULUS)..=libm::log(MAX_MODULUS));
            let theta = rng.random_range(-(PI - AXIS_CLEARANCE)..=(PI - AXIS_CLEARANCE));
            Complex64::from_polar(libm::exp(log_r), theta)
        })
        .collect()
}

/// The canonical 20-point grid.
pub fn default_points() -> Vec<Complex64> {
    verification_points(VERIFICATION_COUNT, VERIFICATION_SEED)
}

/// Points in both half-planes with `|Im z| >= |z| sin(0.1)`, for kernel certificates.
pub fn off_axis_points(count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let log_r = rng.random_range(libm::log(MIN_MODULUS)..=libm::log(MAX_MODULUS));
            let theta = rng.random_range(AXIS_CLEARANCE..=(PI - AXIS_CLEARANCE));
            let theta = if i % 2 == 0 { theta } else { -theta };
            Complex64::from_polar(libm::exp(log_r), theta)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_respects_bounds_and_is_deterministic() {
        let pts = default_points();
        assert_eq!(pts.len(), VERIFICATION_COUNT);
        assert_eq!(pts, default_points());
        for z in pts {
            let r = z.norm();
            assert!((MIN_MODULUS - 1e-12..=MAX_MODULUS + 1e-12).contains(&r));
            assert!(z.arg().abs() <= PI - AXIS_CLEARANCE + 1e-12);
        }
    }

    #[test]
    fn off_axis_points_alternate_half_planes() {
        let pts = off_axis_points(40, 7);
        assert_eq!(pts.iter().filter(|z| z.im > 0.0).count(), 20);
        assert!(pts.iter().all(|z| z.im.abs() >= z.norm() * AXIS_CLEARANCE.sin() - 1e-12));
    }
}

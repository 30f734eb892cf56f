//! Seeded generator of random class-G instances shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stieltjes_cf::{Complex64, ComplexMatrix, Pole, PoleResidueForm};

pub const SUITE_SEED: u64 = 0xC0FF_EE11;
pub const SUITE_SIZE: usize = 200;

/// Poles closer than this relative gap are redrawn.
const MIN_POLE_GAP: f64 = 0.05;

/// `G G*` for an `n x rank` matrix `G` with entries uniform in the unit square.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> ComplexMatrix {
    let rows: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|j| {
                    if j < rank {
                        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    let g = ComplexMatrix::from_rows(&rows).expect("finite");
    (&g * &g.adjoint()).hermitian_part()
}

fn random_poles(rng: &mut impl Rng, count: usize) -> Vec<f64> {
    let (lo, hi) = (0.2_f64.ln(), 5.0_f64.ln());
    let mut poles: Vec<f64> = Vec::with_capacity(count);
    while poles.len() < count {
        let lambda = rng.random_range(lo..=hi).exp();
        if poles.iter().all(|&p| (p - lambda).abs() > MIN_POLE_GAP * p.max(lambda)) {
            poles.push(lambda);
        }
    }
    poles
}

/// One instance: size `1..=4`, `1..=5` poles in `[0.2, 5]` with residue
/// ranks `1..=n`, and `f(0)` a random PSD matrix (sometimes zero).
pub fn random_instance(rng: &mut impl Rng) -> PoleResidueForm {
    let n = rng.random_range(1..=4);
    let count = rng.random_range(1..=5);
    let poles: Vec<Pole> = random_poles(rng, count)
        .into_iter()
        .map(|lambda| {
            let rank = rng.random_range(1..=n);
            Pole::new(lambda, random_psd(rng, n, rank))
        })
        .collect();
    let linear = if rng.random_bool(0.3) {
        ComplexMatrix::zeros(n)
    } else {
        let rank = rng.random_range(1..=n);
        random_psd(rng, n, rank)
    };
    let mut constant = if rng.random_bool(0.3) {
        ComplexMatrix::zeros(n)
    } else {
        let rank = rng.random_range(1..=n);
        random_psd(rng, n, rank)
    };
    for p in &poles {
        constant += &p.residue.scale(1.0 / p.lambda);
    }
    PoleResidueForm::new(linear, constant, poles).expect("generated instance is valid")
}

pub fn suite(count: usize, seed: u64) -> Vec<PoleResidueForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng)).collect()
}

/// A scalar instance scaled so that `f(1) = 1`.
pub fn random_normalized_scalar(rng: &mut impl Rng) -> PoleResidueForm {
    let count = rng.random_range(1..=5);
    let poles: Vec<(f64, f64)> =
        random_poles(rng, count).into_iter().map(|lambda| (lambda, rng.random_range(0.1..=2.0))).collect();
    let linear = if rng.random_bool(0.3) { 0.0 } else { rng.random_range(0.1..=2.0) };
    let constant = rng.random_range(0.0..=1.0) + poles.iter().map(|(l, r)| r / l).sum::<f64>();
    let at_one = linear + constant - poles.iter().map(|(l, r)| r / (1.0 + l)).sum::<f64>();
    let scaled: Vec<(f64, f64)> = poles.iter().map(|&(l, r)| (l, r / at_one)).collect();
    PoleResidueForm::scalar(linear / at_one, constant / at_one, &scaled).expect("generated instance is valid")
}

/// `||actual - expected|| / ||expected||`.
pub fn relative_error(actual: &ComplexMatrix, expected: &ComplexMatrix) -> f64 {
    (actual - expected).norm() / expected.norm().max(f64::MIN_POSITIVE)
}

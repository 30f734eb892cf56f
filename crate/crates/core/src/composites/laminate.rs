//! Layered laminates of simple laminates and their synthesis from a
//! normalized class-G function.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::conductivity::ConductivityPair;
use crate::error::{Error, Result};
use crate::pole_residue::PoleResidueForm;
use crate::stieltjes::to_stieltjes;
use crate::tol::Tolerances;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Simple laminate `k` holds phase 1 in proportion `proportions[k]` and is
/// layered into the whole with weight `weights[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaminateSpec {
    weights: Vec<f64>,
    proportions: Vec<f64>,
}

impl LaminateSpec {
    pub fn new(weights: Vec<f64>, proportions: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidLaminate("no layers"));
        }
        if weights.len() != proportions.len() {
            return Err(Error::InvalidLaminate("weights and proportions differ in length"));
        }
        if weights.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::InvalidLaminate("negative weight"));
        }
        if proportions.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return Err(Error::InvalidLaminate("proportion outside [0, 1]"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { weights, proportions })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn proportions(&self) -> &[f64] {
        &self.proportions
    }

    fn layers(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.weights.iter().copied().zip(self.proportions.iter().copied())
    }
}

/// Conductivity across the layers of one simple laminate,
/// `s1 s2 / (q s2 + (1 - q) s1)`.
fn harmonic(pair: &ConductivityPair, q: f64) -> Option<Complex64> {
    let denominator = pair.sigma2 * q + pair.sigma1 * (1.0 - q);
    if denominator.norm() == 0.0 {
        return None;
    }
    Some(pair.sigma1 * pair.sigma2 / denominator)
}

/// Arithmetic average of the harmonic averages, field parallel to the layers.
pub fn laminate_parallel(pair: &ConductivityPair, spec: &LaminateSpec) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (a, q) in spec.layers() {
        if a == 0.0 {
            continue;
        }
        total += harmonic(pair, q).ok_or(Error::ZeroPhase)? * a;
    }
    Ok(total)
}

/// Conductivity perpendicular to the layers, `s1 s2 / parallel(s2, s1)`.
pub fn laminate_perp(pair: &ConductivityPair, spec: &LaminateSpec) -> Result<Complex64> {
    let swapped = laminate_parallel(&pair.swapped(), spec).map_err(|_| Error::ZeroDenominator)?;
    if swapped.norm() == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(pair.sigma1 * pair.sigma2 / swapped)
}

/// Layer data read from `f`; the weights sum to `f(1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaminateSynthesis {
    pub weights: Vec<f64>,
    pub proportions: Vec<f64>,
    pub weight_sum: f64,
}

impl LaminateSynthesis {
    pub fn is_normalized(&self) -> bool {
        (self.weight_sum - 1.0).abs() <= 1e-10
    }

    /// The spec, or `NotNormalized` when `f(1) != 1`.
    pub fn into_spec(self) -> Result<LaminateSpec> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized { sum: self.weight_sum });
        }
        // renormalise rounding in the weight sum
        let sum = self.weight_sum;
        LaminateSpec::new(self.weights.into_iter().map(|a| a / sum).collect(), self.proportions)
    }
}

/// Reads `f(z)/z = A + sum r/(z + mu)` as laminates: each term gives
/// `q = mu/(1 + mu)` and `a = r/(1 + mu)`, the constant gives a pure
/// phase-1 layer (`q = 1`, `a = A`), and a term at `mu = 0` a pure phase-2
/// layer. Then `laminate_parallel(z, 1)` reproduces `f`.
pub fn synthesize_laminate(f: &PoleResidueForm, tol: &Tolerances) -> Result<LaminateSynthesis> {
    if f.dim() != 1 {
        return Err(Error::NotScalar(f.dim()));
    }
    let h = to_stieltjes(f, tol)?;
    let mut weights = Vec::with_capacity(h.terms().len() + 1);
    let mut proportions = Vec::with_capacity(h.terms().len() + 1);
    for term in h.terms() {
        let mu = term.lambda;
        weights.push(term.weight.get(0, 0).re / (1.0 + mu));
        proportions.push(mu / (1.0 + mu));
    }
    let a = h.constant().get(0, 0).re;
    if a > 0.0 {
        weights.push(a);
        proportions.push(1.0);
    }
    let weight_sum = weights.iter().sum();
    Ok(LaminateSynthesis { weights, proportions, weight_sum })
}

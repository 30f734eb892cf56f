//! Coated-sphere and coated-disk formulas, phase interchange and Tartar's
//! lamination formula.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Two phase conductivities. Each lies in the open right half-plane or on
/// the nonnegative real axis, and they do not both vanish.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConductivityPair {
    pub sigma1: Complex64,
    pub sigma2: Complex64,
}

fn admissible(s: Complex64) -> bool {
    s.is_finite() && (s.re > 0.0 || (s.im == 0.0 && s.re >= 0.0))
}

impl ConductivityPair {
    pub fn new(sigma1: Complex64, sigma2: Complex64) -> Result<Self> {
        if !admissible(sigma1) {
            return Err(Error::InvalidConductivity("sigma1 outside the closed right half-plane"));
        }
        if !admissible(sigma2) {
            return Err(Error::InvalidConductivity("sigma2 outside the closed right half-plane"));
        }
        if sigma1 == Complex64::new(0.0, 0.0) && sigma2 == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidConductivity("both phases vanish"));
        }
        Ok(Self { sigma1, sigma2 })
    }

    pub fn real(sigma1: f64, sigma2: f64) -> Result<Self> {
        Self::new(Complex64::new(sigma1, 0.0), Complex64::new(sigma2, 0.0))
    }

    pub fn swapped(&self) -> Self {
        Self { sigma1: self.sigma2, sigma2: self.sigma1 }
    }
}

pub(crate) fn check_fraction(c: f64) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidFraction(c));
    }
    Ok(())
}

pub(crate) fn check_dimension(dim: usize) -> Result<()> {
    if dim != 2 && dim != 3 {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(())
}

/// Conductivity of an assemblage of coated spheres (`dim = 3`) or disks
/// (`dim = 2`) whose core, of volume fraction `c1`, has conductivity `core`
/// and whose shell has conductivity `sigma2`.
///
/// Written as `sigma2 + c1 sigma2 (sigma2 - core) / (d (sigma2 - core) - sigma2)`
/// with `d = (1 - c1)/dim`, which is regular at `core = sigma2`.
pub fn hs_nested(core: Complex64, sigma2: Complex64, c1: f64, dim: usize) -> Result<Complex64> {
    check_fraction(c1)?;
    check_dimension(dim)?;
    let d = (1.0 - c1) / dim as f64;
    let gap = sigma2 - core;
    let denominator = gap * d - sigma2;
    if denominator.norm() <= 1e-14 * (sigma2.norm() + core.norm()) || denominator.norm() == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(sigma2 + sigma2 * gap * c1 / denominator)
}

/// Singly coated assemblage: core `sigma1`, shell `sigma2`.
pub fn hs_coated(pair: &ConductivityPair, c1: f64, dim: usize) -> Result<Complex64> {
    hs_nested(pair.sigma1, pair.sigma2, c1, dim)
}

/// `sigma*(s1, s2) sigma*(s2, s1) - s1 s2`.
pub fn keller_residual<F>(effective: F, pair: &ConductivityPair) -> Result<Complex64>
where
    F: Fn(&ConductivityPair) -> Result<Complex64>,
{
    Ok(effective(pair)? * effective(&pair.swapped())? - pair.sigma1 * pair.sigma2)
}

/// A 2x2 complex symmetric conductivity tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct AnisotropicTensor(ComplexMatrix);

impl AnisotropicTensor {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: m.dim() });
        }
        let skew = (m.get(0, 1) - m.get(1, 0)).norm();
        if skew > 1e-12 * m.norm().max(1.0) {
            return Err(Error::InvalidConductivity("tensor is not symmetric"));
        }
        Ok(Self(m))
    }

    pub fn isotropic(s: Complex64) -> Self {
        Self(ComplexMatrix::identity(2).scale_complex(s))
    }

    pub fn diagonal(a: Complex64, b: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self(ComplexMatrix::from_rows(&[alloc::vec![a, zero], alloc::vec![zero, b]]).expect("finite 2x2"))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }
}

fn rotation() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).expect("finite 2x2")
}

/// `S12 R S21 R^T - s1 s2 I` with `R` the quarter-turn rotation.
pub fn matrix_phase_interchange_residual(
    s12: &AnisotropicTensor,
    s21: &AnisotropicTensor,
    pair: &ConductivityPair,
) -> ComplexMatrix {
    let r = rotation();
    let product = s12.matrix() * &r * s21.matrix() * r.adjoint();
    product - ComplexMatrix::identity(2).scale_complex(pair.sigma1 * pair.sigma2)
}

/// `sigma2 I + c1 sigma2 [(1 - c1) M1 - sigma2 (sigma2 I - core)^{-1}]^{-1}`
/// for a hierarchical laminate of phase 2 with `core`; `m1` is real
/// symmetric PSD with unit trace.
pub fn tartar_formula(
    core: &AnisotropicTensor,
    sigma2: Complex64,
    c1: f64,
    m1: &ComplexMatrix,
) -> Result<AnisotropicTensor> {
    check_fraction(c1)?;
    let real_symmetric =
        m1.dim() == 2 && m1.rows().iter().flatten().all(|x| x.im == 0.0) && m1.get(0, 1) == m1.get(1, 0);
    if !real_symmetric || (m1.trace().re - 1.0).abs() > 1e-12 || !m1.is_psd(1e-12) {
        return Err(Error::BadM1);
    }
    let identity = ComplexMatrix::identity(2);
    let gap = identity.scale_complex(sigma2) - core.matrix();
    let scale = sigma2.norm().max(core.matrix().norm()).max(f64::MIN_POSITIVE);
    if gap.as_matrix().determinant().norm() <= 1e-24 * scale * scale {
        return Err(Error::SingularCore);
    }
    let gap_inv = gap.inverse().ok_or(Error::SingularCore)?;
    let bracket = m1.scale(1.0 - c1) - gap_inv.scale_complex(sigma2);
    let bracket_inv = bracket.inverse().ok_or(Error::DegenerateDenominator)?;
    if !bracket_inv.is_finite() {
        return Err(Error::DegenerateDenominator);
    }
    AnisotropicTensor::new(identity.scale_complex(sigma2) + bracket_inv.scale_complex(sigma2 * c1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn golden_coated_values() {
        let pair = ConductivityPair::real(0.0, 1.0).unwrap();
        assert!((hs_coated(&pair, 0.5, 3).unwrap() - c(0.4)).norm() < 1e-15);
        assert!((hs_coated(&pair, 0.5, 2).unwrap() - c(1.0 / 3.0)).norm() < 1e-15);
        let equal = ConductivityPair::real(5.0, 5.0).unwrap();
        assert_eq!(hs_coated(&equal, 0.3, 3).unwrap(), c(5.0));
    }

    #[test]
    fn keller_golden_pair() {
        let pair = ConductivityPair::real(2.0, 1.0).unwrap();
        let coated = |p: &ConductivityPair| hs_coated(p, 0.5, 2);
        assert!((coated(&pair).unwrap() - c(1.4)).norm() < 1e-14);
        assert!((coated(&pair.swapped()).unwrap() - c(10.0 / 7.0)).norm() < 1e-14);
        assert!(keller_residual(coated, &pair).unwrap().norm() < 1e-14);
        let zero = ConductivityPair::real(0.0, 1.0).unwrap();
        assert_eq!(keller_residual(coated, &zero).unwrap(), c(0.0));
    }

    #[test]
    fn nested_reduces_to_coated_and_uniform() {
        let pair = ConductivityPair::new(Complex64::new(2.0, 1.0), c(1.5)).unwrap();
        assert_eq!(hs_nested(pair.sigma1, pair.sigma2, 0.4, 2).unwrap(), hs_coated(&pair, 0.4, 2).unwrap());
        assert_eq!(hs_nested(pair.sigma2, pair.sigma2, 0.4, 3).unwrap(), pair.sigma2);
    }

    #[test]
    fn rejects_bad_parameters() {
        let pair = ConductivityPair::real(1.0, 2.0).unwrap();
        assert_eq!(hs_coated(&pair, 1.0, 2), Err(Error::InvalidFraction(1.0)));
        assert_eq!(hs_coated(&pair, 0.5, 4), Err(Error::UnsupportedDimension(4)));
        assert!(ConductivityPair::real(-1.0, 1.0).is_err());
        assert!(ConductivityPair::real(0.0, 0.0).is_err());
    }

    #[test]
    fn interchange_examples() {
        let pair = ConductivityPair::real(2.0, 1.0).unwrap();
        let s12 = AnisotropicTensor::isotropic(c(1.4));
        let s21 = AnisotropicTensor::isotropic(c(10.0 / 7.0));
        assert!(matrix_phase_interchange_residual(&s12, &s21, &pair).norm() < 1e-14);
        let unit = ConductivityPair::real(1.0, 1.0).unwrap();
        let id = AnisotropicTensor::isotropic(c(1.0));
        assert!(matrix_phase_interchange_residual(&id, &id, &unit).is_zero());
    }

    #[test]
    fn tartar_isotropic_reduction_and_errors() {
        let pair = ConductivityPair::new(Complex64::new(3.0, 0.5), c(1.0)).unwrap();
        let half = ComplexMatrix::identity(2).scale(0.5);
        let core = AnisotropicTensor::isotropic(pair.sigma1);
        let t = tartar_formula(&core, pair.sigma2, 0.35, &half).unwrap();
        let expected = hs_coated(&pair, 0.35, 2).unwrap();
        assert!(t.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_complex(expected)) < 1e-14);

        let small = tartar_formula(&core, pair.sigma2, 1e-6, &half).unwrap();
        assert!(small.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-4);

        let singular = AnisotropicTensor::isotropic(pair.sigma2);
        assert_eq!(tartar_formula(&singular, pair.sigma2, 0.5, &half), Err(Error::SingularCore));
        assert_eq!(tartar_formula(&core, pair.sigma2, 0.5, &ComplexMatrix::identity(2)), Err(Error::BadM1));
    }
}

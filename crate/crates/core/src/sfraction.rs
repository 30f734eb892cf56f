//! Scalar continued fractions: the affine-level CD form of a class-G
//! function, Stieltjes S-fractions with free positive coefficients, their
//! contraction and Hankel moment certificates.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::inversion::{pseudo_invert_negative_part, reciprocal_unchecked};
use crate::jfraction::{classical_form, expand_j_fraction};
use crate::matrix::{hermitian_eigen, CMat, ComplexMatrix, ZERO};
use crate::pole_residue::{reflect, require_class_g, Pole, PoleResidueForm};
use crate::stieltjes::{StieltjesForm, StieltjesTerm};
use crate::tol::Tolerances;

fn require_scalar(n: usize) -> Result<()> {
    if n != 1 {
        return Err(Error::NotScalar(n));
    }
    Ok(())
}

fn invert(t: Complex64) -> Result<Complex64> {
    if t.norm() == 0.0 || !t.is_finite() {
        return Err(Error::PoleProximity);
    }
    Ok(t.inv())
}

/// `f(z) = a_0 z + b_0 - 1/(a_1 z + b_1 - 1/(... - 1/(a_d z + b_d)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct CdFraction {
    /// `(a_k, b_k)` from the outermost level inward.
    pub levels: Vec<(f64, f64)>,
}

impl CdFraction {
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let mut levels = self.levels.iter().rev();
        let &(a, b) = levels.next().ok_or(Error::EmptyFraction)?;
        let mut value = z * a + b;
        for &(a, b) in levels {
            value = z * a + b - invert(value)?;
        }
        Ok(value)
    }
}

/// Scalar specialisation of the J-fraction, read in classical form.
pub fn expand_scalar_cd(f: &PoleResidueForm, tol: &Tolerances) -> Result<CdFraction> {
    require_scalar(f.dim())?;
    require_class_g(f, tol)?;
    let jf = classical_form(&expand_j_fraction(&reflect(f, tol)?, tol)?);
    Ok(CdFraction { levels: jf.levels.iter().map(|l| (l.linear.get(0, 0).re, l.constant.get(0, 0).re)).collect() })
}

/// `F(z) = 1/(c_1 z + 1/(c_2 + 1/(c_3 z + ...)))`, optionally behind an
/// affine head as `a_0 z + b_0 - F(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SFraction {
    pub head: Option<(f64, f64)>,
    pub coefficients: Vec<f64>,
}

fn check_coefficients(c: &[f64]) -> Result<()> {
    match c.iter().position(|&x| !(x.is_finite() && x > 0.0)) {
        Some(index) => Err(Error::NonPositiveCoefficient { index, value: c[index] }),
        None => Ok(()),
    }
}

impl SFraction {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        check_coefficients(&coefficients)?;
        Ok(Self { head: None, coefficients })
    }

    pub fn with_head(a0: f64, b0: f64, coefficients: Vec<f64>) -> Result<Self> {
        check_coefficients(&coefficients)?;
        if !(a0.is_finite() && a0 >= 0.0 && b0.is_finite() && b0 >= 0.0) {
            return Err(Error::NonPositiveCoefficient { index: 0, value: if a0 >= 0.0 { b0 } else { a0 } });
        }
        Ok(Self { head: Some((a0, b0)), coefficients })
    }

    /// The measure transform alone; zero for an empty coefficient list.
    pub fn evaluate_tail(&self, z: Complex64) -> Result<Complex64> {
        let factor = |k: usize| if k.is_multiple_of(2) { z } else { Complex64::new(1.0, 0.0) };
        let mut levels = self.coefficients.iter().enumerate().rev();
        let Some((k, &c)) = levels.next() else {
            return Ok(ZERO);
        };
        let mut value = factor(k) * c;
        for (k, &c) in levels {
            value = factor(k) * c + invert(value)?;
        }
        invert(value)
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let tail = self.evaluate_tail(z)?;
        Ok(match self.head {
            Some((a0, b0)) => z * a0 + b0 - tail,
            None => tail,
        })
    }
}

/// `d_0 / (z + d_1 - d_1 d_2 / (z + d_2 + d_3 - d_3 d_4 / (...)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractedFraction {
    pub d: Vec<f64>,
}

impl ContractedFraction {
    /// Diagonal `alpha_k` and off-diagonal products `beta_k` of the J-form:
    /// `alpha_0 = d_1`, `alpha_k = d_2k + d_2k+1`, `beta_k = d_2k-1 d_2k`.
    pub fn recurrence(&self) -> (Vec<f64>, Vec<f64>) {
        let d = |k: usize| self.d.get(k).copied().unwrap_or(0.0);
        let count = self.d.len().div_ceil(2).max(1);
        let alpha = (0..count).map(|k| if k == 0 { d(1) } else { d(2 * k) + d(2 * k + 1) }).collect();
        let beta = (1..count).map(|k| d(2 * k - 1) * d(2 * k)).collect();
        (alpha, beta)
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let d0 = *self.d.first().ok_or(Error::EmptyFraction)?;
        let (alpha, beta) = self.recurrence();
        let mut value = z + alpha[alpha.len() - 1];
        for k in (0..alpha.len() - 1).rev() {
            value = z + alpha[k] - beta[k] * invert(value)?;
        }
        Ok(invert(value)? * d0)
    }
}

/// `d_0 = 1/c_1`, `d_k = 1/(c_k c_k+1)`.
pub fn contract_s_fraction(s: &SFraction) -> Result<ContractedFraction> {
    if s.head.is_some() {
        return Err(Error::NotMeasureTransform);
    }
    let c = &s.coefficients;
    check_coefficients(c)?;
    if c.is_empty() {
        return Err(Error::EmptyFraction);
    }
    let mut d = vec![1.0 / c[0]];
    d.extend(c.windows(2).map(|w| 1.0 / (w[0] * w[1])));
    Ok(ContractedFraction { d })
}

/// Measure form of the S-fraction with coefficients `c`, via the
/// eigen-decomposition of its Jacobi matrix. Odd lengths carry a point mass
/// at the origin.
pub fn build_from_s_fraction(c: &[f64]) -> Result<StieltjesForm> {
    let contracted = contract_s_fraction(&SFraction::new(c.to_vec())?)?;
    let (alpha, beta) = contracted.recurrence();
    let k = alpha.len();
    let jacobi = CMat::from_fn(k, k, |i, j| {
        if i == j {
            Complex64::new(alpha[i], 0.0)
        } else if i + 1 == j {
            Complex64::new(libm::sqrt(beta[i]), 0.0)
        } else if j + 1 == i {
            Complex64::new(libm::sqrt(beta[j]), 0.0)
        } else {
            ZERO
        }
    });
    let eig = hermitian_eigen(&jacobi);
    let d0 = contracted.d[0];
    let terms = eig
        .values
        .iter()
        .enumerate()
        .map(|(idx, &t)| {
            let node = if idx == 0 && c.len() % 2 == 1 { 0.0 } else { t.max(0.0) };
            StieltjesTerm::new(node, ComplexMatrix::scalar(d0 * eig.vectors[(0, idx)].norm_sqr()))
        })
        .collect();
    StieltjesForm::new(ComplexMatrix::scalar(0.0), terms)
}

/// Recovers the S-fraction coefficients of a scalar measure transform by
/// alternately splitting off the linear part of `1/F` and the constant of
/// the remainder, then inverting.
pub fn expand_s_fraction(h: &StieltjesForm, tol: &Tolerances) -> Result<SFraction> {
    require_scalar(h.dim())?;
    let mass: f64 = h.terms().iter().map(|t| t.weight.norm()).sum();
    if h.constant().norm() > tol.rank * mass {
        return Err(Error::NotMeasureTransform);
    }
    if h.terms().is_empty() {
        return Err(Error::NullFunction);
    }
    // a point mass at 0 survives every step of the recursion
    let point_mass = h.point_mass_at_zero().is_some();
    let mut current: Vec<Pole> = h.terms().iter().map(|t| Pole::new(t.lambda, t.weight.hermitian_part())).collect();
    let mut c = Vec::new();
    loop {
        let inverse = pseudo_invert_negative_part(&current, tol)?;
        c.push(inverse.linear().get(0, 0).re);
        if current.len() == 1 && current[0].lambda == 0.0 {
            break;
        }
        let remainder = PoleResidueForm::with_tolerances(
            ComplexMatrix::scalar(0.0),
            inverse.constant().clone(),
            inverse.poles().to_vec(),
            tol,
        )?;
        let flipped = reciprocal_unchecked(&remainder, tol)?;
        c.push(flipped.constant().get(0, 0).re);
        if flipped.terms().is_empty() {
            break;
        }
        current = flipped
            .terms()
            .iter()
            .enumerate()
            .map(|(idx, t)| {
                let lambda = if idx == 0 && point_mass { 0.0 } else { t.lambda };
                Pole::new(lambda, t.weight.clone())
            })
            .collect();
    }
    SFraction::new(c)
}

/// `f = A z + B - F(z)` with `F` the measure transform of the poles of `f`,
/// written with free S-fraction coefficients.
pub fn free_parameters(f: &PoleResidueForm, tol: &Tolerances) -> Result<SFraction> {
    require_scalar(f.dim())?;
    require_class_g(f, tol)?;
    let (a0, b0) = (f.linear().get(0, 0).re, f.constant().get(0, 0).re);
    if f.poles().is_empty() {
        return SFraction::with_head(a0, b0, Vec::new());
    }
    let measure = StieltjesForm::with_tolerances(
        ComplexMatrix::scalar(0.0),
        f.poles().iter().map(|p| StieltjesTerm::new(p.lambda, p.residue.hermitian_part())).collect(),
        tol,
    )?;
    let tail = expand_s_fraction(&measure, tol)?;
    SFraction::with_head(a0, b0, tail.coefficients)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HankelMatrixCheck {
    pub min_eigenvalue: f64,
    pub rank: usize,
    /// Determinants of the leading principal minors of orders 1..=order.
    pub leading_minors: Vec<f64>,
    pub psd: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HankelReport {
    /// `m_k = sum_j lambda_j^k w_j` for `k = 0..=2 order`.
    pub moments: Vec<f64>,
    /// `(m_{i+j})`.
    pub hankel: HankelMatrixCheck,
    /// `(m_{i+j+1})`.
    pub shifted: HankelMatrixCheck,
    pub pass: bool,
}

fn hankel_check(moments: &[f64], order: usize, offset: usize, tol: &Tolerances) -> HankelMatrixCheck {
    let m = CMat::from_fn(order, order, |i, j| Complex64::new(moments[i + j + offset], 0.0));
    let leading_minors = (1..=order).map(|k| m.view((0, 0), (k, k)).into_owned().determinant().re).collect();
    let m = ComplexMatrix::wrap(m);
    let check = m.psd_check(tol.psd);
    HankelMatrixCheck { min_eigenvalue: check.min_eigenvalue, rank: m.rank(tol.rank), leading_minors, psd: check.pass }
}

/// Moment matrices of the representing measure of `h`; both are PSD for any
/// positive measure on `[0, inf)`.
pub fn hankel_certificates(h: &StieltjesForm, order: usize, tol: &Tolerances) -> Result<HankelReport> {
    require_scalar(h.dim())?;
    if order == 0 {
        return Err(Error::EmptyFraction);
    }
    let moments: Vec<f64> = (0..=2 * order)
        .map(|k| h.terms().iter().map(|t| libm::pow(t.lambda, k as f64) * t.weight.get(0, 0).re).sum())
        .collect();
    let hankel = hankel_check(&moments, order, 0, tol);
    let shifted = hankel_check(&moments, order, 1, tol);
    let pass = hankel.psd && shifted.psd;
    Ok(HankelReport { moments, hankel, shifted, pass })
}

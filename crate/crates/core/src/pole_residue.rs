//! Pole-residue representation `f(z) = A z + B - sum_j C_j / (z + lambda_j)`
//! and the class-G operations that act on it directly: evaluation,
//! certification, kernel certificates, reflection, translation and the
//! partial McMillan degree.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tol::Tolerances;

/// One finite pole at `z = -lambda` with residue matrix `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pole {
    pub lambda: f64,
    pub residue: ComplexMatrix,
}

impl Pole {
    pub fn new(lambda: f64, residue: ComplexMatrix) -> Self {
        Self { lambda, residue }
    }
}

/// A candidate member of class G.
///
/// Construction only enforces structure (square matrices of one size, finite
/// entries, finite pole locations). Poles are sorted by `lambda`, poles
/// closer than the relative pole tolerance are merged with summed residues,
/// and vanishing residues are dropped. Positivity is checked separately by
/// [`certify_class_g`].
#[derive(Clone, Debug, PartialEq)]
pub struct PoleResidueForm {
    linear: ComplexMatrix,
    constant: ComplexMatrix,
    poles: Vec<Pole>,
}

impl PoleResidueForm {
    pub fn new(linear: ComplexMatrix, constant: ComplexMatrix, poles: Vec<Pole>) -> Result<Self> {
        Self::with_tolerances(linear, constant, poles, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(
        linear: ComplexMatrix,
        constant: ComplexMatrix,
        poles: Vec<Pole>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = linear.dim();
        check_dim(n, &constant)?;
        if !linear.is_finite() || !constant.is_finite() {
            return Err(Error::NonFinite("affine coefficient"));
        }
        for pole in &poles {
            check_dim(n, &pole.residue)?;
            if !pole.lambda.is_finite() {
                return Err(Error::InvalidPole(pole.lambda));
            }
            if !pole.residue.is_finite() {
                return Err(Error::NonFinite("residue"));
            }
        }
        Ok(Self { linear, constant, poles: canonical_poles(poles, tol) })
    }

    /// `A z + B` with no finite poles.
    pub fn affine(linear: ComplexMatrix, constant: ComplexMatrix) -> Result<Self> {
        Self::new(linear, constant, Vec::new())
    }

    /// Scalar form `a z + b - sum c_j / (z + lambda_j)` from `(lambda_j, c_j)` pairs.
    pub fn scalar(a: f64, b: f64, poles: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            ComplexMatrix::scalar(a),
            ComplexMatrix::scalar(b),
            poles.iter().map(|&(lambda, c)| Pole::new(lambda, ComplexMatrix::scalar(c))).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    pub fn is_scalar(&self) -> bool {
        self.dim() == 1
    }

    pub fn linear(&self) -> &ComplexMatrix {
        &self.linear
    }

    pub fn constant(&self) -> &ComplexMatrix {
        &self.constant
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn evaluate(&self, z: Complex64) -> Result<ComplexMatrix> {
        self.evaluate_with(z, &Tolerances::DEFAULT)
    }

    /// `A z + B - sum C_j / (z + lambda_j)`; fails with `PoleProximity` when
    /// `min_j |z + lambda_j| <= tol.pole * (1 + |z|)`.
    pub fn evaluate_with(&self, z: Complex64, tol: &Tolerances) -> Result<ComplexMatrix> {
        let guard = tol.pole * (1.0 + z.norm());
        let mut value = &self.linear * z + &self.constant;
        for pole in &self.poles {
            let shift = z + pole.lambda;
            if shift.norm() <= guard {
                return Err(Error::PoleProximity);
            }
            value -= &(&pole.residue * shift.inv());
        }
        Ok(value)
    }

    /// `f(0) = B - sum C_j / lambda_j`.
    pub fn value_at_zero(&self) -> ComplexMatrix {
        let mut value = self.constant.clone();
        for pole in &self.poles {
            value -= &pole.residue.scale(1.0 / pole.lambda);
        }
        value
    }

    /// `f'(0) = A + sum C_j / lambda_j^2`.
    pub fn derivative_at_zero(&self) -> ComplexMatrix {
        let mut value = self.linear.clone();
        for pole in &self.poles {
            value += &pole.residue.scale(1.0 / (pole.lambda * pole.lambda));
        }
        value
    }

    /// Magnitude of the terms that cancel in `f(0)`.
    pub(crate) fn value_at_zero_scale(&self) -> f64 {
        self.poles.iter().map(|p| p.residue.norm() / p.lambda.abs()).sum::<f64>().max(self.constant.norm())
    }

    /// Largest coefficient norm; the natural scale for tolerances on `f`.
    pub fn scale(&self) -> f64 {
        self.poles.iter().map(|p| p.residue.norm()).fold(self.linear.norm().max(self.constant.norm()), f64::max)
    }

    /// Coefficientwise comparison: same pole count, locations within `tol`
    /// relative distance, matrices within `tol * max(1, scale)`.
    pub fn approx_eq(&self, tol: f64, other: &Self) -> bool {
        let scale = self.scale().max(other.scale()).max(1.0);
        let close = |a: &ComplexMatrix, b: &ComplexMatrix| a.dim() == b.dim() && a.max_abs_diff(b) <= tol * scale;
        close(&self.linear, &other.linear)
            && close(&self.constant, &other.constant)
            && self.poles.len() == other.poles.len()
            && self.poles.iter().zip(&other.poles).all(|(p, q)| {
                (p.lambda - q.lambda).abs() <= tol * p.lambda.abs().max(q.lambda.abs()) && close(&p.residue, &q.residue)
            })
    }

    pub fn partial_mcmillan_degree(&self, tol_rank: f64) -> usize {
        self.poles.iter().map(|p| p.residue.rank(tol_rank)).sum()
    }
}

fn check_dim(n: usize, m: &ComplexMatrix) -> Result<()> {
    if m.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.dim() });
    }
    Ok(())
}

fn canonical_poles(mut poles: Vec<Pole>, tol: &Tolerances) -> Vec<Pole> {
    poles.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut merged: Vec<(Pole, usize)> = Vec::with_capacity(poles.len());
    for pole in poles {
        match merged.last_mut() {
            Some((last, count))
                if (pole.lambda - last.lambda).abs() <= tol.pole * pole.lambda.abs().max(last.lambda.abs()) =>
            {
                // running mean of the merged locations
                *count += 1;
                last.lambda += (pole.lambda - last.lambda) / *count as f64;
                last.residue += &pole.residue;
            }
            _ => merged.push((pole, 1)),
        }
    }
    let largest = merged.iter().map(|(p, _)| p.residue.norm()).fold(0.0, f64::max);
    merged
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| !p.residue.is_zero() && p.residue.norm() > tol.rank * largest)
        .collect()
}

/// The partial McMillan degree `sum_j rank(C_j)` at the default rank cutoff.
pub fn partial_mcmillan_degree(f: &PoleResidueForm) -> usize {
    f.partial_mcmillan_degree(Tolerances::DEFAULT.rank)
}

/// Which class-G condition a certificate line refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    Linear,
    Constant,
    Residue(usize),
    PoleLocation(usize),
    ValueAtZero,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Linear => write!(f, "A >= 0"),
            Condition::Constant => write!(f, "B >= 0"),
            Condition::Residue(j) => write!(f, "C[{j}] >= 0"),
            Condition::PoleLocation(j) => write!(f, "lambda[{j}] > 0"),
            Condition::ValueAtZero => write!(f, "f(0) >= 0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateCheck {
    pub condition: Condition,
    /// Smallest eigenvalue found (the pole location itself for `PoleLocation`).
    pub min_eigenvalue: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    pub checks: Vec<CertificateCheck>,
    pub pass: bool,
}

impl CertificateReport {
    pub fn failures(&self) -> impl Iterator<Item = &CertificateCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, condition: Condition) -> Option<&CertificateCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

/// Checks every defining condition of class G at tolerance `tol`.
///
/// `f(0)` is a cancelling sum, so its PSD test is scaled by
/// `max(||B||, sum ||C_j|| / lambda_j)` rather than by `||f(0)||`.
pub fn certify_class_g(f: &PoleResidueForm, tol: f64) -> CertificateReport {
    let mut checks = Vec::with_capacity(3 + 2 * f.poles.len());
    let mut push = |condition, check: crate::matrix::PsdCheck| {
        checks.push(CertificateCheck { condition, min_eigenvalue: check.min_eigenvalue, pass: check.pass })
    };
    push(Condition::Linear, f.linear.psd_check(tol));
    push(Condition::Constant, f.constant.psd_check(tol));
    for (j, pole) in f.poles.iter().enumerate() {
        push(Condition::Residue(j), pole.residue.psd_check(tol));
    }
    for (j, pole) in f.poles.iter().enumerate() {
        checks.push(CertificateCheck {
            condition: Condition::PoleLocation(j),
            min_eigenvalue: pole.lambda,
            pass: pole.lambda > 0.0,
        });
    }
    if f.poles.iter().all(|p| p.lambda > 0.0) {
        let value = f.value_at_zero();
        let check = value.psd_check_scaled(tol, f.value_at_zero_scale());
        checks.push(CertificateCheck {
            condition: Condition::ValueAtZero,
            min_eigenvalue: check.min_eigenvalue,
            pass: check.pass,
        });
    } else {
        checks.push(CertificateCheck {
            condition: Condition::ValueAtZero,
            min_eigenvalue: f64::NEG_INFINITY,
            pass: false,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    CertificateReport { checks, pass }
}

pub(crate) fn require_class_g(f: &PoleResidueForm, tol: &Tolerances) -> Result<()> {
    let report = certify_class_g(f, tol.psd);
    let failed = report.failures().next().map(|c| c.condition);
    match failed {
        None => Ok(()),
        Some(condition) => Err(Error::NotClassG(match condition {
            Condition::Linear => "linear term not PSD",
            Condition::Constant => "constant term not PSD",
            Condition::Residue(_) => "residue not PSD",
            Condition::PoleLocation(_) => "pole not on the negative axis",
            Condition::ValueAtZero => "f(0) not PSD",
        })),
    }
}

/// Kernel values at one sample point.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelSample {
    pub z: Complex64,
    /// Smallest eigenvalue of `(f(z) - f(z)*) / (z - conj z)`; must be >= 0.
    pub nevanlinna_min: f64,
    /// Largest eigenvalue of `(conj z f(z) - z f(z)*) / (z - conj z)`; must be <= 0.
    pub stieltjes_max: f64,
    pub scale: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelReport {
    pub samples: Vec<KernelSample>,
    pub pass: bool,
}

impl KernelReport {
    /// Worst normalized slack over all samples (negative means a violation).
    pub fn min_slack(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.nevanlinna_min / s.scale).min(-s.stieltjes_max / s.scale))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Samples both positivity kernels of `f` at points off the real axis.
pub fn sample_kernel_certificates(f: &PoleResidueForm, points: &[Complex64], tol: f64) -> Result<KernelReport> {
    kernel_certificates_with(|z| f.evaluate(z), points, tol)
}

/// Kernel certificates for any matrix-valued evaluator.
///
/// The slack allowed at `z` is `tol * max(1, ||f(z)|| max(1, |z|) / |Im z|)`,
/// the rounding level of the difference quotients.
pub fn kernel_certificates_with<F>(eval: F, points: &[Complex64], tol: f64) -> Result<KernelReport>
where
    F: Fn(Complex64) -> Result<ComplexMatrix>,
{
    let mut samples = Vec::with_capacity(points.len());
    for &z in points {
        if z.im == 0.0 {
            return Err(Error::RealAxisPoint);
        }
        let value = eval(z)?;
        let adjoint = value.adjoint();
        let gap = Complex64::new(0.0, 2.0 * z.im);
        let first = (&value - &adjoint).scale_complex(gap.inv());
        let second = (&value * z.conj() - &adjoint * z).scale_complex(gap.inv());
        let scale = (value.norm() * z.norm().max(1.0) / z.im.abs()).max(1.0);
        let nevanlinna_min = first.min_eigenvalue();
        let stieltjes_max = second.max_eigenvalue();
        let pass = nevanlinna_min >= -tol * scale && stieltjes_max <= tol * scale;
        samples.push(KernelSample { z, nevanlinna_min, stieltjes_max, scale, pass });
    }
    let pass = samples.iter().all(|s| s.pass);
    Ok(KernelReport { samples, pass })
}

/// `g(z) = z f(1/z)`:
/// linear term `f(0)`, constant `A + sum C_j / lambda_j^2`, and poles at
/// `1 / lambda_j` with residues `C_j / lambda_j^3`.
pub fn reflect(f: &PoleResidueForm, tol: &Tolerances) -> Result<PoleResidueForm> {
    require_class_g(f, tol)?;
    let poles = f
        .poles
        .iter()
        .map(|p| Pole::new(1.0 / p.lambda, p.residue.scale(1.0 / (p.lambda * p.lambda * p.lambda))))
        .collect();
    PoleResidueForm::with_tolerances(
        f.value_at_zero().hermitian_part(),
        f.derivative_at_zero().hermitian_part(),
        poles,
        tol,
    )
}

/// `f(z) + A1 z + B1`, admissible when `A1 >= 0` and `B1 = B1* >= -f(0)`.
pub fn translate(
    f: &PoleResidueForm,
    a1: &ComplexMatrix,
    b1: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<PoleResidueForm> {
    check_dim(f.dim(), a1)?;
    check_dim(f.dim(), b1)?;
    let a_check = a1.psd_check(tol.psd);
    if !a_check.pass {
        return Err(Error::TranslationViolation { min_eigenvalue: a_check.min_eigenvalue });
    }
    if !b1.is_hermitian(tol.herm) {
        return Err(Error::TranslationViolation { min_eigenvalue: f64::NAN });
    }
    let shifted = f.value_at_zero() + b1;
    let scale = f.value_at_zero_scale().max(b1.norm());
    let check = shifted.psd_check_scaled(tol.psd, scale);
    if !check.pass {
        return Err(Error::TranslationViolation { min_eigenvalue: check.min_eigenvalue });
    }
    PoleResidueForm::with_tolerances(&f.linear + a1, &f.constant + b1, f.poles.clone(), tol)
}

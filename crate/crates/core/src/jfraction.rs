//! Degree-reducing expansion of class-G functions into matrix J-fractions.
//!
//! One reduction writes `f(z) = f(0) + f'(0) z - z^2 g^+(z)` where `g` is the
//! pseudo-inverse of the remaining pole part and `g^+` its Moore-Penrose
//! inverse; `g` is again in class G with strictly smaller McMillan degree.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::inversion::pseudo_invert_negative_part;
use crate::matrix::{inverse_on_support, ComplexMatrix};
use crate::pole_residue::{require_class_g, Pole, PoleResidueForm};
use crate::tol::Tolerances;

/// One affine level `constant + linear * z`.
#[derive(Clone, Debug, PartialEq)]
pub struct JLevel {
    pub constant: ComplexMatrix,
    pub linear: ComplexMatrix,
}

impl JLevel {
    pub fn new(constant: ComplexMatrix, linear: ComplexMatrix) -> Self {
        Self { constant, linear }
    }

    fn at(&self, z: Complex64) -> ComplexMatrix {
        &self.linear * z + &self.constant
    }
}

/// How consecutive levels are glued together.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FractionForm {
    /// `D_k = c_k + l_k z - z^2 D_{k+1}^+`.
    Reduction,
    /// `D_k = c_k + l_k z - D_{k+1}^+`.
    Classical,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JFraction {
    pub n: usize,
    pub form: FractionForm,
    pub levels: Vec<JLevel>,
}

impl JFraction {
    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn evaluate(&self, z: Complex64) -> Result<ComplexMatrix> {
        evaluate_j_fraction(self, z, &Tolerances::DEFAULT)
    }
}

/// `f(0)`, `f'(0)` and the pseudo-inverted remainder.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionStep {
    pub constant: ComplexMatrix,
    pub linear: ComplexMatrix,
    pub next: PoleResidueForm,
}

pub fn reduction_step(f: &PoleResidueForm, tol: &Tolerances) -> Result<ReductionStep> {
    if f.poles().is_empty() {
        return Err(Error::DegreeZero);
    }
    // (f - f(0) - f'(0) z) / z^2 = -sum (C_j / lambda_j^2) / (z + lambda_j)
    let remainder: Vec<Pole> =
        f.poles().iter().map(|p| Pole::new(p.lambda, p.residue.scale(1.0 / (p.lambda * p.lambda)))).collect();
    let next = pseudo_invert_negative_part(&remainder, tol)?;
    Ok(ReductionStep {
        constant: f.value_at_zero().hermitian_part(),
        linear: f.derivative_at_zero().hermitian_part(),
        next,
    })
}

/// Every reduction step down to the affine remainder, which is returned last.
pub fn reduction_chain(f: &PoleResidueForm, tol: &Tolerances) -> Result<(Vec<ReductionStep>, PoleResidueForm)> {
    require_class_g(f, tol)?;
    let mut steps = Vec::new();
    let mut current = f.clone();
    while !current.poles().is_empty() {
        let before = current.partial_mcmillan_degree(tol.rank);
        let step = reduction_step(&current, tol)?;
        let after = step.next.partial_mcmillan_degree(tol.rank);
        if after >= before {
            return Err(Error::NonDecreasingDegree { before, after });
        }
        current = step.next.clone();
        steps.push(step);
    }
    Ok((steps, current))
}

pub fn expand_j_fraction(f: &PoleResidueForm, tol: &Tolerances) -> Result<JFraction> {
    let (steps, tail) = reduction_chain(f, tol)?;
    let mut levels: Vec<JLevel> = steps.into_iter().map(|s| JLevel::new(s.constant, s.linear)).collect();
    levels.push(JLevel::new(tail.constant().clone(), tail.linear().clone()));
    Ok(JFraction { n: f.dim(), form: FractionForm::Reduction, levels })
}

/// Bottom-up evaluation. Each inner denominator is inverted on the range of
/// its own coefficients; a denominator that is singular there raises
/// `PoleProximity`.
pub fn evaluate_j_fraction(jf: &JFraction, z: Complex64, tol: &Tolerances) -> Result<ComplexMatrix> {
    let mut levels = jf.levels.iter().rev();
    let last = levels.next().ok_or(Error::EmptyFraction)?;
    let mut value = last.at(z);
    let mut support = (&last.constant + &last.linear).support_basis(tol.rank);
    for level in levels {
        let inverse = inverse_on_support(value.as_matrix(), &support, tol.pole).ok_or(Error::PoleProximity)?;
        let weight = match jf.form {
            FractionForm::Reduction => z * z,
            FractionForm::Classical => Complex64::new(1.0, 0.0),
        };
        value = level.at(z) - ComplexMatrix::wrap(inverse).scale_complex(weight);
        support = (&level.constant + &level.linear).support_basis(tol.rank);
    }
    Ok(value)
}

/// The fraction of `z f(1/z)`: every level swaps its constant and linear
/// coefficients and the form toggles between reduction and classical.
pub fn classical_form(jf: &JFraction) -> JFraction {
    JFraction {
        n: jf.n,
        form: match jf.form {
            FractionForm::Reduction => FractionForm::Classical,
            FractionForm::Classical => FractionForm::Reduction,
        },
        levels: jf.levels.iter().map(|l| JLevel::new(l.linear.clone(), l.constant.clone())).collect(),
    }
}

//! The Stieltjes picture `h(z) = f(z)/z = A + sum_j A_j / (z + lambda_j)`,
//! its measure decomposition and the dilation (realization) form.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{CMat, ComplexMatrix, ZERO};
use crate::pole_residue::{require_class_g, Pole, PoleResidueForm};
use crate::tol::Tolerances;

/// A point mass of the representing measure: weight `A_j` at `t = lambda_j >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct StieltjesTerm {
    pub lambda: f64,
    pub weight: ComplexMatrix,
}

impl StieltjesTerm {
    pub fn new(lambda: f64, weight: ComplexMatrix) -> Self {
        Self { lambda, weight }
    }
}

/// `h(z) = A + sum_j A_j / (z + lambda_j)` with `lambda_j >= 0`.
///
/// Terms are sorted, nearly coincident locations merged and zero weights
/// dropped at construction, so at most one term sits at `lambda = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct StieltjesForm {
    constant: ComplexMatrix,
    terms: Vec<StieltjesTerm>,
}

impl StieltjesForm {
    pub fn new(constant: ComplexMatrix, terms: Vec<StieltjesTerm>) -> Result<Self> {
        Self::with_tolerances(constant, terms, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(constant: ComplexMatrix, mut terms: Vec<StieltjesTerm>, tol: &Tolerances) -> Result<Self> {
        let n = constant.dim();
        if !constant.is_finite() {
            return Err(Error::NonFinite("constant"));
        }
        for term in &terms {
            if term.weight.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: term.weight.dim() });
            }
            if !(term.lambda.is_finite() && term.lambda >= 0.0) {
                return Err(Error::InvalidPole(term.lambda));
            }
            if !term.weight.is_finite() {
                return Err(Error::NonFinite("weight"));
            }
        }
        terms.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        let mut merged: Vec<StieltjesTerm> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) if (term.lambda - last.lambda).abs() <= tol.pole * term.lambda.max(last.lambda) => {
                    last.weight += &term.weight;
                }
                _ => merged.push(term),
            }
        }
        let largest = merged.iter().map(|t| t.weight.norm()).fold(0.0, f64::max);
        merged.retain(|t| !t.weight.is_zero() && t.weight.norm() > tol.rank * largest);
        Ok(Self { constant, terms: merged })
    }

    /// Scalar form from `(lambda, weight)` pairs.
    pub fn scalar(constant: f64, terms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            ComplexMatrix::scalar(constant),
            terms.iter().map(|&(l, w)| StieltjesTerm::new(l, ComplexMatrix::scalar(w))).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.constant.dim()
    }

    pub fn constant(&self) -> &ComplexMatrix {
        &self.constant
    }

    pub fn terms(&self) -> &[StieltjesTerm] {
        &self.terms
    }

    pub fn evaluate(&self, z: Complex64) -> Result<ComplexMatrix> {
        let guard = Tolerances::DEFAULT.pole * (1.0 + z.norm());
        let mut value = self.constant.clone();
        for term in &self.terms {
            let shift = z + term.lambda;
            if shift.norm() <= guard {
                return Err(Error::PoleProximity);
            }
            value += &(&term.weight * shift.inv());
        }
        Ok(value)
    }

    /// Weight carried at `t = 0`, if any.
    pub fn point_mass_at_zero(&self) -> Option<&ComplexMatrix> {
        self.terms.first().filter(|t| t.lambda == 0.0).map(|t| &t.weight)
    }

    /// True when every weight and the constant are PSD.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.constant.is_psd(tol) && self.terms.iter().all(|t| t.weight.is_psd(tol))
    }
}

/// `h = f / z`: constant `A`, weight `f(0)` at 0 (dropped when it vanishes
/// relative to `B`), weights `C_j / lambda_j` at `lambda_j`.
pub fn to_stieltjes(f: &PoleResidueForm, tol: &Tolerances) -> Result<StieltjesForm> {
    require_class_g(f, tol)?;
    let mut terms = Vec::with_capacity(f.poles().len() + 1);
    let at_zero = f.value_at_zero().hermitian_part();
    if at_zero.norm() > tol.rank * f.value_at_zero_scale() {
        terms.push(StieltjesTerm::new(0.0, at_zero));
    }
    for pole in f.poles() {
        terms.push(StieltjesTerm::new(pole.lambda, pole.residue.scale(1.0 / pole.lambda)));
    }
    StieltjesForm::with_tolerances(f.linear().clone(), terms, tol)
}

/// `f = z h`: linear term `A`, constant `sum_j A_j`, residues `A_j lambda_j`
/// at every `lambda_j > 0`.
pub fn from_stieltjes(h: &StieltjesForm) -> Result<PoleResidueForm> {
    let n = h.dim();
    let mut constant = ComplexMatrix::zeros(n);
    let mut poles = Vec::with_capacity(h.terms.len());
    for term in &h.terms {
        constant += &term.weight;
        if term.lambda > 0.0 {
            poles.push(Pole::new(term.lambda, term.weight.scale(term.lambda)));
        }
    }
    PoleResidueForm::new(h.constant.clone(), constant, poles)
}

/// The measure `dSigma` of `h`, its total mass, the shifted measure
/// `dSigma_1 = t dSigma` and the atom at zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureDecomposition {
    pub constant: ComplexMatrix,
    pub total_mass: ComplexMatrix,
    /// `(lambda, lambda * A_lambda)` for every `lambda > 0`.
    pub shifted_terms: Vec<StieltjesTerm>,
    pub point_mass_at_zero: ComplexMatrix,
}

impl MeasureDecomposition {
    /// `|| Sigma({0}) - (Sigma([0, inf)) - sum_t dSigma_1(t) / t) ||`.
    pub fn consistency_residual(&self) -> f64 {
        let mut implied = self.total_mass.clone();
        for term in &self.shifted_terms {
            implied -= &term.weight.scale(1.0 / term.lambda);
        }
        (&implied - &self.point_mass_at_zero).norm()
    }
}

pub fn measure_decomposition(h: &StieltjesForm) -> MeasureDecomposition {
    let n = h.dim();
    let mut total_mass = ComplexMatrix::zeros(n);
    let mut shifted_terms = Vec::new();
    for term in &h.terms {
        total_mass += &term.weight;
        if term.lambda > 0.0 {
            shifted_terms.push(StieltjesTerm::new(term.lambda, term.weight.scale(term.lambda)));
        }
    }
    MeasureDecomposition {
        constant: h.constant.clone(),
        total_mass,
        shifted_terms,
        point_mass_at_zero: h.point_mass_at_zero().cloned().unwrap_or_else(|| ComplexMatrix::zeros(n)),
    }
}

/// `f(z) = z [A + K* (S + z I)^{-1} K]` with `S` diagonal and nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationForm {
    pub constant: ComplexMatrix,
    /// `m x n` coupling.
    pub coupling: CMat,
    /// Diagonal of `S`.
    pub spectrum: Vec<f64>,
}

impl RealizationForm {
    pub fn state_dim(&self) -> usize {
        self.spectrum.len()
    }

    pub fn evaluate(&self, z: Complex64) -> Result<ComplexMatrix> {
        let guard = Tolerances::DEFAULT.pole * (1.0 + z.norm());
        let m = self.spectrum.len();
        let mut resolvent = CMat::from_element(m, m, ZERO);
        for (i, &s) in self.spectrum.iter().enumerate() {
            let shift = z + s;
            if shift.norm() <= guard {
                return Err(Error::PoleProximity);
            }
            resolvent[(i, i)] = shift.inv();
        }
        let inner = self.coupling.adjoint() * resolvent * &self.coupling;
        let h = &self.constant + &ComplexMatrix::wrap(inner);
        Ok(h.scale_complex(z))
    }
}

/// Dilation of `f` built from PSD square roots of the Stieltjes weights;
/// the state dimension is the total rank of the weights.
pub fn build_realization(f: &PoleResidueForm, tol: &Tolerances) -> Result<RealizationForm> {
    let h = to_stieltjes(f, tol)?;
    let n = f.dim();
    let mut blocks = Vec::new();
    let mut spectrum = Vec::new();
    for term in h.terms() {
        let factor = term.weight.hermitian_part().psd_factor(tol.rank);
        spectrum.extend(core::iter::repeat_n(term.lambda, factor.nrows()));
        blocks.push(factor);
    }
    let m = spectrum.len();
    let mut coupling = CMat::zeros(m, n);
    let mut row = 0;
    for block in blocks {
        coupling.rows_mut(row, block.nrows()).copy_from(&block);
        row += block.nrows();
    }
    Ok(RealizationForm { constant: h.constant().clone(), coupling, spectrum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tol() -> Tolerances {
        Tolerances::DEFAULT
    }

    #[test]
    fn to_stieltjes_examples() {
        let h = to_stieltjes(&PoleResidueForm::scalar(0.0, 1.0, &[(1.0, 1.0)]).unwrap(), &tol()).unwrap();
        assert_eq!(h, StieltjesForm::scalar(0.0, &[(1.0, 1.0)]).unwrap());
        let h = to_stieltjes(&PoleResidueForm::scalar(1.0, 0.0, &[]).unwrap(), &tol()).unwrap();
        assert_eq!(h, StieltjesForm::scalar(1.0, &[]).unwrap());
        let h = to_stieltjes(&PoleResidueForm::scalar(1.0, 1.0, &[]).unwrap(), &tol()).unwrap();
        assert_eq!(h, StieltjesForm::scalar(1.0, &[(0.0, 1.0)]).unwrap());
    }

    #[test]
    fn from_stieltjes_examples() {
        let f = from_stieltjes(&StieltjesForm::scalar(0.0, &[(1.0, 1.0)]).unwrap()).unwrap();
        assert_eq!(f, PoleResidueForm::scalar(0.0, 1.0, &[(1.0, 1.0)]).unwrap());
        let f = from_stieltjes(&StieltjesForm::scalar(1.0, &[]).unwrap()).unwrap();
        assert_eq!(f, PoleResidueForm::scalar(1.0, 0.0, &[]).unwrap());
        let f = from_stieltjes(&StieltjesForm::scalar(0.0, &[(0.0, 3.0)]).unwrap()).unwrap();
        assert_eq!(f, PoleResidueForm::scalar(0.0, 3.0, &[]).unwrap());
        assert_eq!(f.value_at_zero().get(0, 0), c(3.0));
    }

    #[test]
    fn stieltjes_rejects_negative_locations() {
        assert_eq!(StieltjesForm::scalar(0.0, &[(-1.0, 1.0)]), Err(Error::InvalidPole(-1.0)));
    }

    #[test]
    fn measure_decomposition_examples() {
        let d = measure_decomposition(&StieltjesForm::scalar(0.0, &[(1.0, 1.0)]).unwrap());
        assert_eq!(d.total_mass.get(0, 0), c(1.0));
        assert_eq!(d.shifted_terms, vec![StieltjesTerm::new(1.0, ComplexMatrix::scalar(1.0))]);
        assert_eq!(d.point_mass_at_zero.get(0, 0), c(0.0));

        let d = measure_decomposition(&StieltjesForm::scalar(0.0, &[(0.0, 2.0)]).unwrap());
        assert_eq!(d.point_mass_at_zero.get(0, 0), c(2.0));
        assert!(d.shifted_terms.is_empty());

        let d = measure_decomposition(&StieltjesForm::scalar(0.0, &[(1.0, 1.0), (2.0, 3.0)]).unwrap());
        let shifted: Vec<(f64, Complex64)> = d.shifted_terms.iter().map(|t| (t.lambda, t.weight.get(0, 0))).collect();
        assert_eq!(shifted, vec![(1.0, c(1.0)), (2.0, c(6.0))]);
        assert_eq!(d.point_mass_at_zero.get(0, 0), c(0.0));
        assert!(d.consistency_residual() < 1e-15);
    }

    #[test]
    fn realization_examples() {
        let r = build_realization(&PoleResidueForm::scalar(0.0, 1.0, &[(1.0, 1.0)]).unwrap(), &tol()).unwrap();
        assert_eq!(r.spectrum, vec![1.0]);
        assert!((r.coupling[(0, 0)].norm() - 1.0).abs() < 1e-15);
        assert_eq!(r.constant.get(0, 0), c(0.0));
        let z = c(2.0);
        assert!((r.evaluate(z).unwrap().get(0, 0) - c(2.0 / 3.0)).norm() < 1e-15);

        let r = build_realization(&PoleResidueForm::scalar(1.0, 0.0, &[]).unwrap(), &tol()).unwrap();
        assert_eq!(r.state_dim(), 0);
        assert_eq!(r.constant.get(0, 0), c(1.0));

        let r = build_realization(&PoleResidueForm::scalar(1.0, 1.0, &[]).unwrap(), &tol()).unwrap();
        assert_eq!(r.spectrum, vec![0.0]);
        assert!((r.coupling[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }
}

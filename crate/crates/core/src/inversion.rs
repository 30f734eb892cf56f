//! Moore-Penrose inversion of the negative part `R(z) = -sum_j C_j / (z + lambda_j)`
//! and reciprocals of class-G functions.
//!
//! Both are computed from a Hermitian state-space realization: `-R` is the
//! compression `K* (z + Lambda)^{-1} K` of a nonnegative diagonal operator, so
//! inverting it is a Schur complement and the new poles are eigenvalues of a
//! compressed copy of `Lambda`. Poles come out real and nonnegative by
//! construction.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigen, thin_svd, CMat, ComplexMatrix, ZERO};
use crate::pole_residue::{require_class_g, Pole, PoleResidueForm};
use crate::stieltjes::{StieltjesForm, StieltjesTerm};
use crate::tol::Tolerances;

/// Orthogonal projector onto `range(C_1 + ... + C_d)` and an orthonormal basis of it.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeProjection {
    pub projector: ComplexMatrix,
    /// `n x r`, orthonormal columns.
    pub basis: CMat,
}

impl RangeProjection {
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }
}

/// Range of the sum of the Hermitian parts of `residues`, rank cut at `tol`.
/// An empty list yields the 0 x 0 projector.
pub fn range_projection(residues: &[ComplexMatrix], tol: f64) -> RangeProjection {
    let n = residues.first().map_or(0, ComplexMatrix::dim);
    let mut sum = ComplexMatrix::zeros(n);
    for c in residues {
        sum += &c.hermitian_part();
    }
    let basis = sum.support_basis(tol);
    RangeProjection { projector: ComplexMatrix::wrap(&basis * basis.adjoint()), basis }
}

/// Stacks PSD factors of the compressed weights into `K` (m x r) and returns
/// it with the matching diagonal of `Lambda`.
fn stacked_factor(weights: &[(f64, ComplexMatrix)], basis: &CMat, tol: f64) -> (CMat, Vec<f64>) {
    let r = basis.ncols();
    let factors: Vec<(f64, CMat)> =
        weights.iter().map(|(lambda, w)| (*lambda, w.compress(basis).psd_factor(tol))).collect();
    let m = factors.iter().map(|(_, f)| f.nrows()).sum();
    let mut k = CMat::zeros(m, r);
    let mut spectrum = Vec::with_capacity(m);
    let mut row = 0;
    for (lambda, f) in factors {
        k.rows_mut(row, f.nrows()).copy_from(&f);
        spectrum.extend(core::iter::repeat_n(lambda, f.nrows()));
        row += f.nrows();
    }
    (k, spectrum)
}

fn real_diagonal(values: &[f64]) -> CMat {
    CMat::from_fn(values.len(), values.len(), |i, j| if i == j { Complex64::new(values[i], 0.0) } else { ZERO })
}

/// Orthonormal basis of the orthogonal complement of the columns of `u`.
fn complement(u: &CMat) -> CMat {
    let m = u.nrows();
    let residual = CMat::identity(m, m) - u * u.adjoint();
    let eig = hermitian_eigen(&residual);
    let keep: Vec<usize> = (0..m).filter(|&i| eig.values[i] > 0.5).collect();
    CMat::from_fn(m, keep.len(), |i, k| eig.vectors[(i, keep[k])])
}

/// Groups ascending eigenvalues closer than `tol` relative distance and sums
/// the rank-one matrices attached to them.
fn cluster(mut pairs: Vec<(f64, CMat)>, tol: f64) -> Vec<(f64, CMat)> {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, CMat, usize)> = Vec::with_capacity(pairs.len());
    for (value, m) in pairs {
        match out.last_mut() {
            Some((loc, acc, count)) if (value - *loc).abs() <= tol * value.abs().max(loc.abs()) => {
                *count += 1;
                *loc += (value - *loc) / *count as f64;
                *acc += m;
            }
            _ => out.push((value, m, 1)),
        }
    }
    out.into_iter().map(|(v, m, _)| (v, m)).collect()
}

/// `-R^{-1}` on `V = range(sum C_j)`, extended by zero on the complement.
///
/// The result has linear term `C^{-1}`, constant `C^{-1} (sum lambda_j C_j) C^{-1}`
/// on `V` and poles at the zeros of `R`, which interlace the `lambda_j`.
/// Locations `lambda_j = 0` are accepted; `R` then has a pole at the origin
/// and the inverse vanishes there.
pub fn pseudo_invert_negative_part(poles: &[Pole], tol: &Tolerances) -> Result<PoleResidueForm> {
    let n = poles.first().ok_or(Error::NullFunction)?.residue.dim();
    let mut weights = Vec::with_capacity(poles.len());
    for p in poles {
        if p.residue.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.residue.dim() });
        }
        if !(p.lambda.is_finite() && p.lambda >= 0.0) {
            return Err(Error::InvalidPole(p.lambda));
        }
        weights.push((p.lambda, p.residue.hermitian_part()));
    }
    let residues: Vec<ComplexMatrix> = weights.iter().map(|(_, w)| w.clone()).collect();
    let range = range_projection(&residues, tol.rank);
    let q = &range.basis;
    let r = q.ncols();
    if r == 0 {
        return Err(Error::NullFunction);
    }

    let (k, spectrum) = stacked_factor(&weights, q, tol.rank);
    let m = k.nrows();
    if m < r {
        return Err(Error::NotInvertible);
    }
    let svd = thin_svd(&k);
    let (u, v) = (svd.u, svd.v);
    let s_max = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    if svd.singular_values.iter().any(|&s| s <= tol.rank * s_max) {
        return Err(Error::NotInvertible);
    }
    // K = U S V*, so (U* K)^{-1} = V S^{-1}
    let g_inv =
        v * CMat::from_fn(r, r, |i, j| if i == j { Complex64::new(1.0 / svd.singular_values[i], 0.0) } else { ZERO });
    let lambda = real_diagonal(&spectrum);
    let linear = &g_inv * g_inv.adjoint();
    let constant = &g_inv * (u.adjoint() * &lambda * &u) * g_inv.adjoint();

    let mut new_poles = Vec::new();
    if m > r {
        let u2 = complement(&u);
        let coupling = &g_inv * (u.adjoint() * &lambda * &u2);
        let eig = hermitian_eigen(&(u2.adjoint() * &lambda * &u2));
        let pairs: Vec<(f64, CMat)> = eig
            .values
            .iter()
            .enumerate()
            .map(|(idx, &mu)| {
                let v = &coupling * eig.vectors.column(idx);
                (mu, &v * v.adjoint())
            })
            .collect();
        let mu_max = eig.values.last().copied().unwrap_or(0.0).max(0.0);
        let reference = (spectral(&constant) * mu_max.max(1.0) + spectral(&linear) * mu_max * mu_max).max(1.0);
        for (mu, residue) in cluster(pairs, tol.cluster) {
            if spectral(&residue) <= tol.rank * reference {
                continue;
            }
            if mu <= tol.pole * mu_max {
                return Err(Error::ComplexZero(mu));
            }
            new_poles.push(Pole::new(mu, lift(&residue, q)));
        }
    }
    PoleResidueForm::with_tolerances(lift(&linear, q), lift(&constant, q), new_poles, tol)
}

fn spectral(m: &CMat) -> f64 {
    crate::matrix::spectral_norm(m)
}

fn lift(x: &CMat, basis: &CMat) -> ComplexMatrix {
    ComplexMatrix::wrap(basis * x * basis.adjoint()).hermitian_part()
}

/// `1 / u` for `u` in class G, written as `B' + sum_k W_k / (z + theta_k)` with
/// `theta_k >= 0`.
///
/// Needs either an invertible linear term, or a zero linear term and an
/// invertible constant term.
pub fn reciprocal(u: &PoleResidueForm, tol: &Tolerances) -> Result<StieltjesForm> {
    require_class_g(u, tol)?;
    reciprocal_unchecked(u, tol)
}

/// [`reciprocal`] without the class-G check, for callers whose input is
/// nonnegative at the origin only up to rounding.
pub(crate) fn reciprocal_unchecked(u: &PoleResidueForm, tol: &Tolerances) -> Result<StieltjesForm> {
    let n = u.dim();
    let weights: Vec<(f64, ComplexMatrix)> = u.poles().iter().map(|p| (p.lambda, p.residue.hermitian_part())).collect();
    let identity = CMat::identity(n, n);
    let (k, spectrum) = stacked_factor(&weights, &identity, tol.rank);
    let m = k.nrows();
    let linear = u.linear().hermitian_part();
    let constant = u.constant().hermitian_part();
    let lin_eig = linear.eigh();

    if n > 0 && lin_eig.values[0] > tol.rank * lin_eig.max_abs() {
        // pencil z E + H with E = diag(A, I), H = [[B, K*], [K, Lambda]]
        let a_inv_sqrt = linear.hermitian_map(|x| 1.0 / libm::sqrt(x)).into_matrix();
        let mut h = CMat::zeros(n + m, n + m);
        h.view_mut((0, 0), (n, n)).copy_from(constant.as_matrix());
        h.view_mut((0, n), (n, m)).copy_from(&k.adjoint());
        h.view_mut((n, 0), (m, n)).copy_from(&k);
        for (i, &s) in spectrum.iter().enumerate() {
            h[(n + i, n + i)] = Complex64::new(s, 0.0);
        }
        let mut scaling = CMat::identity(n + m, n + m);
        scaling.view_mut((0, 0), (n, n)).copy_from(&a_inv_sqrt);
        let eig = hermitian_eigen(&(&scaling * h * &scaling));
        let terms = eig
            .values
            .iter()
            .enumerate()
            .map(|(idx, &theta)| {
                let v = &a_inv_sqrt * eig.vectors.column(idx).rows(0, n);
                StieltjesTerm::new(theta.max(0.0), ComplexMatrix::wrap(&v * v.adjoint()))
            })
            .collect();
        return StieltjesForm::with_tolerances(ComplexMatrix::zeros(n), terms, tol);
    }

    let const_eig = constant.eigh();
    let linear_vanishes = lin_eig.max_abs() <= tol.rank * const_eig.max_abs();
    if n == 0 || !linear_vanishes || const_eig.values[0] <= tol.rank * const_eig.max_abs() {
        return Err(Error::NotInvertible);
    }
    // Woodbury: (B - K* (z + Lambda)^{-1} K)^{-1}
    let b_inv = constant.hermitian_map(|x| 1.0 / x).into_matrix();
    let shifted = real_diagonal(&spectrum) - &k * &b_inv * k.adjoint();
    let eig = hermitian_eigen(&shifted);
    let coupling = &b_inv * k.adjoint();
    let terms = eig
        .values
        .iter()
        .enumerate()
        .map(|(idx, &theta)| {
            let v = &coupling * eig.vectors.column(idx);
            StieltjesTerm::new(theta.max(0.0), ComplexMatrix::wrap(&v * v.adjoint()))
        })
        .collect();
    StieltjesForm::with_tolerances(ComplexMatrix::wrap(b_inv).hermitian_part(), terms, tol)
}

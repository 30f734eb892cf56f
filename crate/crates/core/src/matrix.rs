//! Dense complex square matrices and the Hermitian spectral helpers the
//! reduction calculus is built on.
//!
//! Every positivity decision in the crate goes through [`ComplexMatrix::psd_check`]:
//! the matrix is Hermitized via `(M + M*)/2` and its smallest eigenvalue is
//! compared against `-tol * max(1, ||M||)`. Rank decisions use a relative
//! cutoff on the eigenvalues of the Hermitian part.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Raw nalgebra storage used behind [`ComplexMatrix`].
pub type CMat = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(CMat);

/// Eigen-decomposition of the Hermitian part of a matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored column-wise, in the order of `values`.
    pub vectors: CMat,
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdCheck {
    pub min_eigenvalue: f64,
    /// The magnitude the tolerance was multiplied by.
    pub scale: f64,
    pub hermitian: bool,
    pub pass: bool,
}

impl HermitianEigen {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Indices of eigenvalues above `tol * max|eig|`; empty for the zero matrix.
    pub fn significant(&self, tol: f64) -> Vec<usize> {
        let cutoff = tol * self.max_abs();
        if self.max_abs() == 0.0 {
            return Vec::new();
        }
        (0..self.values.len()).filter(|&i| self.values[i] > cutoff).collect()
    }
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self(CMat::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMat::identity(n, n))
    }

    /// 1x1 real matrix.
    pub fn scalar(value: f64) -> Self {
        Self(CMat::from_element(1, 1, Complex64::new(value, 0.0)))
    }

    pub fn complex_scalar(value: Complex64) -> Self {
        Self(CMat::from_element(1, 1, value))
    }

    pub fn from_real_diagonal(diagonal: &[f64]) -> Self {
        let n = diagonal.len();
        Self(CMat::from_fn(n, n, |i, j| if i == j { Complex64::new(diagonal[i], 0.0) } else { ZERO }))
    }

    /// Builds a matrix from rows; every row must have the same length as the row count.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Self::from_matrix(CMat::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_matrix(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        if !m.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite("matrix entry"));
        }
        Ok(Self(m))
    }

    /// Wraps a square matrix produced by internal arithmetic.
    pub(crate) fn wrap(m: CMat) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Spectral norm (largest singular value).
    pub fn norm(&self) -> f64 {
        spectral_norm(&self.0)
    }

    pub fn hermitian_defect(&self) -> f64 {
        spectral_norm(&(&self.0 - self.0.adjoint()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * self.norm().max(1.0)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Eigen-decomposition of the Hermitian part.
    pub fn eigh(&self) -> HermitianEigen {
        hermitian_eigen(&self.hermitian_part().0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().values.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigh().values.last().copied().unwrap_or(0.0)
    }

    /// PSD test scaled by `max(1, ||M||)`.
    pub fn psd_check(&self, tol: f64) -> PsdCheck {
        self.psd_check_scaled(tol, self.norm())
    }

    /// PSD test against `-tol * max(1, scale)`; use when `M` is the result of a
    /// cancelling sum whose terms are larger than `M` itself.
    pub fn psd_check_scaled(&self, tol: f64, scale: f64) -> PsdCheck {
        let scale = scale.max(1.0);
        let hermitian = self.hermitian_defect() <= tol * scale;
        let min_eigenvalue = self.min_eigenvalue();
        PsdCheck { min_eigenvalue, scale, hermitian, pass: hermitian && min_eigenvalue >= -tol * scale }
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.psd_check(tol).pass
    }

    /// Number of eigenvalues of the Hermitian part above `tol * lambda_max`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigh().significant(tol).len()
    }

    /// Orthonormal basis (n x r) of the numerical range of the Hermitian part.
    pub fn support_basis(&self, tol: f64) -> CMat {
        let eig = self.eigh();
        let keep = eig.significant(tol);
        CMat::from_fn(self.dim(), keep.len(), |i, k| eig.vectors[(i, keep[k])])
    }

    /// `F` (r x n) with `F* F` equal to the PSD matrix, rows `sqrt(e) v*`.
    pub fn psd_factor(&self, tol: f64) -> CMat {
        let eig = self.eigh();
        let keep = eig.significant(tol);
        CMat::from_fn(keep.len(), self.dim(), |k, j| {
            let idx = keep[k];
            eig.vectors[(j, idx)].conj() * libm::sqrt(eig.values[idx])
        })
    }

    /// Matrix function `g` applied to the Hermitian part through its eigenvalues.
    pub fn hermitian_map(&self, g: impl Fn(f64) -> f64) -> Self {
        let eig = self.eigh();
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for (k, &value) in eig.values.iter().enumerate() {
            let v = eig.vectors.column(k);
            out += (v * v.adjoint()) * Complex64::new(g(value), 0.0);
        }
        Self(out)
    }

    pub fn inverse(&self) -> Option<Self> {
        self.0.clone().try_inverse().map(Self)
    }

    /// `B * self * B*` for a rectangular `B`.
    pub fn congruence(&self, b: &CMat) -> Self {
        Self(b * &self.0 * b.adjoint())
    }

    /// `B* * self * B` for a rectangular `B`.
    pub fn compress(&self, b: &CMat) -> Self {
        Self(b.adjoint() * &self.0 * b)
    }

    /// `||self - other|| / max(||self||, ||other||)`, zero when both vanish.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let denom = self.norm().max(other.norm());
        let diff = spectral_norm(&(&self.0 - &other.0));
        if denom == 0.0 {
            diff
        } else {
            diff / denom
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// Eigen-decomposition of a Hermitian matrix (only the Hermitian part is read).
pub fn hermitian_eigen(m: &CMat) -> HermitianEigen {
    let n = m.nrows();
    if n == 0 {
        return HermitianEigen { values: Vec::new(), vectors: CMat::zeros(0, 0) };
    }
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    HermitianEigen {
        values: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        vectors: CMat::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]),
    }
}

pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let top = hermitian_eigen(&gram).values.last().copied().unwrap_or(0.0);
    libm::sqrt(top.max(0.0))
}

/// Thin singular value decomposition `M = U diag(s) V*`, singular values
/// descending, `k = min(rows, cols)` columns in `U` and `V`.
///
/// Read off the Hermitian dilation `[[0, M], [M*, 0]]`, whose eigenpairs for
/// `+s` are `(u; v)/sqrt(2)`. Columns belonging to zero singular values are
/// not meaningful.
pub(crate) struct ThinSvd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

pub(crate) fn thin_svd(m: &CMat) -> ThinSvd {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    let size = rows + cols;
    let mut dilation = CMat::zeros(size, size);
    dilation.view_mut((0, rows), (rows, cols)).copy_from(m);
    dilation.view_mut((rows, 0), (cols, rows)).copy_from(&m.adjoint());
    let eig = hermitian_eigen(&dilation);
    let mut u = CMat::zeros(rows, k);
    let mut v = CMat::zeros(cols, k);
    let mut singular_values = Vec::with_capacity(k);
    for j in 0..k {
        let idx = size - 1 - j;
        singular_values.push(eig.values[idx].max(0.0));
        let column = eig.vectors.column(idx);
        let top = column.rows(0, rows).into_owned();
        let bottom = column.rows(rows, cols).into_owned();
        let (nu, nv) = (top.norm(), bottom.norm());
        if nu > 0.0 {
            u.set_column(j, &(top / Complex64::new(nu, 0.0)));
        }
        if nv > 0.0 {
            v.set_column(j, &(bottom / Complex64::new(nv, 0.0)));
        }
    }
    ThinSvd { u, singular_values, v }
}

/// Inverse of `basis* d basis` lifted back with `basis`, i.e. the Moore-Penrose
/// inverse of `d` when `d` is invertible on the span of `basis` and vanishes
/// on its complement. Returns `None` when the compression is numerically
/// singular relative to `tol`.
pub(crate) fn inverse_on_support(d: &CMat, basis: &CMat, tol: f64) -> Option<CMat> {
    let n = d.nrows();
    if basis.ncols() == 0 {
        return Some(CMat::zeros(n, n));
    }
    let compressed = basis.adjoint() * d * basis;
    let svd = thin_svd(&compressed);
    let s_max = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    let s_min = svd.singular_values.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if s_max == 0.0 || s_min <= tol * s_max {
        return None;
    }
    let (u, v) = (svd.u, svd.v);
    let sigma_inv = CMat::from_fn(u.ncols(), u.ncols(), |i, j| {
        if i == j {
            Complex64::new(1.0 / svd.singular_values[i], 0.0)
        } else {
            ZERO
        }
    });
    let inv = v * sigma_inv * u.adjoint();
    Some(basis * inv * basis.adjoint())
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op rhs.0)
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op &rhs.0)
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);
binary_op!(Mul, mul, *);

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 -= &rhs.0;
    }
}

impl Mul<Complex64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Complex64) -> ComplexMatrix {
        ComplexMatrix(&self.0 * rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

#![no_std]
//! Continued-fraction reduction of rational matrix-valued Stieltjes functions
//! and the effective-conductivity formulas of two-phase composites.

extern crate alloc;

pub mod composites;
mod error;
mod inversion;
mod jfraction;
mod matrix;
mod points;
mod pole_residue;
mod sfraction;
mod stieltjes;
mod tol;

pub use error::{Error, Result};
pub use inversion::{pseudo_invert_negative_part, range_projection, reciprocal, RangeProjection};
pub use jfraction::{
    classical_form, evaluate_j_fraction, expand_j_fraction, reduction_chain, reduction_step, FractionForm, JFraction,
    JLevel, ReductionStep,
};
pub use matrix::{hermitian_eigen, spectral_norm, CMat, ComplexMatrix, HermitianEigen, PsdCheck};
pub use points::{default_points, off_axis_points, verification_points, VERIFICATION_COUNT, VERIFICATION_SEED};
pub use pole_residue::{
    certify_class_g, kernel_certificates_with, partial_mcmillan_degree, reflect, sample_kernel_certificates, translate,
    CertificateCheck, CertificateReport, Condition, KernelReport, KernelSample, Pole, PoleResidueForm,
};
pub use sfraction::{
    build_from_s_fraction, contract_s_fraction, expand_s_fraction, expand_scalar_cd, free_parameters,
    hankel_certificates, CdFraction, ContractedFraction, HankelMatrixCheck, HankelReport, SFraction,
};
pub use stieltjes::{
    build_realization, from_stieltjes, measure_decomposition, to_stieltjes, MeasureDecomposition, RealizationForm,
    StieltjesForm, StieltjesTerm,
};
pub use tol::Tolerances;

pub use num_complex::Complex64;

//! Effective conductivity of two-phase composites.
//!
//! Scalar formulas are homogeneous of degree one in `(sigma1, sigma2)` and
//! return the common value when the phases agree; `z -> sigma*(z, 1)` is the
//! normalized function that links them to class G.

mod conductivity;
mod laminate;
mod multicoat;

pub use conductivity::{
    hs_coated, hs_nested, keller_residual, matrix_phase_interchange_residual, tartar_formula, AnisotropicTensor,
    ConductivityPair,
};
pub use laminate::{laminate_parallel, laminate_perp, synthesize_laminate, LaminateSpec, LaminateSynthesis};
pub use multicoat::{extract_coating_parameters, multicoat, multicoat_eval, multicoat_function, CoatingSpec};

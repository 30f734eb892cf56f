//! Multicoated sphere and disk assemblages: evaluation, their pole-residue
//! form, and recovery of the coating fractions from a function.
//!
//! Coating 1 is the outermost shell. Shells alternate between phase 2
//! (odd coatings) and phase 1 (even coatings); the innermost core is the
//! phase not used by the innermost shell. An empty spec is bare phase 1.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::conductivity::{check_dimension, check_fraction, hs_nested, ConductivityPair};
use crate::error::{Error, Result};
use crate::inversion::{pseudo_invert_negative_part, reciprocal};
use crate::matrix::ComplexMatrix;
use crate::pole_residue::{reflect, Pole, PoleResidueForm};
use crate::tol::Tolerances;

#[derive(Clone, Debug, PartialEq)]
pub struct CoatingSpec {
    dimension: usize,
    fractions: Vec<f64>,
}

impl CoatingSpec {
    pub fn new(dimension: usize, fractions: Vec<f64>) -> Result<Self> {
        check_dimension(dimension)?;
        for &c in &fractions {
            check_fraction(c)?;
        }
        Ok(Self { dimension, fractions })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn depth(&self) -> usize {
        self.fractions.len()
    }
}

/// Effective conductivity of the multicoated assemblage.
pub fn multicoat(pair: &ConductivityPair, spec: &CoatingSpec) -> Result<Complex64> {
    let m = spec.depth();
    let mut value = if m % 2 == 1 || m == 0 { pair.sigma1 } else { pair.sigma2 };
    for (k, &c) in spec.fractions.iter().enumerate().rev() {
        let shell = if k % 2 == 0 { pair.sigma2 } else { pair.sigma1 };
        value = hs_nested(value, shell, c, spec.dimension)?;
    }
    Ok(value)
}

/// `f(z) = sigma*(z, 1)`; raises `PoleProximity` when a nested denominator
/// vanishes.
pub fn multicoat_eval(z: Complex64, spec: &CoatingSpec) -> Result<Complex64> {
    let m = spec.depth();
    let one = Complex64::new(1.0, 0.0);
    let mut value = if m % 2 == 1 || m == 0 { z } else { one };
    for (k, &c) in spec.fractions.iter().enumerate().rev() {
        let shell = if k % 2 == 0 { one } else { z };
        value = hs_nested(value, shell, c, spec.dimension).map_err(|e| match e {
            Error::DegenerateDenominator => Error::PoleProximity,
            other => other,
        })?;
    }
    Ok(value)
}

/// Coefficients of one coating with unit shell:
/// `N(g) = (1 + c/d) - kappa / (g + e)` where `kappa = c/d^2`, `e = 1/d - 1`.
struct Shell {
    head: f64,
    kappa: f64,
    shift: f64,
}

impl Shell {
    fn new(c: f64, dim: usize) -> Self {
        let d = (1.0 - c) / dim as f64;
        Self { head: 1.0 + c / d, kappa: c / (d * d), shift: 1.0 / d - 1.0 }
    }

    fn apply(&self, g: &PoleResidueForm, tol: &Tolerances) -> Result<PoleResidueForm> {
        let shifted = PoleResidueForm::with_tolerances(
            g.linear().clone(),
            g.constant() + &ComplexMatrix::scalar(self.shift),
            g.poles().to_vec(),
            tol,
        )?;
        let inverse = reciprocal(&shifted, tol)?;
        let constant = ComplexMatrix::scalar(self.head) - inverse.constant().scale(self.kappa);
        let poles = inverse.terms().iter().map(|t| Pole::new(t.lambda, t.weight.scale(self.kappa))).collect();
        PoleResidueForm::with_tolerances(ComplexMatrix::scalar(0.0), constant, poles, tol)
    }
}

/// Pole-residue form of `z -> sigma*(z, 1)`.
///
/// With unit shell a coating maps the core function `g` to `N(g)`; with
/// shell `z` it acts on the reflection `z g(1/z)`, so the build alternates
/// `N` and reflection from the innermost coating outward.
pub fn multicoat_function(spec: &CoatingSpec, tol: &Tolerances) -> Result<PoleResidueForm> {
    let mut current = PoleResidueForm::scalar(1.0, 0.0, &[])?;
    let mut first = true;
    for &c in spec.fractions.iter().rev() {
        if !first {
            current = reflect(&current, tol)?;
        }
        current = Shell::new(c, spec.dimension).apply(&current, tol)?;
        first = false;
    }
    Ok(current)
}

/// Fixed probe points for the interchange relation `f(z) f(1/z) = 1`.
const KELLER_PROBES: [(f64, f64); 5] = [(0.7, 0.4), (2.3, -1.1), (0.15, 0.9), (1.0, 3.0), (4.2, 0.05)];
const KELLER_TOL: f64 = 1e-8;

fn is_identity(f: &PoleResidueForm, tol: f64) -> bool {
    let scale = f.scale().max(1.0);
    (f.linear().get(0, 0) - Complex64::new(1.0, 0.0)).norm() <= tol * scale
        && f.constant().get(0, 0).norm() <= tol * scale
        && f.poles().iter().all(|p| p.residue.norm() <= tol * scale * p.lambda)
}

/// Recovers the coating fractions of a 2-D multicoated-disk function
/// `f(z) = sigma*(z, 1)`.
///
/// Each coating is read off the value at the shielding point,
/// `c = (1 - f(0)) / (1 + f(0))`, then peeled by inverting the coated-disk
/// formula; the phases swap roles through a reflection before the next
/// coating. The remainder must reach `z` within `max_depth` coatings.
pub fn extract_coating_parameters(f: &PoleResidueForm, max_depth: usize, tol: &Tolerances) -> Result<CoatingSpec> {
    if f.dim() != 1 {
        return Err(Error::NotScalar(f.dim()));
    }
    let one = Complex64::new(1.0, 0.0);
    let at_one = f.evaluate(one)?.get(0, 0);
    if (at_one - one).norm() > KELLER_TOL {
        return Err(Error::NotRealizable("f(1) != 1"));
    }
    for &(re, im) in &KELLER_PROBES {
        let z = Complex64::new(re, im);
        let product = f.evaluate(z)?.get(0, 0) * f.evaluate(z.inv())?.get(0, 0);
        if (product - one).norm() > KELLER_TOL {
            return Err(Error::NotRealizable("phase interchange relation fails"));
        }
    }

    let check = KELLER_TOL;
    let mut fractions = Vec::new();
    let mut current = f.clone();
    while !is_identity(&current, check) {
        if fractions.len() == max_depth {
            return Err(Error::NotRealizable("maximum depth reached"));
        }
        let v = current.value_at_zero().get(0, 0).re;
        let c = (1.0 - v) / (1.0 + v);
        if !(c > 1e-12 && c < 1.0 - 1e-12) {
            return Err(Error::NotRealizable("coating fraction outside (0, 1)"));
        }
        let shell = Shell::new(c, 2);
        let scale = current.scale().max(1.0);
        if current.linear().get(0, 0).norm() > check * scale
            || (current.constant().get(0, 0).re - shell.head).abs() > check * scale
            || current.poles().is_empty()
        {
            return Err(Error::NotRealizable("coating structure does not match"));
        }
        // g + e = kappa / (head - N)
        let inverse = pseudo_invert_negative_part(current.poles(), tol)?;
        let poles: Vec<Pole> =
            inverse.poles().iter().map(|p| Pole::new(p.lambda, p.residue.scale(shell.kappa))).collect();
        let core = PoleResidueForm::with_tolerances(
            inverse.linear().scale(shell.kappa),
            inverse.constant().scale(shell.kappa) - ComplexMatrix::scalar(shell.shift),
            poles,
            tol,
        )?;
        fractions.push(c);
        if is_identity(&core, check) {
            break;
        }
        current = reflect(&core, tol).map_err(|_| Error::NotRealizable("peeled core left class G"))?;
    }
    CoatingSpec::new(2, fractions)
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
    fn evaluation_examples() {
        let spec = CoatingSpec::new(2, vec![0.5]).unwrap();
        assert!((multicoat_eval(c(0.0), &spec).unwrap() - c(1.0 / 3.0)).norm() < 1e-15);
        let deep = CoatingSpec::new(3, vec![0.2, 0.7, 0.4]).unwrap();
        assert!((multicoat_eval(c(1.0), &deep).unwrap() - c(1.0)).norm() < 1e-15);
        assert_eq!(multicoat_eval(c(2.5), &CoatingSpec::new(2, vec![]).unwrap()).unwrap(), c(2.5));
    }

    #[test]
    fn two_coatings_match_substitution() {
        let spec = CoatingSpec::new(3, vec![0.5, 0.5]).unwrap();
        for z in [c(0.3), Complex64::new(2.0, 1.5), Complex64::new(0.1, -0.4)] {
            let inner = hs_nested(c(1.0), z, 0.5, 3).unwrap();
            let outer = hs_nested(inner, c(1.0), 0.5, 3).unwrap();
            assert!((multicoat_eval(z, &spec).unwrap() - outer).norm() < 1e-14);
        }
    }

    #[test]
    fn pole_residue_form_matches_evaluation() {
        for (dim, fractions) in
            [(2, vec![0.5]), (2, vec![0.3, 0.6]), (3, vec![0.2, 0.7, 0.4]), (2, vec![0.8, 0.1, 0.5, 0.35])]
        {
            let spec = CoatingSpec::new(dim, fractions).unwrap();
            let f = multicoat_function(&spec, &tol()).unwrap();
            for z in [c(0.4), Complex64::new(1.5, 2.0), Complex64::new(-0.3, 0.7)] {
                let direct = multicoat_eval(z, &spec).unwrap();
                assert!((f.evaluate(z).unwrap().get(0, 0) - direct).norm() < 1e-12 * direct.norm().max(1.0));
            }
        }
    }

    #[test]
    fn extraction_examples() {
        let spec = CoatingSpec::new(2, vec![0.5]).unwrap();
        let f = multicoat_function(&spec, &tol()).unwrap();
        let back = extract_coating_parameters(&f, 4, &tol()).unwrap();
        assert_eq!(back.depth(), 1);
        assert!((back.fractions()[0] - 0.5).abs() < 1e-12);

        let identity = PoleResidueForm::scalar(1.0, 0.0, &[]).unwrap();
        assert_eq!(extract_coating_parameters(&identity, 4, &tol()).unwrap().depth(), 0);

        let spec = CoatingSpec::new(2, vec![0.3, 0.6]).unwrap();
        let f = multicoat_function(&spec, &tol()).unwrap();
        let back = extract_coating_parameters(&f, 4, &tol()).unwrap();
        assert_eq!(back.depth(), 2);
        assert!((back.fractions()[0] - 0.3).abs() < 1e-8 && (back.fractions()[1] - 0.6).abs() < 1e-8);
    }

    #[test]
    fn extraction_rejects_non_keller_and_deep_inputs() {
        let spec = CoatingSpec::new(3, vec![0.5]).unwrap();
        let f = multicoat_function(&spec, &tol()).unwrap();
        assert!(matches!(extract_coating_parameters(&f, 4, &tol()), Err(Error::NotRealizable(_))));

        let spec = CoatingSpec::new(2, vec![0.3, 0.6, 0.4]).unwrap();
        let f = multicoat_function(&spec, &tol()).unwrap();
        assert_eq!(extract_coating_parameters(&f, 2, &tol()), Err(Error::NotRealizable("maximum depth reached")));
    }
}

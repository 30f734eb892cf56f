use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;
use stieltjes_cf::{
    classical_form, evaluate_j_fraction, expand_j_fraction, free_parameters, reflect, verification_points, Complex64,
    ComplexMatrix, FractionForm, JFraction, PoleResidueForm,
};

use crate::document::{encode_matrix, FunctionDocument};
use crate::error::{domain, CliError};
use crate::report::Report;
use crate::{read_input, Settings};

/// Largest acceptable round-trip error over the sample points.
const ROUND_TRIP_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    /// Degree-reducing matrix J-fraction
    Jfraction,
    /// Classical matrix J-fraction
    Classical,
    /// Scalar S-fraction with affine head
    Sfraction,
}

fn fraction_document(jf: &JFraction) -> serde_json::Value {
    let form = match jf.form {
        FractionForm::Reduction => "reduction",
        FractionForm::Classical => "classical",
    };
    let levels: Vec<_> = jf
        .levels
        .iter()
        .map(|l| json!({ "constant": encode_matrix(&l.constant), "linear": encode_matrix(&l.linear) }))
        .collect();
    json!({ "form": form, "n": jf.n, "depth": jf.depth(), "levels": levels })
}

fn max_relative_error<F>(f: &PoleResidueForm, points: &[Complex64], eval: F) -> Result<f64, CliError>
where
    F: Fn(Complex64) -> stieltjes_cf::Result<ComplexMatrix>,
{
    let mut worst = 0.0_f64;
    for &z in points {
        let expected = f.evaluate(z).map_err(domain)?;
        let diff = (&eval(z).map_err(domain)? - &expected).norm();
        let scale = expected.norm();
        worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
    }
    Ok(worst)
}

pub fn run(input: &Path, format: Format, settings: &Settings) -> Result<Report, CliError> {
    let (bytes, text) = read_input(input)?;
    let f = FunctionDocument::parse(&text)?.to_form(&settings.tol)?;
    if format == Format::Sfraction && !f.is_scalar() {
        return Err(CliError::Usage(format!("--format sfraction needs n = 1, got n = {}", f.dim())));
    }
    let tol = settings.tol;
    let points = verification_points(settings.samples, settings.seed);
    let (result, error) = match format {
        Format::Jfraction => {
            let jf = expand_j_fraction(&f, &tol).map_err(domain)?;
            let error = max_relative_error(&f, &points, |z| evaluate_j_fraction(&jf, z, &tol))?;
            (fraction_document(&jf), error)
        }
        Format::Classical => {
            // the classical fraction of f is the flipped expansion of z f(1/z)
            let flipped = reflect(&f, &tol).map_err(domain)?;
            let jf = classical_form(&expand_j_fraction(&flipped, &tol).map_err(domain)?);
            let error = max_relative_error(&f, &points, |z| evaluate_j_fraction(&jf, z, &tol))?;
            (fraction_document(&jf), error)
        }
        Format::Sfraction => {
            let s = free_parameters(&f, &tol).map_err(domain)?;
            let error = max_relative_error(&f, &points, |z| s.evaluate(z).map(ComplexMatrix::complex_scalar))?;
            (json!({ "head": s.head, "coefficients": s.coefficients }), error)
        }
    };
    let mut report = Report::new("expand", &bytes, settings);
    report.check("round trip", error <= ROUND_TRIP_TOL, error);
    report.residual("round_trip_max_relative_error", error);
    report.result = Some(result);
    Ok(report)
}

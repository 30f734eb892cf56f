//! `composite` subcommands. Evaluations write CSV rows `z, value` where `z`
//! is the phase-1 conductivity; without `--sigma1` they sweep a grid of `z`
//! in the right half-plane.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use stieltjes_cf::composites::{
    extract_coating_parameters, hs_coated, keller_residual, laminate_parallel, laminate_perp, multicoat,
    multicoat_eval, multicoat_function, synthesize_laminate, tartar_formula, AnisotropicTensor, CoatingSpec,
    ConductivityPair, LaminateSpec,
};
use stieltjes_cf::{verification_points, Complex64, ComplexMatrix, PoleResidueForm};

use crate::document::FunctionDocument;
use crate::error::{domain, usage, CliError};
use crate::report::{digest, Report};
use crate::{read_input, write_file, Settings};

/// Keller residuals above this multiple of `|sigma1 sigma2|` fail.
const KELLER_TOL: f64 = 1e-10;
/// Synthesized parameters must reproduce their source to this relative error.
const SYNTHESIS_TOL: f64 = 1e-8;

/// A complex conductivity written `re` or `re,im`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Conductivity {
    re: f64,
    im: f64,
}

impl FromStr for Conductivity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let (re, im) = match s.split_once(',') {
            Some((re, im)) => (parse(re)?, parse(im)?),
            None => (parse(s)?, 0.0),
        };
        Ok(Self { re, im })
    }
}

impl From<Conductivity> for Complex64 {
    fn from(c: Conductivity) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Args, Debug, Serialize)]
pub struct Phases {
    /// Phase-1 conductivity; omit to sweep a grid
    #[arg(long, allow_hyphen_values = true)]
    sigma1: Option<Conductivity>,
    /// Phase-2 conductivity
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    sigma2: Conductivity,
    /// Also write a JSON report here
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Direction {
    Parallel,
    Perpendicular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum SynthesisKind {
    /// Multicoated disks (2-D)
    Multicoat,
    /// Layered simple laminates
    Laminate,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum Composite {
    /// Coated spheres (dim 3) or disks (dim 2)
    Hs {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Core volume fraction
        #[arg(long)]
        c1: f64,
        #[command(flatten)]
        phases: Phases,
    },
    /// Multicoated assemblage; coating fractions listed from the outside in
    Multicoat {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        fractions: Vec<f64>,
        /// Write the function z -> sigma*(z, 1) as a document instead of CSV
        #[arg(long)]
        emit_function: bool,
        #[command(flatten)]
        phases: Phases,
    },
    /// Laminate of simple laminates
    Laminate {
        /// Layer weights, summing to 1
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
        /// Phase-1 proportion of each layer
        #[arg(long, value_delimiter = ',', required = true)]
        proportions: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Direction::Parallel)]
        direction: Direction,
        #[command(flatten)]
        phases: Phases,
    },
    /// Phase-interchange residual sigma*(s1, s2) sigma*(s2, s1) - s1 s2
    Keller {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Coated assemblage with this core fraction
        #[arg(long, required_unless_present = "fractions", conflicts_with = "fractions")]
        c1: Option<f64>,
        /// Multicoated assemblage with these fractions
        #[arg(long, value_delimiter = ',')]
        fractions: Vec<f64>,
        #[command(flatten)]
        phases: Phases,
    },
    /// Lamination of phase 2 onto an isotropic phase-1 core
    Tartar {
        #[arg(long)]
        c1: f64,
        /// Lamination matrix entries m11,m12,m22
        #[arg(long, value_delimiter = ',', num_args = 3, default_value = "0.5,0,0.5", allow_hyphen_values = true)]
        m1: Vec<f64>,
        #[command(flatten)]
        phases: Phases,
    },
    /// Recover geometry parameters from a function document
    Synthesize {
        /// Function document of z -> sigma*(z, 1)
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SynthesisKind::Multicoat)]
        kind: SynthesisKind,
        /// Largest number of coatings to peel
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
}

impl Composite {
    fn name(&self) -> &'static str {
        match self {
            Composite::Hs { .. } => "composite hs",
            Composite::Multicoat { .. } => "composite multicoat",
            Composite::Laminate { .. } => "composite laminate",
            Composite::Keller { .. } => "composite keller",
            Composite::Tartar { .. } => "composite tartar",
            Composite::Synthesize { .. } => "composite synthesize",
        }
    }
}

/// Sample points mirrored into the closed right half-plane.
fn grid(settings: &Settings) -> Vec<Complex64> {
    verification_points(settings.samples, settings.seed)
        .into_iter()
        .map(|z| if z.re < 0.0 { Complex64::new(-z.re, z.im) } else { z })
        .collect()
}

/// One pair per row: the given `sigma1`, or every grid point.
fn pairs(phases: &Phases, settings: &Settings) -> Result<Vec<ConductivityPair>, CliError> {
    let sigma2 = Complex64::from(phases.sigma2);
    let firsts = match phases.sigma1 {
        Some(s) => vec![Complex64::from(s)],
        None => grid(settings),
    };
    firsts.into_iter().map(|s| ConductivityPair::new(s, sigma2).map_err(usage)).collect()
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<(Complex64, Vec<Complex64>)>,
}

impl Table {
    fn csv(&self) -> Result<Vec<u8>, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["z_re".to_owned(), "z_im".to_owned()];
        for c in &self.columns {
            header.push(format!("{c}_re"));
            header.push(format!("{c}_im"));
        }
        let io = |e: csv::Error| CliError::Usage(format!("cannot write CSV: {e}"));
        writer.write_record(&header).map_err(io)?;
        for (z, values) in &self.rows {
            let mut record = vec![z.re.to_string(), z.im.to_string()];
            for v in values {
                record.push(v.re.to_string());
                record.push(v.im.to_string());
            }
            writer.write_record(&record).map_err(io)?;
        }
        writer.into_inner().map_err(|e| CliError::Usage(format!("cannot write CSV: {e}")))
    }
}

fn scalar_table<F>(pairs: &[ConductivityPair], eval: F) -> Result<Table, CliError>
where
    F: Fn(&ConductivityPair) -> stieltjes_cf::Result<Complex64>,
{
    let rows = pairs.iter().map(|p| Ok((p.sigma1, vec![eval(p).map_err(domain)?]))).collect::<Result<_, CliError>>()?;
    Ok(Table { columns: vec!["value"], rows })
}

fn coating_spec(dim: usize, fractions: &[f64]) -> Result<CoatingSpec, CliError> {
    CoatingSpec::new(dim, fractions.to_vec()).map_err(usage)
}

pub fn run(command: &Composite, settings: &Settings) -> Result<bool, CliError> {
    let params = serde_json::to_vec(command).expect("parameters serialize");
    let mut report = Report::new(command.name(), &params, settings);
    let (table, phases) = match command {
        Composite::Hs { dim, c1, phases } => {
            hs_coated(&ConductivityPair::real(1.0, 1.0).map_err(usage)?, *c1, *dim).map_err(usage)?;
            (scalar_table(&pairs(phases, settings)?, |p| hs_coated(p, *c1, *dim))?, phases)
        }
        Composite::Multicoat { dim, fractions, emit_function, phases } => {
            let spec = coating_spec(*dim, fractions)?;
            if *emit_function {
                let f = multicoat_function(&spec, &settings.tol).map_err(domain)?;
                settings.emit(FunctionDocument::from_form(&f).to_json().as_bytes())?;
                return Ok(true);
            }
            (scalar_table(&pairs(phases, settings)?, |p| multicoat(p, &spec))?, phases)
        }
        Composite::Laminate { weights, proportions, direction, phases } => {
            let spec = LaminateSpec::new(weights.clone(), proportions.clone()).map_err(usage)?;
            let eval = |p: &ConductivityPair| match direction {
                Direction::Parallel => laminate_parallel(p, &spec),
                Direction::Perpendicular => laminate_perp(p, &spec),
            };
            (scalar_table(&pairs(phases, settings)?, eval)?, phases)
        }
        Composite::Keller { dim, c1, fractions, phases } => {
            let table = match c1 {
                Some(c1) => {
                    hs_coated(&ConductivityPair::real(1.0, 1.0).map_err(usage)?, *c1, *dim).map_err(usage)?;
                    let coated = |p: &ConductivityPair| hs_coated(p, *c1, *dim);
                    scalar_table(&pairs(phases, settings)?, |p| keller_residual(coated, p))?
                }
                None => {
                    let spec = coating_spec(*dim, fractions)?;
                    let layered = |p: &ConductivityPair| multicoat(p, &spec);
                    scalar_table(&pairs(phases, settings)?, |p| keller_residual(layered, p))?
                }
            };
            let sigma2 = Complex64::from(phases.sigma2);
            let worst = table
                .rows
                .iter()
                .map(|(z, v)| v[0].norm() / (z * sigma2).norm().max(f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            report.check("interchange relation", worst <= KELLER_TOL, worst);
            report.residual("keller_max_normalized_residual", worst);
            (table, phases)
        }
        Composite::Tartar { c1, m1, phases } => {
            let m = ComplexMatrix::from_real_rows(&[&[m1[0], m1[1]], &[m1[1], m1[2]]]).map_err(usage)?;
            let rows = pairs(phases, settings)?
                .iter()
                .map(|p| {
                    let core = AnisotropicTensor::isotropic(p.sigma1);
                    let t = tartar_formula(&core, p.sigma2, *c1, &m).map_err(|e| match e {
                        stieltjes_cf::Error::BadM1 | stieltjes_cf::Error::InvalidFraction(_) => usage(e),
                        other => domain(other),
                    })?;
                    let t = t.matrix();
                    Ok((p.sigma1, vec![t.get(0, 0), t.get(0, 1), t.get(1, 0), t.get(1, 1)]))
                })
                .collect::<Result<_, CliError>>()?;
            let table = Table { columns: vec!["xx", "xy", "yx", "yy"], rows };
            (table, phases)
        }
        Composite::Synthesize { input, kind, depth } => {
            let report = synthesize(input, *kind, *depth, settings)?;
            settings.emit(report.to_json().as_bytes())?;
            return Ok(report.pass);
        }
    };
    let csv = table.csv()?;
    settings.emit(&csv)?;
    if let Some(path) = &phases.report {
        report.residual("rows", table.rows.len() as f64);
        report.result = Some(json!({ "output_digest": digest(&csv) }));
        write_file(path, report.to_json().as_bytes())?;
    }
    Ok(report.pass)
}

fn reproduction_error<F>(f: &PoleResidueForm, points: &[Complex64], eval: F) -> Result<f64, CliError>
where
    F: Fn(Complex64) -> stieltjes_cf::Result<Complex64>,
{
    let mut worst = 0.0_f64;
    for &z in points {
        let expected = f.evaluate(z).map_err(domain)?.get(0, 0);
        worst = worst.max((eval(z).map_err(domain)? - expected).norm() / expected.norm().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

fn synthesize(input: &Path, kind: SynthesisKind, depth: usize, settings: &Settings) -> Result<Report, CliError> {
    let (bytes, text) = read_input(input)?;
    let f = FunctionDocument::parse(&text)?.to_form(&settings.tol)?;
    if !f.is_scalar() {
        return Err(CliError::Usage(format!("synthesis needs n = 1, got n = {}", f.dim())));
    }
    let mut report = Report::new("composite synthesize", &bytes, settings);
    let points = grid(settings);
    let error = match kind {
        SynthesisKind::Multicoat => {
            let spec = extract_coating_parameters(&f, depth, &settings.tol).map_err(domain)?;
            report.result = Some(json!({ "dimension": spec.dimension(), "fractions": spec.fractions() }));
            reproduction_error(&f, &points, |z| multicoat_eval(z, &spec))?
        }
        SynthesisKind::Laminate => {
            let spec = synthesize_laminate(&f, &settings.tol).and_then(|s| s.into_spec()).map_err(domain)?;
            report.result = Some(json!({ "weights": spec.weights(), "proportions": spec.proportions() }));
            reproduction_error(&f, &points, |z| {
                laminate_parallel(&ConductivityPair::new(z, Complex64::new(1.0, 0.0))?, &spec)
            })?
        }
    };
    report.check("reproduces source", error <= SYNTHESIS_TOL, error);
    report.residual("max_relative_error", error);
    Ok(report)
}

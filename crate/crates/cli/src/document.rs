//! JSON function documents: `{schema_version, n, A, B, poles: [{lambda, C}]}`
//! with every matrix entry written as `[re, im]`.

use serde::{Deserialize, Serialize};
use stieltjes_cf::{Complex64, ComplexMatrix, Pole, PoleResidueForm, Tolerances};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

pub type Matrix = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDocument {
    pub schema_version: String,
    pub n: usize,
    #[serde(rename = "A")]
    pub linear: Matrix,
    #[serde(rename = "B")]
    pub constant: Matrix,
    #[serde(default)]
    pub poles: Vec<PoleEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleEntry {
    pub lambda: f64,
    #[serde(rename = "C")]
    pub residue: Matrix,
}

pub fn encode_matrix(m: &ComplexMatrix) -> Matrix {
    m.rows().iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn decode_matrix(m: &Matrix, n: usize, path: &str) -> Result<ComplexMatrix, CliError> {
    if m.len() != n {
        return Err(CliError::Usage(format!("{path}: expected {n} rows, found {}", m.len())));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::Usage(format!("{path}[{i}]: expected {n} entries, found {}", row.len())));
        }
    }
    let rows: Vec<Vec<Complex64>> =
        m.iter().map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

impl FunctionDocument {
    pub fn from_form(f: &PoleResidueForm) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_owned(),
            n: f.dim(),
            linear: encode_matrix(f.linear()),
            constant: encode_matrix(f.constant()),
            poles: f
                .poles()
                .iter()
                .map(|p| PoleEntry { lambda: p.lambda, residue: encode_matrix(&p.residue) })
                .collect(),
        }
    }

    /// Parses JSON; errors name the path of the offending field.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut deserializer = serde_json::Deserializer::from_str(text);
        let document: Self = serde_path_to_error::deserialize(&mut deserializer).map_err(|e| {
            let path = e.path().to_string();
            CliError::Usage(match path.as_str() {
                "?" | "." => format!("invalid document: {}", e.inner()),
                _ => format!("invalid document at `{path}`: {}", e.inner()),
            })
        })?;
        deserializer.end().map_err(|e| CliError::Usage(format!("invalid document: {e}")))?;
        if document.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!("schema_version: unsupported version {:?}", document.schema_version)));
        }
        if document.n == 0 {
            return Err(CliError::Usage("n: must be positive".to_owned()));
        }
        Ok(document)
    }

    pub fn to_form(&self, tol: &Tolerances) -> Result<PoleResidueForm, CliError> {
        let linear = decode_matrix(&self.linear, self.n, "A")?;
        let constant = decode_matrix(&self.constant, self.n, "B")?;
        let mut poles = Vec::with_capacity(self.poles.len());
        for (j, p) in self.poles.iter().enumerate() {
            let residue = decode_matrix(&p.residue, self.n, &format!("poles[{j}].C"))?;
            poles.push(Pole::new(p.lambda, residue));
        }
        PoleResidueForm::with_tolerances(linear, constant, poles, tol)
            .map_err(|e| CliError::Usage(format!("invalid function: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

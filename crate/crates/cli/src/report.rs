//! Machine-readable run reports. Field order and map ordering are fixed so
//! identical inputs give byte-identical output.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Settings;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
}

#[derive(Debug, Serialize)]
pub struct ToleranceSettings {
    pub psd: f64,
    pub rank: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: ToleranceSettings,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

impl Report {
    pub fn new(command: &str, input: &[u8], settings: &Settings) -> Self {
        Self {
            command: command.to_owned(),
            input_digest: digest(input),
            seed: settings.seed,
            samples: settings.samples,
            tolerances: ToleranceSettings { psd: settings.tol.psd, rank: settings.tol.rank },
            pass: true,
            checks: Vec::new(),
            residuals: BTreeMap::new(),
            result: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, value: f64) {
        self.pass &= pass;
        self.checks.push(Check { name: name.into(), pass, value });
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.to_owned(), value);
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }
}

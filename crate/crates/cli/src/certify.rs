use std::path::Path;

use stieltjes_cf::{certify_class_g, off_axis_points, sample_kernel_certificates};

use crate::document::FunctionDocument;
use crate::error::{domain, CliError};
use crate::report::Report;
use crate::{read_input, Settings};

pub fn run(input: &Path, settings: &Settings) -> Result<Report, CliError> {
    let (bytes, text) = read_input(input)?;
    let f = FunctionDocument::parse(&text)?.to_form(&settings.tol)?;
    let mut report = Report::new("certify", &bytes, settings);

    for check in certify_class_g(&f, settings.tol.psd).checks {
        report.check(check.condition.to_string(), check.pass, check.min_eigenvalue);
    }
    let points = off_axis_points(settings.samples, settings.seed);
    let kernels = sample_kernel_certificates(&f, &points, settings.tol.psd).map_err(domain)?;
    let slack = kernels.min_slack();
    report.check("kernels", kernels.pass, slack);
    report.residual("kernel_min_slack", slack);
    Ok(report)
}

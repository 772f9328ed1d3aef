use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use nld_core::dirac::SpectrumReport;
use serde_json::json;

use crate::criteria::{Criterion, Suite};

/// Eigenvalues of one spectrum with their classes, followed by marker rows
/// for `±λ_ω`, `±2ωi`, the gap edges `±i(m - ω)` where the essential rays
/// start, and the thresholds `±i(m + ω)`.
pub fn render_figure_csv(s: &SpectrumReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "re_lambda", "im_lambda", "label", "localization"])?;
    for e in &s.eigenvalues {
        w.write_record([
            "eigenvalue".to_string(),
            format!("{:.16e}", e.lambda.re),
            format!("{:.16e}", e.lambda.im),
            e.class.as_str().to_string(),
            format!("{:.16e}", e.localization),
        ])?;
    }
    let (m, omega) = (s.m, s.omega);
    let mut markers = Vec::new();
    if let Some(l) = s.lambda_unstable {
        markers.push((l, 0.0, "lambda-omega"));
        markers.push((-l, 0.0, "lambda-omega"));
    }
    for sign in [1.0, -1.0] {
        markers.push((0.0, sign * 2.0 * omega, "two-omega"));
        markers.push((0.0, sign * (m - omega), "gap-edge"));
        markers.push((0.0, sign * (m + omega), "threshold"));
    }
    for (re, im, label) in markers {
        w.write_record([
            "marker".to_string(),
            format!("{re:.16e}"),
            format!("{im:.16e}"),
            label.to_string(),
            String::new(),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn render_summary(criteria: &[Criterion]) -> Result<String> {
    Ok(serde_json::to_string_pretty(
        &json!({ "criteria": criteria }),
    )?)
}

/// Runs every criterion, writes `summary.json` and `figure1_data.csv` to
/// `dir`, and returns the criteria. The figure uses k = 3, ω = 0.9.
pub fn reproduce(dir: &Path) -> Result<Vec<Criterion>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let suite = Suite::new();
    let mut criteria = Vec::new();
    for c in suite.all() {
        println!("{}", c.line());
        criteria.push(c);
    }
    fs::write(dir.join("summary.json"), render_summary(&criteria)?)?;
    match suite.spectra() {
        Ok(d) => {
            if let Some(run) = d.find(3, 0.9) {
                fs::write(
                    dir.join("figure1_data.csv"),
                    render_figure_csv(&run.report)?,
                )?;
            }
        }
        Err(e) => log::error!("no spectra for the figure: {e}"),
    }
    Ok(criteria)
}

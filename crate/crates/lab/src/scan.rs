use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use nld_core::dirac::{
    assemble_dirac, dirac_spectrum, rescaled_problem, spectrum_grid, unstable_eigenvalue_rescaled,
    wave_w_norm, SpectrumReport,
};
use nld_core::nls::{assemble_nls, limit_eigenvalue};
use nld_core::numerics::{build_grid, Grid, MAX_DENSE_POINTS};
use nld_core::profiles::{auto_profile_grid, charge, make_model, solve_profile, NonlinearityModel};
use nld_core::LabError;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Check, GridSpec, ScanConfig};

/// The rescaled matrices are 4N x 4N and dense.
pub const RESCALED_MAX_POINTS: usize = 1537;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Unstable,
    Stable,
    Unchecked,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Unstable => "unstable",
            Verdict::Stable => "stable",
            Verdict::Unchecked => "unchecked",
        }
    }
}

/// Wall-clock seconds per stage. Kept out of `scan.csv` so that file is
/// reproducible.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Runtimes {
    pub profile: f64,
    pub spectrum: f64,
    pub rescaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub omega: f64,
    pub eps: f64,
    pub points: Option<usize>,
    pub half_width: Option<f64>,
    pub gamma: Option<f64>,
    #[serde(rename = "Q")]
    pub q: Option<f64>,
    pub lambda_unstable: Option<f64>,
    pub lambda_over_eps2: Option<f64>,
    pub mu0: Option<f64>,
    /// `λ/ε²` from the rescaled problem.
    pub rescaled_nu: Option<f64>,
    pub w_norm: Option<f64>,
    pub verdict: Verdict,
    pub status: String,
    pub runtimes: Runtimes,
}

impl ScanRow {
    fn empty(omega: f64, m: f64) -> Self {
        Self {
            omega,
            eps: (m * m - omega * omega).max(0.0).sqrt(),
            points: None,
            half_width: None,
            gamma: None,
            q: None,
            lambda_unstable: None,
            lambda_over_eps2: None,
            mu0: None,
            rescaled_nu: None,
            w_norm: None,
            verdict: Verdict::Unchecked,
            status: "ok".into(),
            runtimes: Runtimes::default(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// One finished scan point and its spectrum, if one was computed.
#[derive(Debug, Clone)]
pub struct ScanPoint {
    pub row: ScanRow,
    pub spectrum: Option<SpectrumReport>,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub lambda_ref: Option<f64>,
    pub points: Vec<ScanPoint>,
}

impl ScanResult {
    pub fn rows(&self) -> Vec<&ScanRow> {
        self.points.iter().map(|p| &p.row).collect()
    }
}

pub fn model_of(cfg: &ScanConfig) -> Result<NonlinearityModel> {
    Ok(make_model(cfg.k, cfg.a, cfg.higher_terms.clone(), cfg.m)?)
}

/// Grid for one scan point. The automatic policy is the spectrum policy
/// when a spectrum is needed and the profile policy otherwise; a fixed `L`
/// alone keeps the policy spacing, a fixed `N` alone keeps the policy width.
pub fn resolve_grid(
    model: &NonlinearityModel,
    omega: f64,
    spec: &GridSpec,
    spectral: bool,
) -> Result<Grid> {
    let base = if spectral {
        spectrum_grid(model, omega)?
    } else {
        auto_profile_grid(model, omega)?
    };
    let grid = match (spec.points, spec.half_width) {
        (None, None) => base,
        (Some(n), Some(l)) => build_grid(l, n)?,
        (Some(n), None) => build_grid(base.half_width(), n)?,
        (None, Some(l)) => {
            let mut n = (2.0 * l / base.spacing()).ceil() as usize + 1;
            if n.is_multiple_of(2) {
                n += 1;
            }
            build_grid(l, n.min(MAX_DENSE_POINTS - 1))?
        }
    };
    Ok(grid)
}

/// `Λ` for exponent `k` on `[-20, 20]`, or `None` when the limit operator
/// has no real pair.
pub fn limit_reference(k: u32) -> Result<Option<f64>> {
    let n = (400 * k as usize).clamp(1024, MAX_DENSE_POINTS);
    let ops = assemble_nls(k, &build_grid(20.0, n)?)?;
    Ok(limit_eigenvalue(&ops)?.lambda)
}

fn scan_point(
    cfg: &ScanConfig,
    model: &NonlinearityModel,
    omega: f64,
    lambda_ref: Option<f64>,
) -> ScanPoint {
    let mut row = ScanRow::empty(omega, cfg.m);
    let mut spectrum = None;
    if let Err(e) = fill_row(cfg, model, omega, lambda_ref, &mut row, &mut spectrum) {
        row.status = format!("error: {e}");
    }
    ScanPoint { row, spectrum }
}

fn fill_row(
    cfg: &ScanConfig,
    model: &NonlinearityModel,
    omega: f64,
    lambda_ref: Option<f64>,
    row: &mut ScanRow,
    spectrum: &mut Option<SpectrumReport>,
) -> Result<()> {
    let t = Instant::now();
    let grid = resolve_grid(model, omega, &cfg.grid, cfg.wants(Check::Spectrum))?;
    row.points = Some(grid.points());
    row.half_width = Some(grid.half_width());
    let wave = solve_profile(model, omega, &grid)?;
    row.gamma = Some(wave.gamma);
    row.q = Some(charge(&wave)?);
    row.runtimes.profile = t.elapsed().as_secs_f64();

    if cfg.wants(Check::Spectrum) {
        let t = Instant::now();
        let mut s = dirac_spectrum(&assemble_dirac(&wave, model, &grid)?)?;
        if let Some(l) = lambda_ref {
            s = s.with_limit(l);
        }
        row.lambda_unstable = s.lambda_unstable;
        row.lambda_over_eps2 = s.lambda_unstable.map(|l| l / (row.eps * row.eps));
        row.mu0 = s.mu0;
        row.verdict = if s.lambda_unstable.is_some() {
            Verdict::Unstable
        } else {
            Verdict::Stable
        };
        *spectrum = Some(s);
        row.runtimes.spectrum = t.elapsed().as_secs_f64();
    }

    if cfg.wants(Check::Rescaled) {
        let t = Instant::now();
        row.w_norm = Some(wave_w_norm(&wave, model)?);
        if let Some(l) = lambda_ref {
            if grid.points() > RESCALED_MAX_POINTS {
                row.status = format!("rescaled-skipped: N > {RESCALED_MAX_POINTS}");
            } else {
                match unstable_eigenvalue_rescaled(&rescaled_problem(&wave, model, l)?) {
                    Ok(e) => row.rescaled_nu = Some(e.nu),
                    Err(LabError::Detection { .. }) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        row.runtimes.rescaled = t.elapsed().as_secs_f64();
    }
    Ok(())
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let jobs = jobs.or_else(|| std::env::var("NLD_LAB_JOBS").ok()?.parse().ok());
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs.filter(|&j| j > 0) {
        b = b.num_threads(j);
    }
    b.build().context("starting worker pool")
}

/// Computes every scan point. Worker count comes from `jobs`, then
/// `NLD_LAB_JOBS`, then the number of cores.
pub fn compute_scan(cfg: &ScanConfig, jobs: Option<usize>) -> Result<ScanResult> {
    cfg.validate()?;
    let model = model_of(cfg)?;
    let needs_ref = (cfg.wants(Check::Spectrum) || cfg.wants(Check::Rescaled)) && cfg.m == 1.0;
    let lambda_ref = if needs_ref && cfg.k >= 3 {
        limit_reference(cfg.k)?
    } else {
        None
    };
    let omegas = cfg.omegas();
    let points = pool(jobs)?.install(|| {
        omegas
            .par_iter()
            .map(|&w| scan_point(cfg, &model, w, lambda_ref))
            .collect::<Vec<_>>()
    });
    Ok(ScanResult { lambda_ref, points })
}

pub(crate) fn fmt_opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| format!("{v:.16e}"))
}

pub fn render_scan_csv(result: &ScanResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "omega",
        "eps",
        "N",
        "L",
        "gamma",
        "Q",
        "lambda_unstable",
        "lambda_over_eps2",
        "mu0",
        "rescaled_nu",
        "w_norm",
        "verdict",
        "status",
    ])?;
    for p in &result.points {
        let r = &p.row;
        w.write_record([
            format!("{:.16e}", r.omega),
            format!("{:.16e}", r.eps),
            r.points.map_or(String::new(), |n| n.to_string()),
            fmt_opt(r.half_width),
            fmt_opt(r.gamma),
            fmt_opt(r.q),
            fmt_opt(r.lambda_unstable),
            fmt_opt(r.lambda_over_eps2),
            fmt_opt(r.mu0),
            fmt_opt(r.rescaled_nu),
            fmt_opt(r.w_norm),
            r.verdict.as_str().to_string(),
            r.status.clone(),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn render_timings_csv(result: &ScanResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["omega", "profile_s", "spectrum_s", "rescaled_s"])?;
    for p in &result.points {
        let t = p.row.runtimes;
        w.write_record([
            format!("{:.16e}", p.row.omega),
            format!("{:.3}", t.profile),
            format!("{:.3}", t.spectrum),
            format!("{:.3}", t.rescaled),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn spectrum_file_name(index: usize, omega: f64) -> String {
    format!("{index:03}_omega_{omega}.csv")
}

pub fn render_spectrum_csv(s: &SpectrumReport) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    s.write_csv(&mut buf)?;
    Ok(buf)
}

/// Writes `scan.csv`, `timings.csv`, the config actually used, and one
/// spectrum CSV per point under `spectra/`.
pub fn write_scan(cfg: &ScanConfig, result: &ScanResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("scan.csv"), render_scan_csv(result)?)?;
    fs::write(dir.join("timings.csv"), render_timings_csv(result)?)?;
    fs::write(dir.join("config.txt"), cfg.to_text())?;
    if result.points.iter().any(|p| p.spectrum.is_some()) {
        let sdir = dir.join("spectra");
        fs::create_dir_all(&sdir)?;
        for (i, p) in result.points.iter().enumerate() {
            if let Some(s) = &p.spectrum {
                fs::write(
                    sdir.join(spectrum_file_name(i, p.row.omega)),
                    render_spectrum_csv(s)?,
                )?;
            }
        }
    }
    Ok(())
}

pub fn run_scan(cfg: &ScanConfig, jobs: Option<usize>) -> Result<ScanResult> {
    let result = compute_scan(cfg, jobs)?;
    write_scan(cfg, &result, &cfg.out)?;
    for p in &result.points {
        if !p.row.is_ok() {
            log::warn!("ω = {}: {}", p.row.omega, p.row.status);
        }
    }
    Ok(result)
}

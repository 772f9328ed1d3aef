use anyhow::{bail, ensure, Result};
use nld_core::dirac::{assemble_dirac, dirac_spectrum, spectrum_grid, EigenClass, SpectrumReport};
use nld_core::numerics::build_grid;
use nld_core::profiles::{solve_profile, SolitaryWave};
use serde::Serialize;

use crate::config::ScanConfig;
use crate::scan::{compute_scan, fmt_opt, model_of};

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Serialize)]
pub struct ChargeSlope {
    pub k: u32,
    pub slope: f64,
    /// `1/k - 1/2`.
    pub expected: f64,
    /// `(ω, Q)` pairs, ascending in ω.
    pub charges: Vec<(f64, f64)>,
    /// `(max Q - min Q) / mean Q`.
    pub relative_spread: f64,
}

/// Fits `ln Q` against `ln 2(m - ω)` over the configured frequencies, which
/// must be at least four and geometric in `m - ω`.
pub fn charge_slope(cfg: &ScanConfig, jobs: Option<usize>) -> Result<ChargeSlope> {
    let omegas = cfg.omegas();
    ensure!(
        omegas.len() >= 4,
        "a charge fit needs at least 4 frequencies, got {}",
        omegas.len()
    );
    let gaps: Vec<f64> = omegas.iter().map(|w| cfg.m - w).collect();
    let ratios: Vec<f64> = gaps.windows(2).map(|p| p[1] / p[0]).collect();
    if ratios
        .iter()
        .any(|r| (r - ratios[0]).abs() > 1e-6 * ratios[0])
    {
        bail!("charge fit frequencies must be geometric in m - ω");
    }
    let mut profile_only = cfg.clone();
    profile_only.checks.clear();
    let scan = compute_scan(&profile_only, jobs)?;
    let mut charges = Vec::new();
    for p in &scan.points {
        match p.row.q {
            Some(q) if p.row.is_ok() => charges.push((p.row.omega, q)),
            _ => bail!("charge at ω = {} failed: {}", p.row.omega, p.row.status),
        }
    }
    let x: Vec<f64> = charges.iter().map(|(w, _)| 2.0 * (cfg.m - w)).collect();
    let q: Vec<f64> = charges.iter().map(|(_, q)| *q).collect();
    let mean = q.iter().sum::<f64>() / q.len() as f64;
    let (lo, hi) = q
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    Ok(ChargeSlope {
        k: cfg.k,
        slope: loglog_slope(&x, &q),
        expected: 1.0 / cfg.k as f64 - 0.5,
        charges,
        relative_spread: (hi - lo) / mean,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub points: usize,
    pub half_width: f64,
    pub spacing: f64,
    pub lambda_unstable: Option<f64>,
    /// Relative change of the tracked value from the row it is compared
    /// with: `λ_ω` when both rows have one, the gap edge otherwise.
    pub change: Option<f64>,
    pub cluster_radius: f64,
    /// Smallest `|Im λ|` among essential-band eigenvalues.
    pub gap_edge: Option<f64>,
    pub two_omega_resid: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub k: u32,
    pub omega: f64,
    pub free: bool,
    pub refinement: Vec<ConvergenceRow>,
    /// Middle refinement run repeated with `L` doubled at the same spacing.
    pub doubled: Option<ConvergenceRow>,
    pub converged: bool,
}

pub const CONVERGENCE_POINTS: [usize; 3] = [513, 1025, 2049];

fn rel_change(new: Option<f64>, old: Option<f64>) -> Option<f64> {
    match (new, old) {
        (Some(a), Some(b)) if b != 0.0 => Some((a - b).abs() / b.abs()),
        _ => None,
    }
}

fn tracked_change(new: &ConvergenceRow, old: &ConvergenceRow) -> Option<f64> {
    rel_change(new.lambda_unstable, old.lambda_unstable).or_else(|| {
        if new.lambda_unstable.is_none() && old.lambda_unstable.is_none() {
            rel_change(new.gap_edge, old.gap_edge)
        } else {
            None
        }
    })
}

fn row_of(s: &SpectrumReport, spacing: f64) -> ConvergenceRow {
    let gap_edge = s
        .eigenvalues
        .iter()
        .filter(|e| e.class == EigenClass::EssentialProxy)
        .map(|e| e.lambda.im.abs())
        .reduce(f64::min);
    ConvergenceRow {
        points: s.points,
        half_width: s.half_width,
        spacing,
        lambda_unstable: s.lambda_unstable,
        change: None,
        cluster_radius: s.cluster_radius,
        gap_edge,
        two_omega_resid: s.two_omega_resid,
    }
}

/// Repeats the spectrum at each of `sizes` (odd node counts) on the policy
/// width, then at twice the width with the spacing of the middle size. With
/// `free` the zero-amplitude wave is used. Converged means the last two
/// refinement values of `λ_ω` (of the gap edge when there is no `λ_ω`)
/// differ by less than 1e-3 relative.
pub fn convergence_study_with(
    cfg: &ScanConfig,
    free: bool,
    sizes: &[usize],
) -> Result<ConvergenceStudy> {
    let omegas = cfg.omegas();
    ensure!(
        omegas.len() == 1,
        "a convergence study fixes one ω, got {}",
        omegas.len()
    );
    ensure!(!sizes.is_empty(), "no grid sizes given");
    let omega = omegas[0];
    let model = model_of(cfg)?;
    let half_width = match cfg.grid.half_width {
        Some(l) => l,
        None => spectrum_grid(&model, omega)?.half_width(),
    };
    let run = |l: f64, n: usize| -> Result<ConvergenceRow> {
        let grid = build_grid(l, n)?;
        let wave = if free {
            SolitaryWave::zero_amplitude(&model, omega, &grid)?
        } else {
            solve_profile(&model, omega, &grid)?
        };
        let s = dirac_spectrum(&assemble_dirac(&wave, &model, &grid)?)?;
        Ok(row_of(&s, grid.spacing()))
    };
    let mut refinement: Vec<ConvergenceRow> = Vec::new();
    for &n in sizes {
        let mut row = run(half_width, n)?;
        row.change = refinement.last().and_then(|p| tracked_change(&row, p));
        log::info!("N = {n}: λ = {:?}", row.lambda_unstable);
        refinement.push(row);
    }
    let mid = &refinement[refinement.len() / 2];
    let doubled = {
        let n = 2 * (mid.points - 1) + 1;
        let mut row = run(2.0 * half_width, n)?;
        row.change = tracked_change(&row, mid);
        Some(row)
    };
    let converged =
        refinement.len() >= 2 && refinement.last().unwrap().change.is_some_and(|c| c < 1e-3);
    Ok(ConvergenceStudy {
        k: cfg.k,
        omega,
        free,
        refinement,
        doubled,
        converged,
    })
}

pub fn convergence_study(cfg: &ScanConfig, free: bool) -> Result<ConvergenceStudy> {
    convergence_study_with(cfg, free, &CONVERGENCE_POINTS)
}

pub fn render_convergence_csv(study: &ConvergenceStudy) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "kind",
        "N",
        "L",
        "h",
        "lambda_unstable",
        "rel_change",
        "cluster_radius",
        "gap_edge",
        "two_omega_resid",
    ])?;
    let rows = study
        .refinement
        .iter()
        .map(|r| ("refine", r))
        .chain(study.doubled.iter().map(|r| ("double-L", r)));
    for (kind, r) in rows {
        w.write_record([
            kind.to_string(),
            r.points.to_string(),
            format!("{:.16e}", r.half_width),
            format!("{:.16e}", r.spacing),
            fmt_opt(r.lambda_unstable),
            fmt_opt(r.change),
            format!("{:.16e}", r.cluster_radius),
            fmt_opt(r.gap_edge),
            format!("{:.16e}", r.two_omega_resid),
        ])?;
    }
    Ok(w.into_inner()?)
}

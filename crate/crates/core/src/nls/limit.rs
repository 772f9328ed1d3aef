use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operators::{assemble_nls, NlsOperators, NLS_ACCURACY};
use crate::error::{config, Result};
use crate::numerics::{
    block_matrix, diff_matrix_with_accuracy, eigs_of_matrix, inf_norm, inverse_iteration, Grid,
    Parity, ParityFold,
};

/// Fraction of eigenvector mass within `|y| <= L/2` required for a genuine
/// bound state.
pub const LIMIT_LOCALIZATION: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitCandidate {
    pub sigma: f64,
    pub parity_even: bool,
    pub localization: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEigenvalue {
    /// `Λ = √(-σ)` for the most negative accepted `σ`.
    pub lambda: Option<f64>,
    /// Every real `σ < -tol_neg`, accepted or not.
    pub candidates: Vec<LimitCandidate>,
    /// `1e-8 ‖L̂₋L̂₊‖∞`.
    pub tol_neg: f64,
    /// Largest `|Im σ|` seen.
    pub max_imag: f64,
}

impl LimitEigenvalue {
    pub fn accepted(&self) -> impl Iterator<Item = &LimitCandidate> {
        self.candidates
            .iter()
            .filter(|c| c.localization >= LIMIT_LOCALIZATION)
    }
}

pub(crate) fn localization_real(grid: &Grid, full: &[f64]) -> f64 {
    let n = grid.points();
    let blocks = full.len() / n;
    grid.interior_mass(|j| (0..blocks).map(|b| full[b * n + j].powi(2)).sum())
}

/// Negative eigenvalues `σ = -Λ²` of `L̂₋L̂₊`, computed separately on even and
/// odd functions.
pub fn limit_eigenvalue(ops: &NlsOperators) -> Result<LimitEigenvalue> {
    let lm = ops.lminus.matrix();
    let lp = ops.lplus.matrix();
    let tol_neg = 1e-8 * inf_norm(&lm.dot(lp));
    let mut candidates = Vec::new();
    let mut max_imag = 0.0f64;
    for parity in [Parity::Even, Parity::Odd] {
        let fold = ParityFold::new(&ops.grid, &[parity]);
        let prod = fold.fold(lm).dot(&fold.fold(lp));
        let (found, imag) = negative_real_eigenvalues(&prod, &fold, &ops.grid, tol_neg)?;
        max_imag = max_imag.max(imag);
        candidates.extend(
            found
                .into_iter()
                .map(|(sigma, localization)| LimitCandidate {
                    sigma,
                    parity_even: parity == Parity::Even,
                    localization,
                }),
        );
    }
    candidates.sort_by(|a, b| a.sigma.total_cmp(&b.sigma));
    let lambda = candidates
        .iter()
        .find(|c| c.localization >= LIMIT_LOCALIZATION)
        .map(|c| (-c.sigma).sqrt());
    Ok(LimitEigenvalue {
        lambda,
        candidates,
        tol_neg,
        max_imag,
    })
}

/// Real eigenvalues below `-tol` of a folded matrix, each with the
/// localization of its eigenvector (found by inverse iteration), and the
/// largest imaginary part in the spectrum.
fn negative_real_eigenvalues(
    m: &Array2<f64>,
    fold: &ParityFold,
    grid: &Grid,
    tol: f64,
) -> Result<(Vec<(f64, f64)>, f64)> {
    let eig = eigs_of_matrix(m, false)?;
    let max_imag = eig.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let mut out = Vec::new();
    for z in &eig.values {
        if z.re < -tol && z.im.abs() <= 1e-6 * z.re.abs() {
            let (v, _) = inverse_iteration(m, z.re, 3)?;
            out.push((z.re, localization_real(grid, &fold.unfold(&v))));
        }
    }
    Ok((out, max_imag))
}

/// Eigenvalues of `[[0, L̂₋], [-L̂₊, 0]]` on the full `2N` system.
pub fn block_spectrum(ops: &NlsOperators) -> Result<Vec<Complex64>> {
    let lm = ops.lminus.matrix().clone();
    let lp = ops.lplus.matrix().mapv(|v| -v);
    let m = block_matrix(
        ops.grid.points(),
        &[vec![None, Some(lm)], vec![Some(lp), None]],
    );
    Ok(eigs_of_matrix(&m, false)?.values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingCheck {
    /// `ε² = 2(m - ω)`.
    pub eps2: f64,
    /// Real eigenvalue of the unscaled linearization on the x-grid.
    pub lambda: Option<f64>,
    /// Limit eigenvalue on the same nodes expressed in `y = εx`.
    pub lambda_ref: Option<f64>,
    /// `|λ / (ε² Λ) - 1|`.
    pub rel_error: Option<f64>,
}

impl ScalingCheck {
    pub fn lambda_over_eps2(&self) -> Option<f64> {
        self.lambda.map(|l| l / self.eps2)
    }
}

/// Compares the real eigenvalue of the unscaled NLS linearization at `ω`
/// (mass 1, `f(s) = s^k`) on `grid` with `ε² Λ`.
pub fn scaling_check(k: u32, omega: f64, grid: &Grid) -> Result<ScalingCheck> {
    if !(omega > 0.0 && omega < 1.0) {
        return config(format!("scaling check needs 0 < ω < 1, got {omega}"));
    }
    let eps2 = 2.0 * (1.0 - omega);
    let eps = eps2.sqrt();
    let kf = k as f64;
    let d2 = diff_matrix_with_accuracy(grid, 2, NLS_ACCURACY)?.into_matrix();
    let x = grid.nodes();
    let mut lm = d2.mapv(|v| -0.5 * v);
    let mut lp = lm.clone();
    for (j, &xj) in x.iter().enumerate() {
        let s = 1.0 / (eps * kf * xj).cosh().powi(2);
        lm[[j, j]] += 1.0 - omega - eps2 * (kf + 1.0) / 2.0 * s;
        lp[[j, j]] += 1.0 - omega - eps2 * (2.0 * kf + 1.0) * (kf + 1.0) / 2.0 * s;
    }
    let fold = ParityFold::new(grid, &[Parity::Even]);
    let prod = fold.fold(&lm).dot(&fold.fold(&lp));
    let tol = 1e-8 * inf_norm(&prod);
    let (found, _) = negative_real_eigenvalues(&prod, &fold, grid, tol)?;
    let best = found
        .into_iter()
        .filter(|&(_, loc)| loc >= LIMIT_LOCALIZATION)
        .map(|(s, _)| s)
        .fold(None, |acc: Option<f64>, s| {
            Some(acc.map_or(s, |a| a.min(s)))
        });
    let lambda = best.map(|s| (-s).sqrt());
    let lambda_ref = limit_eigenvalue(&assemble_nls(k, &grid.scaled(eps)?)?)?.lambda;
    let rel_error = match (lambda, lambda_ref) {
        (Some(l), Some(r)) => Some((l / (eps2 * r) - 1.0).abs()),
        _ => None,
    };
    Ok(ScalingCheck {
        eps2,
        lambda,
        lambda_ref,
        rel_error,
    })
}

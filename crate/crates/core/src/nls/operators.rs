use crate::error::{config, Result};
use crate::numerics::{diff_matrix_with_accuracy, Boundary, Grid, LinearOperator};

/// Accuracy order of the Schrödinger-operator discretization.
pub const NLS_ACCURACY: usize = 8;

/// Largest admissible `h k`; `k` sets the width of the potential well.
pub const MAX_SPACING_TIMES_K: f64 = 0.2;

/// `L̂₋ = -½∂² + ½ - (k+1)/(2cosh²ky)` and
/// `L̂₊ = -½∂² + ½ - (2k+1)(k+1)/(2cosh²ky)` with their known kernel vectors.
#[derive(Debug, Clone)]
pub struct NlsOperators {
    pub k: u32,
    pub grid: Grid,
    pub lminus: LinearOperator,
    pub lplus: LinearOperator,
    /// `φ = cosh^{-1/k}(ky)`.
    pub phi_hat: Vec<f64>,
    /// `∂φ = -tanh(ky) φ`.
    pub dphi_hat: Vec<f64>,
    /// `θ = -y sinh(ky) / cosh^{1+1/k}(ky)`.
    pub theta_hat: Vec<f64>,
}

fn sech2(k: u32, y: f64) -> f64 {
    let z = (k as f64 * y).abs();
    let e = (-2.0 * z).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

pub(crate) fn minus_potential(k: u32, y: f64) -> f64 {
    0.5 - (k + 1) as f64 / 2.0 * sech2(k, y)
}

pub(crate) fn plus_potential(k: u32, y: f64) -> f64 {
    0.5 - ((2 * k + 1) * (k + 1)) as f64 / 2.0 * sech2(k, y)
}

pub fn assemble_nls(k: u32, grid: &Grid) -> Result<NlsOperators> {
    if k < 1 {
        return config(format!("exponent k must be at least 1, got {k}"));
    }
    let kf = k as f64;
    if grid.spacing() * kf > MAX_SPACING_TIMES_K {
        return config(format!(
            "grid spacing {:.4} does not resolve the k={k} potential (need h k <= {MAX_SPACING_TIMES_K})",
            grid.spacing()
        ));
    }
    if grid.half_width() * kf < 15.0 {
        return config(format!(
            "half-width {} too small for k={k} (need L k >= 15)",
            grid.half_width()
        ));
    }
    let d2 = diff_matrix_with_accuracy(grid, 2, NLS_ACCURACY)?.into_matrix();
    let base = d2.mapv(|v| -0.5 * v);
    let y = grid.nodes();
    let mut lm = base.clone();
    let mut lp = base;
    for (j, &yj) in y.iter().enumerate() {
        lm[[j, j]] += minus_potential(k, yj);
        lp[[j, j]] += plus_potential(k, yj);
    }
    let phi_hat: Vec<f64> = y.iter().map(|&yj| sech2(k, yj).powf(0.5 / kf)).collect();
    let dphi_hat = y
        .iter()
        .zip(&phi_hat)
        .map(|(&yj, p)| -(kf * yj).tanh() * p)
        .collect();
    let theta_hat = y
        .iter()
        .zip(&phi_hat)
        .map(|(&yj, p)| -yj * (kf * yj).tanh() * p)
        .collect();
    let layout = || vec!["u".to_string()];
    Ok(NlsOperators {
        k,
        grid: grid.clone(),
        lminus: LinearOperator::new(lm, grid.clone(), layout(), Boundary::Dirichlet)?,
        lplus: LinearOperator::new(lp, grid.clone(), layout(), Boundary::Dirichlet)?,
        phi_hat,
        dphi_hat,
        theta_hat,
    })
}

/// Relative sup-norm residuals of `L̂₋φ = 0`, `L̂₊∂φ = 0` and
/// `L̂₊(-θ - φ/k) = φ`, over rows whose stencil lies inside the grid.
pub fn kernel_residuals(ops: &NlsOperators) -> (f64, f64, f64) {
    let n = ops.grid.points();
    let p = NLS_ACCURACY / 2;
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let sup_in = |v: &[f64]| v[p..n - p].iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let r1 = sup_in(&ops.lminus.apply(&ops.phi_hat)) / sup(&ops.phi_hat);
    let r2 = sup_in(&ops.lplus.apply(&ops.dphi_hat)) / sup(&ops.dphi_hat);
    let kf = ops.k as f64;
    let w: Vec<f64> = ops
        .theta_hat
        .iter()
        .zip(&ops.phi_hat)
        .map(|(t, f)| -t - f / kf)
        .collect();
    let lw = ops.lplus.apply(&w);
    let diff: Vec<f64> = lw.iter().zip(&ops.phi_hat).map(|(a, b)| a - b).collect();
    let r3 = sup_in(&diff) / sup(&ops.phi_hat);
    (r1, r2, r3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::build_grid;

    #[test]
    fn potential_depths() {
        assert_eq!(minus_potential(1, 0.0), -0.5);
        assert_eq!(plus_potential(1, 0.0), -2.5);
        assert_eq!(0.5 - minus_potential(3, 0.0), 2.0);
        assert!((minus_potential(2, 30.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kernel_vectors_sampled() {
        let g = build_grid(20.0, 1025).unwrap();
        let ops = assemble_nls(2, &g).unwrap();
        assert_eq!(ops.phi_hat[512], 1.0);
        let y = g.node(700);
        assert!((ops.phi_hat[700] - (2.0 * y).cosh().powf(-0.5)).abs() < 1e-15);
        let th = -y * (2.0 * y).sinh() / (2.0 * y).cosh().powf(1.5);
        assert!((ops.theta_hat[700] - th).abs() < 1e-14);
    }

    #[test]
    fn resolution_preconditions() {
        assert!(assemble_nls(3, &build_grid(20.0, 129).unwrap()).is_err());
        assert!(assemble_nls(1, &build_grid(10.0, 2001).unwrap()).is_err());
        assert!(assemble_nls(0, &build_grid(20.0, 2001).unwrap()).is_err());
    }
}

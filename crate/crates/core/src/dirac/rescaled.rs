use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectrum::DIRAC_LOCALIZATION;
use crate::error::{config, LabError, Result};
use crate::numerics::{
    block_matrix, eigs_of_matrix, inverse_iteration, spectral_diff_matrix, Grid, Parity, ParityFold,
};
use crate::profiles::{nls_limit_value, NonlinearityModel, SolitaryWave};

/// Candidates farther than this factor from `Λ` are not attributed to it.
const DETECTION_WINDOW: f64 = 10.0;

/// Eigenproblem `C η = ν D η`, `ν = λ/ε²`, for `η = (R₁, R̂₂, S₁, Ŝ₂)` in
/// `y = εx`, together with its limit matrix `A_Λ` and the residual `W`.
#[derive(Debug, Clone)]
pub struct RescaledProblem {
    pub k: u32,
    pub omega: f64,
    pub eps: f64,
    pub lambda: f64,
    pub grid_y: Grid,
    pub c_matrix: Array2<f64>,
    /// Diagonal of `D = K₁ + ε² K₂`.
    pub d_diag: Vec<f64>,
    pub a_lambda: Array2<f64>,
    /// Zero-order coefficient of `W` at each node, row-major 4x4.
    pub w: Vec<[[f64; 4]; 4]>,
}

fn diag(v: impl Iterator<Item = f64>) -> Array2<f64> {
    Array2::from_diag(&Array1::from_iter(v))
}

/// Coefficients of `W = A_Λ + Λ K₁ - C` at each node; `W` has no
/// derivative part since the `∂_y` entries cancel.
fn w_coefficients(
    model: &NonlinearityModel,
    omega: f64,
    eps: f64,
    x_field: &[f64],
    v: &[f64],
    u: &[f64],
    uk: &[f64],
) -> Vec<[[f64; 4]; 4]> {
    let m = model.m;
    let kf = model.k as f64;
    let e2 = eps * eps;
    (0..x_field.len())
        .map(|j| {
            let f = model.f(x_field[j]);
            let fp = model.f_prime(x_field[j]);
            let mut w = [[0.0; 4]; 4];
            w[0][2] = 0.5 - uk[j] - (m - omega - f) / e2;
            w[1][3] = -2.0 + m + omega - f;
            w[2][0] =
                -0.5 + (2.0 * kf + 1.0) * uk[j] - (-m + omega + f + 2.0 * fp * v[j] * v[j]) / e2;
            w[2][1] = 2.0 * fp * v[j] * u[j] / eps;
            w[3][0] = 2.0 * fp * v[j] * u[j] / eps;
            w[3][1] = 2.0 - (m + omega - f + 2.0 * fp * u[j] * u[j]);
            w
        })
        .collect()
}

pub fn rescaled_problem(
    wave: &SolitaryWave,
    model: &NonlinearityModel,
    lambda: f64,
) -> Result<RescaledProblem> {
    if model.m != 1.0 {
        return config("the rescaled problem is written for m = 1; rescale x and ω first");
    }
    if &wave.model != model {
        return config("solitary wave was solved for a different nonlinearity");
    }
    if wave.is_zero() {
        return config("the rescaled problem needs a nonzero solitary wave");
    }
    let eps = wave.eps_dirac;
    let omega = wave.omega;
    let grid_y = wave.grid.scaled(eps)?;
    let n = grid_y.points();
    let dy = spectral_diff_matrix(&grid_y, 1)?.into_matrix();
    let kf = model.k as f64;
    let m = model.m;
    let e2 = eps * eps;
    let y = grid_y.nodes();
    let uk: Vec<f64> = y
        .iter()
        .map(|&yj| nls_limit_value(model.k, yj).powi(model.k as i32))
        .collect();
    let f: Vec<f64> = wave.x_field.iter().map(|&x| model.f(x)).collect();
    let fp: Vec<f64> = wave.x_field.iter().map(|&x| model.f_prime(x)).collect();
    let (v, u) = (&wave.v, &wave.u);

    let c13 = diag((0..n).map(|j| (m - omega - f[j]) / e2));
    let c24 = diag((0..n).map(|j| -m - omega + f[j]));
    let c31 = diag((0..n).map(|j| (-m + omega + f[j] + 2.0 * fp[j] * v[j] * v[j]) / e2));
    let cvu = diag((0..n).map(|j| 2.0 * fp[j] * v[j] * u[j] / eps));
    let c42 = diag((0..n).map(|j| m + omega - f[j] + 2.0 * fp[j] * u[j] * u[j]));
    let c_matrix = block_matrix(
        n,
        &[
            vec![None, None, Some(c13), Some(dy.clone())],
            vec![None, None, Some(-&dy), Some(c24)],
            vec![Some(c31), Some(-&dy - &cvu), None, None],
            vec![Some(&dy - &cvu), Some(c42), None, None],
        ],
    );
    let ident = Array2::<f64>::eye(n);
    let a_lambda = block_matrix(
        n,
        &[
            vec![
                Some(-lambda * &ident),
                None,
                Some(diag(uk.iter().map(|x| 0.5 - x))),
                Some(dy.clone()),
            ],
            vec![None, None, Some(-&dy), Some(-2.0 * &ident)],
            vec![
                Some(diag(uk.iter().map(|x| -0.5 + (2.0 * kf + 1.0) * x))),
                Some(-&dy),
                Some(-lambda * &ident),
                None,
            ],
            vec![Some(dy.clone()), Some(2.0 * &ident), None, None],
        ],
    );
    let d_diag = [1.0, e2, 1.0, e2]
        .iter()
        .flat_map(|&d| std::iter::repeat_n(d, n))
        .collect();
    let w = w_coefficients(model, omega, eps, &wave.x_field, v, u, &uk);
    Ok(RescaledProblem {
        k: model.k,
        omega,
        eps,
        lambda,
        grid_y,
        c_matrix,
        d_diag,
        a_lambda,
        w,
    })
}

fn row_norm_sup(w: &[[[f64; 4]; 4]]) -> f64 {
    w.iter()
        .map(|c| {
            c.iter()
                .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// `sup_y ‖W(y)‖∞` over the grid.
pub fn w_norm(problem: &RescaledProblem) -> f64 {
    row_norm_sup(&problem.w)
}

/// `w_norm` computed from the wave alone, without assembling the
/// rescaled matrices.
pub fn wave_w_norm(wave: &SolitaryWave, model: &NonlinearityModel) -> Result<f64> {
    if model.m != 1.0 {
        return config("the rescaled problem is written for m = 1; rescale x and ω first");
    }
    if &wave.model != model {
        return config("solitary wave was solved for a different nonlinearity");
    }
    let eps = wave.eps_dirac;
    let uk: Vec<f64> = wave
        .grid
        .nodes()
        .iter()
        .map(|&x| nls_limit_value(model.k, eps * x).powi(model.k as i32))
        .collect();
    let w = w_coefficients(model, wave.omega, eps, &wave.x_field, &wave.v, &wave.u, &uk);
    Ok(row_norm_sup(&w))
}

/// `w_norm` with the wave replaced by its nonrelativistic limit
/// `X = ε^{2/k} U(εx)`, `v = √X`, `u = 0`.
pub fn w_norm_limit_substitution(
    model: &NonlinearityModel,
    omega: f64,
    grid_x: &Grid,
) -> Result<f64> {
    if model.m != 1.0 {
        return config("the rescaled problem is written for m = 1; rescale x and ω first");
    }
    let eps = (1.0 - omega * omega).sqrt();
    let kf = model.k as f64;
    let amp = eps.powf(2.0 / kf) * model.a.powf(-1.0 / kf);
    let y: Vec<f64> = grid_x.nodes().iter().map(|x| eps * x).collect();
    let x_field: Vec<f64> = y
        .iter()
        .map(|&yj| amp * nls_limit_value(model.k, yj))
        .collect();
    let v: Vec<f64> = x_field.iter().map(|x| x.sqrt()).collect();
    let u = vec![0.0; v.len()];
    let uk: Vec<f64> = y
        .iter()
        .map(|&yj| nls_limit_value(model.k, yj).powi(model.k as i32))
        .collect();
    Ok(row_norm_sup(&w_coefficients(
        model, omega, eps, &x_field, &v, &u, &uk,
    )))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RescaledEigen {
    pub nu: f64,
    /// `ν - Λ`.
    pub mu0: f64,
    pub localization: f64,
}

/// Real eigenvalue `ν` of `D⁻¹C` nearest `Λ` with a localized eigenvector.
pub fn unstable_eigenvalue_rescaled(problem: &RescaledProblem) -> Result<RescaledEigen> {
    let fold = ParityFold::new(
        &problem.grid_y,
        &[Parity::Even, Parity::Odd, Parity::Even, Parity::Odd],
    );
    let mut dc = problem.c_matrix.clone();
    for (i, d) in problem.d_diag.iter().enumerate() {
        dc.row_mut(i).mapv_inplace(|x| x / d);
    }
    let m = fold.fold(&dc);
    let eig = eigs_of_matrix(&m, false)?;
    let target = problem.lambda;
    let mut real: Vec<f64> = eig
        .values
        .iter()
        .filter(|z| z.re > 0.0 && z.im.abs() <= 1e-6 * z.norm())
        .map(|z| z.re)
        .filter(|&x| x > target / DETECTION_WINDOW && x < target * DETECTION_WINDOW)
        .collect();
    real.sort_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()));
    let n = problem.grid_y.points();
    for nu in real {
        let (vec, _) = inverse_iteration(&m, nu, 3)?;
        let full = fold.unfold(&vec);
        let localization = problem
            .grid_y
            .interior_mass(|j| (0..4).map(|b| full[b * n + j].powi(2)).sum());
        if localization >= DIRAC_LOCALIZATION {
            return Ok(RescaledEigen {
                nu,
                mu0: nu - target,
                localization,
            });
        }
    }
    let mut nearest: Vec<Complex64> = eig.values.clone();
    nearest.sort_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()));
    nearest.truncate(3);
    Err(LabError::Detection { target, nearest })
}

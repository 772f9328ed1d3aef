use serde::{Deserialize, Serialize};

use super::model::NonlinearityModel;
use super::wave::{sup, SolitaryWave};
use crate::error::{config, Result};
use crate::numerics::{fd_derivative, quadrature, Grid};

/// `U(y) = ((k+1) / (2 cosh² ky))^{1/k}` sampled in the rescaled variable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NlsProfile {
    pub k: u32,
    /// Amplitude factor multiplying `U`; 1 for `f(s) = s^k`, `m = 1`.
    pub scale: f64,
    pub grid: Grid,
    pub u: Vec<f64>,
    /// `∫ U dy`.
    pub c: f64,
    /// Interior sup-norm residual of `-U''/4 - (k+2)/(k+1) U^{k+1} + U = 0`.
    pub fpp_residual: f64,
}

pub fn nls_limit_value(k: u32, y: f64) -> f64 {
    let kf = k as f64;
    // cosh^{-2/k} through exp to stay finite far out in y.
    let ay = (kf * y).abs();
    let log_sech = -ay - (0.5 * (1.0 + (-2.0 * ay).exp())).ln();
    (((kf + 1.0) / 2.0).ln() / kf + 2.0 / kf * log_sech).exp()
}

pub fn nls_profile(k: u32, grid: &Grid) -> Result<NlsProfile> {
    build(k, 1.0, grid)
}

impl NlsProfile {
    /// Limit profile matching `model`: `f = a s^k` and mass `m` rescale the
    /// amplitude by `(a m)^{-1/k}`.
    pub fn for_model(model: &NonlinearityModel, grid: &Grid) -> Result<Self> {
        build(
            model.k,
            (model.a * model.m).powf(-1.0 / model.k as f64),
            grid,
        )
    }
}

fn build(k: u32, scale: f64, grid: &Grid) -> Result<NlsProfile> {
    if k < 1 {
        return config(format!("exponent k must be at least 1, got {k}"));
    }
    let u = grid.sample(|y| nls_limit_value(k, y));
    let c = quadrature(grid, &u)? * scale;
    let d2 = fd_derivative(&u, grid.spacing(), 2, 8);
    let kf = k as f64;
    let n = grid.points();
    let fpp_residual = (4..n - 4)
        .map(|j| (-0.25 * d2[j] - (kf + 2.0) / (kf + 1.0) * u[j].powi(k as i32 + 1) + u[j]).abs())
        .fold(0.0, f64::max);
    if fpp_residual > 1e-8 {
        log::warn!("limit profile residual {fpp_residual:.3e} on an under-resolved grid");
    }
    let u = u.into_iter().map(|x| x * scale).collect();
    Ok(NlsProfile {
        k,
        scale,
        grid: grid.clone(),
        u,
        c,
        fpp_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticDeviation {
    /// `sup |X(x) - ε^{2/k} U(εx)|`.
    pub deviation: f64,
    /// `deviation / ε^{4/k}`.
    pub ratio: f64,
    /// `sup |u| / ε^{1 + 1/k}`.
    pub u_ratio: f64,
}

/// Distance of a Dirac profile from its nonrelativistic limit, with
/// `ε = √(m² - ω²)`. `profile` must live on the wave grid scaled by `ε`.
pub fn asymptotic_deviation(
    wave: &SolitaryWave,
    profile: &NlsProfile,
) -> Result<AsymptoticDeviation> {
    if wave.model.k != profile.k {
        return config(format!(
            "wave has k={} but limit profile has k={}",
            wave.model.k, profile.k
        ));
    }
    let eps = wave.eps_dirac;
    let expected = wave.grid.half_width() * eps;
    if profile.grid.points() != wave.grid.points()
        || (profile.grid.half_width() - expected).abs() > 1e-12 * expected
    {
        return config("limit profile grid is not the wave grid scaled by ε");
    }
    let kf = profile.k as f64;
    let amp = eps.powf(2.0 / kf);
    let deviation = wave
        .x_field
        .iter()
        .zip(&profile.u)
        .map(|(x, u)| (x - amp * u).abs())
        .fold(0.0, f64::max);
    Ok(AsymptoticDeviation {
        deviation,
        ratio: deviation / eps.powf(4.0 / kf),
        u_ratio: sup(&wave.u) / eps.powf(1.0 + 1.0 / kf),
    })
}

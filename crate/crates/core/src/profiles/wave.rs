use serde::{Deserialize, Serialize};

use super::model::NonlinearityModel;
use crate::error::{LabError, Result};
use crate::numerics::{fd_derivative, find_root, quadrature, Dopri5, Grid};

/// Below this fraction of `Γ` the profile is continued in `ln X`.
const LOG_SWITCH: f64 = 0.6;
/// Accuracy of the finite differences used for residual checks.
const CHECK_ACCURACY: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPoint {
    pub gamma: f64,
    /// `ω s < G(s)` held on every sample of `(0, Γ)`.
    pub below_on_interval: bool,
    /// `g(Γ) != ω`, so the zero-energy orbit reaches `Γ` transversally.
    pub transversal: bool,
}

impl TurningPoint {
    pub fn is_regular(&self) -> bool {
        self.below_on_interval && self.transversal
    }
}

/// Smallest positive root of `ω Γ = G(Γ)`.
pub fn turning_point(model: &NonlinearityModel, omega: f64) -> Result<TurningPoint> {
    check_frequency(model, omega)?;
    let h = |s: f64| model.big_g(s) - omega * s;
    let mut lo = 1e-12;
    if h(lo) <= 0.0 {
        return Err(LabError::Existence {
            omega,
            reason: "G(s) - ω s is not positive near s = 0".into(),
        });
    }
    let mut hi = lo;
    loop {
        hi *= 1.02;
        if h(hi) < 0.0 {
            break;
        }
        lo = hi;
        if hi > 1e8 {
            return Err(LabError::Existence {
                omega,
                reason: "no positive root of ω s = G(s) below 1e8".into(),
            });
        }
    }
    let gamma = find_root(h, [lo, hi], 1e-15 * hi)?;
    let below_on_interval = (1..1000).all(|i| {
        let s = gamma * i as f64 / 1000.0;
        omega * s < model.big_g(s)
    });
    let transversal = (model.g(gamma) - omega).abs() > 1e-10 * model.m;
    let tp = TurningPoint {
        gamma,
        below_on_interval,
        transversal,
    };
    if !tp.is_regular() {
        log::warn!("turning point at ω={omega} is irregular: {tp:?}");
    }
    Ok(tp)
}

fn check_frequency(model: &NonlinearityModel, omega: f64) -> Result<()> {
    if !(omega > 0.0 && omega < model.m) {
        return Err(LabError::Existence {
            omega,
            reason: format!("only 0 < ω < m = {} is supported", model.m),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileResidual {
    /// Largest `|ω(v²+u²) - G(v²-u²)|` over `max G`.
    pub constraint: f64,
    /// Largest `|(ω/2)(v²+u²) - G/2|`.
    pub hamiltonian: f64,
    /// Largest `|Y + X'/(4ω)|` over `max |Y|`, interior nodes only.
    pub xy_relation: f64,
    /// Largest residual of `u' = (ω - g)v`, `v' = -(ω + g)u` over `max v`.
    pub first_order: f64,
    /// `max |v(x) - v(-x)|, |u(x) + u(-x)|` over `max v`.
    pub parity: f64,
}

/// Stationary solution `φ(x) e^{-iωt}` with spinor profile `(v, u)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolitaryWave {
    pub model: NonlinearityModel,
    pub omega: f64,
    pub gamma: f64,
    pub grid: Grid,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    /// `X = v² - u²`.
    pub x_field: Vec<f64>,
    /// `Y = v u`.
    pub y_field: Vec<f64>,
    pub q: f64,
    /// `√(m² - ω²)`.
    pub eps_dirac: f64,
    /// `√(2(m - ω))`.
    pub eps_nls: f64,
    pub residual: ProfileResidual,
}

impl SolitaryWave {
    /// The trivial solution `v = u = 0`, used as the free reference.
    pub fn zero_amplitude(model: &NonlinearityModel, omega: f64, grid: &Grid) -> Result<Self> {
        check_frequency(model, omega)?;
        let n = grid.points();
        Ok(Self {
            model: model.clone(),
            omega,
            gamma: 0.0,
            grid: grid.clone(),
            v: vec![0.0; n],
            u: vec![0.0; n],
            x_field: vec![0.0; n],
            y_field: vec![0.0; n],
            q: 0.0,
            eps_dirac: (model.m * model.m - omega * omega).sqrt(),
            eps_nls: (2.0 * (model.m - omega)).sqrt(),
            residual: ProfileResidual::default(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.gamma == 0.0
    }
}

pub fn charge(wave: &SolitaryWave) -> Result<f64> {
    let density: Vec<f64> = wave
        .v
        .iter()
        .zip(&wave.u)
        .map(|(v, u)| v * v + u * u)
        .collect();
    quadrature(&wave.grid, &density)
}

/// Solitary wave on `grid`, integrated on `x >= 0` and extended by parity.
///
/// Near the centre `(X, Y)` follows `X' = -4ωY`, `Y' = ωX - G(X)g(X)/ω` from
/// `(Γ, 0)`. Once `X < 0.6 Γ` the zero-energy reduction is continued in
/// `w = ln X`, `w' = -2√((G/X)² - ω²)`, which stays well conditioned in the
/// exponential tail.
pub fn solve_profile(model: &NonlinearityModel, omega: f64, grid: &Grid) -> Result<SolitaryWave> {
    let tp = turning_point(model, omega)?;
    let gamma = tp.gamma;
    let n = grid.points();
    let half: Vec<usize> = (n / 2..n).collect();
    let mut xs = vec![0.0; n];
    let mut ys = vec![0.0; n];

    let near = |_t: f64, z: &[f64], dz: &mut [f64]| -> std::result::Result<(), String> {
        let (x, y) = (z[0], z[1]);
        dz[0] = -4.0 * omega * y;
        dz[1] = omega * x - model.big_g(x) * model.g(x) / omega;
        Ok(())
    };
    let tail = |_t: f64, z: &[f64], dz: &mut [f64]| -> std::result::Result<(), String> {
        let x = z[0].exp();
        let ratio = model.big_g(x) / x;
        let arg = (ratio - omega) * (ratio + omega);
        if arg < -1e-13 {
            return Err(format!("negative radicand {arg:.3e} at X = {x:.3e}"));
        }
        dz[0] = -2.0 * arg.max(0.0).sqrt();
        Ok(())
    };

    let mut ode = Dopri5::new(1e-12, 1e-14 * gamma);
    let mut t = 0.0;
    let mut z = [gamma, 0.0];
    let mut idx = 0;
    while idx < half.len() {
        let j = half[idx];
        ode.advance(&near, &mut t, &mut z, grid.node(j))?;
        xs[j] = z[0];
        ys[j] = z[1];
        idx += 1;
        if z[0] < LOG_SWITCH * gamma {
            break;
        }
    }
    if idx < half.len() {
        let mut ode = Dopri5::new(1e-12, 1e-12);
        let mut w = [z[0].ln()];
        for &j in &half[idx..] {
            ode.advance(&tail, &mut t, &mut w, grid.node(j))?;
            let x = w[0].exp();
            let g = model.big_g(x);
            xs[j] = x;
            ys[j] = ((g - omega * x) * (g + omega * x)).max(0.0).sqrt() / (2.0 * omega);
        }
    }

    let tail_ratio = xs[n - 1] / gamma;
    if tail_ratio.is_nan() || tail_ratio > 1e-12 {
        return Err(LabError::DomainTooSmall {
            tail_ratio,
            half_width: grid.half_width(),
        });
    }

    let mut v = vec![0.0; n];
    let mut u = vec![0.0; n];
    for &j in &half {
        let x = xs[j];
        v[j] = ((model.big_g(x) / omega + x) / 2.0).sqrt();
        u[j] = if v[j] > 0.0 { ys[j] / v[j] } else { 0.0 };
        let mj = grid.mirror(j);
        if mj != j {
            xs[mj] = xs[j];
            ys[mj] = -ys[j];
            v[mj] = v[j];
            u[mj] = -u[j];
        } else {
            ys[j] = 0.0;
            u[j] = 0.0;
        }
    }

    let mut wave = SolitaryWave {
        model: model.clone(),
        omega,
        gamma,
        grid: grid.clone(),
        v,
        u,
        x_field: xs,
        y_field: ys,
        q: 0.0,
        eps_dirac: (model.m * model.m - omega * omega).sqrt(),
        eps_nls: (2.0 * (model.m - omega)).sqrt(),
        residual: ProfileResidual::default(),
    };
    wave.q = charge(&wave)?;
    wave.residual = profile_residual(&wave);
    Ok(wave)
}

pub fn profile_residual(wave: &SolitaryWave) -> ProfileResidual {
    let model = &wave.model;
    let omega = wave.omega;
    let n = wave.grid.points();
    let h = wave.grid.spacing();
    let vmax = sup(&wave.v);
    let gmax = wave
        .x_field
        .iter()
        .map(|&x| model.big_g(x))
        .fold(0.0, f64::max);
    let mut constraint = 0.0f64;
    let mut hamiltonian = 0.0f64;
    for j in 0..n {
        let (v, u) = (wave.v[j], wave.u[j]);
        let d = omega * (v * v + u * u) - model.big_g(v * v - u * u);
        constraint = constraint.max(d.abs());
        hamiltonian = hamiltonian.max(0.5 * d.abs());
    }
    let p = CHECK_ACCURACY / 2;
    let interior = p..n - p;
    let dx = fd_derivative(&wave.x_field, h, 1, CHECK_ACCURACY);
    let du = fd_derivative(&wave.u, h, 1, CHECK_ACCURACY);
    let dv = fd_derivative(&wave.v, h, 1, CHECK_ACCURACY);
    let ymax = sup(&wave.y_field);
    let mut xy = 0.0f64;
    let mut first = 0.0f64;
    for j in interior {
        xy = xy.max((wave.y_field[j] + dx[j] / (4.0 * omega)).abs());
        let g = model.g(wave.x_field[j]);
        first = first
            .max((du[j] - (omega - g) * wave.v[j]).abs())
            .max((dv[j] + (omega + g) * wave.u[j]).abs());
    }
    let mut parity = 0.0f64;
    for j in 0..n {
        let mj = wave.grid.mirror(j);
        parity = parity
            .max((wave.v[j] - wave.v[mj]).abs())
            .max((wave.u[j] + wave.u[mj]).abs());
    }
    let rel = |a: f64, b: f64| if b > 0.0 { a / b } else { a };
    ProfileResidual {
        constraint: rel(constraint, gmax),
        hamiltonian,
        xy_relation: rel(xy, ymax),
        first_order: rel(first, vmax),
        parity: rel(parity, vmax),
    }
}

pub(crate) fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Grid for profile work: `L = 30/ε`, `h <= min(0.02/ε, 0.05)`, at most 4096
/// nodes. Odd `N` keeps `x = 0` on the grid.
pub fn auto_profile_grid(model: &NonlinearityModel, omega: f64) -> Result<Grid> {
    check_frequency(model, omega)?;
    let eps = (model.m * model.m - omega * omega).sqrt();
    let half_width = (30.0 / eps).ceil();
    let h = (0.02 / eps).min(0.05);
    let mut n = (2.0 * half_width / h).ceil() as usize + 1;
    n = n.min(crate::numerics::MAX_DENSE_POINTS);
    if n.is_multiple_of(2) {
        n -= 1;
    }
    crate::numerics::build_grid(half_width, n)
}

use crate::error::{LabError, Result};
use crate::numerics::{build_grid, Grid, MAX_DENSE_POINTS};
use crate::profiles::NonlinearityModel;

/// Grid for the Dirac spectrum at `ω`: `L = 16/ε` and odd `N` with
/// `h <= min(0.25, π/(16 k ε))`, i.e. eight nodes across the width
/// `π/(2kε)` of the potential well and spacing well under the mass scale.
pub fn spectrum_grid(model: &NonlinearityModel, omega: f64) -> Result<Grid> {
    if !(omega > 0.0 && omega < model.m) {
        return Err(LabError::Existence {
            omega,
            reason: format!("only 0 < ω < m = {} is supported", model.m),
        });
    }
    let eps = (model.m * model.m - omega * omega).sqrt();
    let half_width = 16.0 / eps;
    let width = std::f64::consts::PI / (2.0 * model.k as f64 * eps);
    let h = (0.25 / model.m).min(width / 8.0);
    let mut n = (2.0 * half_width / h).ceil() as usize + 1;
    if n.is_multiple_of(2) {
        n += 1;
    }
    build_grid(half_width, n.min(MAX_DENSE_POINTS - 1))
}

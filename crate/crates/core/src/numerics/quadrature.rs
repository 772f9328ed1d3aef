use super::grid::Grid;
use crate::error::{config, Result};

/// Composite Simpson rule over `[-L, L]` for odd `N`, trapezoid for even `N`.
///
/// Logs a warning when the samples have not decayed to `1e-12` of their
/// maximum at either end.
pub fn quadrature(grid: &Grid, samples: &[f64]) -> Result<f64> {
    let value = quadrature_quiet(grid, samples)?;
    let peak = samples.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let ends = samples[0].abs().max(samples[samples.len() - 1].abs());
    if ends > 1e-12 * peak {
        log::warn!(
            "quadrature integrand has not decayed at the ends ({ends:.3e} vs peak {peak:.3e})"
        );
    }
    Ok(value)
}

/// [`quadrature`] without the decay check, for integrands that are not meant
/// to decay (constants, test functions).
pub fn quadrature_quiet(grid: &Grid, samples: &[f64]) -> Result<f64> {
    let n = grid.points();
    if samples.len() != n {
        return config(format!(
            "quadrature expects {n} samples, got {}",
            samples.len()
        ));
    }
    let h = grid.spacing();
    if n % 2 == 1 {
        let interior: f64 = samples[1..n - 1]
            .iter()
            .enumerate()
            .map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v })
            .sum();
        Ok(h / 3.0 * (samples[0] + interior + samples[n - 1]))
    } else {
        let interior: f64 = samples[1..n - 1].iter().sum();
        Ok(h * (0.5 * (samples[0] + samples[n - 1]) + interior))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::build_grid;

    #[test]
    fn constant_is_exact() {
        for n in [16, 17] {
            let g = build_grid(1.0, n).unwrap();
            let q = quadrature_quiet(&g, &vec![1.0; n]).unwrap();
            assert!((q - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sech_squared() {
        let g = build_grid(20.0, 2049).unwrap();
        let s = g.sample(|x| 1.0 / x.cosh().powi(2));
        let q = quadrature(&g, &s).unwrap();
        assert!((q - 2.0 * 20f64.tanh()).abs() < 1e-10);
        assert!((q - 2.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian() {
        let g = build_grid(10.0, 2049).unwrap();
        let q = quadrature(&g, &g.sample(|x| (-x * x).exp())).unwrap();
        assert!((q - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn length_mismatch() {
        let g = build_grid(1.0, 16).unwrap();
        assert!(quadrature(&g, &[1.0; 15]).is_err());
    }
}

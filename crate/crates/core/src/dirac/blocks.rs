use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::numerics::{block_matrix, spectral_diff_matrix, Boundary, Grid, LinearOperator};
use crate::profiles::{NonlinearityModel, SolitaryWave};

/// Potentials of the linearization, sampled on the grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiracPotentials {
    /// `f(X)`.
    pub f: Vec<f64>,
    /// `f'(X)`.
    pub fp: Vec<f64>,
    pub fp_v2: Vec<f64>,
    pub fp_u2: Vec<f64>,
    pub fp_vu: Vec<f64>,
}

/// `L₋ = [[m-ω-f, ∂], [-∂, -m-ω+f]]` and
/// `L₊ = [[m-ω-f-2f'v², ∂+2f'vu], [-∂+2f'vu, -m-ω+f-2f'u²]]`, acting on
/// spinors stored as the two blocks `[upper, lower]`.
#[derive(Debug, Clone)]
pub struct DiracBlocks {
    pub omega: f64,
    pub m: f64,
    pub k: u32,
    pub grid: Grid,
    pub lminus: LinearOperator,
    pub lplus: LinearOperator,
    pub potentials: DiracPotentials,
}

impl DiracBlocks {
    /// `[[0, L₋], [-L₊, 0]]` on `(R, S)`.
    pub fn jl(&self) -> Array2<f64> {
        let n = self.grid.points();
        let lm = self.lminus.matrix();
        let lp = self.lplus.matrix();
        let mut out = Array2::<f64>::zeros((4 * n, 4 * n));
        out.slice_mut(ndarray::s![..2 * n, 2 * n..]).assign(lm);
        out.slice_mut(ndarray::s![2 * n.., ..2 * n])
            .assign(&lp.mapv(|v| -v));
        out
    }
}

/// Builds both blocks with Fourier differentiation, which unlike central
/// differences produces no spurious doubled modes for a first-order operator.
pub fn assemble_dirac(
    wave: &SolitaryWave,
    model: &NonlinearityModel,
    grid: &Grid,
) -> Result<DiracBlocks> {
    if &wave.grid != grid {
        return config("solitary wave was solved on a different grid");
    }
    if &wave.model != model {
        return config("solitary wave was solved for a different nonlinearity");
    }
    let n = grid.points();
    let d = spectral_diff_matrix(grid, 1)?.into_matrix();
    let omega = wave.omega;
    let m = model.m;
    let f: Vec<f64> = wave.x_field.iter().map(|&x| model.f(x)).collect();
    let fp: Vec<f64> = wave.x_field.iter().map(|&x| model.f_prime(x)).collect();
    let fp_v2: Vec<f64> = (0..n).map(|j| fp[j] * wave.v[j] * wave.v[j]).collect();
    let fp_u2: Vec<f64> = (0..n).map(|j| fp[j] * wave.u[j] * wave.u[j]).collect();
    let fp_vu: Vec<f64> = (0..n).map(|j| fp[j] * wave.v[j] * wave.u[j]).collect();
    let diag = |vals: &dyn Fn(usize) -> f64| {
        Array2::from_diag(&ndarray::Array1::from_iter((0..n).map(vals)))
    };

    let a11 = diag(&|j| m - omega - f[j]);
    let a22 = diag(&|j| -m - omega + f[j]);
    let lminus = block_matrix(
        n,
        &[
            vec![Some(a11.clone()), Some(d.clone())],
            vec![Some(-&d), Some(a22.clone())],
        ],
    );
    let c = diag(&|j| 2.0 * fp_vu[j]);
    let lplus = block_matrix(
        n,
        &[
            vec![Some(a11 - diag(&|j| 2.0 * fp_v2[j])), Some(&d + &c)],
            vec![Some(&c - &d), Some(a22 - diag(&|j| 2.0 * fp_u2[j]))],
        ],
    );
    let layout = || vec!["upper".to_string(), "lower".to_string()];
    Ok(DiracBlocks {
        omega,
        m,
        k: model.k,
        grid: grid.clone(),
        lminus: LinearOperator::new(lminus, grid.clone(), layout(), Boundary::Periodic)?,
        lplus: LinearOperator::new(lplus, grid.clone(), layout(), Boundary::Periodic)?,
        potentials: DiracPotentials {
            f,
            fp,
            fp_v2,
            fp_u2,
            fp_vu,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::build_grid;
    use crate::profiles::{make_model, solve_profile};

    #[test]
    fn linear_centre_potential() {
        let model = make_model(1, 1.0, vec![], 1.0).unwrap();
        let grid = build_grid(40.0, 321).unwrap();
        let wave = solve_profile(&model, 0.9, &grid).unwrap();
        let b = assemble_dirac(&wave, &model, &grid).unwrap();
        assert!((b.potentials.f[160] - 0.2).abs() < 1e-14);
        assert_eq!(b.lminus.dim(), 642);
        let other = build_grid(40.0, 301).unwrap();
        assert!(assemble_dirac(&wave, &model, &other).is_err());
    }

    #[test]
    fn blocks_differ_by_rank_one_potential() {
        let model = make_model(3, 1.0, vec![], 1.0).unwrap();
        let grid = build_grid(40.0, 201).unwrap();
        let wave = solve_profile(&model, 0.9, &grid).unwrap();
        let b = assemble_dirac(&wave, &model, &grid).unwrap();
        let diff = b.lplus.matrix() - b.lminus.matrix();
        let n = 201;
        for j in [90, 100, 130] {
            let (v, u, fp) = (wave.v[j], wave.u[j], b.potentials.fp[j]);
            assert!((diff[[j, j]] + 2.0 * fp * v * v).abs() < 1e-14);
            assert!((diff[[j, n + j]] - 2.0 * fp * v * u).abs() < 1e-14);
            assert!((diff[[n + j, j]] - 2.0 * fp * v * u).abs() < 1e-14);
            assert!((diff[[n + j, n + j]] + 2.0 * fp * u * u).abs() < 1e-14);
        }
    }
}

use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{config, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    /// Field taken to vanish outside the grid.
    Dirichlet,
    /// Grid is one period.
    Periodic,
}

/// Dense real matrix acting on `b` fields sampled on a common grid.
///
/// Block `c` occupies rows and columns `c N .. (c + 1) N`.
#[derive(Debug, Clone)]
pub struct LinearOperator {
    matrix: Array2<f64>,
    grid: Grid,
    block_layout: Vec<String>,
    boundary: Boundary,
}

impl LinearOperator {
    pub fn new(
        matrix: Array2<f64>,
        grid: Grid,
        block_layout: Vec<String>,
        boundary: Boundary,
    ) -> Result<Self> {
        let (r, c) = matrix.dim();
        if r != c {
            return config(format!("operator matrix must be square, got {r}x{c}"));
        }
        if block_layout.is_empty() || r != grid.points() * block_layout.len() {
            return config(format!(
                "operator dimension {r} does not match {} blocks of {} points",
                block_layout.len(),
                grid.points()
            ));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return config("operator matrix has non-finite entries");
        }
        Ok(Self {
            matrix,
            grid,
            block_layout,
            boundary,
        })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<f64> {
        self.matrix
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn block_layout(&self) -> &[String] {
        &self.block_layout
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.dot(&ArrayView1::from(x)).to_vec()
    }

    pub fn inf_norm(&self) -> f64 {
        inf_norm(&self.matrix)
    }
}

/// Maximum absolute row sum.
pub fn inf_norm(m: &Array2<f64>) -> f64 {
    m.rows()
        .into_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Assemble a square block matrix from `n x n` blocks; `None` is a zero block.
pub fn block_matrix(n: usize, blocks: &[Vec<Option<Array2<f64>>>]) -> Array2<f64> {
    let b = blocks.len();
    let mut m = Array2::<f64>::zeros((n * b, n * b));
    for (bi, row) in blocks.iter().enumerate() {
        assert_eq!(row.len(), b, "block row {bi} has wrong length");
        for (bj, blk) in row.iter().enumerate() {
            if let Some(blk) = blk {
                assert_eq!(blk.dim(), (n, n), "block ({bi},{bj}) has wrong shape");
                m.slice_mut(ndarray::s![bi * n..(bi + 1) * n, bj * n..(bj + 1) * n])
                    .assign(blk);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::build_grid;

    #[test]
    fn validates_shape_and_layout() {
        let g = build_grid(1.0, 16).unwrap();
        let ok = LinearOperator::new(
            Array2::eye(32),
            g.clone(),
            vec!["R".into(), "S".into()],
            Boundary::Dirichlet,
        );
        assert!(ok.is_ok());
        let bad = LinearOperator::new(
            Array2::eye(32),
            g.clone(),
            vec!["R".into()],
            Boundary::Dirichlet,
        );
        assert!(bad.is_err());
        let mut m = Array2::eye(16);
        m[[3, 3]] = f64::NAN;
        assert!(LinearOperator::new(m, g, vec!["u".into()], Boundary::Dirichlet).is_err());
    }

    #[test]
    fn block_assembly_places_blocks() {
        let a = Array2::from_elem((2, 2), 1.0);
        let m = block_matrix(2, &[vec![None, Some(a.clone())], vec![Some(-a), None]]);
        assert_eq!(m[[0, 2]], 1.0);
        assert_eq!(m[[3, 1]], -1.0);
        assert_eq!(m[[0, 0]], 0.0);
        assert_eq!(inf_norm(&m), 2.0);
    }
}

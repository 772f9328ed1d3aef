use ndarray::Array2;

use super::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Restriction of multi-component fields to a fixed parity pattern.
///
/// A field with `b` components on an `N`-point symmetric grid is stored
/// block-wise, as in [`super::LinearOperator`]. Component `c` with parity `s`
/// is represented by its values on the nodes `x >= 0` (excluding `x = 0` when
/// odd). An operator preserving the pattern folds to the matrix acting on these
/// half-grid values: rows are taken from the half grid and each column is
/// combined with its mirror.
#[derive(Debug, Clone)]
pub struct ParityFold {
    n: usize,
    parities: Vec<Parity>,
    // Per reduced index: (full index, mirror full index or None at x = 0).
    map: Vec<(usize, Option<usize>, f64)>,
}

impl ParityFold {
    pub fn new(grid: &Grid, parities: &[Parity]) -> Self {
        let n = grid.points();
        let mut map = Vec::new();
        for (c, &p) in parities.iter().enumerate() {
            for j in n / 2..n {
                let mirror = grid.mirror(j);
                if mirror == j {
                    if p == Parity::Even {
                        map.push((c * n + j, None, 1.0));
                    }
                } else {
                    map.push((c * n + j, Some(c * n + mirror), p.sign()));
                }
            }
        }
        Self {
            n,
            parities: parities.to_vec(),
            map,
        }
    }

    pub fn reduced_dim(&self) -> usize {
        self.map.len()
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn fold(&self, m: &Array2<f64>) -> Array2<f64> {
        assert_eq!(m.nrows(), self.n * self.parities.len());
        let r = self.map.len();
        let mut out = Array2::<f64>::zeros((r, r));
        for (i, &(row, _, _)) in self.map.iter().enumerate() {
            for (j, &(col, mirror, s)) in self.map.iter().enumerate() {
                let mut v = m[[row, col]];
                if let Some(mc) = mirror {
                    v += s * m[[row, mc]];
                }
                out[[i, j]] = v;
            }
        }
        out
    }

    /// Restrict a full field to its half-grid representation.
    pub fn restrict<T: Copy>(&self, full: &[T]) -> Vec<T> {
        self.map.iter().map(|&(i, _, _)| full[i]).collect()
    }

    /// Extend a half-grid representation to the full field.
    pub fn unfold<T>(&self, reduced: &[T]) -> Vec<T>
    where
        T: Copy + Default + std::ops::Mul<f64, Output = T>,
    {
        let mut full = vec![T::default(); self.n * self.parities.len()];
        for (&v, &(i, mirror, s)) in reduced.iter().zip(&self.map) {
            full[i] = v;
            if let Some(mi) = mirror {
                full[mi] = v * s;
            }
        }
        full
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

/// Smallest number of nodes accepted by [`build_grid`].
pub const MIN_POINTS: usize = 16;

/// Node budget of the automatic grid policies.
pub const MAX_DENSE_POINTS: usize = 4096;

/// Uniform grid on `[-L, L]` with `N` nodes, endpoints included.
///
/// Nodes are generated as `(j - (N-1)/2) h`, so the grid is exactly symmetric
/// under `x -> -x`; parity folding relies on this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    half_width: f64,
    points: usize,
    spacing: f64,
}

impl Grid {
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - 0.5 * (self.points as f64 - 1.0)) * self.spacing
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.node(j)).collect()
    }

    /// Index of the mirror node `-x_j`.
    pub fn mirror(&self, j: usize) -> usize {
        self.points - 1 - j
    }

    /// Same number of nodes on `[-sL, sL]`; used for the substitution `y = s x`.
    pub fn scaled(&self, factor: f64) -> Result<Grid> {
        build_grid(self.half_width * factor, self.points)
    }

    /// Sample a function at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.points).map(|j| f(self.node(j))).collect()
    }

    /// Fraction of `sum |w_j|^2` carried by nodes with `|x_j| <= L/2`.
    pub fn interior_mass(&self, weights: impl Fn(usize) -> f64) -> f64 {
        let mut inner = 0.0;
        let mut total = 0.0;
        for j in 0..self.points {
            let w = weights(j);
            total += w;
            if self.node(j).abs() <= 0.5 * self.half_width {
                inner += w;
            }
        }
        if total > 0.0 {
            inner / total
        } else {
            0.0
        }
    }
}

pub fn build_grid(half_width: f64, points: usize) -> Result<Grid> {
    if !(half_width.is_finite() && half_width > 0.0) {
        return config(format!(
            "grid half-width must be positive, got {half_width}"
        ));
    }
    if points < MIN_POINTS {
        return config(format!(
            "grid needs at least {MIN_POINTS} points, got {points}"
        ));
    }
    Ok(Grid {
        half_width,
        points,
        spacing: 2.0 * half_width / (points as f64 - 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_spacing_grid() {
        let g = build_grid(8.0, 17).unwrap();
        assert_eq!(g.spacing(), 1.0);
        let nodes = g.nodes();
        assert_eq!(nodes[0], -8.0);
        assert_eq!(nodes[8], 0.0);
        assert_eq!(nodes[16], 8.0);
        assert_eq!(nodes[1] - nodes[0], g.spacing());
    }

    #[test]
    fn spacing_matches_half_width() {
        let g = build_grid(20.0, 2048).unwrap();
        assert_eq!(g.spacing(), 40.0 / 2047.0);
        let nodes = g.nodes();
        assert_relative_eq!(nodes[1] - nodes[0], g.spacing(), max_relative = 1e-13);
        assert_relative_eq!(nodes[0], -20.0, max_relative = 1e-15);
        assert_relative_eq!(nodes[2047], 20.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_configuration() {
        assert!(build_grid(0.0, 100).is_err());
        assert!(build_grid(-1.0, 100).is_err());
        assert!(build_grid(1.0, 15).is_err());
        assert!(build_grid(f64::NAN, 100).is_err());
    }

    #[test]
    fn nodes_are_mirror_symmetric() {
        for n in [16, 17, 301, 1024] {
            let g = build_grid(3.7, n).unwrap();
            let x = g.nodes();
            assert!(x.windows(2).all(|w| w[1] > w[0]));
            for j in 0..n {
                assert_eq!(x[j], -x[g.mirror(j)]);
            }
        }
    }
}

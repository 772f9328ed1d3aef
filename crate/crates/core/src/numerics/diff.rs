use ndarray::Array2;

use super::grid::Grid;
use super::operator::{Boundary, LinearOperator};
use crate::error::{config, Result};

/// Accuracy order used by [`diff_matrix`].
pub const DEFAULT_ACCURACY: usize = 4;

/// Finite-difference weights for the `deriv`-th derivative at 0 on the given
/// integer offsets (unit spacing), by Fornberg's recursion.
pub fn fd_weights(offsets: &[i64], deriv: usize) -> Vec<f64> {
    let n = offsets.len();
    let x: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
    // c[j][d]: weight of node j for derivative d.
    let mut c = vec![vec![0.0; deriv + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0];
    for i in 1..n {
        let mn = i.min(deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i];
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for d in (1..=mn).rev() {
                    c[i][d] = c1 * (d as f64 * c[i - 1][d - 1] - c5 * c[i - 1][d]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for d in (1..=mn).rev() {
                c[j][d] = (c4 * c[j][d] - d as f64 * c[j][d - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[deriv]).collect()
}

/// Central weights on `-p..=p` with the (anti)symmetry imposed exactly.
fn central_weights(p: i64, order: usize) -> Vec<f64> {
    let offsets: Vec<i64> = (-p..=p).collect();
    let w = fd_weights(&offsets, order);
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    let n = w.len();
    (0..n).map(|i| 0.5 * (w[i] + sign * w[n - 1 - i])).collect()
}

/// Central finite-difference matrix of [`DEFAULT_ACCURACY`] for `d/dx` or `d²/dx²`.
pub fn diff_matrix(grid: &Grid, order: usize) -> Result<LinearOperator> {
    diff_matrix_with_accuracy(grid, order, DEFAULT_ACCURACY)
}

/// Central finite-difference matrix with an even accuracy order.
///
/// The field is taken to vanish outside `[-L, L]`, so rows near the ends keep
/// only the in-range part of the central stencil. This leaves the first
/// derivative exactly antisymmetric and the second exactly symmetric.
pub fn diff_matrix_with_accuracy(
    grid: &Grid,
    order: usize,
    accuracy: usize,
) -> Result<LinearOperator> {
    if order != 1 && order != 2 {
        return config(format!("derivative order must be 1 or 2, got {order}"));
    }
    if accuracy < 2 || !accuracy.is_multiple_of(2) || accuracy > 12 {
        return config(format!(
            "accuracy order must be even in 2..=12, got {accuracy}"
        ));
    }
    let p = (accuracy / 2) as i64;
    let offsets: Vec<i64> = (-p..=p).collect();
    let scale = grid.spacing().powi(order as i32);
    let weights: Vec<f64> = central_weights(p, order)
        .into_iter()
        .map(|w| w / scale)
        .collect();
    let n = grid.points() as i64;
    let mut m = Array2::<f64>::zeros((grid.points(), grid.points()));
    for i in 0..n {
        for (o, w) in offsets.iter().zip(&weights) {
            let j = i + o;
            if (0..n).contains(&j) {
                m[[i as usize, j as usize]] = *w;
            }
        }
    }
    LinearOperator::new(m, grid.clone(), vec!["u".into()], Boundary::Dirichlet)
}

/// Apply the matrix of [`diff_matrix_with_accuracy`] to samples without
/// forming it.
pub fn fd_derivative(samples: &[f64], h: f64, order: usize, accuracy: usize) -> Vec<f64> {
    let p = (accuracy / 2) as i64;
    let offsets: Vec<i64> = (-p..=p).collect();
    let scale = h.powi(order as i32);
    let weights = central_weights(p, order);
    let n = samples.len() as i64;
    (0..n)
        .map(|i| {
            offsets
                .iter()
                .zip(&weights)
                .filter(|(o, _)| (0..n).contains(&(i + **o)))
                .map(|(o, w)| w * samples[(i + o) as usize])
                .sum::<f64>()
                / scale
        })
        .collect()
}

/// Fourier pseudo-spectral differentiation on the grid treated as one period of
/// length `N h`.
///
/// Requires odd `N` so that no Nyquist mode is present; the second derivative
/// is then exactly the square of the first.
pub fn spectral_diff_matrix(grid: &Grid, order: usize) -> Result<LinearOperator> {
    if order != 1 && order != 2 {
        return config(format!("derivative order must be 1 or 2, got {order}"));
    }
    let n = grid.points();
    if n.is_multiple_of(2) {
        return config(format!("spectral differentiation needs odd N, got {n}"));
    }
    let period = n as f64 * grid.spacing();
    let angle = 2.0 * std::f64::consts::PI / n as f64;
    let scale = 2.0 * std::f64::consts::PI / period;
    let mut d1 = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let k = i as i64 - j as i64;
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            d1[[i, j]] = scale * 0.5 * sign / (0.5 * k as f64 * angle).sin();
        }
    }
    let m = if order == 1 { d1 } else { d1.dot(&d1) };
    LinearOperator::new(m, grid.clone(), vec!["u".into()], Boundary::Periodic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::build_grid;

    #[test]
    fn weights_match_textbook_stencils() {
        let w = fd_weights(&[-1, 0, 1], 1);
        assert!((w[0] + 0.5).abs() < 1e-15 && w[1].abs() < 1e-15 && (w[2] - 0.5).abs() < 1e-15);
        let w = fd_weights(&[-2, -1, 0, 1, 2], 1);
        let expected = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        let w = fd_weights(&[-2, -1, 0, 1, 2], 2);
        let expected = [-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expected) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_has_zero_interior_derivative() {
        let g = build_grid(5.0, 64).unwrap();
        let d = diff_matrix(&g, 1).unwrap();
        let y = d.apply(&vec![1.0; 64]);
        for v in &y[2..62] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn second_derivative_of_parabola() {
        let g = build_grid(3.0, 61).unwrap();
        let d = diff_matrix(&g, 2).unwrap();
        let y = d.apply(&g.sample(|x| x * x));
        for v in &y[2..59] {
            assert!((v - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sine_first_derivative_interior() {
        let g = build_grid(10.0, 2048).unwrap();
        let d = diff_matrix(&g, 1).unwrap();
        let y = d.apply(&g.sample(f64::sin));
        let x = g.nodes();
        let err = (2..2046)
            .map(|j| (y[j] - x[j].cos()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "err = {err}");
    }

    #[test]
    fn eighth_order_beats_fourth() {
        let g = build_grid(10.0, 401).unwrap();
        let s = g.sample(|x| (-x * x).exp());
        let exact = g.sample(|x| (4.0 * x * x - 2.0) * (-x * x).exp());
        let err = |acc: usize| {
            let y = diff_matrix_with_accuracy(&g, 2, acc).unwrap().apply(&s);
            (4..397)
                .map(|j| (y[j] - exact[j]).abs())
                .fold(0.0, f64::max)
        };
        assert!(err(8) < 1e-2 * err(4));
    }

    #[test]
    fn first_derivative_is_antisymmetric() {
        let g = build_grid(2.0, 33).unwrap();
        for acc in [2, 4, 8] {
            let m = diff_matrix_with_accuracy(&g, 1, acc).unwrap();
            let a = m.matrix();
            for i in 0..33 {
                for j in 0..33 {
                    assert_eq!(a[[i, j]], -a[[j, i]]);
                }
            }
        }
    }

    #[test]
    fn spectral_derivative_of_gaussian() {
        let g = build_grid(12.0, 201).unwrap();
        let d = spectral_diff_matrix(&g, 1).unwrap();
        let y = d.apply(&g.sample(|x| (-x * x).exp()));
        let exact = g.sample(|x| -2.0 * x * (-x * x).exp());
        let err = y
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "err = {err}");
        assert!(spectral_diff_matrix(&build_grid(1.0, 16).unwrap(), 1).is_err());
    }

    #[test]
    fn stencil_application_matches_matrix() {
        let g = build_grid(4.0, 50).unwrap();
        let s = g.sample(|x| (x * 0.7).sin() * (-x * x / 4.0).exp());
        for (order, acc) in [(1, 4), (2, 8), (1, 8)] {
            let a = diff_matrix_with_accuracy(&g, order, acc).unwrap().apply(&s);
            let b = fd_derivative(&s, g.spacing(), order, acc);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn rejects_bad_orders() {
        let g = build_grid(1.0, 16).unwrap();
        assert!(diff_matrix(&g, 3).is_err());
        assert!(diff_matrix_with_accuracy(&g, 1, 3).is_err());
    }
}

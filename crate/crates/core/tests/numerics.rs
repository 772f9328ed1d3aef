use ndarray::Array2;
use nld_core::numerics::{
    build_grid, conjugate_defect, diff_matrix, eigs_of_matrix, find_root, inf_norm,
    quadrature_quiet, spectral_diff_matrix, Parity, ParityFold,
};
use proptest::prelude::*;

fn matrix(n: usize, seed: &[f64]) -> Array2<f64> {
    Array2::from_shape_fn((n, n), |(i, j)| {
        seed[(i * n + j) % seed.len()] * ((i + 2 * j) as f64).sin()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn spectra_are_closed_under_conjugation(n in 2usize..40, seed in prop::collection::vec(-5.0f64..5.0, 1..64)) {
        let m = matrix(n, &seed);
        let e = eigs_of_matrix(&m, true).unwrap();
        prop_assert_eq!(e.values.len(), n);
        prop_assert!(conjugate_defect(&e.values) < 1e-10 * inf_norm(&m).max(1.0));
        prop_assert!(e.residual_bound < 1e-8 * inf_norm(&m).max(1e-300));
    }

    #[test]
    fn odd_integrand_integrates_to_zero(n in 16usize..400, l in 0.5f64..30.0, c in -3.0f64..3.0) {
        let g = build_grid(l, n).unwrap();
        let s = g.sample(|x| (c * x).sin() * (-x * x / l).exp() + x.powi(3) / l.powi(3));
        let sup = s.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let q = quadrature_quiet(&g, &s).unwrap();
        prop_assert!(q.abs() <= 1e-12 * sup * l.max(1.0));
    }

    #[test]
    fn derivative_rows_annihilate_constants(n in 16usize..200, l in 0.5f64..50.0) {
        let g = build_grid(l, n).unwrap();
        let d = diff_matrix(&g, 1).unwrap();
        let a = d.matrix();
        for i in 2..n - 2 {
            let s: f64 = a.row(i).sum();
            prop_assert!(s.abs() < 1e-10 * a.row(i).iter().map(|v| v.abs()).sum::<f64>());
        }
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(a[[i, j]], -a[[j, i]]);
            }
        }
    }

    #[test]
    fn root_of_shifted_cubic(r in -5.0f64..5.0) {
        let x = find_root(|x| (x - r).powi(3) + (x - r), [r - 7.0, r + 3.0], 1e-13).unwrap();
        prop_assert!((x - r).abs() < 1e-12);
    }

    #[test]
    fn fold_preserves_spectrum(half in 8usize..30, odd in any::<bool>(), w in -2.0f64..2.0) {
        let n = 2 * half + usize::from(odd);
        let g = build_grid(4.0, n.max(17)).unwrap();
        let n = g.points();
        let d = diff_matrix(&g, 2).unwrap().into_matrix();
        let x = g.nodes();
        let mut m = d.clone();
        for i in 0..n {
            m[[i, i]] += w * x[i] * x[i];
        }
        let full = eigs_of_matrix(&m, false).unwrap();
        let mut parts = Vec::new();
        for p in [Parity::Even, Parity::Odd] {
            let f = ParityFold::new(&g, &[p]);
            parts.extend(eigs_of_matrix(&f.fold(&m), false).unwrap().values);
        }
        prop_assert_eq!(parts.len(), n);
        let scale = inf_norm(&m);
        for z in &full.values {
            let near = parts.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(near < 1e-9 * scale);
        }
    }
}

#[test]
fn spectral_derivative_is_antisymmetric() {
    let g = build_grid(5.0, 101).unwrap();
    let d = spectral_diff_matrix(&g, 1).unwrap();
    let a = d.matrix();
    for i in 0..101 {
        assert_eq!(a[[i, i]], 0.0);
        for j in 0..101 {
            assert!((a[[i, j]] + a[[j, i]]).abs() < 1e-12 * a[[i, j]].abs().max(1.0));
        }
    }
}

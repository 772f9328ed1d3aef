use nld_core::dirac::{
    assemble_dirac, dirac_spectrum, rescaled_problem, spectrum_grid, unstable_eigenvalue_rescaled,
    w_norm, w_norm_limit_substitution, wave_w_norm, DiracReport, EigenClass, SpectrumReport,
};
use nld_core::numerics::build_grid;
use nld_core::profiles::{make_model, solve_profile, SolitaryWave};
use nld_core::LabError;

// λ_ω from an independent Fourier-collocation prototype, converged in N and L
// to about 1e-12.
const LAMBDA_OMEGA: [(u32, f64, f64); 4] = [
    (3, 0.90, 0.11412558399),
    (3, 0.95, 0.09807494794),
    (3, 0.98, 0.05011996605),
    (4, 0.90, 0.24343325909),
];
const LAMBDA3: f64 = 1.4525441896746762;

fn spectrum(k: u32, omega: f64) -> (SolitaryWave, SpectrumReport) {
    let model = make_model(k, 1.0, vec![], 1.0).unwrap();
    let grid = spectrum_grid(&model, omega).unwrap();
    let wave = solve_profile(&model, omega, &grid).unwrap();
    let blocks = assemble_dirac(&wave, &model, &grid).unwrap();
    (wave, dirac_spectrum(&blocks).unwrap())
}

#[test]
fn unstable_eigenvalue_matches_oracle() {
    for (k, omega, lam) in LAMBDA_OMEGA {
        let (_, s) = spectrum(k, omega);
        assert_eq!(s.unstable_pairs(), 1, "k={k} ω={omega}");
        let got = s.lambda_unstable.unwrap();
        assert!((got - lam).abs() < 1e-8, "k={k} ω={omega}: {got}");
    }
}

#[test]
fn exact_eigenvalues_and_bands() {
    for (k, omega) in [(1, 0.9), (3, 0.9)] {
        let (_, s) = spectrum(k, omega);
        assert!(s.two_omega_resid < 1e-4, "{}", s.two_omega_resid);
        assert!(s.count(EigenClass::ExactPair2omega) >= 2);
        assert!(s.count(EigenClass::NearZero) >= 2);
        assert!(s.symmetry_defect < 1e-8, "{}", s.symmetry_defect);
        for e in &s.eigenvalues {
            if e.class == EigenClass::EssentialProxy {
                assert!(e.lambda.im.abs() >= (1.0 - omega) * (1.0 - 1e-6));
                assert!(e.localization < 0.9);
            }
        }
    }
}

#[test]
fn stable_cases_have_no_real_pair() {
    for k in [1, 2] {
        for omega in [0.9, 0.95] {
            let (_, s) = spectrum(k, omega);
            assert_eq!(s.unstable_pairs(), 0, "k={k} ω={omega}");
            let worst = s
                .eigenvalues
                .iter()
                .filter(|e| e.class != EigenClass::NearZero)
                .filter(|e| e.lambda.im.abs() < s.tol0)
                .map(|e| e.lambda.re.abs())
                .fold(0.0, f64::max);
            assert!(worst < s.tol0, "k={k} ω={omega}: {worst}");
        }
    }
}

#[test]
fn free_operator_spectrum_is_imaginary_with_gap() {
    let model = make_model(3, 1.0, vec![], 1.0).unwrap();
    let grid = build_grid(40.0, 321).unwrap();
    let wave = SolitaryWave::zero_amplitude(&model, 0.9, &grid).unwrap();
    let s = dirac_spectrum(&assemble_dirac(&wave, &model, &grid).unwrap()).unwrap();
    assert_eq!(s.cluster_radius, 0.0);
    assert_eq!(s.count(EigenClass::NearZero), 0);
    for e in &s.eigenvalues {
        assert!(e.lambda.re.abs() < 1e-8);
        assert!(e.lambda.im.abs() >= 0.1 - 1e-10, "{}", e.lambda);
    }
    let edge = s
        .eigenvalues
        .iter()
        .map(|e| e.lambda.im.abs())
        .fold(f64::INFINITY, f64::min);
    assert!((edge - 0.1).abs() < 1e-3);
}

#[test]
fn rescaled_eigenvalue_agrees_with_direct_spectrum() {
    let model = make_model(3, 1.0, vec![], 1.0).unwrap();
    let omega = 0.98;
    let grid = spectrum_grid(&model, omega).unwrap();
    let wave = solve_profile(&model, omega, &grid).unwrap();
    let p = rescaled_problem(&wave, &model, LAMBDA3).unwrap();
    let e = unstable_eigenvalue_rescaled(&p).unwrap();
    let eps2 = 1.0 - omega * omega;
    assert!((e.nu * eps2 - 0.05011996605).abs() < 1e-6 * 0.05);
    assert!(e.mu0.abs() <= eps2.sqrt().cbrt());
    assert!(e.localization >= 0.9);
    let d = &p.d_diag;
    let n = grid.points();
    assert_eq!(d[0], 1.0);
    assert_eq!(d[n], eps2);
    assert_eq!(d[2 * n], 1.0);
    assert_eq!(d[3 * n], eps2);
}

#[test]
fn rescaled_problem_rejects_other_masses_and_detects_absence() {
    let model = make_model(1, 1.0, vec![], 1.0).unwrap();
    let grid = spectrum_grid(&model, 0.95).unwrap();
    let wave = solve_profile(&model, 0.95, &grid).unwrap();
    let p = rescaled_problem(&wave, &model, 1.0).unwrap();
    assert!(matches!(
        unstable_eigenvalue_rescaled(&p),
        Err(LabError::Detection { .. })
    ));
    let heavy = make_model(3, 1.0, vec![], 2.0).unwrap();
    let grid = spectrum_grid(&heavy, 1.8).unwrap();
    let wave = solve_profile(&heavy, 1.8, &grid).unwrap();
    assert!(rescaled_problem(&wave, &heavy, LAMBDA3).is_err());
}

#[test]
fn limit_matrix_eliminates_to_nls_pair() {
    // Rows 2 and 4 of A_Λ give R̂₂ = -∂R₁/2, Ŝ₂ = -∂S₁/2; rows 1 and 3 then
    // reduce to L̂₋S₁ = ΛR₁ and -L̂₊R₁ = ΛS₁. Check with a smooth test pair.
    let model = make_model(3, 1.0, vec![], 1.0).unwrap();
    let omega = 0.95;
    let grid = spectrum_grid(&model, omega).unwrap();
    let wave = solve_profile(&model, omega, &grid).unwrap();
    let lam = 0.7;
    let p = rescaled_problem(&wave, &model, lam).unwrap();
    let y = p.grid_y.nodes();
    let n = y.len();
    let r1: Vec<f64> = y.iter().map(|t| (-t * t).exp()).collect();
    let s1: Vec<f64> = y
        .iter()
        .map(|t| (1.0 + t * t) * (-t * t / 2.0).exp())
        .collect();
    let dr: Vec<f64> = y.iter().map(|t| -2.0 * t * (-t * t).exp()).collect();
    let ds: Vec<f64> = y
        .iter()
        .map(|t| (2.0 * t - t * (1.0 + t * t)) * (-t * t / 2.0).exp())
        .collect();
    let mut eta = vec![0.0; 4 * n];
    for j in 0..n {
        eta[j] = r1[j];
        eta[n + j] = -0.5 * dr[j];
        eta[2 * n + j] = s1[j];
        eta[3 * n + j] = -0.5 * ds[j];
    }
    let out = p.a_lambda.dot(&ndarray::Array1::from(eta));
    // Rows 2 and 4 vanish identically.
    for j in 0..n {
        assert!(out[n + j].abs() < 1e-9 && out[3 * n + j].abs() < 1e-9);
    }
    // Row 1: L̂₋S₁ - ΛR₁, row 3: -L̂₊R₁ - ΛS₁, with L̂± applied analytically.
    let d2s: Vec<f64> = y
        .iter()
        .map(|t| (t.powi(4) - 4.0 * t * t + 1.0) * (-t * t / 2.0).exp())
        .collect();
    let d2r: Vec<f64> = y
        .iter()
        .map(|t| (4.0 * t * t - 2.0) * (-t * t).exp())
        .collect();
    for j in 0..n {
        let uk = nld_core::profiles::nls_limit_value(3, y[j]).powi(3);
        let lm_s = -0.5 * d2s[j] + (0.5 - uk) * s1[j];
        let lp_r = -0.5 * d2r[j] + (0.5 - 7.0 * uk) * r1[j];
        assert!((out[j] - (lm_s - lam * r1[j])).abs() < 1e-9);
        assert!((out[2 * n + j] - (-lp_r - lam * s1[j])).abs() < 1e-9);
    }
}

#[test]
fn w_norm_decays_with_eps() {
    let model = make_model(3, 1.0, vec![], 1.0).unwrap();
    let mut last = f64::INFINITY;
    for eps in [0.3, 0.2, 0.1] {
        let omega = (1.0f64 - eps * eps).sqrt();
        let grid = spectrum_grid(&model, omega).unwrap();
        let wave = solve_profile(&model, omega, &grid).unwrap();
        let w = w_norm(&rescaled_problem(&wave, &model, LAMBDA3).unwrap());
        assert_eq!(w, wave_w_norm(&wave, &model).unwrap());
        assert!(w < last);
        let sub = w_norm_limit_substitution(&model, omega, &grid).unwrap();
        assert!(sub < w, "ε={eps}: {sub} vs {w}");
        last = w;
    }
}

#[test]
fn report_and_csv_shapes() {
    let (_, s) = spectrum(3, 0.9);
    let s = s.with_limit(LAMBDA3);
    let eps2 = 1.0 - 0.81;
    assert!((s.mu0.unwrap() - (0.11412558399 / eps2 - LAMBDA3)).abs() < 1e-6);
    let r = serde_json::to_value(DiracReport::new(&s, Some(0.1))).unwrap();
    for key in [
        "omega",
        "k",
        "N",
        "L",
        "eps",
        "lambda_unstable",
        "Lambda_ref",
        "mu0",
        "checks",
    ] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    for key in [
        "zero_pair_resid",
        "two_omega_resid",
        "symmetry_defect",
        "w_norm",
    ] {
        assert!(r["checks"].get(key).is_some(), "missing {key}");
    }
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "re_lambda,im_lambda,class,localization"
    );
    assert_eq!(text.lines().count(), 1 + s.eigenvalues.len());
    assert_eq!(s.eigenvalues.len(), 4 * s.points);
    assert!(text.contains("real-unstable"));
}

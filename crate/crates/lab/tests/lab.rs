use std::fs;

use nld_core::dirac::{assemble_dirac, dirac_spectrum, spectrum_grid, EigenClass};
use nld_core::profiles::{make_model, solve_profile};
use nld_lab::config::{Check, GridSpec, OmegaSpec, ScanConfig, Spacing};
use nld_lab::reproduce::render_figure_csv;
use nld_lab::scan::{compute_scan, render_scan_csv, run_scan};
use nld_lab::study::{charge_slope, convergence_study_with};
use nld_lab::Verdict;
use proptest::prelude::*;

fn cfg(k: u32, omegas: &[f64], checks: &[Check]) -> ScanConfig {
    ScanConfig {
        k,
        omega: OmegaSpec::List(omegas.to_vec()),
        checks: checks.to_vec(),
        ..ScanConfig::default()
    }
}

const OMEGAS: [f64; 3] = [0.98, 0.9, 0.95];

#[test]
fn cubic_scan_is_unstable_and_rescaled_agrees() {
    let r = compute_scan(
        &cfg(3, &OMEGAS, &[Check::Spectrum, Check::Rescaled]),
        Some(2),
    )
    .unwrap();
    let rows = r.rows();
    assert_eq!(
        rows.iter().map(|r| r.omega).collect::<Vec<_>>(),
        vec![0.9, 0.95, 0.98]
    );
    assert!((r.lambda_ref.unwrap() - 1.45254419).abs() < 1e-7);
    for row in rows {
        assert!(row.is_ok(), "{}", row.status);
        assert_eq!(row.verdict, Verdict::Unstable);
        assert!(row.lambda_unstable.unwrap() > 0.0);
        let direct = row.lambda_over_eps2.unwrap();
        assert!(
            (row.rescaled_nu.unwrap() - direct).abs() < 1e-6 * direct,
            "ω={}",
            row.omega
        );
        assert!(row.w_norm.unwrap() > 0.0);
    }
}

#[test]
fn linear_scan_has_no_real_pair() {
    let r = compute_scan(&cfg(1, &OMEGAS, &[Check::Spectrum]), None).unwrap();
    for row in r.rows() {
        assert!(row.is_ok());
        assert_eq!(row.verdict, Verdict::Stable);
        assert!(row.lambda_unstable.is_none() && row.mu0.is_none());
    }
    let text = String::from_utf8(render_scan_csv(&r).unwrap()).unwrap();
    let line = text.lines().nth(1).unwrap();
    // lambda_unstable, lambda_over_eps2, mu0, rescaled_nu and w_norm stay empty.
    assert!(line.contains(",,,,,stable,ok"), "{line}");
}

fn charge_spread(k: u32, omegas: &[f64]) -> f64 {
    let r = compute_scan(&cfg(k, omegas, &[]), None).unwrap();
    assert!(r.rows().iter().all(|r| r.verdict == Verdict::Unchecked));
    let q: Vec<f64> = r.rows().iter().map(|r| r.q.unwrap()).collect();
    let mean = q.iter().sum::<f64>() / q.len() as f64;
    (q.iter().cloned().fold(0.0, f64::max) - q.iter().cloned().fold(f64::INFINITY, f64::min)) / mean
}

#[test]
fn quadratic_charge_is_flat_near_the_limit() {
    assert!(charge_spread(2, &[0.99, 0.995, 0.999]) < 0.02);
    // Farther out the O(m - ω) correction is still visible: Q runs from
    // 2.111 at ω = 0.9 to 1.958 at ω = 0.98.
    let wide = charge_spread(2, &OMEGAS);
    assert!((wide - 0.0754).abs() < 1e-3, "{wide}");
}

#[test]
fn failed_points_keep_their_row() {
    let mut c = cfg(3, &[0.9, 0.99], &[Check::Spectrum]);
    c.grid = GridSpec {
        points: Some(401),
        half_width: Some(40.0),
    };
    let r = compute_scan(&c, Some(1)).unwrap();
    let rows = r.rows();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].is_ok());
    assert!(
        rows[1].status.starts_with("error: domain too small"),
        "{}",
        rows[1].status
    );
    assert!(rows[1].lambda_unstable.is_none());
}

#[test]
fn scan_files_are_reproducible() {
    let c = cfg(3, &[0.9, 0.95], &[Check::Spectrum]);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut ca = c.clone();
    ca.out = a.path().to_path_buf();
    let mut cb = c;
    cb.out = b.path().to_path_buf();
    run_scan(&ca, Some(1)).unwrap();
    run_scan(&cb, Some(2)).unwrap();
    let mut names = vec!["scan.csv".to_string()];
    for e in fs::read_dir(a.path().join("spectra")).unwrap() {
        names.push(format!(
            "spectra/{}",
            e.unwrap().file_name().to_string_lossy()
        ));
    }
    assert_eq!(names.len(), 3);
    for n in &names {
        assert_eq!(
            fs::read(a.path().join(n)).unwrap(),
            fs::read(b.path().join(n)).unwrap(),
            "{n}"
        );
    }
    let cfg_back =
        ScanConfig::parse(&fs::read_to_string(a.path().join("config.txt")).unwrap()).unwrap();
    assert_eq!(cfg_back, ca);
    let timings = fs::read_to_string(a.path().join("timings.csv")).unwrap();
    assert_eq!(
        timings.lines().next().unwrap(),
        "omega,profile_s,spectrum_s,rescaled_s"
    );
}

#[test]
fn charge_exponent_for_linear_case() {
    let c = ScanConfig {
        k: 1,
        omega: OmegaSpec::Range {
            min: 0.99,
            max: 0.9999,
            count: 4,
            spacing: Spacing::Geometric,
        },
        checks: vec![],
        ..ScanConfig::default()
    };
    let fit = charge_slope(&c, None).unwrap();
    assert!((fit.slope - 0.5).abs() < 0.02, "{}", fit.slope);
}

#[test]
fn free_wave_convergence() {
    let c = cfg(3, &[0.9], &[]);
    let s = convergence_study_with(&c, true, &[257, 513]).unwrap();
    for r in s.refinement.iter().chain(&s.doubled) {
        assert_eq!(r.cluster_radius, 0.0);
        assert!(r.lambda_unstable.is_none());
        assert!((r.gap_edge.unwrap() - 0.1).abs() < 1e-3, "{:?}", r.gap_edge);
    }
    assert!(s.converged);
}

#[test]
fn cubic_convergence_and_width_doubling() {
    let c = cfg(3, &[0.9], &[]);
    let s = convergence_study_with(&c, false, &[257, 513]).unwrap();
    let last = s.refinement.last().unwrap();
    assert!(last.change.unwrap() < 1e-3);
    assert!(s.converged);
    let d = s.doubled.as_ref().unwrap();
    assert_eq!(d.spacing, s.refinement[1].spacing);
    assert!(d.change.unwrap() < 1e-6, "{:?}", d.change);
}

#[test]
fn figure_data_annotations() {
    let model = make_model(3, 1.0, vec![], 1.0).unwrap();
    let grid = spectrum_grid(&model, 0.9).unwrap();
    let wave = solve_profile(&model, 0.9, &grid).unwrap();
    let s = dirac_spectrum(&assemble_dirac(&wave, &model, &grid).unwrap()).unwrap();
    let text = String::from_utf8(render_figure_csv(&s).unwrap()).unwrap();
    let mut exact = 0;
    let mut markers = Vec::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (re, im): (f64, f64) = (f[1].parse().unwrap(), f[2].parse().unwrap());
        if f[0] == "eigenvalue" && f[3] == EigenClass::ExactPair2omega.as_str() {
            assert!((im.abs() - 1.8).abs() < 1e-4 && re.abs() < 1e-6);
            exact += 1;
        }
        if f[0] == "marker" {
            markers.push((f[3].to_string(), re, im));
        }
    }
    assert!(exact >= 2);
    for (label, im) in [
        ("gap-edge", 0.1),
        ("gap-edge", -0.1),
        ("threshold", 1.9),
        ("threshold", -1.9),
        ("two-omega", 1.8),
    ] {
        assert!(
            markers
                .iter()
                .any(|(l, re, y)| l == label && *re == 0.0 && (y - im).abs() < 1e-12),
            "{label} {im}"
        );
    }
    assert_eq!(markers.iter().filter(|m| m.0 == "lambda-omega").count(), 2);
}

fn arb_config() -> impl Strategy<Value = ScanConfig> {
    let omega = prop_oneof![
        prop::collection::vec(0.01f64..0.999, 1..5).prop_map(OmegaSpec::List),
        (0.01f64..0.5, 0.5f64..0.999, 2usize..10, any::<bool>()).prop_map(
            |(min, max, count, g)| OmegaSpec::Range {
                min,
                max,
                count,
                spacing: if g {
                    Spacing::Geometric
                } else {
                    Spacing::Linear
                },
            }
        ),
    ];
    (
        1u32..8,
        0.1f64..10.0,
        omega,
        prop::option::of(16usize..4096),
        prop::option::of(1.0f64..500.0),
        prop::collection::vec((2u32..12, -1.0f64..1.0), 0..3),
        prop::sample::subsequence(vec![Check::Spectrum, Check::Rescaled], 0..=2),
    )
        .prop_map(
            |(k, a, omega, points, half_width, higher_terms, checks)| ScanConfig {
                k,
                a,
                m: 1.0,
                higher_terms,
                omega,
                grid: GridSpec { points, half_width },
                out: "out/dir".into(),
                checks,
            },
        )
}

proptest! {
    #[test]
    fn config_text_round_trips(c in arb_config()) {
        let text = c.to_text();
        let back = ScanConfig::parse(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_text(), text);
    }
}

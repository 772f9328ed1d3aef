//! Acceptance suite AC1 to AC10, run sequentially so the runtime budgets
//! are measured on an otherwise idle process.
//!
//! Prints one PASS/FAIL line per criterion. Three criteria fail as stated
//! and are expected to; for those the run checks that exactly the listed
//! parts fail and that the measured values show the documented cause. Any
//! other outcome makes this target fail.

use std::collections::BTreeSet;
use std::process::ExitCode;

use nld_lab::criteria::{Criterion, Suite};
use nld_lab::reproduce::render_summary;
use serde_json::Value;

const EXPECTED_FAILURES: [(&str, &[&str]); 3] = [
    ("AC2", &["k=3 numeric vs closed", "k=4 numeric vs closed"]),
    (
        "AC6",
        &[
            "k=3 ω=0.9 within 25%",
            "k=3 ω=0.95 within 25%",
            "k=3 μ₀ slope",
            "k=4 ω=0.9 within 25%",
            "k=4 ω=0.95 within 25%",
            "k=4 μ₀ slope",
        ],
    ),
    ("AC9", &["deviation ratio"]),
];

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

/// The stated closed form for k >= 3 is k times the integral; the numeric
/// value matches the integral itself.
fn ac2_cause(c: &Criterion) -> Result<(), String> {
    for e in c.measured.as_array().ok_or("no measurements")? {
        let k = num(&e["k"]);
        let (numeric, closed, exact) = (
            num(&e["f0_numeric"]),
            num(&e["f0_closed"]),
            num(&e["f0_exact"]),
        );
        if (numeric - exact).abs() >= 1e-6 {
            return Err(format!(
                "k={k}: numeric {numeric} differs from the corrected closed form {exact}"
            ));
        }
        if k >= 3.0 && (closed - k * exact).abs() > 1e-9 * closed.abs() {
            return Err(format!(
                "k={k}: stated closed form {closed} is not k times {exact}"
            ));
        }
    }
    Ok(())
}

/// μ₀ decays close to ε², much faster than the ε^{1/k} bound, so the gap
/// is too large at ω = 0.9 and 0.95 and the slope lies far above 2/k.
fn ac6_cause(c: &Criterion) -> Result<(), String> {
    for e in c.measured.as_array().ok_or("no measurements")? {
        let slope = num(&e["mu0_slope"]);
        if !(1.5..2.2).contains(&slope) {
            return Err(format!("k={}: μ₀ slope {slope} is not near 2", e["k"]));
        }
    }
    Ok(())
}

/// The deviation scales like ε^{2+2/k}, so dividing by ε^{4/k} leaves a
/// factor ε^{2-2/k} that varies by about 11 over [0.05, 0.3].
fn ac9_cause(c: &Criterion) -> Result<(), String> {
    let slope = num(&c.measured["deviation_slope"]);
    let expected = 2.0 + 2.0 / 3.0;
    if (slope - expected).abs() > 0.15 {
        return Err(format!("deviation slope {slope} is not near {expected}"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let suite = Suite::new();
    let criteria = suite.all();
    let mut problems = Vec::new();
    for c in &criteria {
        println!("{}", c.line());
        let failed: BTreeSet<&str> = c
            .parts
            .iter()
            .filter(|p| !p.pass)
            .map(|p| p.name.as_str())
            .collect();
        let expected: BTreeSet<&str> = EXPECTED_FAILURES
            .iter()
            .find(|(id, _)| *id == c.id)
            .map(|(_, parts)| parts.iter().copied().collect())
            .unwrap_or_default();
        if failed != expected {
            problems.push(format!(
                "{}: failed parts {failed:?}, expected {expected:?}",
                c.id
            ));
            continue;
        }
        let cause = match c.id.as_str() {
            "AC2" => ac2_cause(c),
            "AC6" => ac6_cause(c),
            "AC9" => ac9_cause(c),
            _ => Ok(()),
        };
        if let Err(e) = cause {
            problems.push(format!("{}: {e}", c.id));
        }
    }
    let passed = criteria.iter().filter(|c| c.pass).count();
    println!(
        "acceptance: {passed} PASS, {} FAIL",
        criteria.len() - passed
    );
    let summary = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance_summary.json");
    match render_summary(&criteria).map(|t| (serde_json::from_str::<Value>(&t), t)) {
        Ok((Ok(v), text)) => {
            let ids: Vec<String> = v["criteria"]
                .as_array()
                .map(|a| {
                    a.iter()
                        .filter(|c| {
                            c["pass"].is_boolean()
                                && c.get("measured").is_some()
                                && c["target"].is_string()
                        })
                        .filter_map(|c| c["id"].as_str().map(String::from))
                        .collect()
                })
                .unwrap_or_default();
            let want: Vec<String> = (1..=10).map(|i| format!("AC{i}")).collect();
            if ids != want {
                problems.push(format!("summary lists {ids:?}"));
            }
            let _ = std::fs::write(&summary, text);
            println!("summary: {}", summary.display());
        }
        _ => problems.push("summary did not render".into()),
    }
    if problems.is_empty() {
        println!("all failures are the expected ones");
        ExitCode::SUCCESS
    } else {
        for p in &problems {
            eprintln!("unexpected: {p}");
        }
        ExitCode::FAILURE
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

/// `f(s) = a s^k + Σ c_j s^{e_j}` together with `g = m - f` and its
/// antiderivative `G`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearityModel {
    pub k: u32,
    pub a: f64,
    /// `(exponent, coefficient)` pairs, exponents larger than `k`.
    pub higher_terms: Vec<(u32, f64)>,
    pub m: f64,
}

impl NonlinearityModel {
    pub fn f(&self, s: f64) -> f64 {
        self.a * s.powi(self.k as i32)
            + self
                .higher_terms
                .iter()
                .map(|&(e, c)| c * s.powi(e as i32))
                .sum::<f64>()
    }

    pub fn f_prime(&self, s: f64) -> f64 {
        let k = self.k as i32;
        self.a * k as f64 * s.powi(k - 1)
            + self
                .higher_terms
                .iter()
                .map(|&(e, c)| c * e as f64 * s.powi(e as i32 - 1))
                .sum::<f64>()
    }

    pub fn g(&self, s: f64) -> f64 {
        self.m - self.f(s)
    }

    pub fn big_g(&self, s: f64) -> f64 {
        let k = self.k as i32;
        self.m * s
            - self.a * s.powi(k + 1) / (k + 1) as f64
            - self
                .higher_terms
                .iter()
                .map(|&(e, c)| c * s.powi(e as i32 + 1) / (e + 1) as f64)
                .sum::<f64>()
    }

    pub fn is_pure_power(&self) -> bool {
        self.higher_terms.iter().all(|&(_, c)| c == 0.0)
    }
}

pub fn make_model(
    k: u32,
    a: f64,
    higher_terms: Vec<(u32, f64)>,
    m: f64,
) -> Result<NonlinearityModel> {
    if k < 1 {
        return config(format!("exponent k must be at least 1, got {k}"));
    }
    if !(a.is_finite() && a > 0.0) {
        return config(format!("leading coefficient a must be positive, got {a}"));
    }
    if !(m.is_finite() && m > 0.0) {
        return config(format!("mass m must be positive, got {m}"));
    }
    if let Some(&(e, _)) = higher_terms.iter().find(|&&(e, _)| e <= k) {
        return config(format!("higher-term exponent {e} must exceed k={k}"));
    }
    if higher_terms.iter().any(|&(_, c)| !c.is_finite()) {
        return config("higher-term coefficients must be finite");
    }
    let model = NonlinearityModel {
        k,
        a,
        higher_terms,
        m,
    };
    // Cross-check G against a Simpson antiderivative of g on [0, 1].
    let n = 2000;
    let h = 1.0 / n as f64;
    let mut acc = 0.0;
    let mut worst = 0.0f64;
    for i in 0..n / 2 {
        let s0 = 2.0 * i as f64 * h;
        acc += h / 3.0 * (model.g(s0) + 4.0 * model.g(s0 + h) + model.g(s0 + 2.0 * h));
        let s = s0 + 2.0 * h;
        worst = worst.max((acc - model.big_g(s)).abs() / model.big_g(s).abs().max(1.0));
    }
    if worst > 1e-10 {
        return config(format!(
            "antiderivative G disagrees with quadrature of g by {worst:.3e}"
        ));
    }
    Ok(model)
}

use serde::{Deserialize, Serialize};

use super::spectrum::SpectrumReport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumChecks {
    pub zero_pair_resid: f64,
    pub two_omega_resid: f64,
    pub symmetry_defect: f64,
    pub w_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracReport {
    pub omega: f64,
    pub k: u32,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub eps: f64,
    pub lambda_unstable: Option<f64>,
    #[serde(rename = "Lambda_ref")]
    pub lambda_ref: Option<f64>,
    pub mu0: Option<f64>,
    pub checks: SpectrumChecks,
}

impl DiracReport {
    pub fn new(spectrum: &SpectrumReport, w_norm: Option<f64>) -> Self {
        Self {
            omega: spectrum.omega,
            k: spectrum.k,
            n: spectrum.points,
            l: spectrum.half_width,
            eps: spectrum.eps_dirac,
            lambda_unstable: spectrum.lambda_unstable,
            lambda_ref: spectrum.lambda_ref,
            mu0: spectrum.mu0,
            checks: SpectrumChecks {
                zero_pair_resid: spectrum.cluster_radius,
                two_omega_resid: spectrum.two_omega_resid,
                symmetry_defect: spectrum.symmetry_defect,
                w_norm,
            },
        }
    }
}

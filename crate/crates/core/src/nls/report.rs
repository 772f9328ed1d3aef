use serde::{Deserialize, Serialize};

use super::limit::limit_eigenvalue;
use super::operators::{kernel_residuals, NlsOperators};
use super::vk::{vk_integral, VkVerdict};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NlsReport {
    pub k: u32,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub f0_numeric: f64,
    pub f0_closed: f64,
    pub f0_exact: f64,
    #[serde(rename = "Lambda")]
    pub lambda: Option<f64>,
    pub verdict: VkVerdict,
}

pub fn nls_report(ops: &NlsOperators) -> Result<NlsReport> {
    let (r1, r2, r3) = kernel_residuals(ops);
    let vk = vk_integral(ops)?;
    let lim = limit_eigenvalue(ops)?;
    Ok(NlsReport {
        k: ops.k,
        n: ops.grid.points(),
        l: ops.grid.half_width(),
        r1,
        r2,
        r3,
        f0_numeric: vk.f0_numeric,
        f0_closed: vk.f0_closed,
        f0_exact: vk.f0_exact,
        lambda: lim.lambda,
        verdict: vk.verdict,
    })
}

//! Linearization of the nonrelativistic limit: `L̂±`, their kernels, the
//! Vakhitov–Kolokolov integral and the limit eigenvalue `Λ`.

mod limit;
mod operators;
mod report;
mod vk;

pub use limit::{
    block_spectrum, limit_eigenvalue, scaling_check, LimitCandidate, LimitEigenvalue, ScalingCheck,
    LIMIT_LOCALIZATION,
};
pub use operators::{assemble_nls, kernel_residuals, NlsOperators, NLS_ACCURACY};
pub use report::{nls_report, NlsReport};
pub use vk::{sech_power_integral, vk_integral, VkReport, VkVerdict};

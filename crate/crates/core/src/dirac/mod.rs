//! Linearization of the Dirac equation at a solitary wave, its spectrum, and
//! the rescaled problem near the nonrelativistic limit.

mod blocks;
mod policy;
mod report;
mod rescaled;
mod spectrum;

pub use blocks::{assemble_dirac, DiracBlocks, DiracPotentials};
pub use policy::spectrum_grid;
pub use report::{DiracReport, SpectrumChecks};
pub use rescaled::{
    rescaled_problem, unstable_eigenvalue_rescaled, w_norm, w_norm_limit_substitution, wave_w_norm,
    RescaledEigen, RescaledProblem,
};
pub use spectrum::{
    dirac_spectrum, symmetry_defect, ClassifiedEigenvalue, EigenClass, SpectrumReport,
    SpinorParity, DIRAC_LOCALIZATION,
};

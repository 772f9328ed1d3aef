//! Grids, differentiation matrices, quadrature, root finding, an adaptive
//! one-step integrator and the dense eigenvalue contract.

mod diff;
mod eigen;
mod grid;
mod ode;
mod operator;
mod parity;
mod quadrature;
mod roots;

pub use diff::{
    diff_matrix, diff_matrix_with_accuracy, fd_derivative, fd_weights, spectral_diff_matrix,
    DEFAULT_ACCURACY,
};
pub use eigen::{
    conjugate_defect, dense_eigs, eigs_of_matrix, inverse_iteration, symmetric_eigenvalues,
    EigenSet,
};
pub use grid::{build_grid, Grid, MAX_DENSE_POINTS, MIN_POINTS};
pub use ode::Dopri5;
pub use operator::{block_matrix, inf_norm, Boundary, LinearOperator};
pub use parity::{Parity, ParityFold};
pub use quadrature::{quadrature, quadrature_quiet};
pub use roots::find_root;

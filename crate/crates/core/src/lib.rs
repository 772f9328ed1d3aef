//! Numerical laboratory for solitary waves of the one-dimensional nonlinear
//! Dirac (Soler / massive Gross–Neveu) equation with `f(s) = a s^k + ...`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: grids, differentiation matrices, quadrature, root finding,
//!   an adaptive ODE stepper, parity folding and the dense eigensolver.
//! * [`profiles`]: nonlinearity models, solitary-wave profiles of the Dirac
//!   equation, the nonrelativistic limit profile `U` and charges.
//! * [`nls`]: the Schrödinger-limit operators `L̂₋`, `L̂₊`, their kernel
//!   identities, the Vakhitov–Kolokolov integral and the limit eigenvalue `Λ`.
//! * [`dirac`]: the linearization `JL(ω)` about a Dirac solitary wave, its
//!   classified point spectrum, and the rescaled problem near `ω → m`.

pub mod dirac;
pub mod error;
pub mod nls;
pub mod numerics;
pub mod profiles;

pub use error::{LabError, Result};

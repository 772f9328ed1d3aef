//! Nonlinearity models, Dirac solitary waves and their nonrelativistic limit.

mod export;
mod model;
mod nls_profile;
mod wave;

pub use export::write_profile_csv;
pub use model::{make_model, NonlinearityModel};
pub use nls_profile::{
    asymptotic_deviation, nls_limit_value, nls_profile, AsymptoticDeviation, NlsProfile,
};
pub use wave::{
    auto_profile_grid, charge, profile_residual, solve_profile, turning_point, ProfileResidual,
    SolitaryWave, TurningPoint,
};

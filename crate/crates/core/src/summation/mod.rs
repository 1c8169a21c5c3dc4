//! Borel–Laplace summation along rays, lateral sums and Stokes
//! phenomena, with the circle calculus that organizes them.

mod asymptotic;
mod borel;
mod direction;
mod laplace;
mod pade;
mod quad;
mod stokes;

pub use borel::{borel_transform, borel_transform_exact};
pub use direction::{
    composed_singulars, direction_calculus, multisum_levels, roots_of_unity, u_arc, v_arc, Arc, CompositionLevels,
    Direction, DirectionReport, SingularSet,
};
pub use pade::{continue_evaluate, polynomial_roots, PadeApproximant, DEFAULT_PADE_TOL, DEFAULT_POLE_TOL};
pub use laplace::{laplace_sum, BorelContinuation, LaplaceValue};
pub use quad::{integrate, QuadResult, QuadratureConfig, PROFILE_ENV};
pub use stokes::{
    fit_stokes_model, fit_stokes_model_for, lateral_offset, lateral_pairs, lateral_sums, log_moduli, predicted_parameters,
    ray_points, singular_directions, solution_continuations, stokes_difference, stokes_difference_with_offset, LateralPair,
    StokesModel, StokesParameters, StokesSample,
};
pub use asymptotic::{asymptotic_check, AsymptoticReport, MIN_POINTS};

//! Positive `q`-short compositions `H ∘ P`, exponential separation of
//! their Stokes terms, relation witnesses and the composed Stokes
//! identity.

mod composition;
mod qshort;
mod separation;
mod witness;

pub use composition::{
    stokes_composition_check, stokes_composition_check_with, CompositionOptions, CompositionReport, CompositionSample,
    DEFAULT_TAYLOR_TERMS,
};
pub use qshort::{compose_solution, composition_levels, is_qshort_positive, ComposedSolution, QShortPoly, QShortVerdict};
pub use separation::{
    composed_principal, exponential_separation, limit_sign, q_a, singular_indices, PairPrincipal, SeparationReport,
    RAY_CANDIDATES,
};
pub use witness::{
    parse_z_name, witness_search, witness_search_with, witness_variables, DerivativeWitness, Substitution, WitnessReport,
};

//! Exact, asymptotic and Monte Carlo computation of the correlation between
//! pairwise coalescence times at two linked loci under a diploid
//! Wright-Fisher model with partial selfing and recombination.
//!
//! * [`model`] holds the parameters, the state space and scaling scenarios.
//! * [`chain`] builds the transition matrices.
//! * [`exact`] solves the absorbing chain for moments, covariance and
//!   correlation as exact rationals, with a floating-point path for large `N`.
//! * [`asympt`] evaluates the closed-form asymptotic and extreme-case laws.
//! * [`mc`] estimates correlations by seeded Monte Carlo simulation.

pub mod asympt;
pub mod chain;
pub mod error;
pub mod exact;
pub mod expr;
pub mod linalg;
pub mod mc;
pub mod model;
pub mod rational;

pub use chain::{
    appendix_reference_matrix, build_extended_matrix, build_single_locus_matrix, build_two_locus_matrix,
    limit_matrix, SpecialCase, TransitionMatrix,
};
pub use error::{Error, Result};
pub use model::{colocation_signature, resolve_scenario, Colocation, Parameters, ScalingScenario, TwoLocusState};
pub use rational::Q;

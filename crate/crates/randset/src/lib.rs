//! Kernel distances, stability analysis, and permutation tests for random
//! sets on finite measure spaces.
//!
//! A ground space is a finite set of points with positive weights. Subsets
//! are compared through the symmetric-difference kernel `mu(A Δ B)`, which
//! is negative definite and therefore induces a metric on sets and an
//! N-distance between distributions of random sets. On top of that sit:
//!
//! - [`space`]: ground spaces, sets, kernels, metrics, and projections onto
//!   disjoint systems;
//! - [`random_set`]: discrete random-set distributions, their mean
//!   functions, N-distances, and the intersection semigroup;
//! - [`stability`]: which distributions have mean functions whose powers
//!   stay proportional to themselves, and the convergence laws that follow;
//! - [`testing`]: two-sample permutation tests for set-valued and
//!   vector-valued samples, discretization, and level/power simulations;
//! - [`io`]: JSON file formats; [`rng`]: the seeded random-number contract.

pub mod error;
pub mod io;
pub mod random_set;
pub mod rng;
pub mod space;
pub mod stability;
pub mod testing;

pub use error::{Error, Result};
pub use random_set::{
    energy_double_sum, intersect_independent, kernel_frak_k, kernel_star, mean_function,
    n_distance_p, n_distance_sq, n_distance_sq_from_pairs, op_circ, op_star, DiscreteRandomSet,
    MeanFunction,
};
pub use space::{FiniteSet, MeasureSpace, Projection, QuadraticFormWitness};
pub use stability::{
    chain_power_deviations, chain_power_parameter, check_stable, derive_decomposition,
    intersection_convergence, make_geometric_chain, power_mean, scaled_power_convergence,
    verify_geometric_chain, ChainDeviationRow, ConvergenceRow, Decomposition,
    IntersectionConvergence, ScaledConvergenceRow, StabilityReport, KAPPA_CONVENTION,
};
pub use testing::{
    cell_means, cell_means_values, discretize, discretize_measure, empirical_n_statistic,
    permutation_test, permutation_test_exact, simulate_level, simulate_power, vector_n_statistic,
    vector_n_statistic_r, vector_permutation_test, vector_permutation_test_exact,
    vector_permutation_test_r, BinaryObservationVector, CellPartition, SetSample, SimulationConfig,
    SimulationReport, TestResult,
};

/// Tolerance for identities that hold exactly up to floating-point
/// round-off (zero-sum checks, algebraic rearrangements).
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance when comparing against an independently computed oracle value
/// (e.g. a linear solve).
pub const ORACLE_TOL: f64 = 1e-9;

/// Allowed deviation of probability vectors from summing to one.
pub const PROB_SUM_TOL: f64 = 1e-9;

/// Default tolerance for deciding whether mean-function levels coincide.
pub const STABILITY_TOL: f64 = 1e-9;

/// Largest number of splits `C(2n, n)` the exact permutation test will
/// enumerate.
pub const ENUMERATION_LIMIT: u128 = 100_000;

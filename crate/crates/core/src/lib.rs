//! Solving linear algebraic equations `Y_d = G·U` with iterative learning
//! control.
//!
//! The equation is treated as a static plant driven trial after trial by the
//! update `U_{k+1} = U_k + K·(Y_d − G·U_k)`. Splitting the output space into
//! `span G` and a complement separates the error into a controllable part,
//! which a designed gain drives to zero (exponentially or in finitely many
//! steps), and an uncontrollable part that stays constant. Solvable equations
//! converge to exact solutions; inconsistent ones converge to least-squares
//! solutions. The [`lifted`] module applies the same machinery to
//! finite-horizon tracking for discrete-time state-space plants.

pub mod error;
pub mod gain;
pub mod io;
pub mod lifted;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod solver;
pub mod subspace;

pub use error::{Error, Result};
pub use gain::{
    contract_gain, custom_full_gain, custom_gain, design_deadbeat, design_exponential, expand_gain,
    verify_gain, Certificate, GainCheck, GainMode, GainSpec,
};
pub use lifted::{
    build_lifted, lift_reference, relative_degree, run_tracking, LiftedSystem, StateSpaceSystem,
};
pub use linalg::{invert, nilpotency_index, rank_of, spectral_radius};
pub use matrix::{Matrix, Tolerance};
pub use oracle::{least_squares_oracle, solvability_oracle, OracleVerdict};
pub use solver::{
    check_one_three_inverse, closed_form_limit, iterate_once, null_space_basis,
    solution_affine_map, solve, Classification, IlcTrace, SolutionSet, Termination,
};
pub use subspace::{
    build_decomposition, classify_system, is_trackable, project_trackable,
    uncontrollable_component, SubspaceDecomposition, SystemClassification,
};

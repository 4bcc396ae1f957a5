//! Feasibility and maximum-entropy completion of partial assignments under
//! linear property constraints, entropy-extremal views of grounded and
//! stable semantics, and convexity probes for property classes.

mod constraints;
mod convexity;
mod extremal;
mod oracle;
mod solver;

pub use constraints::{
    build_constraints, check_linear, is_feasible, Comparator, LinearConstraint,
    LinearConstraintSystem,
};
pub use convexity::{
    convexity_probe, expected_convex, rat_witness_attack, rat_witness_pair, ConvexityViolation,
    ProbeReport,
};
pub use extremal::{grounded_via_maxent, point_mass_witness, stable_via_min_entropy};
pub use oracle::{brute_force_joint_maxent, MAX_ORACLE_ARGS};
pub use solver::{
    max_entropy_completion, solve, CompletionResult, CompletionStatus, DEFAULT_COMPLETION_TOL,
};

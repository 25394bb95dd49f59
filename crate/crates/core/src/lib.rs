//! Confluent hypergeometric series, Frobenius solutions of the reduced
//! Kummer equations, and exact/numerical verification of Kummer's second
//! transformation together with its two contiguous relations.
//!
//! Every computation that certifies something runs in exact rational
//! arithmetic ([`Rational`]); the float paths exist for speed and for the
//! numerical identity checks.

pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod frobenius;
pub mod identity;
pub mod rational;
pub mod report;
pub mod series;

pub use closed_forms::{assemble_y1, assemble_y2, certify_family, closed_coeff, Certification, ClosedFormFamily, FamilyId};
pub use error::{Error, Result};
pub use frobenius::{
    frobenius_basis, indicial_roots, ode_residual, recurrence_step, reduce_kummer, solve_frobenius,
    FrobeniusSolution, IndicialRoots, OdeSpec, Offset,
};
pub use identity::{
    connection_constants, lhs_series_exact, lhs_spec, rhs_spec, verify_identity, ConnectionConstants,
    IdentityId, IdentityReport, PointResult,
};
pub use rational::{parse_rational, ratio, Rational, Scalar};
pub use series::{
    eval_0f1, eval_0f1_exact, eval_1f1, eval_1f1_exact, eval_combination, eval_spec, pochhammer,
    ArgumentMap, Combination, EvalMode, EvalResult, HypergeometricSpec, Prefactor,
};

//! Toolkit for compiling elliptic-curve discrete-logarithm instances on
//! short Weierstrass curves over small prime fields into quadratic
//! unconstrained binary optimization problems, solving those by exhaustive
//! enumeration or simulated annealing, and classically verifying the
//! recovered logarithm.
//!
//! The pipeline: write the unknown scalar in binary so the multiplication
//! becomes a chain of conditional additions of precomputed points; turn each
//! addition into two fraction-free chord equations over F_p with unknown
//! binary coordinate registers for the intermediate sums; lift the
//! congruences to integer equations with binary carry registers; linearize
//! products of binaries through cached substitution variables; and minimize
//! the penalized sum of squares. A zero of the resulting objective encodes a
//! solution, which is decoded and checked against the curve arithmetic.

pub mod anneal;
pub mod curve;
pub mod error;
pub mod field;
pub mod io;
pub mod poly;
pub mod qubo;
pub mod reduce;

pub use anneal::{solve_sa, RestartTrace, SaParams, SaResult};
pub use curve::{AffinePoint, CurveParams, EcdlpInstance};
pub use error::{Error, Result};
pub use field::FieldElement;
pub use io::{export_qubo, export_qubo_to_string, import_qubo, InstanceMeta};
pub use poly::{Monomial, MultilinearPoly};
pub use qubo::{
    solve_exhaustive, Assignment, ExhaustiveResult, QuboInstance, DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_MAX_MINIMA,
};
pub use reduce::{
    assemble_qubo, build_system, compile, decode, encode_truth, lift_integers, linearize,
    Compiled, Coord, DecodedSolution, EquationSystem, Method, RoleCounts, SubstitutionConstraint,
    VariableMap, VariableRole,
};

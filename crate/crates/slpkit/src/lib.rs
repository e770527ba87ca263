//! Straight-line programs over the integers and integer polynomials:
//! construction, exact/modular/symbolic evaluation, the PosSLP family of
//! decision problems, and constructive reductions between them, all
//! cross-checked against brute-force oracles at desk scale.
//!
//! The crate is organized around the pipeline
//!
//! * [`slp`] — the program IR, its text format, and constant builders;
//! * [`eval`] — budgeted exact evaluation, modular evaluation, and symbolic
//!   expansion (the brute-force oracle);
//! * [`numtheory`] — sum-of-squares characterizations, factorization, and
//!   square testing;
//! * [`polyreal`] — exact real-positivity machinery for polynomials;
//! * [`deciders`] — one decision procedure per problem, behind counting
//!   oracle handles;
//! * [`reductions`] — the instance transforms and oracle-driven drivers;
//! * [`harness`] — program generation and verification campaigns.

pub mod deciders;
pub mod eval;
pub mod harness;
pub mod numtheory;
pub mod poly;
pub mod polyreal;
pub mod reductions;
pub mod slp;

pub use deciders::{Aux, ProblemInstance, ProblemTag, Verdict};
pub use eval::EvalBudget;
pub use poly::DensePolynomial;
pub use slp::{Instruction, Slp};

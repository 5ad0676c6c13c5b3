//! Optimal unitary-equivariant channels for symmetric self-dual Boolean
//! functions.
//!
//! Given a symmetric Boolean function with the self-duality
//! `f(x ^ 1..1) = !f(x)` on an odd number of qubits, this crate computes
//! the best quantum channel that evaluates `f` on inputs supplied in an
//! unknown single-qubit basis, where "best" means worst-case output
//! fidelity. The flagship instance is quantum majority vote.
//!
//! The pieces:
//!
//! - [`fidopt`] solves the exact-rational linear program whose optimum is
//!   the worst-case fidelity, and carries closed forms for the majority
//!   and parity families.
//! - [`rep2`], [`cg`] hold the spin representations of 2x2 matrices and
//!   the coupling transforms between them.
//! - [`channels`] builds the two extremal covariant channels every
//!   optimal algorithm mixes, in Choi, Kraus, Stinespring, and circuit
//!   form.
//! - [`schur`] constructs an explicit Schur basis (n <= 8), weak Schur
//!   sampling, and its inverse.
//! - [`synth`] produces exact Choi matrices of optimal and of ideal
//!   (generally non-physical) channels for a given function.
//! - [`sim`] re-derives everything by direct density-matrix simulation.
//! - [`golden`] embeds the reference tables the test suites compare
//!   against.
//!
//! Exact data lives in [`exact::Rat`] / [`qmat::QMatrix`]; the
//! representation-theoretic and simulation paths run on
//! [`cmat::CMatrix`] doubles with tolerances centralised in [`tol`].

// Index-based loops are the house style for the dense matrix math here.
#![allow(clippy::needless_range_loop)]

pub mod cg;
pub mod channels;
pub mod choi;
pub mod cmat;
pub mod error;
pub mod exact;
pub mod fidopt;
pub mod golden;
pub mod poly;
pub mod qmat;
pub mod rep2;
pub mod schur;
pub mod sim;
pub mod simplex;
pub mod synth;
pub mod tol;

pub use error::{Error, Result};

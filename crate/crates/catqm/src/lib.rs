//! Term language for dagger compact closed categories with biproducts,
//! evaluated over complex matrices (`fdhilb`) and boolean relations (`rel`).
//!
//! The crate is organised bottom-up: objects and terms with a typechecker,
//! matrix backends with an evaluator, then the layers built on top of the
//! evaluator: projector-network flow tracing, measurements and the Born
//! rule, protocol verification (teleportation and friends), and a small
//! source language with a CLI-facing interface.

pub mod object;
pub mod term;
pub mod typecheck;

pub mod matrix;
pub mod scalar;

pub mod eval;
pub mod ops;

pub mod flow;
pub mod measurement;
pub mod protocols;

pub mod dsl;
pub mod gen;

pub use eval::eval;
pub use matrix::{CMatrix, Matrix, RMatrix};
pub use num_complex::Complex64;
pub use object::ObjectType;
pub use scalar::{Backend, BackendKind, ScalarRing, DEFAULT_TOL};
pub use term::{ScalarLiteral, Term};
pub use typecheck::{typecheck, TypeJudgment};

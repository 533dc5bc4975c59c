//! A small declaration language for objects, matrix-defined morphisms and
//! term-level assertions, with elaboration into [`crate::term::Term`] and
//! execution against either backend.
//!
//! A script is a sequence of statements:
//!
//! ```text
//! object Q = I (+) I
//! morph x : Q -> Q = [[0, 1], [1, 0]]
//! term flip = x . x
//! assert flip == id Q
//! assert name (id Q) ~= eta Q
//! ```
//!
//! `==` demands exact equality at the working tolerance, `~=` equality up
//! to a global nonzero scalar. Everything lives in one namespace and must
//! be declared before use.

pub mod ast;
pub mod elab;
pub mod lexer;
pub mod parser;
pub mod pretty;

use thiserror::Error;

/// Lex or parse failure, with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}:{col}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

pub use ast::Program;
pub use elab::{
    elaborate, run_asserts, run_in, AssertResult, AssertionReport, ElabError, Elaborated,
};
pub use parser::parse;
pub use pretty::pretty;

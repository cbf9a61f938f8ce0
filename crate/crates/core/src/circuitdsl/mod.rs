//! A line-oriented description language for optical circuits around the
//! spin-cavity system.
//!
//! ```text
//! modes A B C D
//! component pbs cpbs in=[A, D] out=[C, B]
//! component shift phase(phi=pi) in=[C] out=[C]
//! component qd cavity in=[B, C] out=[B, C]
//! sequence pbs shift qd shift pbs
//! input photon 1 port=A state=R
//! input spin state=Plus
//! measure photon 1 basis=RL
//! measure spin basis=UpDown
//! ```
//!
//! Modes are bidirectional optical paths. Components are applied to every
//! photon in `sequence` order; a component may appear there more than once.
//! Cavity ports are listed as `[below, above]`, with `_` for an unused input.
//! The full grammar is in `docs/circuit-language.md`.

mod ast;
mod compile;
mod lexer;
mod parser;
mod printer;
mod validate;

use std::fmt;

pub use ast::{
    Angle, CircuitAst, ComplexLit, ComponentDecl, ComponentKind, Ident, InputDecl, MeasureDecl, PortRef, Pos, StateExpr,
};
pub use compile::{compile, CompiledCircuit};
pub use parser::parse_syntax;
pub use printer::pretty_print;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Lex,
    Syntax,
    Semantic,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Lex => "lexical",
            ErrorKind::Syntax => "syntax",
            ErrorKind::Semantic => "semantic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind} error: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: ErrorKind,
}

impl ParseError {
    pub(crate) fn new(pos: Pos, kind: ErrorKind, message: impl Into<String>) -> Self {
        Self { line: pos.line.max(1), column: pos.column.max(1), message: message.into(), kind }
    }
}

/// Parses and validates a circuit.
pub fn parse(src: &str) -> Result<CircuitAst, ParseError> {
    let ast = parse_syntax(src)?;
    validate::validate(&ast)?;
    Ok(ast)
}

/// Parses, validates and compiles a circuit.
pub fn load<T: Real>(src: &str) -> crate::Result<CompiledCircuit<T>> {
    compile(&parse(src)?)
}

/// Circuits shipped with the crate.
pub mod fixtures {
    pub const CNOT: &str = include_str!("../../circuits/cnot.qc");
    pub const CNOT_LOSSY: &str = include_str!("../../circuits/cnot_lossy.qc");
    pub const BSA: &str = include_str!("../../circuits/bsa.qc");
}

#[cfg(test)]
mod tests;

use num_complex::Complex64;
use thiserror::Error;

use crate::netgraph::WeightedDigraph;
use crate::structural::StructuralVerdict;

/// Every failure the library can report.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by the zero function")]
    DivisionByZero,

    #[error("pole at {0}")]
    PoleAtPoint(Complex64),

    #[error("root finding did not converge (worst residual {worst:.3e})")]
    RootFindingFailed { residuals: Vec<f64>, worst: f64 },

    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("malformed weight expression at offset {offset}: {message} (near `{fragment}`)")]
    Expression {
        offset: usize,
        fragment: String,
        message: String,
    },

    #[error("document syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("vertex subset is empty")]
    EmptySet,

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("not a structural set: {0}")]
    NotStructural(StructuralVerdict),

    #[error(
        "vertex `{vertex}` carries a loop identically equal to l{}",
        origin.as_ref().map(|o| format!(" (in the {o} graph)")).unwrap_or_default()
    )]
    LambdaLoop {
        vertex: String,
        /// The intermediate graph at which elimination became impossible.
        graph: Option<Box<WeightedDigraph>>,
        origin: Option<String>,
    },

    #[error("complement block is singular over the rational-function field")]
    SingularBlock,

    #[error("characteristic determinant is identically zero")]
    IdenticallyZeroDeterminant,

    #[error("vertex `{0}` has a loop weight depending on l")]
    NonConstantLoop(String),

    #[error("vertex `{0}` outside the kept set has a loop")]
    LoopInComplement(String),

    #[error("isomorphism search refused: {vertices} vertices exceeds the budget of {budget}")]
    SearchBudgetExceeded { vertices: usize, budget: usize },

    #[error("unknown selection rule `{0}`")]
    UnknownRule(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Exact arithmetic in the field of rational functions of the spectral
//! parameter `l`, with exact rational coefficients.

mod expr;
mod function;
mod poly;
mod roots;

pub use expr::{format_polynomial, format_rational, parse};
pub use function::{arith, normalize, ArithOp, RationalFunction};
pub use poly::{Polynomial, Scalar, DEGREE_CAP};
pub use roots::{poly_roots, square_free_decomposition, Root, CONVERGENCE_TOL};

//! Canonical exact expression algebra.
//!
//! Expressions are finite sums of terms `coefficient * monomial * exp(arg)`
//! where coefficients are complex rationals, monomials are products of fixed
//! generators with integer exponents (non-negative for coordinates, any sign
//! for parameters), and `arg` is itself an exponential-free expression.
//! Every expression lives in a canonical form (sorted maps, no zero entries),
//! so structural equality is semantic equality.

mod coefficient;
mod display;
mod expr;
mod generator;
mod parse;

pub use coefficient::Coefficient;
pub use expr::{ExpArg, Expr, Monomial, TermView};
pub use generator::{Generator, GeneratorKind, Metric};

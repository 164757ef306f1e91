//! Exact symbolic engine for the polysymplectic (de Donder–Weyl) formulation
//! of the real scalar field on flat spacetime, together with the
//! Kostant-Souriau-style prequantization map it supports and a numerical
//! finite-difference oracle that cross-validates the symbolic kernel.
//!
//! The crate is organized around a small canonical expression algebra
//! ([`symexpr`]), a normal-ordered differential-operator algebra ([`diffop`]),
//! the classical contraction machinery for the polysymplectic form, Poisson
//! tensor and potential ([`classical`]), the prequantization maps
//! ([`prequant`]), plane-wave solution sections and pullbacks ([`pullback`]),
//! the derived observables and eigenvalue analyses ([`observables`]), floating
//! point evaluation plus oracles ([`numeric`]), and a registry of named
//! regression checks ([`checks`]).

pub mod checks;
pub mod classical;
pub mod diffop;
pub mod error;
pub mod numeric;
pub mod observables;
pub mod prequant;
pub mod pullback;
pub mod symexpr;

pub use diffop::{is_state, DerivWord, DiffOp};
pub use error::Error;
pub use symexpr::{Coefficient, ExpArg, Expr, Generator, GeneratorKind, Metric, Monomial};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

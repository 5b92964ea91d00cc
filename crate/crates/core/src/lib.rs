//! Exact combinatorial, algebraic and representation-theoretic invariants of
//! the arrangements A_S(n) of hyperplanes in ℝ^n normal to nonzero vectors
//! with entries in a finite set S ⊂ ℚ.

pub mod algebra;
pub mod arrangement;
pub mod chambers;
pub mod character;
pub mod charpoly;
pub mod error;
pub mod fsop;
pub mod genfun;
pub mod linalg;
pub mod lp;
pub mod matroid;
pub mod quotient;
pub mod rational;
pub mod store;
pub mod symmetric;
pub mod verify;

pub use error::{Error, Result};

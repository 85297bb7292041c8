//! Exact computations with anticommutative algebras over ℚ: identity checking,
//! relatively free algebras of binary-Lie type, and the construction of
//! algebras satisfying `J(x,y,zu) = 0` from Lie algebras.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod format;
pub mod free;
pub mod identity;
pub mod linalg;
pub mod moufang;
pub mod structure;

pub use algebra::{Algebra, AlgebraError, Element, Subspace};
pub use linalg::{Matrix, Scalar};

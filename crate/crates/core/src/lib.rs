//! Birkhoff–James orthogonality in finite-dimensional real normed spaces.
//!
//! The crate turns the basic notions of the theory into computable quantities:
//! supporting functionals and smooth points, orthogonality tests and the
//! approximate-orthogonality constants of Dragomir and Chmieliński, symmetry
//! defects of points, norm attainment and orthogonality of operators, and
//! self-verifying constructions of operators that witness the failure of
//! right-symmetry.

pub mod constructions;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod orthogonality;
pub mod sampling;
mod search;
pub mod spaces;
mod supsearch;
pub mod symmetry;
pub mod tolerance;
pub mod vector;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use operators::Operator;
pub use spaces::{Exponent, Family, NormSpec, SupportSet};
pub use tolerance::Tolerances;
pub use vector::{Functional, Vector};

//! Koszul-type determinantal resultant matrices for mixed multilinear
//! polynomial systems, exact resultant evaluation, and a multiparameter
//! eigenvalue solver built on the Schur complement of the Sylvester-type
//! resultant matrix.

pub mod blocks;
pub mod error;
pub mod formulas;
pub mod koszul;
pub mod mat;
pub mod scalar;
pub mod solver;
pub mod weyman;

pub use error::{Error, Result};

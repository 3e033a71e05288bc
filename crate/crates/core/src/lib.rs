//! Exact and numerical machinery for cyclotomic associators: truncated
//! non-commutative series, presented algebras, the mixed pentagon/octagon
//! equations, the double shuffle relations, bar complexes and multiple
//! polylogarithm numerics.

pub mod barcx;
pub mod dshuffle;
pub mod equations;
pub mod error;
pub mod mlvnum;
pub mod ncseries;
pub mod presented;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{q, qi, Scalar, Q};

//! Quadratically presented graded algebras (infinitesimal braid algebras and
//! their cyclotomic variants), truncated quotients and morphisms between them.

mod cache;
mod morphism;
mod presentation;
mod quotient;

pub use morphism::{braid_indices, Morphism, XfVariant};
pub use presentation::{Presentation, PresentationTag};
pub use quotient::{DegreeData, QuotientAlgebra, Row};

#[doc(hidden)]
pub mod cache_format {
    pub use super::cache::{decode, encode};
}

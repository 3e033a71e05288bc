//! Truncated non-commutative power series over graded alphabets.

mod alphabet;
mod json;
mod lyndon;
mod series;
mod tensor;
mod word;

pub use alphabet::{Alphabet, AlphabetKind};
pub use lyndon::{
    is_lyndon, lyndon_basis, lyndon_bracket, lyndon_words, standard_factorization,
    witt_dimension, LieSeries,
};
pub use series::Series;
pub use tensor::Tensor2;
pub use word::{shuffles, Word};

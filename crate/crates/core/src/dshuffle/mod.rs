//! Double shuffle relations: the Y-algebra with its coproduct `Δ_*`,
//! stuffle combinatorics, and the regularized `l`-values.

mod index;
mod regularize;
mod tpoly;
mod yalg;

pub use index::{enumerate_sh_leq, stuffle_indices, IndexPair};
pub use regularize::{
    check_dmr_normalizations, l_coeff, l_i, l_s, regularization_check, stuffle_defect, LMap,
    NormalizationCheck, RegularizationCheck, SeriesRegularization,
};
pub use tpoly::TPoly;
pub use yalg::{
    delta_star, embed_y, h_corr, h_star, pi_y, residual_double_shuffle, DoubleShuffleResidual,
};

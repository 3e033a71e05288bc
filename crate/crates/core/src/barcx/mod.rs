//! Reduced bar complexes of the four- and five-point spaces: one-forms, bar
//! tensors, the Orlik–Solomon cocycle condition, the pairing with the dual
//! enveloping algebras, polylogarithm bar elements, pullbacks and the
//! functional identities used for the double shuffle relations.

mod forms;
mod lemmas;
mod mpl;
mod os;
mod pullback;
mod tensor;

pub use forms::{form_alphabet, m04, m05, symbols, wn, OneForm, Space};
pub use lemmas::{
    series_shuffle_bar_check, verify_lemma, verify_lemma_up_to, Lemma, LemmaContext, LemmaIdentity,
    LemmaReport, ShuffleBarReport,
};
pub use mpl::{
    build_l_in, build_l_onevar, build_l_onevar_by_recursion, build_l_twovar, build_l_twovar_yx, swap_xy,
    MplVar,
};
pub use os::{
    certify, d2_residual, dual_presentation, pair, pair_on_lift, xy_to_z, z_to_xy, Certificate, D2Residual,
    OSAlgebra,
};
pub use pullback::{algebra_map, form_table, pullback, PullbackTag, ALL_TAGS};
pub use tensor::BarTensor;

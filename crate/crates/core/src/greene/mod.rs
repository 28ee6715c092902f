//! Greene-type oracles: the brute-force maxima `g_k` and `h_k`, and the
//! executable chain rearrangements showing they coincide.

pub mod appendix;
pub mod brute;

pub use appendix::{
    check_layers, check_offdiag, family_to_diagram, layers_decompose, maximalize,
    random_matrix_family, straighten, twist,
};
pub use brute::{brute_g_k, brute_h_k, optimal_ne_chains};

//! Exact integer and rational linear algebra.

mod matrix;
mod order;
pub mod poly;
mod rank;
mod smith;

pub use matrix::IntegerMatrix;
pub use order::{matrix_order, InfiniteOrderCertificate, MatrixOrder};
pub use rank::{coinvariant_rank, invariant_rank, rank_bareiss, rank_multimodular};
pub use smith::{
    cokernel_invariants, smith_invariant_factors, smith_left_transform, smith_normal_form,
    AbelianInvariants, SmithDecomposition,
};

//! Sparse tensors over labeled bases, finite-dimensional algebras given by
//! structure constants, and the exact linear algebra used to reason about
//! them.

pub mod algebra;
pub mod frame;
pub mod linalg;
pub mod subbasis;
pub mod tensor;

pub use algebra::{
    apply_each, contract, invert_element, power_of, Piece, mul_all, mul_in, render, unit_in, verify_algebra, verify_algebra_map, AlgRef,
    BasisLabel, FinAlgebra, LinMap,
};
pub use frame::Frame;
pub use linalg::{Echelon, Insert, SparseVec};
pub use subbasis::SubBasis;
pub use tensor::{Key, Tensor};

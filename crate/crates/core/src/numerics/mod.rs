//! Exact rational scalars and the small dense linear algebra used throughout:
//! rank, nullspace, canonical subspaces and orthogonal complements.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::Matrix;
pub use scalar::{
    check_probability_vector, dot, format_scalar, format_vector, int, is_probability_vector, one,
    parse_scalar, parse_vector, ratio, sum, zero, Scalar,
};
pub use subspace::{subspace_contains, Subspace};

pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

pub fn nullspace(m: &Matrix) -> Subspace {
    m.nullspace()
}

pub fn orthogonal_complement(s: &Subspace) -> Subspace {
    s.orthogonal_complement()
}

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Linear subspace of ℚⁿ held in canonical form: the nonzero rows of the
/// reduced row echelon form of any spanning set. Two subspaces are equal iff
/// their canonical bases are identical, so `PartialEq` is subspace equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        let stacked = Matrix::from_rows(vectors, ambient_dim)?;
        let (r, pivots) = stacked.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim).to_rows(),
        }
    }

    /// `{d : Σ d = 0}`.
    pub fn zero_sum_hyperplane(ambient_dim: usize) -> Self {
        let ones = Matrix::from_rows(vec![vec![Scalar::one(); ambient_dim]], ambient_dim)
            .expect("row has ambient length");
        ones.nullspace()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient_dim
            )));
        }
        // Reduce v against the RREF basis; v is in the span iff nothing remains.
        let mut rest = v.to_vec();
        for row in &self.basis {
            let pivot = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("basis rows are nonzero");
            if rest[pivot].is_zero() {
                continue;
            }
            let f = rest[pivot].clone();
            for (r, b) in rest.iter_mut().zip(row) {
                *r -= &f * b;
            }
        }
        Ok(rest.iter().all(Zero::is_zero))
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        if other.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        for v in &other.basis {
            if !self.contains_vector(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn orthogonal_complement(&self) -> Subspace {
        let m = Matrix::from_rows(self.basis.clone(), self.ambient_dim)
            .expect("basis vectors have ambient length");
        m.nullspace()
    }

    /// Basis vectors stacked as rows.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.basis.clone(), self.ambient_dim).expect("basis has ambient length")
    }
}

/// Free-function form of [`Subspace::contains`].
pub fn subspace_contains(a: &Subspace, b: &Subspace) -> Result<bool> {
    a.contains(b)
}

use num_rational::BigRational;

use super::Lattice;
use crate::arith::{signature_of, RatMatrix};
use crate::error::{Error, Result};

/// A subspace of `ambient ⊗ Q` spanned by linearly independent rational
/// rows (ambient coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSubspace {
    ambient: Lattice,
    spanning: RatMatrix,
}

impl RationalSubspace {
    pub fn new(ambient: Lattice, spanning: RatMatrix) -> Result<Self> {
        if spanning.rows() > 0 && spanning.cols() != ambient.rank() {
            return Err(Error::Dimension("spanning vectors do not live in the ambient".into()));
        }
        if spanning.rank() != spanning.rows() {
            return Err(Error::DependentSpan);
        }
        Ok(Self { ambient, spanning })
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn spanning(&self) -> &RatMatrix {
        &self.spanning
    }

    pub fn dim(&self) -> usize {
        self.spanning.rows()
    }

    /// `spanning · G · spanningᵀ`, exactly.
    pub fn restricted_gram(&self) -> RatMatrix {
        self.spanning.mul(&self.ambient.gram().to_rat()).mul(&self.spanning.transpose())
    }

    pub fn is_positive(&self) -> bool {
        let s = signature_of(&self.restricted_gram());
        s.pos == self.dim()
    }

    pub fn contains(&self, v: &[BigRational]) -> Result<bool> {
        Ok(super::solve_in_span(&self.spanning, v)?.is_some())
    }
}

//! Short vectors, roots, and bounded box searches.

mod boxsearch;
mod fincke_pohst;
mod lll;

pub use boxsearch::{
    box_vectors_of_norm, box_vectors_of_norm_capped, first_box_vector_of_norm, value_order, BOX_NODE_CAP,
};
pub use fincke_pohst::{roots, roots_capped, short_vectors, short_vectors_capped, NODE_CAP};
pub use lll::{is_positive_definite_gram, lll_gram};

use alloc::vec::Vec;

use crate::arith::{canonical_sign, clear_denominators, int_kernel, IntMatrix, IntVec};
use crate::error::{Error, Result};
use crate::lattice::{sublattice, Lattice, RationalSubspace};

/// The (−2)-vectors of `P^⊥ ∩ L`, in ambient coordinates, canonical sign,
/// sorted. Requires the complement to be negative definite.
pub fn roots_in_complement(p: &RationalSubspace) -> Result<Vec<IntVec>> {
    roots_in_complement_capped(p, NODE_CAP)
}

pub fn roots_in_complement_capped(p: &RationalSubspace, cap: u64) -> Result<Vec<IntVec>> {
    let c = complement_lattice(p)?;
    if c.rank() > 0 && !c.is_negative_definite() {
        return Err(Error::ComplementNotDefinite);
    }
    let b = c.basis_int()?;
    let mut out: Vec<IntVec> = roots_capped(&c, cap)?
        .into_iter()
        .map(|r| {
            let mut v = b.vec_mul(&r);
            canonical_sign(&mut v);
            v
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// `P^⊥ ∩ L` as a sublattice of the ambient of `P`.
pub fn complement_lattice(p: &RationalSubspace) -> Result<Lattice> {
    let amb = p.ambient();
    if !amb.is_nondegenerate() {
        return Err(Error::DegenerateInput("ambient lattice is degenerate".into()));
    }
    let n = amb.rank();
    if p.dim() == 0 {
        return sublattice(amb, &IntMatrix::identity(n));
    }
    let rows: Vec<IntVec> = p.spanning().row_vecs().iter().map(|r| clear_denominators(r).0).collect();
    let span = IntMatrix::from_rows(rows, n);
    let k = int_kernel(&amb.gram().mul(&span.transpose()));
    sublattice(amb, &k)
}

//! Finite groups of isometries acting on a lattice.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::arith::{int_kernel, IntMatrix, RatMatrix};
use crate::error::{Error, Result};
use crate::lattice::{is_primitive_sublattice, orth_complement, sublattice, Lattice};

/// Default bound on the group order for [`closure`].
pub const CLOSURE_CAP: u64 = 1_000_000;

/// Generators act on row vectors: `x ↦ x·g`, so `g·G·gᵀ = G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    lattice: Lattice,
    generators: Vec<IntMatrix>,
}

impl GroupAction {
    pub fn new(lattice: Lattice, generators: Vec<IntMatrix>) -> Result<Self> {
        let n = lattice.rank();
        for g in &generators {
            if g.rows() != n || g.cols() != n {
                return Err(Error::Dimension("generator size differs from lattice rank".into()));
            }
            if !g.det().abs().is_one() || &g.mul(lattice.gram()).mul(&g.transpose()) != lattice.gram() {
                return Err(Error::NotIsometry);
            }
        }
        Ok(Self { lattice, generators })
    }

    pub fn trivial(lattice: Lattice) -> Self {
        Self { lattice, generators: Vec::new() }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }
}

/// All group elements, sorted by their entries.
pub fn closure(a: &GroupAction, cap: u64) -> Result<Vec<IntMatrix>> {
    let id = IntMatrix::identity(a.lattice.rank());
    let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut out = alloc::vec![id.clone()];
    seen.insert(id.entries().to_vec());
    let mut queue = VecDeque::from([id]);
    while let Some(h) = queue.pop_front() {
        for g in &a.generators {
            let p = h.mul(g);
            if seen.insert(p.entries().to_vec()) {
                if seen.len() as u64 > cap {
                    return Err(Error::ResourceCap { what: "group order", cap });
                }
                out.push(p.clone());
                queue.push_back(p);
            }
        }
    }
    out.sort_by(|x, y| x.entries().cmp(y.entries()));
    Ok(out)
}

/// `L^G`: vectors fixed by every generator, as a sublattice of the action's
/// lattice.
pub fn invariant_lattice(a: &GroupAction) -> Result<Lattice> {
    let n = a.lattice.rank();
    if a.generators.is_empty() {
        return sublattice(&a.lattice, &IntMatrix::identity(n));
    }
    let id = IntMatrix::identity(n);
    let mut m = IntMatrix::zeros(n, 0);
    for g in &a.generators {
        m = m.hstack(&g.sub(&id));
    }
    sublattice(&a.lattice, &int_kernel(&m))
}

/// `L_G = (L^G)^⊥`.
pub fn coinvariant_lattice(a: &GroupAction) -> Result<Lattice> {
    let inv = invariant_lattice(a)?;
    if !inv.is_nondegenerate() {
        return Err(Error::DegenerateInput("invariant lattice is degenerate".into()));
    }
    orth_complement(&inv)
}

/// The matrix of `g` restricted to a `g`-stable sublattice, in its own
/// coordinates: `B·g = g_S·B`.
pub fn restrict(g: &IntMatrix, s: &Lattice) -> Result<IntMatrix> {
    let b = s.basis().ok_or(Error::NoAmbient)?;
    let img = b.mul_int(g);
    let mut rows = Vec::with_capacity(b.rows());
    for i in 0..b.rows() {
        let x = s.coordinates_of(img.row(i))?.ok_or(Error::NotStable)?;
        rows.push(x);
    }
    RatMatrix::from_rows(rows, b.rows()).to_int().ok_or(Error::NotStable)
}

/// Whether every generator acts trivially on `S*/S` for a `G`-stable
/// sublattice `S` of the action's lattice.
pub fn disc_action_is_trivial(a: &GroupAction, s: &Lattice) -> Result<bool> {
    if !s.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    if s.rank() == 0 {
        for g in &a.generators {
            restrict(g, s)?;
        }
        return Ok(true);
    }
    let dual = s.gram().to_rat().inverse()?;
    let id = IntMatrix::identity(s.rank());
    let mut trivial = true;
    for g in &a.generators {
        let gs = restrict(g, s)?;
        // Dual basis rows y must satisfy y·(g_S − I) ∈ Z^r.
        if !dual.mul_int(&gs.sub(&id)).is_integral() {
            trivial = false;
        }
    }
    Ok(trivial)
}

/// Extends an action on a sublattice `S` (the action's lattice, which must
/// be embedded) by the identity on `S^⊥`, to the ambient of `S`.
pub fn extend_by_identity(a: &GroupAction) -> Result<GroupAction> {
    let s = &a.lattice;
    let amb = s.ambient().ok_or(Error::NoAmbient)?;
    if !s.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    if !is_primitive_sublattice(s)? {
        return Err(Error::Precondition("sublattice is not primitive".into()));
    }
    let perp = orth_complement(s)?;
    if !perp.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let bs = s.basis().ok_or(Error::NoAmbient)?;
    let bp = perp.basis().ok_or(Error::NoAmbient)?;
    let c = bs.vstack(bp);
    let c_inv = c.inverse()?;
    let (r, n) = (s.rank(), amb.rank());
    let mut gens = Vec::with_capacity(a.generators.len());
    for g in &a.generators {
        let block = g.block_diag(&IntMatrix::identity(n - r)).to_rat();
        let ext = c_inv.mul(&block).mul(&c).to_int().ok_or(Error::NotIntegral)?;
        gens.push(ext);
    }
    GroupAction::new(amb.clone(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int_vec;
    use crate::catalog;
    use crate::lattice::{direct_sum, whole};

    fn a1a1() -> Lattice {
        direct_sum(&catalog::a1_neg(), &catalog::a1_neg())
    }

    fn swap() -> IntMatrix {
        IntMatrix::from_i64(&[&[0, 1], &[1, 0]])
    }

    #[test]
    fn closures() {
        let l = a1a1();
        assert_eq!(
            closure(&GroupAction::trivial(l.clone()), CLOSURE_CAP).unwrap(),
            alloc::vec![IntMatrix::identity(2)]
        );
        let m = GroupAction::new(l.clone(), alloc::vec![IntMatrix::identity(2).neg()]).unwrap();
        assert_eq!(
            closure(&m, CLOSURE_CAP).unwrap(),
            alloc::vec![IntMatrix::identity(2).neg(), IntMatrix::identity(2)]
        );
        let s = GroupAction::new(l.clone(), alloc::vec![swap()]).unwrap();
        assert_eq!(closure(&s, CLOSURE_CAP).unwrap().len(), 2);
        assert!(matches!(closure(&s, 1), Err(Error::ResourceCap { .. })));
        assert_eq!(GroupAction::new(l, alloc::vec![IntMatrix::from_i64(&[&[1, 1], &[0, 1]])]), Err(Error::NotIsometry));
    }

    #[test]
    fn invariants_of_small_actions() {
        let l = a1a1();
        let t = GroupAction::trivial(l.clone());
        assert_eq!(invariant_lattice(&t).unwrap().rank(), 2);
        assert_eq!(coinvariant_lattice(&t).unwrap().rank(), 0);
        let m = GroupAction::new(l.clone(), alloc::vec![IntMatrix::identity(2).neg()]).unwrap();
        assert_eq!(invariant_lattice(&m).unwrap().rank(), 0);
        assert_eq!(coinvariant_lattice(&m).unwrap().rank(), 2);
        let s = GroupAction::new(l, alloc::vec![swap()]).unwrap();
        assert_eq!(invariant_lattice(&s).unwrap().basis_int().unwrap().row_vecs(), alloc::vec![int_vec(&[1, 1])]);
        assert_eq!(coinvariant_lattice(&s).unwrap().basis_int().unwrap().row_vecs(), alloc::vec![int_vec(&[1, -1])]);
    }

    #[test]
    fn leech_permutation_ranks() {
        for (name, inv) in [("1^8 2^8", 16), ("1^6 3^6", 12)] {
            let g = catalog::perm_isometry_on_leech(&catalog::curated_permutation(name).unwrap()).unwrap();
            let a = GroupAction::new(catalog::leech(), alloc::vec![g]).unwrap();
            let fixed = invariant_lattice(&a).unwrap();
            let co = coinvariant_lattice(&a).unwrap();
            assert_eq!(fixed.rank(), inv);
            assert_eq!(co.rank(), 24 - inv);
            assert!(disc_action_is_trivial(&a, &co).unwrap());
        }
    }

    #[test]
    fn discriminant_actions() {
        let a1 = catalog::a1_neg();
        let m = GroupAction::new(a1.clone(), alloc::vec![IntMatrix::identity(1).neg()]).unwrap();
        assert!(disc_action_is_trivial(&m, &whole(&a1)).unwrap());
        let a2 = Lattice::from_gram(IntMatrix::from_i64(&[&[-2, 1], &[1, -2]])).unwrap();
        let m = GroupAction::new(a2.clone(), alloc::vec![IntMatrix::identity(2).neg()]).unwrap();
        assert!(!disc_action_is_trivial(&m, &whole(&a2)).unwrap());
        // ⟨e₁⟩ is not stable under the swap.
        let l = a1a1();
        let s = GroupAction::new(l.clone(), alloc::vec![swap()]).unwrap();
        let e1 = sublattice(&l, &IntMatrix::from_i64(&[&[1, 0]])).unwrap();
        assert_eq!(disc_action_is_trivial(&s, &e1), Err(Error::NotStable));
    }

    #[test]
    fn extension_by_identity() {
        let l = a1a1();
        let anti = sublattice(&l, &IntMatrix::from_i64(&[&[1, -1]])).unwrap();
        let minus = GroupAction::new(anti.clone(), alloc::vec![IntMatrix::identity(1).neg()]).unwrap();
        let ext = extend_by_identity(&minus).unwrap();
        assert_eq!(ext.generators(), &[swap()]);
        let id = GroupAction::new(anti, alloc::vec![IntMatrix::identity(1)]).unwrap();
        assert_eq!(extend_by_identity(&id).unwrap().generators(), &[IntMatrix::identity(2)]);
        // A primitive A2(−1) spanned by two adjacent simple roots of E8(−1).
        let e8 = catalog::e8_neg();
        let mut rows = [[0i64; 8]; 2];
        let (i, j) = (0..8)
            .flat_map(|i| (0..8).map(move |j| (i, j)))
            .find(|&(i, j)| i < j && e8.gram()[(i, j)] == BigInt::from(1))
            .unwrap();
        rows[0][i] = 1;
        rows[1][j] = 1;
        let a2 = sublattice(&e8, &IntMatrix::from_i64(&[&rows[0], &rows[1]])).unwrap();
        let m = GroupAction::new(a2, alloc::vec![IntMatrix::identity(2).neg()]).unwrap();
        assert_eq!(extend_by_identity(&m), Err(Error::NotIntegral));
    }

    #[test]
    fn extension_restricts_back() {
        let g = catalog::perm_isometry_on_leech(&catalog::curated_permutation("1^8 2^8").unwrap()).unwrap();
        let a = GroupAction::new(catalog::leech(), alloc::vec![g.clone()]).unwrap();
        let co = coinvariant_lattice(&a).unwrap();
        let gs = restrict(&g, &co).unwrap();
        let on_co = GroupAction::new(co.clone(), alloc::vec![gs.clone()]).unwrap();
        let ext = extend_by_identity(&on_co).unwrap();
        assert_eq!(ext.generators(), &[g]);
        assert_eq!(restrict(&ext.generators()[0], &co).unwrap(), gs);
    }
}

use alloc::vec::Vec;

use crate::arith::IntMatrix;
use crate::enumerate::{roots_in_complement_capped, NODE_CAP};
use crate::error::Result;
use crate::group::{closure, coinvariant_lattice, disc_action_is_trivial, invariant_lattice, GroupAction};
use crate::lattice::RationalSubspace;

use super::{ell_of, precondition, require_leech, require_mukai_like, root_count, Certificate, Evidence, Kind};

/// Group order bound for the `−id` membership test.
const MINUS_ID_CAP: u64 = 10_000;

/// Rank of `N^G` at least four, for a group acting on the Leech lattice.
pub fn thm1_condition_ii(a: &GroupAction) -> Result<Certificate> {
    require_leech(a.lattice())?;
    let inv = invariant_lattice(a)?;
    let co = coinvariant_lattice(a)?;
    let roots = root_count(&co, NODE_CAP)?;
    let mut c = Certificate::new(Kind::Thm1Ii);
    c.put("rank_invariant", Evidence::int(inv.rank() as u64));
    c.put("rank_coinvariant", Evidence::int(co.rank() as u64));
    c.put("coinvariant_roots", Evidence::int(roots as u64));
    c.put("ell_coinvariant", Evidence::int(ell_of(&co)? as u64));
    c.put("disc_action_trivial", Evidence::Bool(disc_action_is_trivial(a, &co)?));
    let minus = IntMatrix::identity(24).neg();
    let mut notes = Vec::new();
    let contains = match closure(a, MINUS_ID_CAP) {
        Ok(elems) => {
            let has = elems.contains(&minus);
            if has {
                notes.push(Evidence::text("contains -id"));
            }
            Evidence::Bool(has)
        }
        Err(crate::Error::ResourceCap { .. }) => Evidence::text("undetermined"),
        Err(e) => return Err(e),
    };
    c.put("contains_minus_identity", contains);
    c.put("notes", Evidence::List(notes));
    c.pass = inv.rank() >= 4;
    Ok(c)
}

/// The four clauses about `Λ_G` for a group fixing a positive four-space
/// `Π` whose orthogonal complement has no roots.
pub fn lemma_standard_check(a: &GroupAction, pi: &RationalSubspace) -> Result<Certificate> {
    let amb = a.lattice();
    require_mukai_like(amb)?;
    if pi.ambient().gram() != amb.gram() {
        return Err(precondition("the subspace lives in a different lattice"));
    }
    if pi.dim() != 4 || !pi.is_positive() {
        return Err(precondition("the subspace must be a positive four-space"));
    }
    for g in a.generators() {
        if &pi.spanning().mul_int(g) != pi.spanning() {
            return Err(precondition("a generator moves the subspace"));
        }
    }
    if !roots_in_complement_capped(pi, NODE_CAP)?.is_empty() {
        return Err(precondition("the orthogonal complement of the subspace contains a root"));
    }
    let co = coinvariant_lattice(a)?;
    let rk = co.rank();
    let negdef = rk == 0 || co.is_negative_definite();
    let roots = if negdef { root_count(&co, NODE_CAP)? } else { 0 };
    let ell = ell_of(&co)?;
    let trivial = disc_action_is_trivial(a, &co)?;
    let mut c = Certificate::new(Kind::Lemma);
    c.put("rank_coinvariant", Evidence::int(rk as u64));
    c.put("ell_coinvariant", Evidence::int(ell as u64));
    c.put("coinvariant_roots", Evidence::int(roots as u64));
    let clauses = [
        ("negative_definite", negdef && rk <= 20),
        ("root_free", negdef && roots == 0),
        ("disc_action_trivial", trivial),
        ("ell_bound", ell + rk <= 24),
    ];
    for (k, v) in clauses {
        c.put(k, Evidence::Bool(v));
    }
    c.pass = clauses.iter().all(|(_, v)| *v);
    Ok(c)
}

//! Independent re-derivation of certificate evidence.
//!
//! Each verifier returns the evidence keys whose recorded value disagrees
//! with a fresh computation; an empty list means the certificate checks.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{int_kernel, IntMatrix};
use crate::catalog::{self, MUKAI_R, MUKAI_S};
use crate::disc::{disc_form, ell};
use crate::embed::{embedding_report, nikulin_existence};
use crate::enumerate::{is_positive_definite_gram, roots_in_complement, NODE_CAP};
use crate::error::Result;
use crate::group::{coinvariant_lattice, disc_action_is_trivial, invariant_lattice, restrict, GroupAction};
use crate::lattice::{direct_sum, saturation_index, sublattice, Lattice, RationalSubspace};

use super::{root_count, Certificate, Evidence};

type Mismatches = Vec<&'static str>;

fn check_int(c: &Certificate, key: &'static str, want: impl Into<BigInt>, out: &mut Mismatches) {
    if c.int(key) != Some(&want.into()) {
        out.push(key);
    }
}

fn check_flag(c: &Certificate, key: &'static str, want: bool, out: &mut Mismatches) {
    if c.flag(key) != Some(want) {
        out.push(key);
    }
}

fn ell_abstract(l: &Lattice) -> Result<usize> {
    if l.rank() == 0 {
        return Ok(0);
    }
    Ok(ell(&disc_form(&l.to_abstract())?))
}

/// Rank of the fixed lattice as the kernel of the stacked `g − I`.
fn fixed_rank(a: &GroupAction) -> usize {
    let n = a.lattice().rank();
    let id = IntMatrix::identity(n);
    let mut m = IntMatrix::zeros(n, 0);
    for g in a.generators() {
        m = m.hstack(&g.sub(&id));
    }
    if m.cols() == 0 {
        n
    } else {
        int_kernel(&m).rows()
    }
}

pub fn verify_thm1(a: &GroupAction, c: &Certificate) -> Result<Mismatches> {
    let mut out = Vec::new();
    let rk = fixed_rank(a);
    let co = coinvariant_lattice(a)?;
    check_int(c, "rank_invariant", rk as u64, &mut out);
    check_int(c, "rank_coinvariant", (24 - rk) as u64, &mut out);
    check_int(c, "coinvariant_roots", root_count(&co, NODE_CAP)? as u64, &mut out);
    check_int(c, "ell_coinvariant", ell_abstract(&co)? as u64, &mut out);
    check_flag(c, "disc_action_trivial", disc_action_is_trivial(a, &co)?, &mut out);
    if c.pass != (rk >= 4) {
        out.push("pass");
    }
    Ok(out)
}

pub fn verify_lemma(a: &GroupAction, pi: &RationalSubspace, c: &Certificate) -> Result<Mismatches> {
    let mut out = Vec::new();
    let co = coinvariant_lattice(a)?;
    let rk = co.rank();
    let negdef = rk == 0 || is_positive_definite_gram(&co.gram().neg());
    let roots = if negdef { root_count(&co, NODE_CAP)? } else { 0 };
    let l = ell_abstract(&co)?;
    check_int(c, "rank_coinvariant", rk as u64, &mut out);
    check_int(c, "ell_coinvariant", l as u64, &mut out);
    check_int(c, "coinvariant_roots", roots as u64, &mut out);
    let clauses = [
        ("negative_definite", negdef && rk <= 20),
        ("root_free", negdef && roots == 0),
        ("disc_action_trivial", disc_action_is_trivial(a, &co)?),
        ("ell_bound", l + rk <= 24),
    ];
    for (k, v) in clauses {
        check_flag(c, k, v, &mut out);
    }
    if c.pass != clauses.iter().all(|(_, v)| *v) {
        out.push("pass");
    }
    if !roots_in_complement(pi)?.is_empty() {
        out.push("pi");
    }
    Ok(out)
}

pub fn verify_ghv_forward(lg: &Lattice, c: &Certificate) -> Result<Mismatches> {
    let mut out = Vec::new();
    let lg = lg.to_abstract();
    let rk = lg.rank();
    let l = ell_abstract(&lg)?;
    check_int(c, "rank", rk as u64, &mut out);
    check_int(c, "ell", l as u64, &mut out);
    check_flag(c, "weak_inequality", l + rk <= 24, &mut out);
    check_flag(c, "strong_inequality", l + rk < 24, &mut out);
    let v = nikulin_existence(&direct_sum(&lg, &catalog::a1_neg()), (1, 25))?;
    if c.get("nikulin_gamma") != Some(&Evidence::verdict(&v)) {
        out.push("nikulin_gamma");
    }
    let mut witness = false;
    if let Some(s) = c.get("leech_search") {
        if let Some(m) = s.get("map") {
            let leech = catalog::make("Leech")?;
            match m.as_int_matrix(24) {
                Some(map) => {
                    let w = crate::embed::EmbeddingWitness { map, primitive: true };
                    let (gram_ok, sat) = embedding_report(&w, &lg, &leech);
                    if !gram_ok || Some(sat) != s.get("primitive").and_then(Evidence::as_bool) {
                        out.push("leech_search");
                    }
                    witness = gram_ok && sat;
                }
                None => out.push("leech_search"),
            }
        }
    } else {
        out.push("leech_search");
    }
    let want = witness || v.status == crate::embed::Status::Guaranteed;
    if c.pass != want {
        out.push("pass");
    }
    Ok(out)
}

pub fn verify_ghv_converse(a: &GroupAction, c: &Certificate) -> Result<Mismatches> {
    let mut out = Vec::new();
    let rk = fixed_rank(a);
    let co = coinvariant_lattice(a)?;
    check_int(c, "rank_invariant", rk as u64, &mut out);
    check_int(c, "rank_coinvariant", co.rank() as u64, &mut out);
    check_int(c, "coinvariant_roots", root_count(&co, NODE_CAP)? as u64, &mut out);
    check_int(c, "ell_coinvariant", ell_abstract(&co)? as u64, &mut out);
    let Some(gram) = c.get("ambient_gram").and_then(|e| e.as_int_matrix(24)) else {
        out.push("ambient_gram");
        return Ok(out);
    };
    let amb = Lattice::from_gram(gram)?;
    let s = amb.signature();
    if !amb.is_even() || !amb.det().abs().is_one() || (s.pos, s.neg) != (4, 20) {
        out.push("ambient_gram");
    }
    let gens: Vec<IntMatrix> = match c.get("extended_generators").and_then(Evidence::as_list) {
        Some(l) => l.iter().filter_map(|g| g.as_int_matrix(24)).collect(),
        None => Vec::new(),
    };
    if gens.len() != a.generators().len() {
        out.push("extended_generators");
        return Ok(out);
    }
    let ext = match GroupAction::new(amb.clone(), gens) {
        Ok(e) => e,
        Err(_) => {
            out.push("extended_generators");
            return Ok(out);
        }
    };
    let ext_co = coinvariant_lattice(&ext)?;
    if ext_co.rank() != co.rank() || invariant_lattice(&ext)?.rank() != 24 - co.rank() {
        out.push("extended_generators");
    }
    if let Some(b) = c.get("coinvariant_basis").and_then(|e| e.as_rat_matrix(24)) {
        let s = Lattice::embedded(&amb, b)?;
        if s.gram() != co.gram() {
            out.push("coinvariant_basis");
        }
        for (g, h) in a.generators().iter().zip(ext.generators()) {
            if restrict(h, &s).ok() != restrict(g, &co).ok() {
                out.push("extended_generators");
            }
        }
    } else if co.rank() > 0 {
        out.push("coinvariant_basis");
    }
    match c.get("pi").and_then(|e| e.as_rat_matrix(24)) {
        Some(p) => {
            let sub = RationalSubspace::new(amb, p.clone())?;
            let fixed = ext.generators().iter().all(|g| p.mul_int(g) == p);
            if !fixed || sub.dim() != 4 || !sub.is_positive() || !roots_in_complement(&sub)?.is_empty() {
                out.push("pi");
            }
            if !c.pass {
                out.push("pass");
            }
        }
        None => {
            if c.pass {
                out.push("pass");
            }
        }
    }
    Ok(out)
}

pub fn verify_star(l: &Lattice, c: &Certificate) -> Result<Mismatches> {
    let mut out = Vec::new();
    let primitive = saturation_index(l)?.is_one();
    let pd = is_positive_definite_gram(l.gram());
    // ℓ(A_L) from the discriminant form, against d₁ from the Smith form.
    let l_ell = if l.is_even() && l.is_nondegenerate() { Some(ell(&disc_form(&l.to_abstract())?)) } else { None };
    check_flag(c, "primitive", primitive, &mut out);
    check_flag(c, "positive_definite", pd, &mut out);
    if let Some(e) = l_ell {
        check_int(c, "ell", e as u64, &mut out);
    }
    let d1_one =
        c.get("snf").and_then(Evidence::as_list).and_then(|s| s.first()).and_then(Evidence::as_int).map(|d| d.is_one());
    if let (Some(d1), Some(e)) = (d1_one, l_ell) {
        if d1 != (e < 3) {
            out.push("snf");
        }
    }
    let want = primitive && pd && d1_one == Some(true);
    if c.pass != want {
        out.push("pass");
    }
    if c.pass {
        let ok = c
            .get("dual_primitive_vector")
            .and_then(Evidence::as_list)
            .map(|v| v.iter().filter_map(|x| x.as_int().cloned()).collect::<Vec<_>>())
            .filter(|v| v.len() == 3)
            .is_some_and(|v| crate::lattice::is_primitive_in_dual(&v, l).unwrap_or(false));
        if !ok {
            out.push("dual_primitive_vector");
        }
    }
    Ok(out)
}

pub fn verify_period(ng: &Lattice, c: &Certificate) -> Result<Mismatches> {
    let mut out = Vec::new();
    let mukai = catalog::make("Mukai")?;
    let ngb = ng.basis_int()?;
    let orth_ng = |v: &[BigInt]| (0..ngb.rows()).all(|i| mukai.inner(ngb.row(i), v).is_zero());
    let Some(l1b) = c.get("l1_basis").and_then(|e| e.as_int_matrix(24)) else {
        out.push("l1_basis");
        return Ok(out);
    };
    let l1 = sublattice(&mukai, &l1b)?;
    let in_k3 = (0..l1b.rows()).all(|i| l1b[(i, MUKAI_R)].is_zero() && l1b[(i, MUKAI_S)].is_zero());
    let l1_ok = l1b.rows() == 2
        && in_k3
        && (0..2).all(|i| orth_ng(l1b.row(i)))
        && is_positive_definite_gram(l1.gram())
        && saturation_index(&l1)?.is_one();
    if !l1_ok {
        out.push("l1_basis");
    }
    if c.get("l1_gram").and_then(|e| e.as_int_matrix(2)).as_ref() != Some(&l1b.mul(mukai.gram()).mul(&l1b.transpose()))
    {
        out.push("l1_gram");
    }
    match c.get("pi").and_then(|e| e.as_rat_matrix(24)) {
        Some(p) => {
            let sub = RationalSubspace::new(mukai.clone(), p.clone())?;
            let g = mukai.gram().to_rat();
            let perp_ng = p.mul(&g).mul(&ngb.to_rat().transpose()).entries().iter().all(Zero::is_zero);
            let l1_rows = (0..2).all(|i| sub.contains(l1b.to_rat().row(i)).unwrap_or(false));
            if sub.dim() != 4 || !sub.is_positive() || !perp_ng || !l1_rows || !roots_in_complement(&sub)?.is_empty() {
                out.push("pi");
            }
        }
        None => out.push("pi"),
    }
    let alpha: Option<Vec<BigInt>> = c
        .get("ample_class")
        .and_then(Evidence::as_list)
        .map(|v| v.iter().filter_map(|x| x.as_int().cloned()).collect());
    match alpha {
        Some(a) if a.len() == 24 => {
            let norm = mukai.norm(&a);
            let ok = norm.is_positive()
                && a[MUKAI_R].is_zero()
                && a[MUKAI_S].is_zero()
                && (0..2).all(|i| mukai.inner(l1b.row(i), &a).is_zero());
            if !ok {
                out.push("ample_class");
            }
            check_int(c, "ample_norm", norm, &mut out);
        }
        _ => out.push("ample_class"),
    }
    if !c.pass {
        out.push("pass");
    }
    Ok(out)
}

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{hnf, lcm_denominators, IntMatrix, RatMatrix};
use crate::catalog;
use crate::disc::{disc_form, disc_form_with_generators, find_iso_form_small, negate, ISO_CAP};
use crate::embed::{nikulin_existence, orthogonal_partner_spec, search_embedding_stats, EmbeddingWitness, Status};
use crate::enumerate::NODE_CAP;
use crate::error::{Error, Result};
use crate::group::{coinvariant_lattice, extend_by_identity, invariant_lattice, restrict, GroupAction};
use crate::lattice::{direct_sum, direct_sum_all, orth_complement, whole, Lattice, RationalSubspace};

use super::search::{find_root_free_positive_space, no_rows};
use super::{ell_of, precondition, root_count, thm1_condition_ii, Bounds, Certificate, Evidence, Kind};

/// Largest `rk Λ_G` for which the forward pipeline searches the Leech
/// lattice directly.
pub const FORWARD_SEARCH_RANK: usize = 8;

/// Evidence for a primitive embedding `Λ_G ↪ N` into the Leech lattice.
pub fn ghv_forward(lg: &Lattice, bounds: &Bounds) -> Result<Certificate> {
    ghv_forward_with_limit(lg, bounds, FORWARD_SEARCH_RANK)
}

pub fn ghv_forward_with_limit(lg: &Lattice, bounds: &Bounds, search_rank: usize) -> Result<Certificate> {
    let lg = lg.to_abstract();
    let rk = lg.rank();
    if rk > 0 && !lg.is_negative_definite() {
        return Err(precondition("lattice must be negative definite"));
    }
    if !lg.is_even() {
        return Err(precondition("lattice must be even"));
    }
    if rk > 20 {
        return Err(precondition("rank exceeds 20"));
    }
    if root_count(&lg, NODE_CAP)? > 0 {
        return Err(precondition("lattice contains a root"));
    }
    let ell = ell_of(&lg)?;
    if ell + rk > 24 {
        return Err(precondition("discriminant needs more than 24 - rank generators"));
    }
    let mut c = Certificate::new(Kind::GhvForward);
    c.put("rank", Evidence::int(rk as u64));
    c.put("ell", Evidence::int(ell as u64));
    c.put("weak_inequality", Evidence::Bool(ell + rk <= 24));
    c.put("strong_inequality", Evidence::Bool(ell + rk < 24));
    let primed = direct_sum(&lg, &catalog::a1_neg());
    let verdict = nikulin_existence(&primed, (1, 25))?;
    c.put("nikulin_gamma", Evidence::verdict(&verdict));
    let mut witness_found = false;
    let mut search = BTreeMap::new();
    search.insert("rank_limit".into(), Evidence::int(search_rank as u64));
    if rk <= search_rank {
        match search_embedding_stats(&lg, &catalog::make("Leech")?, bounds.cap) {
            Ok(r) => {
                search.insert("nodes".into(), Evidence::int(r.nodes));
                match r.witness {
                    Some(w) => {
                        witness_found = w.primitive;
                        search.insert("status".into(), Evidence::text("found"));
                        search.insert("map".into(), Evidence::int_matrix(&w.map));
                        search.insert("primitive".into(), Evidence::Bool(w.primitive));
                    }
                    None => {
                        search.insert("status".into(), Evidence::text("none"));
                    }
                }
            }
            Err(Error::ResourceCap { .. }) => {
                search.insert("status".into(), Evidence::text("cap reached"));
            }
            Err(e) => return Err(e),
        }
    } else {
        search.insert("status".into(), Evidence::text("skipped"));
    }
    c.put("leech_search", Evidence::Map(search));
    let level = if witness_found { "witness" } else { "criteria-level" };
    c.put("level", Evidence::text(level));
    c.pass = witness_found || verdict.status == Status::Guaranteed;
    Ok(c)
}

/// Moves an action on `Λ_G` into the Leech lattice along a primitive
/// embedding, extended by the identity on the complement.
pub fn transport_action(lg: &Lattice, generators: Vec<IntMatrix>, w: &EmbeddingWitness) -> Result<GroupAction> {
    let leech = catalog::make("Leech")?;
    if !w.primitive {
        return Err(precondition("the embedding is not primitive"));
    }
    let emb = Lattice::embedded(&leech, w.map.to_rat())?;
    if emb.gram() != lg.gram() {
        return Err(precondition("the embedding does not preserve the Gram matrix"));
    }
    extend_by_identity(&GroupAction::new(emb, generators)?)
}

struct Block {
    name: &'static str,
    gram: IntMatrix,
    pos: usize,
    neg: usize,
    det: BigInt,
}

/// Cartan matrix of a simply laced Dynkin diagram given by its edges.
fn cartan(n: usize, edges: &[(usize, usize)], sign: i64) -> IntMatrix {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(2 * sign);
    }
    for &(i, j) in edges {
        g[(i, j)] = BigInt::from(-sign);
        g[(j, i)] = BigInt::from(-sign);
    }
    g
}

fn blocks() -> Vec<Block> {
    let a1: &[(usize, usize)] = &[];
    let a2: &[(usize, usize)] = &[(0, 1)];
    let d4: &[(usize, usize)] = &[(0, 1), (1, 2), (1, 3)];
    let e6: &[(usize, usize)] = &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)];
    let e7: &[(usize, usize)] = &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)];
    let e8 = catalog::e8_neg().gram().clone();
    let uk = |k: i64| IntMatrix::from_i64(&[&[0, k], &[k, 0]]);
    let list: Vec<(&'static str, IntMatrix)> = alloc::vec![
        ("U", uk(1)),
        ("U(2)", uk(2)),
        ("U(3)", uk(3)),
        ("A1", cartan(1, a1, 1)),
        ("A1(-1)", cartan(1, a1, -1)),
        ("A2", cartan(2, a2, 1)),
        ("A2(-1)", cartan(2, a2, -1)),
        ("D4", cartan(4, d4, 1)),
        ("D4(-1)", cartan(4, d4, -1)),
        ("E6", cartan(6, e6, 1)),
        ("E6(-1)", cartan(6, e6, -1)),
        ("E7", cartan(7, e7, 1)),
        ("E7(-1)", cartan(7, e7, -1)),
        ("E8(-1)", e8),
    ];
    list.into_iter()
        .map(|(name, gram)| {
            let l = Lattice::from_gram(gram.clone()).expect("symmetric");
            let s = l.signature();
            Block { name, det: l.det().abs(), gram, pos: s.pos, neg: s.neg }
        })
        .collect()
}

/// A lattice built from root lattice and hyperbolic blocks, with an
/// isometry `A_S → −A_T` of discriminant forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partner {
    pub blocks: Vec<&'static str>,
    pub lattice: Lattice,
    /// Images of the generators of `A_S` in the generators of `A_T`.
    pub glue_map: Vec<Vec<i64>>,
}

/// Searches orthogonal sums of small blocks for an even lattice `T` of
/// signature `sig` with `A_T ≅ −A_S`. Blocks are tried in a fixed order and
/// the first match is returned. `cap` bounds the number of multisets tried.
pub fn find_partner(s: &Lattice, sig: (usize, usize), cap: u64) -> Result<Option<Partner>> {
    let det = s.det().abs();
    let a_s = disc_form(s)?;
    let bl = blocks();
    let mut st = PartnerSearch { bl: &bl, det, a_s, nodes: 0, cap, pick: Vec::new() };
    st.rec(0, sig.0, sig.1, BigInt::one())
}

struct PartnerSearch<'a> {
    bl: &'a [Block],
    det: BigInt,
    a_s: crate::disc::FiniteQuadraticForm,
    nodes: u64,
    cap: u64,
    pick: Vec<usize>,
}

impl PartnerSearch<'_> {
    fn rec(&mut self, from: usize, pos: usize, neg: usize, det: BigInt) -> Result<Option<Partner>> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::ResourceCap { what: "partner search", cap: self.cap });
        }
        if pos == 0 && neg == 0 {
            if det != self.det {
                return Ok(None);
            }
            return self.test();
        }
        for i in from..self.bl.len() {
            let b = &self.bl[i];
            if b.pos > pos || b.neg > neg {
                continue;
            }
            let d = &det * &b.det;
            if !self.det.is_multiple_of(&d) {
                continue;
            }
            self.pick.push(i);
            let r = self.rec(i, pos - b.pos, neg - b.neg, d)?;
            self.pick.pop();
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }

    fn test(&self) -> Result<Option<Partner>> {
        let parts: Vec<Lattice> =
            self.pick.iter().map(|&i| Lattice::from_gram(self.bl[i].gram.clone()).expect("symmetric")).collect();
        let t = direct_sum_all(&parts);
        let a_t = disc_form(&t)?;
        if a_t.factors() != self.a_s.factors() {
            return Ok(None);
        }
        let Some(map) = find_iso_form_small(&self.a_s, &negate(&a_t), ISO_CAP)? else {
            return Ok(None);
        };
        Ok(Some(Partner { blocks: self.pick.iter().map(|&i| self.bl[i].name).collect(), lattice: t, glue_map: map }))
    }
}

/// The overlattice of `S ⊕ T` glued along an anti-isometry of
/// discriminant forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Glued {
    pub ambient: Lattice,
    /// `S` inside the ambient, in its original basis.
    pub s: Lattice,
    /// `T` inside the ambient, in its original basis.
    pub t: Lattice,
}

/// Glues `S` and `T` along `glue_map` (images of the generators of `A_S`
/// in the generators of `A_T`). The result is unimodular when the map is an
/// anti-isometry.
pub fn glue(s: &Lattice, t: &Lattice, glue_map: &[Vec<i64>]) -> Result<Glued> {
    let (_, gs) = disc_form_with_generators(s)?;
    let (_, gt) = disc_form_with_generators(t)?;
    let (r, k) = (s.rank(), t.rank());
    let n = r + k;
    if glue_map.len() != gs.rows() || glue_map.iter().any(|m| m.len() != gt.rows()) {
        return Err(Error::Dimension("glue map does not match the discriminant generators".into()));
    }
    let mut rows: Vec<Vec<BigRational>> = RatMatrix::identity(n).row_vecs();
    for (i, m) in glue_map.iter().enumerate() {
        let mut row = gs.row(i).to_vec();
        let mut tail = alloc::vec![BigRational::zero(); k];
        for (j, &c) in m.iter().enumerate() {
            let c = BigRational::from_integer(BigInt::from(c));
            for (x, y) in tail.iter_mut().zip(gt.row(j)) {
                *x += &c * y;
            }
        }
        row.extend(tail);
        rows.push(row);
    }
    let d = lcm_denominators(rows.iter().flatten());
    let dq = BigRational::from_integer(d.clone());
    let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|x| (x * &dq).to_integer()).collect()).collect();
    let (h, _) = hnf(&IntMatrix::from_rows(int_rows, n));
    let basis = h.select_rows(&(0..n).collect::<Vec<_>>()).to_rat().scale(&(BigRational::one() / dq));
    let sum = direct_sum(s, t);
    let gram = basis.mul(&sum.gram().to_rat()).mul(&basis.transpose()).to_int().ok_or(Error::NotIntegral)?;
    let ambient = Lattice::from_gram(gram)?;
    if !ambient.is_even() {
        return Err(Error::OddLattice);
    }
    let inv = basis.inverse()?;
    let rows_of = |range: core::ops::Range<usize>| {
        let idx: Vec<Vec<BigRational>> = range.map(|i| inv.row(i).to_vec()).collect();
        RatMatrix::from_rows(idx, n)
    };
    let s_emb = Lattice::embedded(&ambient, rows_of(0..r))?;
    let t_emb = Lattice::embedded(&ambient, rows_of(r..n))?;
    Ok(Glued { ambient, s: s_emb, t: t_emb })
}

/// The extended action and the positive four-space produced by the
/// converse pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConverseOutcome {
    pub certificate: Certificate,
    pub action: GroupAction,
    pub pi: Option<RationalSubspace>,
}

/// Realizes a Leech action with `rk N^G ≥ 4` on an even unimodular lattice
/// of signature (4, 20) fixing a positive four-space without roots in its
/// orthogonal complement.
pub fn ghv_converse(a: &GroupAction, bounds: &Bounds) -> Result<ConverseOutcome> {
    let thm = thm1_condition_ii(a)?;
    if !thm.pass {
        return Err(precondition("the invariant lattice has rank below four"));
    }
    let inv = invariant_lattice(a)?;
    let co = coinvariant_lattice(a)?;
    let (rk_inv, rk_co) = (inv.rank(), co.rank());
    let mut c = Certificate::new(Kind::GhvConverse);
    c.put("rank_invariant", Evidence::int(rk_inv as u64));
    c.put("rank_coinvariant", Evidence::int(rk_co as u64));
    c.put("coinvariant_roots", Evidence::int(root_count(&co, NODE_CAP)? as u64));
    c.put("ell_coinvariant", Evidence::int(ell_of(&co)? as u64));
    let co_abs = co.to_abstract();
    let gens: Vec<IntMatrix> = a.generators().iter().map(|g| restrict(g, &co)).collect::<Result<_>>()?;
    let inv_target = (rk_inv - 4, rk_inv + 4);
    c.put("nikulin_invariant", Evidence::verdict(&nikulin_existence(&inv.to_abstract(), inv_target)?));
    let action = if rk_co == 0 {
        let m = catalog::make("Mukai")?;
        c.put("construction", Evidence::text("mukai"));
        GroupAction::new(m, a.generators().iter().map(|_| IntMatrix::identity(24)).collect())?
    } else {
        let (sig, _) = orthogonal_partner_spec(&co_abs, (4, 20))?;
        c.put("nikulin_coinvariant", Evidence::verdict(&nikulin_existence(&co_abs, (4, 20))?));
        c.put(
            "partner_signature",
            Evidence::List(alloc::vec![Evidence::int(sig.pos as u64), Evidence::int(sig.neg as u64)]),
        );
        let Some(p) = find_partner(&co_abs, (sig.pos, sig.neg), bounds.cap)? else {
            c.put("construction", Evidence::text("no partner within bounds"));
            let action = GroupAction::new(co_abs, gens)?;
            return Ok(ConverseOutcome { certificate: c, action, pi: None });
        };
        c.put("construction", Evidence::text("glue"));
        c.put("partner_blocks", Evidence::List(p.blocks.iter().map(|b| Evidence::text(*b)).collect()));
        let g = glue(&co_abs, &p.lattice, &p.glue_map)?;
        c.put("coinvariant_basis", Evidence::rat_matrix(g.s.basis().expect("embedded")));
        extend_by_identity(&GroupAction::new(g.s.clone(), gens)?)?
    };
    let amb = action.lattice().clone();
    c.put("ambient_gram", Evidence::int_matrix(amb.gram()));
    c.put("extended_generators", Evidence::List(action.generators().iter().map(Evidence::int_matrix).collect()));
    let region = if rk_co == 0 { whole(&amb) } else { orth_complement(&coinvariant_lattice(&action)?)? };
    let found = find_root_free_positive_space(&region, &no_rows(amb.rank()), 4, bounds)?;
    let pi = match found {
        Some(f) => {
            c.put("pi", Evidence::rat_matrix(f.subspace.spanning()));
            c.put("pi_attempt", Evidence::int(f.attempt));
            c.put("pi_scale", Evidence::Int(f.scale.clone()));
            c.put("pi_complement_roots", Evidence::int(0u32));
            c.pass = true;
            Some(f.subspace)
        }
        None => {
            c.put("pi", Evidence::text("not found within bounds"));
            None
        }
    };
    Ok(ConverseOutcome { certificate: c, action, pi })
}

//! Existence criteria for primitive embeddings into even unimodular
//! lattices, and a backtracking embedding search for definite lattices.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{IntMatrix, Signature};
use crate::disc::{disc_form, ell, ell_p, negate, splits_off_a1, A1Convention, FiniteQuadraticForm};
use crate::enumerate::{lll_gram, short_vectors_capped};
use crate::error::{Error, Result};
use crate::lattice::{is_primitive_sublattice, sublattice, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Guaranteed,
    Refuted,
    Unknown,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Guaranteed => "guaranteed",
            Status::Refuted => "refuted",
            Status::Unknown => "unknown",
        }
    }
}

/// One criterion applied, with the numbers it used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reason {
    pub criterion: &'static str,
    pub line: String,
    pub numbers: Vec<(&'static str, BigInt)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub reasons: Vec<Reason>,
}

impl Verdict {
    fn new(status: Status, reasons: Vec<Reason>) -> Self {
        Self { status, reasons }
    }
}

fn num(name: &'static str, v: impl Into<BigInt>) -> (&'static str, BigInt) {
    (name, v.into())
}

/// Even unimodular lattices of signature `(p, n)` exist iff `p ≡ n mod 8`.
pub fn exists_even_unimodular(sig: (usize, usize)) -> bool {
    (sig.0 as i64 - sig.1 as i64).rem_euclid(8) == 0
}

fn check_even(l: &Lattice) -> Result<()> {
    if !l.is_even() {
        return Err(Error::OddLattice);
    }
    if !l.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    Ok(())
}

fn check_target(target: (usize, usize)) -> Result<()> {
    if !exists_even_unimodular(target) {
        return Err(Error::Precondition(alloc::format!(
            "no even unimodular lattice of signature ({}, {})",
            target.0,
            target.1
        )));
    }
    Ok(())
}

/// Sufficient and necessary conditions for a primitive embedding of `L`
/// into the even unimodular lattice of signature `target`.
pub fn nikulin_existence(l: &Lattice, target: (usize, usize)) -> Result<Verdict> {
    nikulin_existence_with(l, target, A1Convention::default())
}

pub fn nikulin_existence_with(l: &Lattice, target: (usize, usize), conv: A1Convention) -> Result<Verdict> {
    check_even(l)?;
    check_target(target)?;
    let sig = l.signature();
    let (p, n) = target;
    let a = disc_form(l)?;
    let ell_a = ell(&a);
    let rk = l.rank();
    if sig.pos > p || sig.neg > n {
        return Ok(Verdict::new(
            Status::Refuted,
            alloc::vec![Reason {
                criterion: "signature",
                line: alloc::format!("signature ({}, {}) does not fit in ({p}, {n})", sig.pos, sig.neg),
                numbers: alloc::vec![num("p_L", sig.pos), num("n_L", sig.neg), num("p", p), num("n", n)],
            }],
        ));
    }
    let room = p + n - rk;
    let base = alloc::vec![num("ell", ell_a), num("rank", rk), num("room", room)];
    if ell_a > room {
        return Ok(Verdict::new(
            Status::Refuted,
            alloc::vec![Reason {
                criterion: "length",
                line: alloc::format!("l(A_L) = {ell_a} exceeds the complement rank {room}"),
                numbers: base,
            }],
        ));
    }
    if ell_a < room {
        return Ok(Verdict::new(
            Status::Guaranteed,
            alloc::vec![Reason {
                criterion: "strict-length",
                line: alloc::format!("l(A_L) = {ell_a} < {room} = rk(target) - rk(L)"),
                numbers: base,
            }],
        ));
    }
    let mut reasons = alloc::vec![Reason {
        criterion: "equality-case",
        line: alloc::format!("l(A_L) = {ell_a} = {room}; the strict inequality does not apply"),
        numbers: base,
    }];
    if target != (0, 24) {
        reasons.push(Reason {
            criterion: "refined-not-applicable",
            line: "the refined equality-case criterion is only applied for target (0, 24)".into(),
            numbers: Vec::new(),
        });
        return Ok(Verdict::new(Status::Unknown, reasons));
    }
    // ell_p = ell for an odd p exactly when p divides the smallest factor.
    let d1 = a.factors().first().cloned().unwrap_or_else(BigInt::one);
    let mut odd = d1.clone();
    while odd.is_even() && !odd.is_zero() {
        odd /= 2;
    }
    let odd_ok = room > 0 && odd.is_one();
    if !odd_ok {
        let mut numbers = alloc::vec![num("d1", d1)];
        if let Some(q) = smallest_odd_prime(&odd) {
            numbers.push(num("prime", q.clone()));
            numbers.push(num("ell_p", ell_p(&a, q.to_u64().unwrap_or(0))));
        }
        reasons.push(Reason {
            criterion: "refined-odd",
            line: "some odd p has l_p(A_L) = rk(target) - rk(L)".into(),
            numbers,
        });
        return Ok(Verdict::new(Status::Unknown, reasons));
    }
    match splits_off_a1(&a, conv) {
        Ok(true) => {
            reasons.push(Reason {
                criterion: "refined",
                line: "odd parts satisfy the strict bound and the 2-part splits off A_{A1}".into(),
                numbers: alloc::vec![num("ell_2", ell_p(&a, 2))],
            });
            Ok(Verdict::new(Status::Guaranteed, reasons))
        }
        Ok(false) => {
            reasons.push(Reason {
                criterion: "refined-a1",
                line: "the 2-part does not split off A_{A1}".into(),
                numbers: alloc::vec![num("ell_2", ell_p(&a, 2))],
            });
            Ok(Verdict::new(Status::Unknown, reasons))
        }
        Err(Error::TooLarge { size, cap }) => {
            reasons.push(Reason {
                criterion: "refined-cap",
                line: "2-part too large for the brute-force splitting test".into(),
                numbers: alloc::vec![num("size", size), num("cap", cap)],
            });
            Ok(Verdict::new(Status::Unknown, reasons))
        }
        Err(e) => Err(e),
    }
}

fn smallest_odd_prime(m: &BigInt) -> Option<BigInt> {
    if m <= &BigInt::one() {
        return None;
    }
    let mut p = BigInt::from(3);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= *m && p < limit {
        if m.is_multiple_of(&p) {
            return Some(p);
        }
        p += 2;
    }
    if &p * &p > *m {
        Some(m.clone())
    } else {
        None
    }
}

/// Existence and uniqueness up to isometry of the target, when
/// `l(A_L) + 2 ≤ rk(target) − rk(L)`.
pub fn nikulin_uniqueness(l: &Lattice, target: (usize, usize)) -> Result<Verdict> {
    check_even(l)?;
    check_target(target)?;
    let sig = l.signature();
    if sig.pos >= target.0 || sig.neg >= target.1 {
        return Err(Error::Precondition(alloc::format!(
            "uniqueness needs signature ({}, {}) strictly inside ({}, {})",
            sig.pos,
            sig.neg,
            target.0,
            target.1
        )));
    }
    let a = disc_form(l)?;
    let ell_a = ell(&a);
    let room = target.0 + target.1 - l.rank();
    let numbers = alloc::vec![num("ell", ell_a), num("rank", l.rank()), num("room", room)];
    if ell_a + 2 <= room {
        Ok(Verdict::new(
            Status::Guaranteed,
            alloc::vec![Reason {
                criterion: "uniqueness",
                line: alloc::format!("l(A_L) + 2 = {} <= {room}", ell_a + 2),
                numbers,
            }],
        ))
    } else {
        Ok(Verdict::new(
            Status::Unknown,
            alloc::vec![Reason {
                criterion: "uniqueness-silent",
                line: alloc::format!("l(A_L) + 2 = {} > {room}", ell_a + 2),
                numbers,
            }],
        ))
    }
}

/// Signature and discriminant form any orthogonal complement of a
/// primitive embedding of `L` into the target must have.
pub fn orthogonal_partner_spec(l: &Lattice, target: (usize, usize)) -> Result<(Signature, FiniteQuadraticForm)> {
    check_even(l)?;
    check_target(target)?;
    let sig = l.signature();
    if sig.pos > target.0 || sig.neg > target.1 {
        return Err(Error::Precondition(alloc::format!(
            "signature ({}, {}) does not fit in ({}, {})",
            sig.pos,
            sig.neg,
            target.0,
            target.1
        )));
    }
    let s = Signature { pos: target.0 - sig.pos, neg: target.1 - sig.neg, zero: 0 };
    Ok((s, negate(&disc_form(l)?)))
}

/// Rows are the images of the source basis in target coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingWitness {
    pub map: IntMatrix,
    pub primitive: bool,
}

/// Gram identity and saturation of the image.
pub fn verify_embedding(w: &EmbeddingWitness, l: &Lattice, m: &Lattice) -> bool {
    let (gram_ok, saturated) = embedding_report(w, l, m);
    gram_ok && saturated
}

/// `(gram matches, image saturated)`.
pub fn embedding_report(w: &EmbeddingWitness, l: &Lattice, m: &Lattice) -> (bool, bool) {
    if w.map.rows() != l.rank() || (w.map.rows() > 0 && w.map.cols() != m.rank()) {
        return (false, false);
    }
    if w.map.rows() == 0 {
        return (true, true);
    }
    let gram_ok = &w.map.mul(m.gram()).mul(&w.map.transpose()) == l.gram();
    let saturated = w.map.to_rat().rank() == w.map.rows()
        && sublattice(m, &w.map).and_then(|s| is_primitive_sublattice(&s)).unwrap_or(false);
    (gram_ok, saturated)
}

/// Default placement budget for [`search_embedding`].
pub const SEARCH_CAP: u64 = 10_000_000;

/// Node budget for enumerating candidate images; it also bounds the memory
/// held by the candidate table.
pub const CANDIDATE_NODE_CAP: u64 = 20_000_000;

/// Outcome of an embedding search that did not hit its cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub witness: Option<EmbeddingWitness>,
    pub nodes: u64,
}

/// Backtracking search for an embedding `L ↪ M` of definite lattices of
/// the same sign. `Ok(None)` means no embedding exists.
pub fn search_embedding(l: &Lattice, m: &Lattice, cap: u64) -> Result<Option<EmbeddingWitness>> {
    search_embedding_stats(l, m, cap).map(|r| r.witness)
}

pub fn search_embedding_stats(l: &Lattice, m: &Lattice, cap: u64) -> Result<SearchResult> {
    if l.rank() > m.rank() {
        return Err(Error::Precondition("source rank exceeds target rank".into()));
    }
    let (gl, gm) = if l.rank() == 0 || (l.is_positive_definite() && m.is_positive_definite()) {
        (l.gram().clone(), m.gram().clone())
    } else if l.is_negative_definite() && m.is_negative_definite() {
        (l.gram().neg(), m.gram().neg())
    } else {
        return Err(Error::Precondition("lattices must be definite of the same sign".into()));
    };
    let r = gl.rows();
    if r == 0 {
        let map = IntMatrix::zeros(0, m.rank());
        return Ok(SearchResult { witness: Some(EmbeddingWitness { map, primitive: true }), nodes: 0 });
    }
    // Reduce the source; order its basis by norm, longest first.
    let (t, red) = lll_gram(&gl)?;
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| red[(b, b)].cmp(&red[(a, a)]).then(a.cmp(&b)));
    let t = t.select_rows(&order);
    let red = red.select_rows(&order).select_cols(&order);
    let target_g: Vec<i64> = small(gm.entries())?;
    let src_g: Vec<i64> = small(red.entries())?;
    let n = gm.rows();

    let max_norm = (0..r).map(|i| red[(i, i)].clone()).max().expect("nonempty");
    let sv = short_vectors_capped(&Lattice::from_gram(gm.clone())?, &max_norm, CANDIDATE_NODE_CAP)?;
    // Index 2k is the k-th canonical vector, 2k + 1 its negative.
    let mut vecs: Vec<Vec<i64>> = Vec::with_capacity(2 * sv.len());
    let mut duals: Vec<Vec<i64>> = Vec::with_capacity(2 * sv.len());
    let mut norms: Vec<i64> = Vec::with_capacity(sv.len());
    for (v, nv) in &sv {
        let v: Vec<i64> = small(v)?;
        let dual: Vec<i64> = (0..n).map(|j| (0..n).map(|i| v[i] * target_g[i * n + j]).sum()).collect();
        let (nv_, nd) = (v.iter().map(|x| -x).collect(), dual.iter().map(|x| -x).collect());
        vecs.extend([v, nv_]);
        duals.extend([dual, nd]);
        norms.push(nv.to_i64().ok_or(Error::Overflow)?);
    }
    let lists: Vec<(usize, Vec<u32>)> = (0..r)
        .map(|i| {
            let want = src_g[i * r + i];
            (i, (0..vecs.len() as u32).filter(|&c| norms[c as usize / 2] == want).collect())
        })
        .collect();
    let mut state = Search {
        r,
        src_g: &src_g,
        vecs: &vecs,
        duals: &duals,
        cap,
        nodes: 0,
        m,
        t_inv: unimodular_inverse(&t)?,
        chosen: alloc::vec![None; r],
        fallback: None,
    };
    let found = state.rec(&lists);
    let nodes = state.nodes;
    match found {
        Ok(w) => Ok(SearchResult { witness: w.or(state.fallback), nodes }),
        Err(Error::ResourceCap { .. }) if state.fallback.is_some() => {
            Ok(SearchResult { witness: state.fallback, nodes })
        }
        Err(e) => Err(e),
    }
}

fn small(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect()
}

fn unimodular_inverse(t: &IntMatrix) -> Result<IntMatrix> {
    t.to_rat().inverse()?.to_int().ok_or(Error::NotIntegral)
}

struct Search<'a> {
    r: usize,
    src_g: &'a [i64],
    vecs: &'a [Vec<i64>],
    duals: &'a [Vec<i64>],
    cap: u64,
    nodes: u64,
    m: &'a Lattice,
    t_inv: IntMatrix,
    chosen: Vec<Option<u32>>,
    /// First non-primitive embedding seen, kept while looking for a
    /// primitive one.
    fallback: Option<EmbeddingWitness>,
}

impl Search<'_> {
    /// `open` pairs each unassigned level with its candidates consistent
    /// with every image chosen so far. The most constrained level is
    /// assigned next.
    fn rec(&mut self, open: &[(usize, Vec<u32>)]) -> Result<Option<EmbeddingWitness>> {
        if open.is_empty() {
            let w = self.witness();
            if w.primitive {
                return Ok(Some(w));
            }
            if self.fallback.is_none() {
                self.fallback = Some(w);
            }
            return Ok(None);
        }
        let first = open.len() == self.r;
        let pick = (0..open.len()).min_by_key(|&k| (open[k].1.len(), open[k].0)).expect("nonempty");
        let i = open[pick].0;
        for &c in &open[pick].1 {
            // A global sign flip maps embeddings to embeddings.
            if first && c % 2 == 1 {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::ResourceCap { what: "embedding search placements", cap: self.cap });
            }
            let dual = &self.duals[c as usize];
            let mut next: Vec<(usize, Vec<u32>)> = Vec::with_capacity(open.len() - 1);
            let mut dead = false;
            for (k, (j, list)) in open.iter().enumerate() {
                if k == pick {
                    continue;
                }
                let want = self.src_g[i * self.r + j];
                let f: Vec<u32> = list
                    .iter()
                    .copied()
                    .filter(|&x| dual.iter().zip(&self.vecs[x as usize]).map(|(a, b)| a * b).sum::<i64>() == want)
                    .collect();
                if f.is_empty() {
                    dead = true;
                    break;
                }
                next.push((*j, f));
            }
            if dead {
                continue;
            }
            self.chosen[i] = Some(c);
            let res = self.rec(&next);
            self.chosen[i] = None;
            if let Some(w) = res? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    fn witness(&self) -> EmbeddingWitness {
        let rows: Vec<Vec<BigInt>> = self
            .chosen
            .iter()
            .map(|c| self.vecs[c.expect("complete") as usize].iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let img = IntMatrix::from_rows(rows, self.m.rank());
        // Images of the original basis: T⁻¹ · (images of the reduced basis).
        let map = self.t_inv.mul(&img);
        let primitive = sublattice(self.m, &map).and_then(|s| is_primitive_sublattice(&s)).unwrap_or(false);
        EmbeddingWitness { map, primitive }
    }
}

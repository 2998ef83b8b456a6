//! End-to-end checkers that compose the other modules and emit
//! certificates with recomputable evidence.

mod checks;
mod ghv;
mod period;
mod search;
mod star;
mod verify;

pub use checks::{lemma_standard_check, thm1_condition_ii};
pub use ghv::{
    find_partner, ghv_converse, ghv_forward, ghv_forward_with_limit, glue, transport_action, ConverseOutcome, Glued,
    Partner, FORWARD_SEARCH_RANK,
};
pub use period::{embed_via_e8_doubling, period_construct, PeriodOutcome};
pub use search::{find_root_free_positive_space, PositiveSpace};
pub use star::{star_check, star_search};
pub use verify::{verify_ghv_converse, verify_ghv_forward, verify_lemma, verify_period, verify_star, verify_thm1};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{IntMatrix, RatMatrix};
use crate::embed::Verdict;
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Version of the certificate layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Bounds shared by every bounded search in this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub norm_bound: u64,
    pub coord_bound: u64,
    pub cap: u64,
    /// Seed for the sampled searches.
    pub seed: u64,
    /// Number of sampled candidates before giving up.
    pub attempts: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { norm_bound: 12, coord_bound: 3, cap: 10_000_000, seed: 0x4b33, attempts: 64 }
    }
}

impl Bounds {
    pub fn to_evidence(&self) -> Evidence {
        let mut m = BTreeMap::new();
        m.insert("norm_bound".into(), Evidence::int(self.norm_bound));
        m.insert("coord_bound".into(), Evidence::int(self.coord_bound));
        m.insert("cap".into(), Evidence::int(self.cap));
        m.insert("seed".into(), Evidence::int(self.seed));
        m.insert("attempts".into(), Evidence::int(self.attempts));
        Evidence::Map(m)
    }
}

/// An ordered key/value tree of exact values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Bool(bool),
    Int(BigInt),
    Rat(BigRational),
    Text(String),
    List(Vec<Evidence>),
    Map(BTreeMap<String, Evidence>),
}

impl Evidence {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Evidence::Int(v.into())
    }

    pub fn text(s: impl Into<String>) -> Self {
        Evidence::Text(s.into())
    }

    pub fn int_vec(v: &[BigInt]) -> Self {
        Evidence::List(v.iter().cloned().map(Evidence::Int).collect())
    }

    pub fn rat_vec(v: &[BigRational]) -> Self {
        Evidence::List(v.iter().map(rat_ev).collect())
    }

    pub fn int_matrix(m: &IntMatrix) -> Self {
        Evidence::List((0..m.rows()).map(|i| Evidence::int_vec(m.row(i))).collect())
    }

    pub fn rat_matrix(m: &RatMatrix) -> Self {
        Evidence::List((0..m.rows()).map(|i| Evidence::rat_vec(m.row(i))).collect())
    }

    pub fn verdict(v: &Verdict) -> Self {
        let reasons = v
            .reasons
            .iter()
            .map(|r| {
                let mut m = BTreeMap::new();
                m.insert("criterion".into(), Evidence::text(r.criterion));
                m.insert("line".into(), Evidence::text(r.line.clone()));
                let nums = r.numbers.iter().map(|(k, v)| (String::from(*k), Evidence::Int(v.clone()))).collect();
                m.insert("numbers".into(), Evidence::Map(nums));
                Evidence::Map(m)
            })
            .collect();
        let mut m = BTreeMap::new();
        m.insert("status".into(), Evidence::text(v.status.as_str()));
        m.insert("reasons".into(), Evidence::List(reasons));
        Evidence::Map(m)
    }

    pub fn get(&self, key: &str) -> Option<&Evidence> {
        match self {
            Evidence::Map(m) => m.get(key),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Evidence::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Evidence::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Evidence::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Evidence]> {
        match self {
            Evidence::List(v) => Some(v),
            _ => None,
        }
    }

    fn as_rat(&self) -> Option<BigRational> {
        match self {
            Evidence::Int(v) => Some(BigRational::from_integer(v.clone())),
            Evidence::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }

    /// Reads back a matrix written by [`Evidence::int_matrix`].
    pub fn as_int_matrix(&self, cols: usize) -> Option<IntMatrix> {
        let rows = self.as_list()?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_list()?;
            if r.len() != cols {
                return None;
            }
            out.push(r.iter().map(|x| x.as_int().cloned()).collect::<Option<Vec<_>>>()?);
        }
        Some(IntMatrix::from_rows(out, cols))
    }

    pub fn as_rat_matrix(&self, cols: usize) -> Option<RatMatrix> {
        let rows = self.as_list()?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_list()?;
            if r.len() != cols {
                return None;
            }
            out.push(r.iter().map(|x| x.as_rat()).collect::<Option<Vec<_>>>()?);
        }
        Some(RatMatrix::from_rows(out, cols))
    }
}

fn rat_ev(r: &BigRational) -> Evidence {
    if r.is_integer() {
        Evidence::Int(r.to_integer())
    } else {
        Evidence::Rat(r.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Thm1Ii,
    Lemma,
    GhvForward,
    GhvConverse,
    Star,
    Period,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Thm1Ii => "thm1-ii",
            Kind::Lemma => "lemma",
            Kind::GhvForward => "ghv-forward",
            Kind::GhvConverse => "ghv-converse",
            Kind::Star => "star",
            Kind::Period => "period",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: Kind,
    pub pass: bool,
    pub evidence: BTreeMap<String, Evidence>,
}

impl Certificate {
    fn new(kind: Kind) -> Self {
        Self { kind, pass: false, evidence: BTreeMap::new() }
    }

    fn put(&mut self, key: &str, value: Evidence) {
        self.evidence.insert(key.into(), value);
    }

    pub fn get(&self, key: &str) -> Option<&Evidence> {
        self.evidence.get(key)
    }

    /// Integer-valued evidence entry.
    pub fn int(&self, key: &str) -> Option<&BigInt> {
        self.get(key).and_then(Evidence::as_int)
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        self.get(key).and_then(Evidence::as_bool)
    }
}

fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

/// Even, unimodular, signature (4, 20).
fn require_mukai_like(l: &Lattice) -> Result<()> {
    let s = l.signature();
    if !l.is_even() || !l.is_unimodular() || (s.pos, s.neg) != (4, 20) {
        return Err(precondition("ambient must be even unimodular of signature (4, 20)"));
    }
    Ok(())
}

fn require_leech(l: &Lattice) -> Result<()> {
    if l.gram() != crate::catalog::make("Leech")?.gram() {
        return Err(precondition("action must be on the catalog Leech lattice"));
    }
    Ok(())
}

/// Roots of a negative definite lattice (empty for rank 0).
fn root_count(l: &Lattice, cap: u64) -> Result<usize> {
    if l.rank() == 0 {
        return Ok(0);
    }
    Ok(crate::enumerate::roots_capped(&l.to_abstract(), cap)?.len())
}

fn ell_of(l: &Lattice) -> Result<usize> {
    if l.rank() == 0 {
        return Ok(0);
    }
    Ok(crate::disc::ell(&crate::disc::disc_form(l)?))
}

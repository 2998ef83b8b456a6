use k3lat::arith::RatMatrix;
use k3lat::catalog;
use k3lat::disc::{self, A1Convention};
use k3lat::embed::{self, Status};
use k3lat::enumerate::roots_capped;
use k3lat::group::{coinvariant_lattice, disc_action_is_trivial, invariant_lattice, GroupAction};
use k3lat::lattice::{rescale, Lattice};
use k3lat::pipelines::{self as pl, Bounds, Certificate, Evidence};
use k3lat::Error;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{Map, Value};

use crate::error::{input, Result};
use crate::json;

/// A report body and its exit code.
pub struct Outcome {
    pub body: Map<String, Value>,
    pub code: u8,
}

impl Outcome {
    fn new(code: u8) -> Self {
        Self { body: Map::new(), code }
    }

    fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.body.insert(key.into(), v.into());
    }

    fn passed(pass: bool) -> Self {
        let mut o = Self::new(if pass { 0 } else { 1 });
        o.put("pass", pass);
        o
    }

    fn certificate(c: &Certificate, mismatches: Vec<&'static str>) -> Self {
        let mut o = Self::passed(c.pass);
        o.put("certificate", json::certificate(c));
        o.put("verification", verification(mismatches));
        o
    }
}

fn verification(mismatches: Vec<&'static str>) -> Value {
    let mut m = Map::new();
    m.insert("verified".into(), mismatches.is_empty().into());
    m.insert("mismatches".into(), Value::Array(mismatches.into_iter().map(Value::from).collect()));
    Value::Object(m)
}

fn signature(l: &Lattice) -> Value {
    let s = l.signature();
    let mut m = Map::new();
    m.insert("pos".into(), s.pos.into());
    m.insert("neg".into(), s.neg.into());
    m.insert("zero".into(), s.zero.into());
    Value::Object(m)
}

fn definiteness(l: &Lattice) -> &'static str {
    if !l.is_nondegenerate() {
        "degenerate"
    } else if l.rank() == 0 {
        "zero"
    } else if l.is_positive_definite() {
        "positive"
    } else if l.is_negative_definite() {
        "negative"
    } else {
        "indefinite"
    }
}

/// Prime divisors by trial division up to 10⁶. A larger cofactor is kept
/// when it is below 10¹², hence prime; otherwise it is reported separately.
fn prime_divisors(n: &BigInt) -> (Vec<u64>, Option<BigInt>) {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= 1_000_000 && BigInt::from(p) * BigInt::from(p) <= n {
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += 1;
    }
    if n.is_one() {
        return (out, None);
    }
    match n.to_u64() {
        Some(q) if q < 1_000_000_000_000 => {
            out.push(q);
            (out, None)
        }
        _ => (out, Some(n)),
    }
}

pub fn lat_info(l: &Lattice) -> Result<Outcome> {
    let mut o = Outcome::new(0);
    if let Some(n) = l.name() {
        o.put("name", n);
    }
    o.put("rank", l.rank());
    o.put("signature", signature(l));
    o.put("even", l.is_even());
    o.put("det", json::int(&l.det()));
    o.put("nondegenerate", l.is_nondegenerate());
    o.put("unimodular", l.is_unimodular());
    o.put("definite", definiteness(l));
    if l.is_even() && l.is_nondegenerate() {
        let a = disc::disc_form(l)?;
        o.put("disc_factors", json::int_vec(a.factors()));
        o.put("ell", disc::ell(&a));
        let top = a.factors().last().cloned().unwrap_or_else(BigInt::one);
        let (primes, rest) = prime_divisors(&top);
        let ell_p: Map<String, Value> =
            primes.iter().map(|&p| (p.to_string(), Value::from(disc::ell_p(&a, p)))).collect();
        o.put("ell_p", Value::Object(ell_p));
        if let Some(r) = rest {
            o.put("unfactored", json::int(&r));
        }
    }
    Ok(o)
}

pub fn lat_roots(l: &Lattice, count_only: bool, bounds: &Bounds) -> Result<Outcome> {
    let l = l.to_abstract();
    let (m, norm) = if l.rank() == 0 || l.is_negative_definite() {
        (l, -2)
    } else if l.is_positive_definite() {
        (rescale(&l, -1)?, 2)
    } else {
        return Err(Error::Precondition("roots are enumerated for definite lattices only".into()).into());
    };
    let roots = roots_capped(&m, bounds.cap)?;
    let mut o = Outcome::new(0);
    o.put("count", roots.len());
    o.put("norm", norm);
    if !count_only {
        o.put("roots", Value::Array(roots.iter().map(|r| json::int_vec(r)).collect()));
    }
    Ok(o)
}

pub fn lat_disc(l: &Lattice) -> Result<Outcome> {
    let a = if l.rank() == 0 { disc::FiniteQuadraticForm::trivial() } else { disc::disc_form(l)? };
    let mut o = Outcome::new(0);
    o.put("factors", json::int_vec(a.factors()));
    o.put("q", json::rat_matrix(a.q_matrix()));
    o.put("order", json::int(&a.order()));
    o.put("ell", disc::ell(&a));
    match disc::signature_mod8(&a) {
        Ok(s) => o.put("signature_mod8", s),
        Err(Error::TooLarge { .. }) => o.put("signature_mod8", Value::Null),
        Err(e) => return Err(e.into()),
    }
    Ok(o)
}

pub fn catalog(name: &str) -> Result<Outcome> {
    let mut o = Outcome::new(0);
    match name.to_ascii_lowercase().as_str() {
        "golay" => {
            let g = catalog::golay();
            o.put("hex_rows", Value::Array(g.hex_rows().into_iter().map(Value::from).collect()));
            o.put("weight_distribution", Value::Array(g.weight_distribution().iter().map(|&c| c.into()).collect()));
        }
        "m24" => {
            let g = catalog::golay();
            let gens = catalog::m24_generators();
            o.put("preserve_golay", gens.iter().all(|p| p.preserves(&g)));
            o.put("generators", Value::Array(gens.iter().map(|p| Value::from(p.image().to_vec())).collect()));
        }
        _ => {
            let l = json::catalog_lattice(name)?;
            if let Value::Object(m) = json::lattice(&l) {
                o.body.extend(m);
            }
        }
    }
    Ok(o)
}

fn sublattice_report(s: &Lattice) -> Value {
    let mut m = Map::new();
    m.insert("rank".into(), s.rank().into());
    m.insert("signature".into(), signature(s));
    m.insert("gram".into(), json::int_matrix(s.gram()));
    if let Some(b) = s.basis() {
        m.insert("basis".into(), json::rat_matrix(b));
    }
    Value::Object(m)
}

fn is_leech(l: &Lattice) -> Result<bool> {
    Ok(l.gram() == catalog::make("Leech")?.gram())
}

pub fn grp_invariant(a: &GroupAction, lemma: bool, bounds: &Bounds) -> Result<Outcome> {
    let inv = invariant_lattice(a)?;
    let co = coinvariant_lattice(a)?;
    let mut o = Outcome::new(0);
    o.put("generators", a.generators().len());
    o.put("invariant", sublattice_report(&inv));
    let mut co_rep = sublattice_report(&co);
    let trivial = co.rank() == 0 || disc_action_is_trivial(a, &co)?;
    co_rep.as_object_mut().expect("object").insert("disc_action_trivial".into(), trivial.into());
    o.put("coinvariant", co_rep);
    if !lemma {
        return Ok(o);
    }
    // On Leech the action is first carried into an even unimodular (4, 20)
    // lattice; otherwise the lattice must already be of that kind.
    let (action, pi) = if is_leech(a.lattice())? {
        let out = pl::ghv_converse(a, bounds)?;
        let pi = out.pi.ok_or(Error::NotFoundWithinBounds)?;
        o.put("extension", "ghv-converse");
        (out.action, pi)
    } else {
        let n = a.lattice().rank();
        let space = pl::find_root_free_positive_space(&inv, &RatMatrix::zeros(0, n), 4, bounds)?
            .ok_or(Error::NotFoundWithinBounds)?;
        (a.clone(), space.subspace)
    };
    let c = pl::lemma_standard_check(&action, &pi)?;
    let mism = pl::verify_lemma(&action, &pi, &c)?;
    o.code = if c.pass { 0 } else { 1 };
    o.put("pass", c.pass);
    o.put("pi", json::rat_matrix(pi.spanning()));
    o.put("lemma", json::certificate(&c));
    o.put("verification", verification(mism));
    Ok(o)
}

pub fn embed_check(l: &Lattice, target: (usize, usize), a1_positive: bool) -> Result<Outcome> {
    let l = l.to_abstract();
    let conv = if a1_positive { A1Convention::Positive } else { A1Convention::Negative };
    let ex = embed::nikulin_existence_with(&l, target, conv)?;
    let un = match embed::nikulin_uniqueness(&l, target) {
        Ok(v) => json::evidence(&Evidence::verdict(&v)),
        Err(Error::Precondition(m)) => Value::String(format!("not applicable: {m}")),
        Err(e) => return Err(e.into()),
    };
    let mut o = Outcome::new(if ex.status == Status::Guaranteed { 0 } else { 1 });
    o.put("target", Value::from(vec![target.0, target.1]));
    o.put("a1_convention", if a1_positive { "A1" } else { "A1(-1)" });
    o.put("existence", json::evidence(&Evidence::verdict(&ex)));
    o.put("uniqueness", un);
    Ok(o)
}

pub fn embed_search(src: &Lattice, dst: &Lattice, bounds: &Bounds) -> Result<Outcome> {
    let (src, dst) = (src.to_abstract(), dst.to_abstract());
    let r = embed::search_embedding_stats(&src, &dst, bounds.cap)?;
    let mut o = Outcome::new(if r.witness.is_some() { 0 } else { 1 });
    o.put("found", r.witness.is_some());
    o.put("nodes", r.nodes);
    match &r.witness {
        Some(w) => {
            let (gram_ok, saturated) = embed::embedding_report(w, &src, &dst);
            let mut m = Map::new();
            m.insert("map".into(), json::int_matrix(&w.map));
            m.insert("primitive".into(), w.primitive.into());
            o.put("witness", Value::Object(m));
            o.put("gram_verified", gram_ok);
            o.put("image_saturated", saturated);
        }
        None => {
            o.put("witness", Value::Null);
            o.put("exhaustive", true);
        }
    }
    Ok(o)
}

pub fn thm1(a: &GroupAction) -> Result<Outcome> {
    let c = pl::thm1_condition_ii(a)?;
    let m = pl::verify_thm1(a, &c)?;
    Ok(Outcome::certificate(&c, m))
}

pub fn ghv_forward(lg: &Lattice, bounds: &Bounds) -> Result<Outcome> {
    let lg = lg.to_abstract();
    let c = pl::ghv_forward(&lg, bounds)?;
    let m = pl::verify_ghv_forward(&lg, &c)?;
    Ok(Outcome::certificate(&c, m))
}

pub fn ghv_converse(a: &GroupAction, bounds: &Bounds) -> Result<Outcome> {
    let out = pl::ghv_converse(a, bounds)?;
    let m = pl::verify_ghv_converse(a, &out.certificate)?;
    Ok(Outcome::certificate(&out.certificate, m))
}

/// A lattice given without a basis is read as the whole context when the
/// Gram matrices agree.
pub fn star_check(l: &Lattice, context: &Lattice) -> Result<Outcome> {
    let whole;
    let l = if l.ambient().is_none() && l.gram() == context.gram() {
        whole = k3lat::lattice::whole(context);
        &whole
    } else {
        l
    };
    let c = pl::star_check(l, context)?;
    let m = pl::verify_star(l, &c)?;
    Ok(Outcome::certificate(&c, m))
}

pub fn star_search(context: &Lattice, bounds: &Bounds) -> Result<Outcome> {
    match pl::star_search(context, bounds)? {
        Some((l, c)) => {
            let m = pl::verify_star(&l, &c)?;
            Ok(Outcome::certificate(&c, m))
        }
        None => {
            let mut o = Outcome::passed(false);
            o.put("certificate", Value::Null);
            o.put("status", "not found within bounds");
            Ok(o)
        }
    }
}

/// `ng` is placed in Mukai coordinates: as given when it carries a basis,
/// otherwise as the diagonal of `E8(−1)²` when it is isometric to `E8(−2)`.
pub fn period_build(ng: &Lattice, v: Option<&[BigInt]>, bounds: &Bounds) -> Result<Outcome> {
    let (ng, placement) = if ng.ambient().is_some() {
        (ng.clone(), "given")
    } else if ng.rank() == 0 {
        (Lattice::embedded(&catalog::make("Mukai")?, RatMatrix::zeros(0, catalog::MUKAI_RANK))?, "zero")
    } else {
        let placed = pl::embed_via_e8_doubling(ng, bounds.cap)?
            .ok_or_else(|| Error::Precondition("give N_G with a basis in Mukai coordinates".into()))?;
        (placed, "e8-doubling")
    };
    let out = pl::period_construct(&ng, v, bounds)?;
    let m = pl::verify_period(&ng, &out.certificate)?;
    let mut o = Outcome::certificate(&out.certificate, m);
    o.put("placement", placement);
    o.put("ng_basis", json::rat_matrix(ng.basis().expect("placed in Mukai coordinates")));
    Ok(o)
}

/// Parses `P,N`.
pub fn parse_target(s: &str) -> std::result::Result<(usize, usize), String> {
    let (p, n) = s.split_once(',').ok_or("expected P,N")?;
    let p = p.trim().parse().map_err(|_| format!("bad P in {s:?}"))?;
    let n = n.trim().parse().map_err(|_| format!("bad N in {s:?}"))?;
    Ok((p, n))
}

/// Parses a comma-separated integer vector.
pub fn parse_vector(s: &str) -> Result<Vec<BigInt>> {
    s.split(',').map(|x| x.trim().parse::<BigInt>().map_err(|_| input(format!("bad vector entry {x:?}")))).collect()
}

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{clear_denominators, diagonalize, int_kernel, to_rat_vec, IntMatrix, RatMatrix};
use crate::catalog::{self, MUKAI_R, MUKAI_S};
use crate::enumerate::roots_in_complement_capped;
use crate::error::{Error, Result};
use crate::lattice::{orth_complement, saturation, sublattice, Lattice, RationalSubspace};

use super::search::{rng, Sampler};
use super::{precondition, Bounds, Certificate, Evidence, Kind};

/// The lattice data of a period: a primitive positive plane `L₁` inside
/// `N_G^⊥ ∩ Λ₀` and a positive four-space `Π = L₁ ⊕ P₂` with no roots in
/// `Π^⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodOutcome {
    pub certificate: Certificate,
    pub l1: Lattice,
    pub pi: RationalSubspace,
}

/// Builds period data for `N_G ⊂ Λ` in Mukai coordinates, with the split
/// `Λ = U₀ ⊕ Λ₀` given by the `r, s` coordinates. When `through` is given,
/// `P₂` contains it.
pub fn period_construct(ng: &Lattice, through: Option<&[BigInt]>, bounds: &Bounds) -> Result<PeriodOutcome> {
    let mukai = catalog::make("Mukai")?;
    let amb = ng.ambient().ok_or(Error::NoAmbient)?;
    if amb.gram() != mukai.gram() {
        return Err(precondition("N_G must be given in Mukai coordinates"));
    }
    let c = orth_complement(ng)?;
    let sig = c.signature();
    if sig.pos != 4 || c.rank() < 4 {
        return Err(precondition("the orthogonal complement must have signature (4, m)"));
    }
    let mut fixed_v: Option<Vec<BigInt>> = None;
    if let Some(v) = through {
        if v.len() != mukai.rank() {
            return Err(Error::Dimension("vector length differs from the Mukai rank".into()));
        }
        let vq = to_rat_vec(v);
        let ngb = ng.basis().ok_or(Error::NoAmbient)?;
        if (0..ngb.rows()).any(|i| !mukai.rat_inner(ngb.row(i), &vq).is_zero()) {
            return Err(precondition("v must be orthogonal to N_G"));
        }
        if !mukai.norm(v).is_positive() {
            return Err(precondition("v must have positive norm"));
        }
        fixed_v = Some(v.to_vec());
    }
    // K = C ∩ Λ₀ (with v^⊥ when v is given): the kernel of the projection to U₀.
    let cb = c.basis_int()?;
    let mut cond = cb.select_cols(&[MUKAI_R, MUKAI_S]);
    if let Some(v) = &fixed_v {
        let gv = mukai.gram().vec_mul(v);
        cond = cond.hstack(&IntMatrix::from_rows(alloc::vec![cb.transpose().vec_mul(&gv)], cb.rows()).transpose());
    }
    let kb = int_kernel(&cond).mul(&cb);
    let k = sublattice(&mukai, &kb)?;
    let mut cert = Certificate::new(Kind::Period);
    cert.put("rank_coinvariant", Evidence::int(ng.rank() as u64));
    cert.put(
        "complement_signature",
        Evidence::List(alloc::vec![Evidence::int(sig.pos as u64), Evidence::int(sig.neg as u64)]),
    );
    cert.put("kernel_rank", Evidence::int(k.rank() as u64));
    let l1_sampler = Sampler::new(&k, 2, bounds.coord_bound)?;
    let mut stream = rng(bounds.seed);
    let dim2 = if fixed_v.is_some() { 1 } else { 2 };
    for attempt in 0..bounds.attempts {
        let (local, _) = l1_sampler.draw(&mut stream, 2);
        let rows: Vec<Vec<BigInt>> =
            l1_sampler.to_ambient(&local).row_vecs().iter().map(|r| clear_denominators(r).0).collect();
        let l1 = saturation(&sublattice(&mukai, &IntMatrix::from_rows(rows, mukai.rank()))?)?;
        if !l1.is_positive_definite() {
            continue;
        }
        let mut fixed = l1.basis().expect("embedded").clone();
        if let Some(v) = &fixed_v {
            fixed = fixed.vstack(&RatMatrix::from_rows(alloc::vec![to_rat_vec(v)], mukai.rank()));
        }
        // P₂ is drawn from C ∩ fixed^⊥.
        let cf = fixed.mul(&mukai.gram().to_rat()).mul(&cb.to_rat().transpose());
        let (cf_int, _) = cf.clear_denominators();
        let region = sublattice(&mukai, &int_kernel(&cf_int.transpose()).mul(&cb))?;
        let p2_sampler = Sampler::new(&region, dim2, bounds.coord_bound)?;
        let (p2_local, _) = p2_sampler.draw(&mut stream, dim2);
        let p2 = p2_sampler.to_ambient(&p2_local);
        let pi = RationalSubspace::new(mukai.clone(), fixed.vstack(&p2))?;
        if !pi.is_positive() || !roots_in_complement_capped(&pi, bounds.cap)?.is_empty() {
            continue;
        }
        let alpha = ample_class(&l1)?;
        cert.put("attempt", Evidence::int(attempt));
        cert.put("l1_basis", Evidence::rat_matrix(l1.basis().expect("embedded")));
        cert.put("l1_gram", Evidence::int_matrix(l1.gram()));
        cert.put("p2", Evidence::rat_matrix(&p2));
        cert.put("pi", Evidence::rat_matrix(pi.spanning()));
        cert.put("pi_complement_roots", Evidence::int(0u32));
        cert.put("ample_norm", Evidence::Int(mukai.norm(&alpha)));
        cert.put("ample_class", Evidence::int_vec(&alpha));
        if let Some(v) = &fixed_v {
            cert.put("through", Evidence::int_vec(v));
        }
        cert.pass = true;
        return Ok(PeriodOutcome { certificate: cert, l1, pi });
    }
    Err(Error::NotFoundWithinBounds)
}

/// A positive integral vector of `L₁^⊥ ∩ Λ₀`, in Mukai coordinates.
fn ample_class(l1: &Lattice) -> Result<Vec<BigInt>> {
    let mukai = catalog::make("Mukai")?;
    let k3 = catalog::k3_in_mukai();
    let kb = k3.basis_int()?;
    let lb = l1.basis_int()?;
    let m = kb.mul(mukai.gram()).mul(&lb.transpose());
    let perp = sublattice(&mukai, &int_kernel(&m).mul(&kb))?;
    let (p, d) = diagonalize(&perp.gram().to_rat());
    let i = (0..d.len()).find(|&i| d[i].is_positive()).ok_or(Error::NotFoundWithinBounds)?;
    let local = clear_denominators(p.row(i)).0;
    let pb = perp.basis_int()?;
    Ok(pb.vec_mul(&local))
}

/// Places a lattice isometric to `E8(−2)` in Mukai coordinates as the
/// diagonal `x ↦ (x, x)` of `E8(−1)²`. `Ok(None)` when `ng` is not
/// isometric to `E8(−2)`.
pub fn embed_via_e8_doubling(ng: &Lattice, cap: u64) -> Result<Option<Lattice>> {
    let ng = ng.to_abstract();
    if ng.rank() != 8 {
        return Ok(None);
    }
    let e8_2 = crate::lattice::rescale(&catalog::e8(), -2)?;
    let Some(w) = crate::embed::search_embedding(&ng, &e8_2, cap)? else {
        return Ok(None);
    };
    let mut rows = IntMatrix::zeros(8, catalog::MUKAI_RANK);
    for i in 0..8 {
        for j in 0..8 {
            rows[(i, 1 + j)] = w.map[(i, j)].clone();
            rows[(i, 9 + j)] = w.map[(i, j)].clone();
        }
    }
    Lattice::embedded(&catalog::make("Mukai")?, rows.to_rat()).map(Some)
}

//! The K3 lattice, the Mukai lattice, and `Γ = N ⊕ U`.
//!
//! Mukai coordinates: index 0 is `r`, indices `1..=22` are the K3 lattice
//! `E8(−1)² ⊕ U³`, index 23 is `s`, and `((r, c, s), (r', c', s')) =
//! (c, c') − r·s' − r'·s`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::leech::leech;
use crate::arith::{hnf, int_kernel, rat_bilinear, IntMatrix, RatVec};
use crate::error::{Error, Result};
use crate::lattice::{direct_sum, direct_sum_all, sublattice, Lattice};

pub const MUKAI_RANK: usize = 24;
pub const MUKAI_R: usize = 0;
pub const MUKAI_S: usize = 23;
pub const K3_RANK: usize = 22;
/// Index of `e` (the Weyl vector) in `Γ`; `f` follows it.
pub const GAMMA_E: usize = 24;
pub const GAMMA_F: usize = 25;

const E8_CARTAN: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

fn from_array<const N: usize>(a: &[[i64; N]; N], sign: i64) -> IntMatrix {
    let data = a.iter().flat_map(|r| r.iter().map(move |&x| BigInt::from(sign * x))).collect();
    IntMatrix::new(N, N, data)
}

pub fn e8() -> Lattice {
    Lattice::from_gram(from_array(&E8_CARTAN, 1)).expect("symmetric").with_name("E8")
}

pub fn e8_neg() -> Lattice {
    Lattice::from_gram(from_array(&E8_CARTAN, -1)).expect("symmetric").with_name("E8neg")
}

pub fn u() -> Lattice {
    Lattice::from_gram(IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).expect("symmetric").with_name("U")
}

pub fn a1() -> Lattice {
    Lattice::from_gram(IntMatrix::from_i64(&[&[2]])).expect("symmetric").with_name("A1")
}

pub fn a1_neg() -> Lattice {
    Lattice::from_gram(IntMatrix::from_i64(&[&[-2]])).expect("symmetric").with_name("A1neg")
}

/// `Λ₀ = E8(−1)² ⊕ U³`, signature (3, 19).
pub fn k3() -> Lattice {
    direct_sum_all(&[e8_neg(), e8_neg(), u(), u(), u()]).with_name("K3")
}

/// `Λ = U₀ ⊕ Λ₀` in Mukai coordinates, signature (4, 20).
pub fn mukai() -> Lattice {
    let l0 = k3();
    let mut g = IntMatrix::zeros(MUKAI_RANK, MUKAI_RANK);
    for i in 0..K3_RANK {
        for j in 0..K3_RANK {
            g[(i + 1, j + 1)] = l0.gram()[(i, j)].clone();
        }
    }
    g[(MUKAI_R, MUKAI_S)] = BigInt::from(-1);
    g[(MUKAI_S, MUKAI_R)] = BigInt::from(-1);
    Lattice::from_gram(g).expect("symmetric").with_name("Mukai")
}

/// `Γ = N ⊕ U`, even unimodular of signature (1, 25).
pub fn gamma() -> Lattice {
    direct_sum(&leech(), &u()).with_name("Gamma")
}

/// The isotropic primitive vector `w = e` of the `U` summand of `Γ`.
pub fn weyl_vector() -> Vec<BigInt> {
    let mut w = alloc::vec![BigInt::zero(); GAMMA_F + 1];
    w[GAMMA_E] = BigInt::one();
    w
}

/// `(d, d) = −2` and `(d, w) = 1`.
pub fn is_leech_root(d: &[BigInt]) -> Result<bool> {
    let g = gamma();
    if d.len() != g.rank() {
        return Err(Error::Dimension("vector does not live in Gamma".into()));
    }
    Ok(g.norm(d) == BigInt::from(-2) && g.inner(d, &weyl_vector()).is_one())
}

/// `w^⊥ / Z·w` for the Weyl vector of `Γ`.
pub fn gamma_mod_w() -> Lattice {
    let g = gamma();
    let w = weyl_vector();
    // w is isotropic, so the complement is taken directly as a kernel.
    let m = g.gram().mul(&IntMatrix::from_rows(alloc::vec![w.clone()], g.rank()).transpose());
    let perp = int_kernel(&m);
    quotient_by_isotropic(&g, &perp, &w).expect("w is primitive in its complement")
}

/// Given a basis `perp` of a saturated sublattice containing the primitive
/// isotropic vector `w` in its radical, returns the quotient lattice.
pub(crate) fn quotient_by_isotropic(amb: &Lattice, perp: &IntMatrix, w: &[BigInt]) -> Result<Lattice> {
    let perp_lat = sublattice(amb, perp)?;
    let b = perp_lat.basis_int()?;
    let c = perp_lat
        .coordinates_of(&crate::arith::to_rat_vec(w))?
        .ok_or_else(|| Error::Precondition("w is not in the sublattice".into()))?;
    let c: Vec<BigInt> = c.iter().map(|x| x.to_integer()).collect();
    let r = b.rows();
    // Fast path: a unit coordinate of w can be dropped.
    let rest: Vec<Vec<BigInt>> = if let Some(t) = (0..r).rev().find(|&t| c[t].is_one() || (-&c[t]).is_one()) {
        (0..r).filter(|&i| i != t).map(|i| b.row(i).to_vec()).collect()
    } else {
        // Complete c to a unimodular matrix M with first row c.
        let col = IntMatrix::from_rows(c.iter().map(|x| alloc::vec![x.clone()]).collect(), 1);
        let (h, u) = hnf(&col);
        if !h[(0, 0)].is_one() {
            return Err(Error::Precondition("w is not primitive".into()));
        }
        let m = u.transpose().to_rat().inverse()?.to_int().expect("unimodular");
        let nb = m.mul(&b);
        (1..r).map(|i| nb.row(i).to_vec()).collect()
    };
    let comp = IntMatrix::from_rows(rest, amb.rank());
    let gram = comp.mul(amb.gram()).mul(&comp.transpose());
    Lattice::from_gram(gram)
}

/// `exp(β)` acting on Mukai vectors, `(r, c, s) ↦ (r, c + r·β, s + (β, c) + r·(β, β)/2)`.
pub fn exp_b(beta: &[BigInt]) -> Result<IntMatrix> {
    if beta.len() != K3_RANK {
        return Err(Error::Dimension("beta must live in the K3 lattice".into()));
    }
    let l0 = k3();
    let bb = l0.norm(beta);
    let bg = l0.gram().vec_mul(beta);
    let mut m = IntMatrix::identity(MUKAI_RANK);
    for k in 0..K3_RANK {
        m[(MUKAI_R, k + 1)] = beta[k].clone();
        m[(k + 1, MUKAI_S)] = bg[k].clone();
    }
    m[(MUKAI_R, MUKAI_S)] = bb / 2;
    Ok(m)
}

/// Real and imaginary parts of `exp(B + iα)` as rational Mukai vectors.
pub fn period_vector(b: &[BigRational], alpha: &[BigRational]) -> Result<(RatVec, RatVec)> {
    if b.len() != K3_RANK || alpha.len() != K3_RANK {
        return Err(Error::Dimension("B and alpha must live in the K3 lattice".into()));
    }
    let g0 = k3();
    let g0 = g0.gram();
    let half = BigRational::new(1.into(), 2.into());
    let bb = rat_bilinear(b, g0, b);
    let aa = rat_bilinear(alpha, g0, alpha);
    let ba = rat_bilinear(b, g0, alpha);
    let mut re = alloc::vec![BigRational::zero(); MUKAI_RANK];
    let mut im = alloc::vec![BigRational::zero(); MUKAI_RANK];
    re[MUKAI_R] = BigRational::one();
    re[1..=K3_RANK].clone_from_slice(&b[..K3_RANK]);
    im[1..=K3_RANK].clone_from_slice(&alpha[..K3_RANK]);
    re[MUKAI_S] = (bb - aa) * half;
    im[MUKAI_S] = ba;
    Ok((re, im))
}

/// Embeds a K3-lattice vector into Mukai coordinates.
pub fn k3_to_mukai(c: &[BigInt]) -> Vec<BigInt> {
    let mut v = alloc::vec![BigInt::zero(); MUKAI_RANK];
    v[1..=K3_RANK].clone_from_slice(c);
    v
}

/// The K3 part `Λ₀ ⊂ Λ` as a sublattice (coordinates `1..=22`).
pub fn k3_in_mukai() -> Lattice {
    let m = mukai();
    let rows = (1..=K3_RANK)
        .map(|i| {
            let mut r = alloc::vec![BigInt::zero(); MUKAI_RANK];
            r[i] = BigInt::one();
            r
        })
        .collect();
    sublattice(&m, &IntMatrix::from_rows(rows, MUKAI_RANK)).expect("valid")
}

/// `U₀ = ⟨e_r, e_s⟩ ⊂ Λ`; its complement is [`k3_in_mukai`].
pub fn u0_in_mukai() -> Lattice {
    let m = mukai();
    let mut b = IntMatrix::zeros(2, MUKAI_RANK);
    b[(0, MUKAI_R)] = BigInt::one();
    b[(1, MUKAI_S)] = BigInt::one();
    sublattice(&m, &b).expect("valid")
}

//! Leech lattice and the Niemeier lattice with root system A1²⁴, both
//! negative definite, built from the Golay code.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::golay::{golay, Permutation};
use crate::arith::{hnf, IntMatrix};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

fn word_row(w: u32, scale: i64) -> Vec<BigInt> {
    (0..24).map(|i| BigInt::from(if w >> i & 1 == 1 { scale } else { 0 })).collect()
}

fn nonzero_rows(h: &IntMatrix) -> IntMatrix {
    let idx: Vec<usize> = (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).collect();
    h.select_rows(&idx)
}

/// Basis of the Leech lattice inside `Z²⁴`, scaled by `√8`: the rows span
/// `2·C + 4·D₂₄ + Z·(−3, 1²³)` with `C` the Golay code.
pub fn leech_basis() -> IntMatrix {
    let code = golay();
    let mut rows: Vec<Vec<BigInt>> = code.generator().iter().map(|&w| word_row(w, 2)).collect();
    for i in 0..23 {
        let mut r = alloc::vec![BigInt::zero(); 24];
        r[i] = BigInt::from(4);
        r[i + 1] = BigInt::from(-4);
        rows.push(r);
    }
    let mut r = alloc::vec![BigInt::zero(); 24];
    r[22] = BigInt::from(4);
    r[23] = BigInt::from(4);
    rows.push(r);
    let mut r = alloc::vec![BigInt::from(1); 24];
    r[0] = BigInt::from(-3);
    rows.push(r);
    let m = IntMatrix::from_rows(rows, 24);
    nonzero_rows(&hnf(&m).0)
}

fn scaled_gram(b: &IntMatrix, denom: i64) -> IntMatrix {
    let g = b.mul(&b.transpose());
    let d = BigInt::from(-denom);
    let data = g.entries().iter().map(|x| x / &d).collect();
    IntMatrix::new(g.rows(), g.cols(), data)
}

/// The Leech lattice `N`: even, unimodular, negative definite, no roots.
pub fn leech() -> Lattice {
    Lattice::from_gram(scaled_gram(&leech_basis(), 8)).expect("symmetric").with_name("Leech")
}

/// Basis of `2·Z²⁴ + C` (scaled by `√2`).
pub fn niemeier_a1_basis() -> IntMatrix {
    let code = golay();
    let mut rows: Vec<Vec<BigInt>> = code.generator().iter().map(|&w| word_row(w, 1)).collect();
    for i in 0..24 {
        let mut r = alloc::vec![BigInt::zero(); 24];
        r[i] = BigInt::from(2);
        rows.push(r);
    }
    nonzero_rows(&hnf(&IntMatrix::from_rows(rows, 24)).0)
}

/// The Niemeier lattice with root system `A1²⁴`, negative definite.
pub fn niemeier_a1() -> Lattice {
    Lattice::from_gram(scaled_gram(&niemeier_a1_basis(), 2)).expect("symmetric").with_name("NiemeierA1")
}

fn perm_matrix(p: &Permutation) -> IntMatrix {
    let n = p.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, &j) in p.image().iter().enumerate() {
        m[(i, j)] = BigInt::from(1);
    }
    m
}

/// Matrix of the coordinate permutation `p` in the stored Leech basis
/// (row convention: `x ↦ x·g`).
pub fn perm_isometry_on_leech(p: &Permutation) -> Result<IntMatrix> {
    if p.len() != 24 {
        return Err(Error::Dimension("Leech permutations act on 24 points".into()));
    }
    let b = leech_basis();
    let binv = b.to_rat().inverse()?;
    let g = b.mul(&perm_matrix(p)).to_rat().mul(&binv);
    let g = g.to_int().ok_or(Error::NotCodeAutomorphism)?;
    let gram = scaled_gram(&b, 8);
    if g.mul(&gram).mul(&g.transpose()) != gram {
        return Err(Error::NotCodeAutomorphism);
    }
    Ok(g)
}

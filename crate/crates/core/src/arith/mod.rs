//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Vectors are rows
//! and matrices act on the right (`x ↦ x·M`) throughout the crate.

mod int_matrix;
mod ldlt;
mod normal_form;
mod rat_matrix;

pub use int_matrix::IntMatrix;
pub use ldlt::{diagonalize, rat_ldlt, signature_of, Signature};
pub use normal_form::{hnf, int_kernel, snf};
pub use rat_matrix::RatMatrix;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IntVec = Vec<BigInt>;
pub type RatVec = Vec<BigRational>;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_vec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_rat_vec(v: &[BigInt]) -> RatVec {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// gcd of all entries; zero for an all-zero (or empty) slice.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn lcm_denominators<'a>(v: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    v.into_iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Clears denominators of a rational vector, returning `(d·v, d)` with the
/// smallest positive `d` making every entry integral.
pub fn clear_denominators(v: &[BigRational]) -> (IntVec, BigInt) {
    let d = lcm_denominators(v);
    let out = v.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect();
    (out, d)
}

/// Reduces `x` into the half-open interval `[0, m)` for rational `m > 0`.
pub fn rat_mod(x: &BigRational, m: &BigRational) -> BigRational {
    let q = (x / m).floor();
    x - q * m
}

/// Flips the sign so that the first nonzero entry is positive.
pub fn canonical_sign(v: &mut [BigInt]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -core::mem::take(x);
            }
        }
    }
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `x·G·yᵀ` for row vectors.
pub fn bilinear(x: &[BigInt], g: &IntMatrix, y: &[BigInt]) -> BigInt {
    let n = g.rows();
    debug_assert_eq!(x.len(), n);
    debug_assert_eq!(y.len(), n);
    let mut acc = BigInt::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        let mut row = BigInt::zero();
        for j in 0..n {
            if !y[j].is_zero() {
                row += &g[(i, j)] * &y[j];
            }
        }
        acc += &x[i] * row;
    }
    acc
}

pub fn rat_bilinear(x: &[BigRational], g: &IntMatrix, y: &[BigRational]) -> BigRational {
    let n = g.rows();
    let mut acc = BigRational::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        let mut row = BigRational::zero();
        for j in 0..n {
            if !y[j].is_zero() && !g[(i, j)].is_zero() {
                row += &y[j] * BigRational::from_integer(g[(i, j)].clone());
            }
        }
        acc += &x[i] * row;
    }
    acc
}

/// Exact square root test: returns `Some(r)` iff `n = r²` with `r ≥ 0`.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_mod_reduces_into_interval() {
        assert_eq!(rat_mod(&rat(-1, 2), &rat(2, 1)), rat(3, 2));
        assert_eq!(rat_mod(&rat(7, 3), &rat(1, 1)), rat(1, 3));
        assert_eq!(rat_mod(&rat(2, 1), &rat(2, 1)), rat(0, 1));
    }

    #[test]
    fn canonical_sign_flips_leading_negative() {
        let mut v = int_vec(&[0, -2, 3]);
        canonical_sign(&mut v);
        assert_eq!(v, int_vec(&[0, 2, -3]));
    }

    #[test]
    fn clear_denominators_uses_lcm() {
        let (v, d) = clear_denominators(&[rat(1, 2), rat(1, 3), rat(2, 1)]);
        assert_eq!(d, int(6));
        assert_eq!(v, int_vec(&[3, 2, 12]));
    }
}

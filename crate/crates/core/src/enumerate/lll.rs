use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::IntMatrix;
use crate::error::{Error, Result};

/// LLL reduction of a positive definite Gram matrix, exact over Q with
/// `δ = 3/4`.
///
/// Returns `(T, G')` with `T` unimodular and `G' = T·G·Tᵀ`; the rows of `T`
/// are the reduced basis vectors in the original coordinates.
pub fn lll_gram(g: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let n = g.rows();
    let mut b = g.clone();
    let mut h = IntMatrix::identity(n);
    if n <= 1 {
        return Ok((h, b));
    }
    let delta = BigRational::new(3.into(), 4.into());
    let half = BigRational::new(1.into(), 2.into());
    let mut mu = alloc::vec![alloc::vec![BigRational::zero(); n]; n];
    let mut bs: Vec<BigRational> = alloc::vec![BigRational::zero(); n];
    bs[0] = BigRational::from_integer(b[(0, 0)].clone());
    if !bs[0].is_positive() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = BigRational::from_integer(b[(k, j)].clone());
                for i in 0..j {
                    u -= &mu[j][i] * &mu[k][i] * &bs[i];
                }
                if j < k {
                    mu[k][j] = u / &bs[j];
                } else {
                    bs[k] = u;
                }
            }
            if !bs[k].is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
        }
        reduce(k, k - 1, &mut b, &mut h, &mut mu, &half);
        let lhs = bs[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bs[k - 1];
        if lhs < rhs {
            swap(k, kmax, &mut b, &mut h, &mut mu, &mut bs);
            k = (k - 1).max(1);
            continue;
        }
        for l in (0..k.saturating_sub(1)).rev() {
            reduce(k, l, &mut b, &mut h, &mut mu, &half);
        }
        k += 1;
    }
    Ok((h, b))
}

fn round(x: &BigRational) -> BigInt {
    // Nearest integer, ties toward +∞; any choice is fine for LLL.
    let two = BigInt::from(2);
    (x.numer() * &two + x.denom()).div_floor(&(x.denom() * two))
}

fn reduce(k: usize, l: usize, b: &mut IntMatrix, h: &mut IntMatrix, mu: &mut [Vec<BigRational>], half: &BigRational) {
    if mu[k][l].abs() <= *half {
        return;
    }
    let q = round(&mu[k][l]);
    let n = b.rows();
    let mq = -&q;
    h.add_row_multiple(k, l, &mq);
    // Gram update for b_k ← b_k − q·b_l.
    let bll = b[(l, l)].clone();
    let bkl = b[(k, l)].clone();
    let bkk = &b[(k, k)] - BigInt::from(2) * &q * &bkl + &q * &q * &bll;
    for j in 0..n {
        if j == k {
            continue;
        }
        let v = &b[(k, j)] - &q * &b[(l, j)];
        b[(k, j)] = v.clone();
        b[(j, k)] = v;
    }
    b[(k, k)] = bkk;
    let qr = BigRational::from_integer(q);
    let mkl = &mu[k][l] - &qr;
    mu[k][l] = mkl;
    for i in 0..l {
        let v = &mu[k][i] - &qr * &mu[l][i];
        mu[k][i] = v;
    }
}

fn swap(
    k: usize,
    kmax: usize,
    b: &mut IntMatrix,
    h: &mut IntMatrix,
    mu: &mut [Vec<BigRational>],
    bs: &mut [BigRational],
) {
    h.swap_rows(k, k - 1);
    b.swap_rows(k, k - 1);
    b.swap_cols(k, k - 1);
    for j in 0..k - 1 {
        let t = mu[k][j].clone();
        mu[k][j] = mu[k - 1][j].clone();
        mu[k - 1][j] = t;
    }
    let m = mu[k][k - 1].clone();
    let bnew = &bs[k] + &m * &m * &bs[k - 1];
    mu[k][k - 1] = &m * &bs[k - 1] / &bnew;
    bs[k] = &bs[k - 1] * &bs[k] / &bnew;
    bs[k - 1] = bnew;
    for i in k + 1..=kmax {
        let t = mu[i][k].clone();
        mu[i][k] = &mu[i][k - 1] - &m * &t;
        let v = &t + &mu[k][k - 1] * &mu[i][k];
        mu[i][k - 1] = v;
    }
}

/// Whether a Gram matrix is positive definite, via exact LDLᵀ.
pub fn is_positive_definite_gram(g: &IntMatrix) -> bool {
    match crate::arith::rat_ldlt(&g.to_rat()) {
        Ok((_, d)) => (0..d.rows()).all(|i| d[(i, i)].is_positive()),
        Err(_) => false,
    }
}

#[cfg(test)]
fn is_size_reduced(g: &IntMatrix) -> bool {
    let (l, _) = match crate::arith::rat_ldlt(&g.to_rat()) {
        Ok(x) => x,
        Err(_) => return false,
    };
    let half = BigRational::new(1.into(), 2.into());
    (0..l.rows()).all(|i| (0..i).all(|j| l[(i, j)].abs() <= half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn reduces_skewed_basis() {
        // Basis (1, 0), (100, 1) of Z² with the standard form.
        let g = IntMatrix::from_i64(&[&[1, 100], &[100, 10001]]);
        let (t, r) = lll_gram(&g).unwrap();
        assert_eq!(r, IntMatrix::identity(2));
        assert!(t.det().abs().is_one());
        assert_eq!(t.mul(&g).mul(&t.transpose()), r);
    }

    #[test]
    fn rejects_indefinite() {
        let g = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(lll_gram(&g), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn leech_reduces() {
        let n = crate::catalog::leech();
        let g = n.gram().neg();
        let (t, r) = lll_gram(&g).unwrap();
        assert_eq!(t.mul(&g).mul(&t.transpose()), r);
        assert!(is_size_reduced(&r));
        assert!(t.det().abs().is_one());
    }
}

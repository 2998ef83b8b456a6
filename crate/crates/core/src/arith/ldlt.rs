use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RatMatrix;
use crate::error::{Error, Result};

/// Exact `G = L·D·Lᵀ` with `L` unit lower triangular and `D` diagonal.
///
/// Fails with [`Error::SingularPivot`] when a leading principal minor
/// vanishes; no pivoting is attempted.
pub fn rat_ldlt(g: &RatMatrix) -> Result<(RatMatrix, RatMatrix)> {
    if !g.is_symmetric() {
        return Err(Error::Dimension("LDL^T of a non-symmetric matrix".into()));
    }
    let n = g.rows();
    let mut l = RatMatrix::identity(n);
    let mut d = alloc::vec![BigRational::zero(); n];
    for j in 0..n {
        let mut dj = g[(j, j)].clone();
        for k in 0..j {
            if !l[(j, k)].is_zero() {
                dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
            }
        }
        if dj.is_zero() {
            return Err(Error::SingularPivot(j));
        }
        for i in j + 1..n {
            let mut s = g[(i, j)].clone();
            for k in 0..j {
                if !l[(i, k)].is_zero() && !l[(j, k)].is_zero() {
                    s -= &l[(i, k)] * &l[(j, k)] * &d[k];
                }
            }
            l[(i, j)] = s / &dj;
        }
        d[j] = dj;
    }
    let mut dm = RatMatrix::zeros(n, n);
    for (i, x) in d.into_iter().enumerate() {
        dm[(i, i)] = x;
    }
    Ok((l, dm))
}

/// Sylvester signature: counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub fn rank(&self) -> usize {
        self.pos + self.neg + self.zero
    }

    pub fn is_positive_definite(&self) -> bool {
        self.neg == 0 && self.zero == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.pos == 0 && self.zero == 0
    }
}

/// Signature by exact symmetric Gaussian elimination (congruence
/// diagonalization).
pub fn signature_of(g: &RatMatrix) -> Signature {
    let (_, d) = diagonalize(g);
    let pos = d.iter().filter(|x| x.is_positive()).count();
    let neg = d.iter().filter(|x| x.is_negative()).count();
    Signature { pos, neg, zero: d.len() - pos - neg }
}

/// Congruence diagonalization `P·G·Pᵀ = diag(d)` with `P` invertible.
///
/// Zero pivots are handled by symmetric swaps, or by `row_i += row_j` when
/// the remaining diagonal vanishes.
pub fn diagonalize(g: &RatMatrix) -> (RatMatrix, Vec<BigRational>) {
    assert!(g.is_symmetric(), "diagonalizing a non-symmetric matrix");
    let n = g.rows();
    let mut a = g.clone();
    let mut p = RatMatrix::identity(n);
    let mut k = 0;
    while k < n {
        if a[(k, k)].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                sym_swap(&mut a, k, i);
                p.swap_rows(k, i);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero())
            {
                // a_ii = a_jj = 0, a_ij ≠ 0: row_i += row_j gives a_ii = 2·a_ij.
                sym_add(&mut a, i, j);
                add_row(&mut p, i, j, &BigRational::one());
                sym_swap(&mut a, k, i);
                p.swap_rows(k, i);
            } else {
                break;
            }
        }
        let inv = a[(k, k)].recip();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] * &inv;
            for j in k..n {
                let v = &a[(k, j)] * &f;
                a[(i, j)] -= v;
            }
            add_row(&mut p, i, k, &-f);
        }
        for j in k + 1..n {
            a[(k, j)] = BigRational::zero();
        }
        for i in k + 1..n {
            a[(i, k)] = BigRational::zero();
        }
        k += 1;
    }
    let d = (0..n).map(|i| a[(i, i)].clone()).collect();
    (p, d)
}

fn add_row(p: &mut RatMatrix, dst: usize, src: usize, f: &BigRational) {
    for c in 0..p.cols() {
        let v = &p[(src, c)] * f;
        p[(dst, c)] += v;
    }
}

fn sym_swap(a: &mut RatMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap_rows(i, j);
    for r in 0..a.rows() {
        let x = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = x;
    }
}

/// `row_i += row_j; col_i += col_j`.
fn sym_add(a: &mut RatMatrix, i: usize, j: usize) {
    let n = a.cols();
    for c in 0..n {
        let v = a[(j, c)].clone();
        a[(i, c)] += v;
    }
    for r in 0..a.rows() {
        let v = a[(r, j)].clone();
        a[(r, i)] += v;
    }
}

#[allow(dead_code)]
fn is_unit_lower(l: &RatMatrix) -> bool {
    (0..l.rows()).all(|i| l[(i, i)].is_one() && (i + 1..l.cols()).all(|j| l[(i, j)].is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, IntMatrix};
    use alloc::vec::Vec;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn ldlt_examples() {
        let d2 = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]).to_rat();
        let (l, d) = rat_ldlt(&d2).unwrap();
        assert_eq!(l, RatMatrix::identity(2));
        assert_eq!(d, d2);

        let a2 = IntMatrix::from_i64(&[&[2, 1], &[1, 2]]).to_rat();
        let (l, d) = rat_ldlt(&a2).unwrap();
        assert_eq!(l[(1, 0)], rat(1, 2));
        assert_eq!(d[(0, 0)], rat(2, 1));
        assert_eq!(d[(1, 1)], rat(3, 2));
        assert_eq!(l.mul(&d).mul(&l.transpose()), a2);

        let u = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).to_rat();
        assert_eq!(rat_ldlt(&u), Err(Error::SingularPivot(0)));
    }

    #[test]
    fn diagonalize_tracks_transform() {
        for g in [
            IntMatrix::from_i64(&[&[0, 1], &[1, 0]]),
            IntMatrix::from_i64(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]),
            IntMatrix::from_i64(&[&[0, 2, 1], &[2, 0, 3], &[1, 3, 0]]),
        ] {
            let g = g.to_rat();
            let (p, d) = diagonalize(&g);
            let dg = p.mul(&g).mul(&p.transpose());
            for i in 0..d.len() {
                for j in 0..d.len() {
                    let want = if i == j { d[i].clone() } else { BigRational::zero() };
                    assert_eq!(dg[(i, j)], want);
                }
            }
            assert!(!p.det().is_zero());
        }
    }

    #[test]
    fn signature_handles_zero_pivots() {
        let u = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).to_rat();
        assert_eq!(signature_of(&u), Signature { pos: 1, neg: 1, zero: 0 });
        let z = IntMatrix::from_i64(&[&[0, 0], &[0, 0]]).to_rat();
        assert_eq!(signature_of(&z), Signature { pos: 0, neg: 0, zero: 2 });
        let deg = IntMatrix::from_i64(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]).to_rat();
        assert_eq!(signature_of(&deg), Signature { pos: 1, neg: 1, zero: 1 });
    }

    fn sym_strategy() -> impl Strategy<Value = RatMatrix> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(-9i64..=9, n * (n + 1) / 2).prop_map(move |v| {
                let mut m = IntMatrix::zeros(n, n);
                let mut it = v.into_iter();
                for i in 0..n {
                    for j in i..n {
                        let x = BigInt::from(it.next().unwrap());
                        m[(i, j)] = x.clone();
                        m[(j, i)] = x;
                    }
                }
                m.to_rat()
            })
        })
    }

    proptest! {
        #[test]
        fn ldlt_reconstructs_and_matches_signature(g in sym_strategy()) {
            if let Ok((l, d)) = rat_ldlt(&g) {
                prop_assert!(is_unit_lower(&l));
                prop_assert_eq!(l.mul(&d).mul(&l.transpose()), g.clone());
                let diag: Vec<_> = (0..d.rows()).map(|i| d[(i, i)].clone()).collect();
                let pos = diag.iter().filter(|x| x.is_positive()).count();
                let neg = diag.iter().filter(|x| x.is_negative()).count();
                let s = signature_of(&g);
                prop_assert_eq!((pos, neg, 0), (s.pos, s.neg, s.zero));
            }
        }

        #[test]
        fn signature_rank_matches(g in sym_strategy()) {
            let s = signature_of(&g);
            prop_assert_eq!(s.pos + s.neg, g.rank());
        }
    }
}

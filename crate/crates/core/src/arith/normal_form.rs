//! Hermite and Smith normal forms over Z, and integral left kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `U·M = H`. `H` is in echelon
/// form with positive pivots, every entry above a pivot reduced into
/// `[0, pivot)`, and zero rows at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let piv = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].magnitude().cmp(h[(b, c)].magnitude()));
            let Some(p) = piv else { break };
            h.swap_rows(p, r);
            u.swap_rows(p, r);
            let mut clean = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form.
///
/// Returns `(S, U, V)` with `U`, `V` unimodular and `U·M·V = S`, where `S`
/// is diagonal with nonnegative entries `d₁ | d₂ | …` (zeros last).
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[(i, j)].magnitude() < a[(bi, bj)].magnitude()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v);
            };
            a.swap_rows(pi, t);
            u.swap_rows(pi, t);
            a.swap_cols(pj, t);
            v.swap_cols(pj, t);

            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, v)
}

fn finish(a: IntMatrix, u: IntMatrix, v: IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    debug_assert!((0..a.rows()).all(|i| (0..a.cols()).all(|j| i == j || a[(i, j)].is_zero())));
    (a, u, v)
}

/// Basis of the integral left kernel `{x ∈ Zⁿ : x·M = 0}` (`n = M.rows()`),
/// returned as the rows of a matrix in Hermite normal form.
///
/// The result is saturated: rows of a unimodular transform that kill `M`
/// always span the full kernel lattice.
pub fn int_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(m);
    let rank = (0..h.rows()).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    let idx: alloc::vec::Vec<usize> = (rank..h.rows()).collect();
    let k = u.select_rows(&idx);
    if k.rows() == 0 {
        return IntMatrix::zeros(0, m.rows());
    }
    hnf(&k).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            let p = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
            match p {
                None => seen_zero = true,
                Some(j) => {
                    if seen_zero || last_pivot.is_some_and(|lp| j <= lp) || !h[(i, j)].is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        if h[(k, j)].is_negative() || h[(k, j)] >= h[(i, j)] {
                            return false;
                        }
                    }
                    last_pivot = Some(j);
                }
            }
        }
        true
    }

    fn is_unimodular(u: &IntMatrix) -> bool {
        u.det().magnitude() == &num_bigint::BigUint::from(1u8)
    }

    #[test]
    fn hnf_examples() {
        let p = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(hnf(&p).0, IntMatrix::identity(2));
        let e = IntMatrix::from_i64(&[&[2, 4], &[0, 6]]);
        assert_eq!(hnf(&e).0, e);
        let g = IntMatrix::from_i64(&[&[2, 0], &[3, 0]]);
        let (h, u) = hnf(&g);
        assert_eq!(h, IntMatrix::from_i64(&[&[1, 0], &[0, 0]]));
        assert_eq!(u.mul(&g), h);
    }

    #[test]
    fn snf_examples() {
        let d = IntMatrix::from_i64(&[&[2, 0], &[0, 4]]);
        assert_eq!(snf(&d).0, d);
        let p = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(snf(&p).0, IntMatrix::identity(2));
        let a3 = IntMatrix::from_i64(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
        let (s, u, v) = snf(&a3);
        assert_eq!(s, IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 4]]));
        assert_eq!(u.mul(&a3).mul(&v), s);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(int_kernel(&IntMatrix::identity(2)).rows(), 0);
        assert_eq!(int_kernel(&IntMatrix::zeros(2, 2)), IntMatrix::identity(2));
        // x - y = 0, written as the left kernel of the column [1, -1]ᵀ.
        let m = IntMatrix::from_i64(&[&[1, -1]]).transpose();
        assert_eq!(int_kernel(&m), IntMatrix::from_i64(&[&[1, 1]]));
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has kernel spanned by (2, -1), not (4, -2).
        let m = IntMatrix::from_i64(&[&[2], &[4]]);
        let k = int_kernel(&m);
        assert_eq!(k.rows(), 1);
        assert_eq!(crate::arith::content(k.row(0)), BigInt::from(1));
    }

    fn matrix_strategy(max_dim: usize, max_abs: i64) -> impl Strategy<Value = IntMatrix> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(-max_abs..=max_abs, r * c)
                .prop_map(move |d| IntMatrix::new(r, c, d.into_iter().map(BigInt::from).collect::<Vec<_>>()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn hnf_identity_holds(m in matrix_strategy(12, 1_000_000)) {
            let (h, u) = hnf(&m);
            prop_assert_eq!(u.mul(&m), h.clone());
            prop_assert!(is_unimodular(&u));
            prop_assert!(is_hnf(&h));
        }

        #[test]
        fn snf_identity_and_chain(m in matrix_strategy(12, 1_000_000)) {
            let (s, u, v) = snf(&m);
            prop_assert_eq!(u.mul(&m).mul(&v), s.clone());
            prop_assert!(is_unimodular(&u) && is_unimodular(&v));
            let k = s.rows().min(s.cols());
            for i in 0..k {
                prop_assert!(!s[(i, i)].is_negative());
                if i + 1 < k && !s[(i, i)].is_zero() {
                    prop_assert!(s[(i + 1, i + 1)].is_multiple_of(&s[(i, i)]));
                }
                if i + 1 < k && s[(i, i)].is_zero() {
                    prop_assert!(s[(i + 1, i + 1)].is_zero());
                }
            }
            if m.is_square() {
                let prod: BigInt = (0..k).map(|i| s[(i, i)].clone()).product();
                prop_assert_eq!(prod, m.det().abs());
            }
        }

        #[test]
        fn kernel_kills_and_has_right_rank(m in matrix_strategy(8, 5)) {
            let k = int_kernel(&m);
            prop_assert!(k.mul(&m).is_zero());
            prop_assert_eq!(k.rows() + m.to_rat().rank(), m.rows());
        }
    }

    #[test]
    fn large_random_square_snf() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for dim in [20usize, 30] {
            let data: Vec<BigInt> =
                (0..dim * dim).map(|_| BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000))).collect();
            let m = IntMatrix::new(dim, dim, data);
            let (s, u, v) = snf(&m);
            assert_eq!(u.mul(&m).mul(&v), s);
            let prod: BigInt = (0..dim).map(|i| s[(i, i)].clone()).product();
            assert_eq!(prod, m.det().abs());
            let (h, uh) = hnf(&m);
            assert_eq!(uh.mul(&m), h);
        }
    }
}

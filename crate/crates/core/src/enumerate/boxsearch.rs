//! Bounded search for vectors of a given norm in a coordinate box.
//!
//! Works for indefinite lattices, so it is a bounded search and never a
//! completeness certificate. Coordinates are assigned in index order with
//! values tried as `0, 1, −1, 2, −2, …`; a vector is visited only in its
//! canonical sign (first nonzero coordinate positive).

use alloc::vec::Vec;
use core::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::IntVec;
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Default node budget for box searches.
pub const BOX_NODE_CAP: u64 = 200_000_000;

pub(crate) struct BoxSearch {
    n: usize,
    g: Vec<i128>,
    bound: i64,
    /// `cross[k] = Σ_{k≤i<j} 2|G_ij|·bound²`.
    cross: Vec<i128>,
    cap: u64,
}

/// The order in which values of one coordinate are tried.
pub fn value_order(bound: i64) -> impl Iterator<Item = i64> {
    core::iter::once(0).chain((1..=bound).flat_map(|v| [v, -v]))
}

impl BoxSearch {
    pub fn new(l: &Lattice, coord_bound: u64, cap: u64) -> Result<Self> {
        let n = l.rank();
        let g: Vec<i128> = l
            .gram()
            .entries()
            .iter()
            .map(|x| x.to_i64().map(|v| v as i128))
            .collect::<Option<_>>()
            .ok_or(Error::Overflow)?;
        let bound = i64::try_from(coord_bound).ok().filter(|&b| b <= 1_000_000).ok_or(Error::Overflow)?;
        let b2 = (bound as i128) * (bound as i128);
        let mut cross = alloc::vec![0i128; n + 1];
        for k in (0..n).rev() {
            let mut s = cross[k + 1];
            for j in k + 1..n {
                s += 2 * g[k * n + j].abs() * b2;
            }
            cross[k] = s;
        }
        Ok(Self { n, g, bound, cross, cap })
    }

    /// Visits every canonical-sign vector with `(v, v) = norm` in DFS order.
    pub fn for_each<F>(&self, norm: i128, mut f: F) -> Result<()>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        let mut x = alloc::vec![0i64; self.n];
        let mut lin = alloc::vec![0i128; self.n];
        let mut nodes = 0u64;
        let _ = self.rec(0, 0, norm, &mut x, &mut lin, &mut nodes, &mut f)?;
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn rec<F>(
        &self,
        k: usize,
        fixed: i128,
        norm: i128,
        x: &mut [i64],
        lin: &mut [i128],
        nodes: &mut u64,
        f: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        *nodes += 1;
        if *nodes > self.cap {
            return Err(Error::ResourceCap { what: "box search nodes", cap: self.cap });
        }
        let n = self.n;
        if k == n {
            if fixed == norm && x.iter().any(|&v| v != 0) {
                return Ok(f(x));
            }
            return Ok(ControlFlow::Continue(()));
        }
        // Interval bound on what the free coordinates can still add.
        let b = self.bound as i128;
        let (mut lo, mut hi) = (fixed, fixed);
        for j in k..n {
            let (tl, th) = term_range(self.g[j * n + j], lin[j], b);
            lo += tl;
            hi += th;
        }
        lo -= self.cross[k];
        hi += self.cross[k];
        if norm < lo || norm > hi {
            return Ok(ControlFlow::Continue(()));
        }
        let all_zero = x[..k].iter().all(|&v| v == 0);
        for v in value_order(self.bound) {
            if all_zero && v < 0 {
                continue;
            }
            let vv = v as i128;
            x[k] = v;
            let add = self.g[k * n + k] * vv * vv + lin[k] * vv;
            if v != 0 {
                for j in k + 1..n {
                    lin[j] += 2 * self.g[k * n + j] * vv;
                }
            }
            let r = self.rec(k + 1, fixed + add, norm, x, lin, nodes, f);
            if v != 0 {
                for j in k + 1..n {
                    lin[j] -= 2 * self.g[k * n + j] * vv;
                }
            }
            x[k] = 0;
            if r? == ControlFlow::Break(()) {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Range of `a·t² + c·t` over integers `t ∈ [−b, b]`.
fn term_range(a: i128, c: i128, b: i128) -> (i128, i128) {
    let val = |t: i128| a * t * t + c * t;
    let mut lo = val(-b).min(val(b)).min(0);
    let mut hi = val(-b).max(val(b)).max(0);
    if a != 0 {
        // Vertex at t = −c / (2a); check the nearest integers.
        let t0 = num_integer::Integer::div_floor(&-c, &(2 * a));
        for t in [t0, t0 + 1] {
            if (-b..=b).contains(&t) {
                lo = lo.min(val(t));
                hi = hi.max(val(t));
            }
        }
    }
    (lo, hi)
}

/// All canonical-sign vectors with coordinates in `[−b, b]` and norm
/// `norm`, sorted lexicographically.
pub fn box_vectors_of_norm(l: &Lattice, norm: &BigInt, coord_bound: u64) -> Result<Vec<IntVec>> {
    box_vectors_of_norm_capped(l, norm, coord_bound, BOX_NODE_CAP, usize::MAX).map(|(v, _)| v)
}

/// Like [`box_vectors_of_norm`], but stops after `limit` hits. The flag is
/// true when the result was cut short by `limit`.
pub fn box_vectors_of_norm_capped(
    l: &Lattice,
    norm: &BigInt,
    coord_bound: u64,
    cap: u64,
    limit: usize,
) -> Result<(Vec<IntVec>, bool)> {
    let s = BoxSearch::new(l, coord_bound, cap)?;
    let norm = norm.to_i128().ok_or(Error::Overflow)?;
    let mut out: Vec<IntVec> = Vec::new();
    let mut truncated = false;
    s.for_each(norm, |x| {
        if out.len() == limit {
            truncated = true;
            return ControlFlow::Break(());
        }
        out.push(x.iter().map(|&v| BigInt::from(v)).collect());
        ControlFlow::Continue(())
    })?;
    out.sort_unstable();
    Ok((out, truncated))
}

/// The first vector in DFS order, if any.
pub fn first_box_vector_of_norm(l: &Lattice, norm: &BigInt, coord_bound: u64) -> Result<Option<IntVec>> {
    let (v, _) = box_vectors_of_norm_capped(l, norm, coord_bound, BOX_NODE_CAP, 1)?;
    Ok(v.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int_vec;
    use crate::catalog;

    #[test]
    fn hyperbolic_plane() {
        let u = catalog::u();
        let zero = box_vectors_of_norm(&u, &BigInt::from(0), 1).unwrap();
        assert_eq!(zero, alloc::vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
        let two = box_vectors_of_norm(&u, &BigInt::from(2), 1).unwrap();
        assert_eq!(two, alloc::vec![int_vec(&[1, 1])]);
    }

    #[test]
    fn mukai_has_norm_two_vectors() {
        let v = first_box_vector_of_norm(&catalog::mukai(), &BigInt::from(2), 1).unwrap();
        let v = v.unwrap();
        assert_eq!(catalog::mukai().norm(&v), BigInt::from(2));
    }

    #[test]
    fn matches_brute_force_on_small_indefinite() {
        let l = Lattice::from_gram(crate::arith::IntMatrix::from_i64(&[&[2, 1, 0], &[1, -4, 3], &[0, 3, 0]])).unwrap();
        for norm in -6..=6 {
            let got = box_vectors_of_norm(&l, &BigInt::from(norm), 2).unwrap();
            let mut want = Vec::new();
            for a in -2..=2i64 {
                for b in -2..=2i64 {
                    for c in -2..=2i64 {
                        let v = int_vec(&[a, b, c]);
                        let first = [a, b, c].into_iter().find(|&t| t != 0);
                        if first.is_some_and(|t| t > 0) && l.norm(&v) == BigInt::from(norm) {
                            want.push(v);
                        }
                    }
                }
            }
            want.sort();
            assert_eq!(got, want, "norm {norm}");
        }
    }

    #[test]
    fn limit_flags_truncation() {
        let (v, t) = box_vectors_of_norm_capped(&catalog::u(), &BigInt::from(0), 3, BOX_NODE_CAP, 1).unwrap();
        assert_eq!(v.len(), 1);
        assert!(t);
    }
}

//! Fincke–Pohst enumeration with integer-only bounds.
//!
//! With `G = L·D·Lᵀ` the norm is `Σ dᵢ (yᵢ + Σ_{j>i} L_ji y_j)²`. Let `den`
//! be a common denominator of `L` and `F` one of `D`. Then
//! `zᵢ = den·yᵢ + Σ_{j>i} (den·L_ji)·y_j` and `aᵢ = F·dᵢ` are integers and
//! the condition reads `Σ aᵢ zᵢ² ≤ F·den²·bound`, so every interval
//! endpoint is an exact floor or ceiling of integers.

use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::lll::lll_gram;
use crate::arith::{canonical_sign, rat_ldlt, IntMatrix, IntVec};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Default node budget for one enumeration.
pub const NODE_CAP: u64 = 100_000_000;

/// Machine or big integers, with overflow reported as `None`.
trait Scalar: Clone + Ord + Send + Sync {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn floor_div(&self, o: &Self) -> Self;
    fn ceil_div(&self, o: &Self) -> Self;
    fn isqrt(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_neg(&self) -> bool;
}

impl Scalar for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn floor_div(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn ceil_div(&self, o: &Self) -> Self {
        -Integer::div_floor(&-*self, o)
    }
    fn isqrt(&self) -> Self {
        i128::isqrt(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
}

impl Scalar for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn floor_div(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn ceil_div(&self, o: &Self) -> Self {
        -Integer::div_floor(&-self, o)
    }
    fn isqrt(&self) -> Self {
        self.sqrt()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

/// Integer data of the scaled LDLᵀ decomposition.
struct Kernel<S> {
    n: usize,
    den: S,
    /// `lint[j][i] = den·L_ji` for `j > i`.
    lint: Vec<Vec<S>>,
    a: Vec<S>,
    total: S,
}

impl<S: Scalar> Kernel<S> {
    fn new(l: &crate::arith::RatMatrix, d: &[BigRational], bound: &BigInt) -> Option<Self> {
        let n = d.len();
        let den_b = l.denominator();
        let f_b = crate::arith::lcm_denominators(d);
        let den = S::from_big(&den_b)?;
        let mut lint = alloc::vec![Vec::new(); n];
        for (j, row) in lint.iter_mut().enumerate() {
            for i in 0..n {
                let v = if j > i {
                    (&l[(j, i)] * BigRational::from_integer(den_b.clone())).to_integer()
                } else {
                    BigInt::zero()
                };
                row.push(S::from_big(&v)?);
            }
        }
        let a = d
            .iter()
            .map(|x| S::from_big(&(x * BigRational::from_integer(f_b.clone())).to_integer()))
            .collect::<Option<Vec<S>>>()?;
        let total = S::from_big(&(bound * &f_b * &den_b * &den_b))?;
        Some(Self { n, den, lint, a, total })
    }

    /// Enumerates one subtree: the top coordinate is fixed to `top`.
    /// Returns `None` on overflow.
    fn run_top(&self, top: &S, nodes: &AtomicU64, cap: u64) -> core::result::Result<Option<Vec<Vec<S>>>, Error> {
        let n = self.n;
        let mut out = Vec::new();
        let mut y: Vec<S> = alloc::vec![S::from_i64(0); n];
        let mut rem: Vec<S> = alloc::vec![S::from_i64(0); n + 1];
        rem[n] = self.total.clone();
        y[n - 1] = top.clone();
        match self.descend(n - 1, &mut y, &mut rem, &mut out, nodes, cap)? {
            true => Ok(Some(out)),
            false => Ok(None),
        }
    }

    /// `y[level]` is already set; checks it, then recurses below.
    fn descend(
        &self,
        level: usize,
        y: &mut Vec<S>,
        rem: &mut Vec<S>,
        out: &mut Vec<Vec<S>>,
        nodes: &AtomicU64,
        cap: u64,
    ) -> core::result::Result<bool, Error> {
        if nodes.fetch_add(1, Ordering::Relaxed) >= cap {
            return Err(Error::ResourceCap { what: "short-vector enumeration nodes", cap });
        }
        let Some(z) = self.z(level, y) else { return Ok(false) };
        let Some(used) = z.mul(&z).and_then(|zz| zz.mul(&self.a[level])) else { return Ok(false) };
        let Some(r) = rem[level + 1].sub(&used) else { return Ok(false) };
        if r.is_neg() {
            return Ok(true);
        }
        rem[level] = r;
        if level == 0 {
            if y.iter().any(|v| !v.is_zero()) {
                out.push(y.clone());
            }
            return Ok(true);
        }
        let next = level - 1;
        let Some((lo, hi)) = self.range(next, y, &rem[level]) else { return Ok(false) };
        // Canonical sign: while everything above is zero, stay nonnegative.
        let all_zero = y[level..].iter().all(|v| v.is_zero());
        let lo = if all_zero && lo.is_neg() { S::from_i64(0) } else { lo };
        let mut v = lo;
        while v <= hi {
            y[next] = v.clone();
            if !self.descend(next, y, rem, out, nodes, cap)? {
                return Ok(false);
            }
            let Some(nv) = v.add(&S::from_i64(1)) else { return Ok(false) };
            v = nv;
        }
        y[next] = S::from_i64(0);
        Ok(true)
    }

    /// `z_i = den·y_i + Σ_{j>i} lint[j][i]·y_j`.
    fn z(&self, i: usize, y: &[S]) -> Option<S> {
        let mut s = self.den.mul(&y[i])?;
        for j in i + 1..self.n {
            if !y[j].is_zero() && !self.lint[j][i].is_zero() {
                s = s.add(&self.lint[j][i].mul(&y[j])?)?;
            }
        }
        Some(s)
    }

    /// Range of `y_i` with `a_i·z_i² ≤ rem`.
    fn range(&self, i: usize, y: &[S], rem: &S) -> Option<(S, S)> {
        let mut s = S::from_i64(0);
        for j in i + 1..self.n {
            if !y[j].is_zero() && !self.lint[j][i].is_zero() {
                s = s.add(&self.lint[j][i].mul(&y[j])?)?;
            }
        }
        let r = rem.floor_div(&self.a[i]).isqrt();
        let neg_r = S::from_i64(0).sub(&r)?;
        let lo = neg_r.sub(&s)?.ceil_div(&self.den);
        let hi = r.sub(&s)?.floor_div(&self.den);
        Some((lo, hi))
    }

    fn top_range(&self) -> Option<(S, S)> {
        let y = alloc::vec![S::from_i64(0); self.n];
        let (_, hi) = self.range(self.n - 1, &y, &self.total)?;
        Some((S::from_i64(0), hi))
    }

    fn enumerate(&self, cap: u64) -> core::result::Result<Option<Vec<Vec<S>>>, Error> {
        let Some((lo, hi)) = self.top_range() else { return Ok(None) };
        let mut tops = Vec::new();
        let mut v = lo;
        while v <= hi {
            tops.push(v.clone());
            v = match v.add(&S::from_i64(1)) {
                Some(x) => x,
                None => return Ok(None),
            };
        }
        let nodes = AtomicU64::new(0);
        let parts = run_parts(self, &tops, &nodes, cap)?;
        let mut out = Vec::new();
        for p in parts {
            match p {
                Some(v) => out.extend(v),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }
}

#[cfg(feature = "parallel")]
fn run_parts<S: Scalar>(
    k: &Kernel<S>,
    tops: &[S],
    nodes: &AtomicU64,
    cap: u64,
) -> core::result::Result<Vec<Option<Vec<Vec<S>>>>, Error> {
    use rayon::prelude::*;
    tops.par_iter().map(|t| k.run_top(t, nodes, cap)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_parts<S: Scalar>(
    k: &Kernel<S>,
    tops: &[S],
    nodes: &AtomicU64,
    cap: u64,
) -> core::result::Result<Vec<Option<Vec<Vec<S>>>>, Error> {
    tops.iter().map(|t| k.run_top(t, nodes, cap)).collect()
}

/// All nonzero `v` with `(v, v) ≤ bound`, one per sign pair (first nonzero
/// coordinate positive), sorted lexicographically, each with its norm.
pub fn short_vectors(l: &Lattice, bound: &BigInt) -> Result<Vec<(IntVec, BigInt)>> {
    short_vectors_capped(l, bound, NODE_CAP)
}

pub fn short_vectors_capped(l: &Lattice, bound: &BigInt, cap: u64) -> Result<Vec<(IntVec, BigInt)>> {
    short_vectors_gram(l.gram(), bound, cap)
}

pub(crate) fn short_vectors_gram(g: &IntMatrix, bound: &BigInt, cap: u64) -> Result<Vec<(IntVec, BigInt)>> {
    let n = g.rows();
    if n == 0 || !bound.is_positive() {
        if n > 0 {
            check_pd(g)?;
        }
        return Ok(Vec::new());
    }
    check_pd(g)?;
    let (t, red) = lll_gram(g)?;
    let (l, d) = rat_ldlt(&red.to_rat()).map_err(|_| Error::NotPositiveDefinite)?;
    let dv: Vec<BigRational> = (0..n).map(|i| d[(i, i)].clone()).collect();

    let ys: Vec<Vec<BigInt>> = match Kernel::<i128>::new(&l, &dv, bound) {
        Some(k) => match k.enumerate(cap)? {
            Some(v) => v.into_iter().map(|y| y.iter().map(Scalar::to_big).collect()).collect(),
            None => big_enumerate(&l, &dv, bound, cap)?,
        },
        None => big_enumerate(&l, &dv, bound, cap)?,
    };
    let mut out = map_back(&ys, &t, g);
    out.sort_unstable();
    Ok(out)
}

fn big_enumerate(l: &crate::arith::RatMatrix, d: &[BigRational], bound: &BigInt, cap: u64) -> Result<Vec<Vec<BigInt>>> {
    let k = Kernel::<BigInt>::new(l, d, bound).expect("big integers never overflow");
    Ok(k.enumerate(cap)?.expect("big integers never overflow"))
}

fn check_pd(g: &IntMatrix) -> Result<()> {
    match rat_ldlt(&g.to_rat()) {
        Ok((_, d)) if (0..d.rows()).all(|i| d[(i, i)].is_positive()) => Ok(()),
        _ => Err(Error::NotPositiveDefinite),
    }
}

/// `x = y·T`, canonical sign, exact norm.
fn map_back(ys: &[Vec<BigInt>], t: &IntMatrix, g: &IntMatrix) -> Vec<(IntVec, BigInt)> {
    let n = t.rows();
    let small_t: Option<Vec<i64>> = t.entries().iter().map(|x| x.to_i64()).collect();
    let small_g: Option<Vec<i64>> = g.entries().iter().map(|x| x.to_i64()).collect();
    ys.iter()
        .map(|y| {
            let fast = match (&small_t, &small_g) {
                (Some(ts), Some(gs)) => map_small(y, ts, gs, n),
                _ => None,
            };
            match fast {
                Some(r) => r,
                None => {
                    let mut x = t.vec_mul(y);
                    canonical_sign(&mut x);
                    let nv = crate::arith::bilinear(&x, g, &x);
                    (x, nv)
                }
            }
        })
        .collect()
}

fn map_small(y: &[BigInt], t: &[i64], g: &[i64], n: usize) -> Option<(IntVec, BigInt)> {
    let ys: Vec<i128> = y.iter().map(|v| v.to_i128()).collect::<Option<_>>()?;
    let mut x = alloc::vec![0i128; n];
    for (i, &yi) in ys.iter().enumerate() {
        if yi == 0 {
            continue;
        }
        for j in 0..n {
            x[j] = x[j].checked_add(yi.checked_mul(t[i * n + j] as i128)?)?;
        }
    }
    if let Some(&f) = x.iter().find(|&&v| v != 0) {
        if f < 0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
    let mut norm: i128 = 0;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let mut row: i128 = 0;
        for j in 0..n {
            row = row.checked_add((g[i * n + j] as i128).checked_mul(x[j])?)?;
        }
        norm = norm.checked_add(x[i].checked_mul(row)?)?;
    }
    Some((x.into_iter().map(BigInt::from).collect(), BigInt::from(norm)))
}

/// Roots `(δ, δ) = −2` of a negative definite lattice, up to sign.
pub fn roots(l: &Lattice) -> Result<Vec<IntVec>> {
    roots_capped(l, NODE_CAP)
}

pub fn roots_capped(l: &Lattice, cap: u64) -> Result<Vec<IntVec>> {
    if l.rank() == 0 {
        return Ok(Vec::new());
    }
    let neg = l.gram().neg();
    if check_pd(&neg).is_err() {
        return Err(Error::NotNegativeDefinite);
    }
    let two = BigInt::from(2);
    Ok(short_vectors_gram(&neg, &two, cap)?.into_iter().filter(|(_, nv)| *nv == two).map(|(v, _)| v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn pd(rows: &[&[i64]]) -> Lattice {
        Lattice::from_gram(IntMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn tiny_examples() {
        let v = short_vectors(&pd(&[&[2]]), &BigInt::from(2)).unwrap();
        assert_eq!(v, alloc::vec![(alloc::vec![BigInt::from(1)], BigInt::from(2))]);
        assert_eq!(short_vectors(&pd(&[&[0, 1], &[1, 0]]), &BigInt::from(2)), Err(Error::NotPositiveDefinite));
        assert_eq!(roots(&pd(&[&[2]])), Err(Error::NotNegativeDefinite));
        assert_eq!(roots(&catalog::a1_neg()).unwrap(), alloc::vec![alloc::vec![BigInt::from(1)]]);
    }

    #[test]
    fn e8_roots() {
        let v = short_vectors(&catalog::e8(), &BigInt::from(2)).unwrap();
        assert_eq!(v.len(), 120);
        assert_eq!(roots(&catalog::e8_neg()).unwrap().len(), 120);
        for (x, nv) in &v {
            assert_eq!(&catalog::e8().norm(x), nv);
        }
    }

    #[test]
    fn leech_has_no_short_vectors() {
        let neg = Lattice::from_gram(catalog::leech().gram().neg()).unwrap();
        assert!(short_vectors(&neg, &BigInt::from(3)).unwrap().is_empty());
        assert!(roots(&catalog::leech()).unwrap().is_empty());
    }

    #[test]
    fn niemeier_a1_roots() {
        assert_eq!(roots(&catalog::niemeier_a1()).unwrap().len(), 24);
    }

    #[test]
    fn node_cap_is_reported() {
        let r = short_vectors_capped(&catalog::e8(), &BigInt::from(4), 10);
        assert!(matches!(r, Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn big_integer_path_matches() {
        // Huge scale forces the BigInt kernel.
        let big = BigInt::from(10).pow(30);
        let g = IntMatrix::new(2, 2, alloc::vec![big.clone(), BigInt::zero(), BigInt::zero(), big.clone()]);
        let v = short_vectors_gram(&g, &(&big * 2), NODE_CAP).unwrap();
        assert_eq!(v.len(), 4);
    }

    fn naive(g: &IntMatrix, bound: i64, box_b: i64) -> Vec<(IntVec, BigInt)> {
        let n = g.rows();
        let mut out = Vec::new();
        let mut x = alloc::vec![-box_b; n];
        loop {
            let v: IntVec = x.iter().map(|&c| BigInt::from(c)).collect();
            let first = x.iter().find(|&&c| c != 0);
            if first.is_some_and(|&f| f > 0) {
                let nv = crate::arith::bilinear(&v, g, &v);
                if nv <= BigInt::from(bound) {
                    out.push((v, nv));
                }
            }
            let mut i = n;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                if x[i] < box_b {
                    x[i] += 1;
                    break;
                }
                x[i] = -box_b;
            }
        }
    }

    fn pd_gram() -> impl Strategy<Value = IntMatrix> {
        // A·Aᵀ + I for small integer A: positive definite with modest entries.
        (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec(-2i64..=2, n * n).prop_map(move |a| {
                let am = IntMatrix::new(n, n, a.into_iter().map(BigInt::from).collect());
                am.mul(&am.transpose()).add(&IntMatrix::identity(n))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn agrees_with_box(g in pd_gram(), bound in 1i64..=8) {
            // Every vector of norm ≤ bound has |x_i| ≤ sqrt(bound·(G⁻¹)_ii).
            let inv = g.to_rat().inverse().unwrap();
            let mut box_b = 0i64;
            for i in 0..g.rows() {
                let m = (&inv[(i, i)] * BigRational::from_integer(BigInt::from(bound))).ceil().to_integer();
                let r = m.sqrt().to_i64().unwrap() + 1;
                box_b = box_b.max(r);
            }
            prop_assume!(box_b <= 6);
            let l = Lattice::from_gram(g.clone()).unwrap();
            prop_assert_eq!(short_vectors(&l, &BigInt::from(bound)).unwrap(), naive(&g, bound, box_b));
        }
    }
}

//! Finite quadratic forms and discriminant forms of even lattices.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{rat_mod, snf, RatMatrix};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Default cap on `|A|` for Gauss sums.
pub const GAUSS_SUM_CAP: u64 = 1_000_000;
/// Default cap on the size of the 2-part for [`splits_off_a1`].
pub const SPLIT_CAP: u64 = 1 << 16;
/// Default cap on `|A|` for [`iso_form_small`].
pub const ISO_CAP: u64 = 4096;

/// `(⊕ Z/dᵢ, q)` with `q(x) = x·Q·xᵀ mod 2` and `b(x, y) = x·Q·yᵀ mod 1`.
///
/// Diagonal entries of `Q` are kept in `[0, 2)`, off-diagonal ones in
/// `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteQuadraticForm {
    factors: Vec<BigInt>,
    q: RatMatrix,
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

fn canonical_q(q: &RatMatrix) -> RatMatrix {
    let mut out = q.clone();
    let one = BigRational::one();
    for i in 0..q.rows() {
        for j in 0..q.cols() {
            let m = if i == j { two() } else { one.clone() };
            out[(i, j)] = rat_mod(&q[(i, j)], &m);
        }
    }
    out
}

impl FiniteQuadraticForm {
    pub fn new(factors: Vec<BigInt>, q: RatMatrix) -> Result<Self> {
        let k = factors.len();
        if q.rows() != k || q.cols() != k || !q.is_symmetric() {
            return Err(Error::Dimension("q matrix must be symmetric k×k".into()));
        }
        for (i, d) in factors.iter().enumerate() {
            if *d <= BigInt::one() {
                return Err(Error::DegenerateInput("invariant factors must exceed 1".into()));
            }
            if i + 1 < k && !factors[i + 1].is_multiple_of(d) {
                return Err(Error::DegenerateInput("invariant factors must form a divisibility chain".into()));
            }
            let dr = BigRational::from_integer(d.clone());
            for j in 0..k {
                if !(&dr * &q[(i, j)]).is_integer() {
                    return Err(Error::DegenerateInput("b is not well defined on the group".into()));
                }
            }
            let qq = &dr * &dr * &q[(i, i)];
            if !qq.is_integer() || qq.to_integer().is_odd() {
                return Err(Error::DegenerateInput("q is not well defined on the group".into()));
            }
        }
        Ok(Self { factors, q: canonical_q(&q) })
    }

    pub fn trivial() -> Self {
        Self { factors: Vec::new(), q: RatMatrix::zeros(0, 0) }
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn q_matrix(&self) -> &RatMatrix {
        &self.q
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    /// `q(x)` reduced into `[0, 2)`.
    pub fn q(&self, x: &[BigInt]) -> BigRational {
        rat_mod(&self.raw(x, x), &two())
    }

    /// `b(x, y)` reduced into `[0, 1)`.
    pub fn b(&self, x: &[BigInt], y: &[BigInt]) -> BigRational {
        rat_mod(&self.raw(x, y), &BigRational::one())
    }

    fn raw(&self, x: &[BigInt], y: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.factors.len() {
            for j in 0..self.factors.len() {
                let c = &x[i] * &y[j];
                if !c.is_zero() {
                    acc += &self.q[(i, j)] * BigRational::from_integer(c);
                }
            }
        }
        acc
    }

    /// Orthogonal direct sum. The presentation is the concatenation of the
    /// two presentations, so it need not be a divisibility chain; use
    /// [`FiniteQuadraticForm::factors`] with care on the result.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let k = factors.len();
        let a = self.factors.len();
        let mut q = RatMatrix::zeros(k, k);
        for i in 0..a {
            for j in 0..a {
                q[(i, j)] = self.q[(i, j)].clone();
            }
        }
        for i in 0..other.factors.len() {
            for j in 0..other.factors.len() {
                q[(a + i, a + j)] = other.q[(i, j)].clone();
            }
        }
        Self { factors, q }
    }
}

/// Discriminant form `L*/L` of an even nondegenerate lattice.
pub fn disc_form(l: &Lattice) -> Result<FiniteQuadraticForm> {
    disc_form_with_generators(l).map(|(f, _)| f)
}

/// Discriminant form together with its generators: row `i` of the returned
/// matrix is a vector of `L*` (in `L ⊗ Q` coordinates) mapping to the
/// `i`-th cyclic generator.
pub fn disc_form_with_generators(l: &Lattice) -> Result<(FiniteQuadraticForm, RatMatrix)> {
    if !l.is_even() {
        return Err(Error::OddLattice);
    }
    if !l.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let g = l.gram();
    let (s, u, _) = snf(g);
    let n = l.rank();
    let idx: Vec<usize> = (0..n).filter(|&i| s[(i, i)] > BigInt::one()).collect();
    let factors: Vec<BigInt> = idx.iter().map(|&i| s[(i, i)].clone()).collect();
    let mut gens = RatMatrix::zeros(idx.len(), n);
    for (r, &i) in idx.iter().enumerate() {
        for j in 0..n {
            gens[(r, j)] = BigRational::new(u[(i, j)].clone(), s[(i, i)].clone());
        }
    }
    let q = gens.mul(&g.to_rat()).mul(&gens.transpose());
    let form = FiniteQuadraticForm::new(factors, q)?;
    Ok((form, gens))
}

pub fn ell(a: &FiniteQuadraticForm) -> usize {
    a.factors.len()
}

pub fn ell_p(a: &FiniteQuadraticForm, p: u64) -> usize {
    let p = BigInt::from(p);
    a.factors.iter().filter(|d| d.is_multiple_of(&p)).count()
}

pub fn negate(a: &FiniteQuadraticForm) -> FiniteQuadraticForm {
    let q = a.q.scale(&-BigRational::one());
    FiniteQuadraticForm { factors: a.factors.clone(), q: canonical_q(&q) }
}

/// Integer-scaled copy used by the brute-force routines: `q(x)·n mod 2n`
/// and `b(x, y)·n mod n` with machine integers.
pub(crate) struct Scaled {
    pub d: Vec<i64>,
    qn: Vec<i128>,
    pub n: i128,
}

impl Scaled {
    pub fn new(a: &FiniteQuadraticForm, cap: u64) -> Result<Self> {
        let order = a.order();
        if order > BigInt::from(cap) {
            let size = order.to_u64().unwrap_or(u64::MAX);
            return Err(Error::TooLarge { size, cap });
        }
        let d: Vec<i64> = a.factors.iter().map(|x| x.to_i64().expect("bounded by cap")).collect();
        let n = a.q.denominator();
        let k = d.len();
        let mut qn = Vec::with_capacity(k * k);
        let nr = BigRational::from_integer(n.clone());
        for i in 0..k {
            for j in 0..k {
                let v = (&a.q[(i, j)] * &nr).to_integer();
                qn.push(v.to_i128().ok_or(Error::Overflow)?);
            }
        }
        Ok(Self { d, qn, n: n.to_i128().ok_or(Error::Overflow)? })
    }

    pub fn k(&self) -> usize {
        self.d.len()
    }

    pub fn size(&self) -> usize {
        self.d.iter().map(|&x| x as usize).product()
    }

    pub fn decode(&self, mut idx: usize, out: &mut [i64]) {
        for (o, &d) in out.iter_mut().zip(&self.d) {
            *o = (idx % d as usize) as i64;
            idx /= d as usize;
        }
    }

    pub fn encode(&self, x: &[i64]) -> usize {
        let mut idx = 0usize;
        for (&xi, &d) in x.iter().zip(&self.d).rev() {
            idx = idx * d as usize + xi.rem_euclid(d) as usize;
        }
        idx
    }

    /// `q(x)·n` in `[0, 2n)`.
    pub fn q(&self, x: &[i64]) -> i128 {
        let k = self.k();
        let mut acc: i128 = 0;
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i128;
            acc += self.qn[i * k + i] * xi * xi;
            for j in i + 1..k {
                acc += 2 * self.qn[i * k + j] * xi * x[j] as i128;
            }
            acc = acc.rem_euclid(2 * self.n);
        }
        acc.rem_euclid(2 * self.n)
    }

    /// `b(x, y)·n` in `[0, n)`.
    pub fn b(&self, x: &[i64], y: &[i64]) -> i128 {
        let k = self.k();
        let mut acc: i128 = 0;
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                acc += self.qn[i * k + j] * x[i] as i128 * y[j] as i128;
            }
            acc = acc.rem_euclid(self.n);
        }
        acc
    }

    pub fn order(&self, x: &[i64]) -> i64 {
        x.iter().zip(&self.d).fold(1i64, |acc, (&xi, &d)| acc.lcm(&(d / xi.gcd(&d))))
    }
}

/// Signature mod 8 via the Gauss sum `Σ exp(πi·q(a)) = √|A|·exp(2πi·s/8)`.
pub fn signature_mod8(a: &FiniteQuadraticForm) -> Result<u8> {
    signature_mod8_capped(a, GAUSS_SUM_CAP)
}

pub fn signature_mod8_capped(a: &FiniteQuadraticForm, cap: u64) -> Result<u8> {
    let (re, im) = gauss_sum(a, cap)?;
    let size = a.order().to_f64().unwrap_or(f64::INFINITY);
    let root = libm::sqrt(size);
    let tol = 1e-6 * root;
    let modulus = libm::hypot(re, im);
    if libm::fabs(modulus - root) > tol {
        return Err(Error::DegenerateForm);
    }
    let angle = libm::atan2(im, re);
    let eighths = angle / (core::f64::consts::PI / 4.0);
    let s = libm::round(eighths);
    if libm::fabs(eighths - s) > 1e-6 {
        return Err(Error::DegenerateForm);
    }
    Ok((s as i64).rem_euclid(8) as u8)
}

/// `Σ_{a∈A} exp(πi·q(a))` as `(re, im)`. Values are bucketed by exact
/// phase first, so the floating-point reduction order is fixed.
pub fn gauss_sum(a: &FiniteQuadraticForm, cap: u64) -> Result<(f64, f64)> {
    let s = Scaled::new(a, cap)?;
    let two_n = (2 * s.n) as usize;
    let mut counts = alloc::vec![0u64; two_n];
    let mut x = alloc::vec![0i64; s.k()];
    for idx in 0..s.size() {
        s.decode(idx, &mut x);
        counts[s.q(&x) as usize] += 1;
    }
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let phase = core::f64::consts::PI * k as f64 / s.n as f64;
        re += c as f64 * libm::cos(phase);
        im += c as f64 * libm::sin(phase);
    }
    Ok((re, im))
}

/// Sign convention for the rank-one lattice split off by [`splits_off_a1`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum A1Convention {
    /// Gram `[-2]`, generator value `q = 3/2`.
    #[default]
    Negative,
    /// Gram `[2]`, generator value `q = 1/2`.
    Positive,
}

/// The 2-primary part of `A`, presented by generators `mᵢ·gᵢ`.
pub fn two_part(a: &FiniteQuadraticForm) -> FiniteQuadraticForm {
    let mut factors = Vec::new();
    let mut mults = Vec::new();
    let mut idx = Vec::new();
    for (i, d) in a.factors.iter().enumerate() {
        let mut m = d.clone();
        let mut p2 = BigInt::one();
        while m.is_even() {
            m /= 2;
            p2 *= 2;
        }
        if p2 > BigInt::one() {
            factors.push(p2);
            mults.push(m);
            idx.push(i);
        }
    }
    let k = factors.len();
    let mut q = RatMatrix::zeros(k, k);
    for r in 0..k {
        for c in 0..k {
            let m = BigRational::from_integer(&mults[r] * &mults[c]);
            q[(r, c)] = &a.q[(idx[r], idx[c])] * m;
        }
    }
    FiniteQuadraticForm::new(factors, q).expect("2-part of a valid form is valid")
}

/// Whether `A ≅ A_{A1} ⊕ A'`, decided by brute force on the 2-part.
pub fn splits_off_a1(a: &FiniteQuadraticForm, conv: A1Convention) -> Result<bool> {
    splits_off_a1_capped(a, conv, SPLIT_CAP)
}

pub fn splits_off_a1_capped(a: &FiniteQuadraticForm, conv: A1Convention, cap: u64) -> Result<bool> {
    let t = two_part(a);
    let s = Scaled::new(&t, cap)?;
    let target = match conv {
        A1Convention::Negative => 3 * s.n / 2,
        A1Convention::Positive => s.n / 2,
    };
    if s.n % 2 != 0 || s.k() == 0 {
        return Ok(false);
    }
    let k = s.k();
    let size = s.size();
    let mut x = alloc::vec![0i64; k];
    let mut y = alloc::vec![0i64; k];
    // Order-2 elements: each coordinate is 0 or dᵢ/2.
    for mask in 1u64..(1u64 << k) {
        for i in 0..k {
            x[i] = if mask >> i & 1 == 1 { s.d[i] / 2 } else { 0 };
        }
        if s.q(&x) != target || s.b(&x, &x) != s.n / 2 {
            continue;
        }
        // A = ⟨a⟩ ⊕ a^⊥ iff a^⊥ has index 2 and misses a.
        let mut perp = 0usize;
        for idx in 0..size {
            s.decode(idx, &mut y);
            if s.b(&x, &y) == 0 {
                perp += 1;
            }
        }
        if perp * 2 == size {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Brute-force isomorphism test for small forms.
pub fn iso_form_small(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm) -> Result<bool> {
    iso_form_small_capped(a, b, ISO_CAP)
}

pub fn iso_form_small_capped(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm, cap: u64) -> Result<bool> {
    find_iso_form_small(a, b, cap).map(|m| m.is_some())
}

/// An isometry `a → b`, as the images of the generators of `a` written in
/// the generator coordinates of `b`.
pub fn find_iso_form_small(
    a: &FiniteQuadraticForm,
    b: &FiniteQuadraticForm,
    cap: u64,
) -> Result<Option<Vec<Vec<i64>>>> {
    // Check both sizes against the cap before comparing.
    Scaled::new(a, cap)?;
    Scaled::new(b, cap)?;
    if a.order() != b.order() {
        return Ok(None);
    }
    // Common scale so that values compare as integers.
    let n = a.q.denominator().lcm(&b.q.denominator());
    let sa = rescaled(a, &n, cap)?;
    let sb = rescaled(b, &n, cap)?;
    let size = sb.size();
    let kb = sb.k();
    let mut elems: Vec<Vec<i64>> = Vec::with_capacity(size);
    let mut buf = alloc::vec![0i64; kb];
    let mut qb = Vec::with_capacity(size);
    let mut ordb = Vec::with_capacity(size);
    for idx in 0..size {
        sb.decode(idx, &mut buf);
        qb.push(sb.q(&buf));
        ordb.push(sb.order(&buf));
        elems.push(buf.clone());
    }
    // Cheap invariant: value distribution of (order, q).
    let mut hist_a: Vec<(i64, i128)> = Vec::with_capacity(size);
    let mut xa = alloc::vec![0i64; sa.k()];
    for idx in 0..sa.size() {
        sa.decode(idx, &mut xa);
        hist_a.push((sa.order(&xa), sa.q(&xa)));
    }
    let mut hist_b: Vec<(i64, i128)> = ordb.iter().copied().zip(qb.iter().copied()).collect();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return Ok(None);
    }
    let ka = sa.k();
    let mut unit = alloc::vec![0i64; ka];
    let mut cands: Vec<Vec<usize>> = Vec::with_capacity(ka);
    for i in 0..ka {
        unit.iter_mut().for_each(|u| *u = 0);
        unit[i] = 1;
        let qi = sa.q(&unit);
        cands.push((0..size).filter(|&e| ordb[e] == sa.d[i] && qb[e] == qi).collect());
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(ka);
    let mut member = alloc::vec![false; size];
    member[0] = true;
    if backtrack(&sa, &sb, &elems, &cands, &mut chosen, &mut member) {
        Ok(Some(chosen.iter().map(|&h| elems[h].clone()).collect()))
    } else {
        Ok(None)
    }
}

fn rescaled(a: &FiniteQuadraticForm, n: &BigInt, cap: u64) -> Result<Scaled> {
    let mut s = Scaled::new(a, cap)?;
    let old = a.q.denominator();
    let f = (n / &old).to_i128().ok_or(Error::Overflow)?;
    s.qn.iter_mut().for_each(|v| *v *= f);
    s.n = n.to_i128().ok_or(Error::Overflow)?;
    Ok(s)
}

fn backtrack(
    sa: &Scaled,
    sb: &Scaled,
    elems: &[Vec<i64>],
    cands: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    member: &mut Vec<bool>,
) -> bool {
    let i = chosen.len();
    if i == sa.k() {
        return true;
    }
    let k = sa.k();
    'cand: for &h in &cands[i] {
        for (j, &hj) in chosen.iter().enumerate() {
            if sb.b(&elems[h], &elems[hj]) != sa.qn[i * k + j].rem_euclid(sa.n) {
                continue 'cand;
            }
        }
        // Independence: no proper multiple of h lies in the current span.
        let d = sa.d[i];
        let mut mult = alloc::vec![0i64; sb.k()];
        for m in 1..d {
            for (t, v) in mult.iter_mut().enumerate() {
                *v = elems[h][t] * m;
            }
            if member[sb.encode(&mult)] {
                continue 'cand;
            }
        }
        let span: Vec<usize> = (0..member.len()).filter(|&e| member[e]).collect();
        let saved = member.clone();
        let mut sum = alloc::vec![0i64; sb.k()];
        for &e in &span {
            for m in 1..d {
                for (t, v) in sum.iter_mut().enumerate() {
                    *v = elems[e][t] + elems[h][t] * m;
                }
                member[sb.encode(&sum)] = true;
            }
        }
        chosen.push(h);
        if backtrack(sa, sb, elems, cands, chosen, member) {
            return true;
        }
        chosen.pop();
        *member = saved;
    }
    false
}

/// The discriminant form of `A1(∓1)` under the given convention.
pub fn a1_form(conv: A1Convention) -> FiniteQuadraticForm {
    let v = match conv {
        A1Convention::Negative => BigRational::new(3.into(), 2.into()),
        A1Convention::Positive => BigRational::new(1.into(), 2.into()),
    };
    FiniteQuadraticForm::new(alloc::vec![BigInt::from(2)], RatMatrix::new(1, 1, alloc::vec![v])).expect("valid")
}

/// Lattice-level helper: the discriminant form of `L(-1)` equals the
/// negated form of `L`.
pub fn is_negation_of(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm) -> bool {
    negate(a) == *b
}

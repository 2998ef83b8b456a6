//! The [`Lattice`] type: an integral Gram matrix, optionally embedded in an
//! ambient lattice through a basis matrix.
//!
//! Coordinates are rows. A sublattice's `basis` has one row per basis vector,
//! written in the ambient lattice's coordinates, so that
//! `gram = basis · ambient.gram · basisᵀ`.

mod subspace;

pub use subspace::RationalSubspace;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{content, hnf, int_kernel, rat_bilinear, signature_of, IntMatrix, RatMatrix, RatVec, Signature};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    basis: Option<RatMatrix>,
    ambient: Option<Arc<Lattice>>,
    name: Option<String>,
}

impl Lattice {
    /// An ambient-free lattice given by its Gram matrix.
    pub fn from_gram(gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Dimension("Gram matrix must be square and symmetric".into()));
        }
        Ok(Self { gram, basis: None, ambient: None, name: None })
    }

    /// A lattice spanned by the rows of `basis` inside `ambient`.
    ///
    /// The rows must be linearly independent and the induced Gram matrix
    /// integral.
    pub fn embedded(ambient: &Lattice, basis: RatMatrix) -> Result<Self> {
        if basis.cols() != ambient.rank() {
            return Err(Error::Dimension("basis width differs from ambient rank".into()));
        }
        if basis.rank() != basis.rows() {
            return Err(Error::DependentSpan);
        }
        let g = basis.mul(&ambient.gram.to_rat()).mul(&basis.transpose());
        let gram = g.to_int().ok_or_else(|| Error::DegenerateInput("induced Gram matrix is not integral".into()))?;
        Ok(Self { gram, basis: Some(basis), ambient: Some(Arc::new(ambient.clone())), name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn basis(&self) -> Option<&RatMatrix> {
        self.basis.as_ref()
    }

    pub fn ambient(&self) -> Option<&Lattice> {
        self.ambient.as_deref()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The same Gram data with the embedding forgotten.
    pub fn to_abstract(&self) -> Lattice {
        Lattice { gram: self.gram.clone(), basis: None, ambient: None, name: self.name.clone() }
    }

    /// Integral basis matrix in ambient coordinates.
    pub fn basis_int(&self) -> Result<IntMatrix> {
        let b = self.basis.as_ref().ok_or(Error::NoAmbient)?;
        b.to_int().ok_or_else(|| Error::DegenerateInput("basis is not integral in the ambient".into()))
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn signature(&self) -> Signature {
        signature_of(&self.gram.to_rat())
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature().is_positive_definite()
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature().is_negative_definite()
    }

    pub fn inner(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        crate::arith::bilinear(x, &self.gram, y)
    }

    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        self.inner(x, x)
    }

    pub fn rat_inner(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        rat_bilinear(x, &self.gram, y)
    }

    /// Maps own coordinates to ambient coordinates.
    pub fn to_ambient(&self, x: &[BigRational]) -> Result<RatVec> {
        let b = self.basis.as_ref().ok_or(Error::NoAmbient)?;
        Ok(b.vec_mul(x))
    }

    /// Expresses an ambient vector in this sublattice's coordinates, if it
    /// lies in the rational span.
    pub fn coordinates_of(&self, v: &[BigRational]) -> Result<Option<RatVec>> {
        let b = self.basis.as_ref().ok_or(Error::NoAmbient)?;
        solve_in_span(b, v)
    }
}

/// Solves `x·B = v` for `x`, or `None` if `v` is outside the row span.
pub(crate) fn solve_in_span(b: &RatMatrix, v: &[BigRational]) -> Result<Option<RatVec>> {
    let r = b.rows();
    let n = b.cols();
    if v.len() != n {
        return Err(Error::Dimension("vector length differs from ambient rank".into()));
    }
    // Augmented system Bᵀ·xᵀ = vᵀ.
    let mut aug = RatMatrix::zeros(n, r + 1);
    for i in 0..n {
        for j in 0..r {
            aug[(i, j)] = b[(j, i)].clone();
        }
        aug[(i, r)] = v[i].clone();
    }
    let (red, piv) = aug.rref();
    if piv.last() == Some(&r) {
        return Ok(None);
    }
    let mut x = alloc::vec![BigRational::zero(); r];
    for (row, &c) in piv.iter().enumerate() {
        x[c] = red[(row, r)].clone();
    }
    Ok(Some(x))
}

/// Orthogonal direct sum; the result is ambient-free.
pub fn direct_sum(a: &Lattice, b: &Lattice) -> Lattice {
    let name = match (a.name(), b.name()) {
        (Some(x), Some(y)) => Some(alloc::format!("{x}+{y}")),
        _ => None,
    };
    Lattice { gram: a.gram.block_diag(&b.gram), basis: None, ambient: None, name }
}

pub fn direct_sum_all(parts: &[Lattice]) -> Lattice {
    let mut gram = IntMatrix::zeros(0, 0);
    for p in parts {
        gram = gram.block_diag(p.gram());
    }
    Lattice { gram, basis: None, ambient: None, name: None }
}

/// `L(n)`: the Gram matrix multiplied by `n`.
pub fn rescale(l: &Lattice, n: i64) -> Result<Lattice> {
    if n == 0 {
        return Err(Error::DegenerateInput("rescale by zero".into()));
    }
    let name = l.name().map(|s| alloc::format!("{s}({n})"));
    Ok(Lattice { gram: l.gram.scale(&BigInt::from(n)), basis: None, ambient: None, name })
}

/// Rows are the dual basis vectors in `L`-coordinates, i.e. `gram⁻¹`.
pub fn dual_basis(l: &Lattice) -> Result<RatMatrix> {
    l.gram.to_rat().inverse()
}

/// The sublattice of `amb` spanned by the integer rows of `vecs`, with an
/// HNF basis.
pub fn sublattice(amb: &Lattice, vecs: &IntMatrix) -> Result<Lattice> {
    if vecs.rows() > 0 && vecs.cols() != amb.rank() {
        return Err(Error::Dimension("vectors do not live in the ambient".into()));
    }
    let (h, _) = hnf(vecs);
    let idx: Vec<usize> = (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).collect();
    let basis = h.select_rows(&idx);
    let basis = if basis.rows() == 0 { IntMatrix::zeros(0, amb.rank()) } else { basis };
    let gram = basis.mul(amb.gram()).mul(&basis.transpose());
    Ok(Lattice { gram, basis: Some(basis.to_rat()), ambient: Some(Arc::new(amb.clone())), name: None })
}

/// The whole ambient as a sublattice of itself (identity basis).
pub fn whole(amb: &Lattice) -> Lattice {
    sublattice(amb, &IntMatrix::identity(amb.rank())).expect("identity basis")
}

/// Integral rows spanning the same rational space as the basis of `s`.
fn cleared_basis(s: &Lattice) -> Result<IntMatrix> {
    let b = s.basis.as_ref().ok_or(Error::NoAmbient)?;
    let rows = b.row_vecs().iter().map(|r| crate::arith::clear_denominators(r).0).collect();
    Ok(IntMatrix::from_rows(rows, b.cols()))
}

/// `(S ⊗ Q) ∩ ambient`, with an HNF basis.
pub fn saturation(s: &Lattice) -> Result<Lattice> {
    let amb = s.ambient().ok_or(Error::NoAmbient)?;
    let b = cleared_basis(s)?;
    let n = amb.rank();
    if b.rows() == 0 {
        return sublattice(amb, &IntMatrix::zeros(0, n));
    }
    // Vectors orthogonal (standard dot product) to the span, then their
    // orthogonal again: the saturated span.
    let k = int_kernel(&b.transpose());
    let sat = if k.rows() == 0 { IntMatrix::identity(n) } else { int_kernel(&k.transpose()) };
    sublattice(amb, &sat)
}

/// True when `s` is saturated in its ambient.
pub fn is_primitive_sublattice(s: &Lattice) -> Result<bool> {
    let sat = saturation(s)?;
    let own = hnf(&s.basis_int()?).0;
    let own_rows: Vec<usize> = (0..own.rows()).filter(|&i| own.row(i).iter().any(|x| !x.is_zero())).collect();
    Ok(own.select_rows(&own_rows) == sat.basis_int()? || (own_rows.is_empty() && sat.rank() == 0))
}

/// `[S^sat : S]`, the index of `s` in its saturation.
pub fn saturation_index(s: &Lattice) -> Result<BigInt> {
    let sat = saturation(s)?;
    if s.rank() == 0 {
        return Ok(BigInt::one());
    }
    let b = s.basis.as_ref().ok_or(Error::NoAmbient)?;
    let sat_b = sat.basis.as_ref().expect("saturation has a basis");
    // Coordinates of s's basis in the saturation basis form an integral
    // square matrix whose determinant is the index.
    let mut rows = Vec::with_capacity(b.rows());
    for i in 0..b.rows() {
        let x = solve_in_span(sat_b, b.row(i))?.expect("s lies in its saturation");
        rows.push(x);
    }
    let m = RatMatrix::from_rows(rows, sat.rank());
    Ok(m.det().abs().to_integer())
}

/// `{x ∈ ambient : (x, s) = 0 for all s ∈ S}`, saturated by construction.
pub fn orth_complement(s: &Lattice) -> Result<Lattice> {
    let amb = s.ambient().ok_or(Error::NoAmbient)?;
    if !amb.is_nondegenerate() {
        return Err(Error::DegenerateInput("ambient lattice is degenerate".into()));
    }
    if !s.is_nondegenerate() {
        return Err(Error::DegenerateInput("sublattice is degenerate".into()));
    }
    let b = cleared_basis(s)?;
    if b.rows() == 0 {
        return Ok(whole(amb));
    }
    let m = amb.gram().mul(&b.transpose());
    let k = int_kernel(&m);
    sublattice(amb, &k)
}

pub fn is_primitive_vector(v: &[BigInt], l: &Lattice) -> Result<bool> {
    if v.len() != l.rank() {
        return Err(Error::Dimension("vector length differs from rank".into()));
    }
    if crate::arith::is_zero_vec(v) {
        return Err(Error::ZeroVector);
    }
    Ok(content(v).is_one())
}

/// Whether `v ∈ L` is primitive in the overlattice `L* ⊇ L`.
///
/// In dual coordinates `v` is `gram·v`, so this is `gcd(gram·v) = 1`.
pub fn is_primitive_in_dual(v: &[BigInt], l: &Lattice) -> Result<bool> {
    if v.len() != l.rank() {
        return Err(Error::Dimension("vector length differs from rank".into()));
    }
    if crate::arith::is_zero_vec(v) {
        return Err(Error::ZeroVector);
    }
    if !l.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let gv = l.gram().vec_mul(v);
    Ok(content(&gv).is_one())
}

/// Splits an ambient vector along `S ⊗ Q ⊕ S^⊥ ⊗ Q`.
///
/// `v1` is the Gram-orthogonal projection onto `S ⊗ Q` and `v2 = v − v1`.
pub fn split_decompose(v: &[BigRational], s: &Lattice) -> Result<(RatVec, RatVec)> {
    let amb = s.ambient().ok_or(Error::NoAmbient)?;
    if v.len() != amb.rank() {
        return Err(Error::Dimension("vector length differs from ambient rank".into()));
    }
    if !s.is_nondegenerate() {
        return Err(Error::DegenerateInput("sublattice is degenerate".into()));
    }
    let b = s.basis.as_ref().ok_or(Error::NoAmbient)?;
    if b.rows() == 0 {
        return Ok((alloc::vec![BigRational::zero(); v.len()], v.to_vec()));
    }
    let g = amb.gram().to_rat();
    let pairing = g.mul(&b.transpose()); // n × r
    let coeff = RatMatrix::from_rows(alloc::vec![v.to_vec()], v.len()).mul(&pairing).mul(&s.gram().to_rat().inverse()?);
    let v1 = b.vec_mul(coeff.row(0));
    let v2 = v.iter().zip(&v1).map(|(a, b)| a - b).collect();
    Ok((v1, v2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int_vec, rat};

    fn a1neg() -> Lattice {
        Lattice::from_gram(IntMatrix::from_i64(&[&[-2]])).unwrap()
    }

    fn u() -> Lattice {
        Lattice::from_gram(IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap()
    }

    fn a1neg2() -> Lattice {
        direct_sum(&a1neg(), &a1neg())
    }

    #[test]
    fn signatures() {
        assert_eq!(u().signature(), Signature { pos: 1, neg: 1, zero: 0 });
        assert_eq!(direct_sum(&u(), &u()).signature(), Signature { pos: 2, neg: 2, zero: 0 });
    }

    #[test]
    fn rescale_and_dual() {
        let a1 = Lattice::from_gram(IntMatrix::from_i64(&[&[2]])).unwrap();
        assert_eq!(rescale(&a1, -1).unwrap().gram(), a1neg().gram());
        let d = dual_basis(&a1neg()).unwrap();
        assert_eq!(d[(0, 0)], rat(-1, 2));
        let sing = Lattice::from_gram(IntMatrix::zeros(1, 1)).unwrap();
        assert_eq!(dual_basis(&sing), Err(Error::Degenerate));
    }

    #[test]
    fn sublattice_examples() {
        let amb = a1neg2();
        let s = sublattice(&amb, &IntMatrix::from_i64(&[&[1, 1]])).unwrap();
        assert_eq!(s.gram(), &IntMatrix::from_i64(&[&[-4]]));
        let all = sublattice(&amb, &IntMatrix::identity(2)).unwrap();
        assert_eq!(all.gram(), amb.gram());
        let iso = sublattice(&u(), &IntMatrix::from_i64(&[&[2, 0]])).unwrap();
        assert_eq!(iso.gram(), &IntMatrix::from_i64(&[&[0]]));
        assert_eq!(iso.rank(), 1);
    }

    #[test]
    fn saturation_examples() {
        let s = sublattice(&u(), &IntMatrix::from_i64(&[&[2, 0]])).unwrap();
        let sat = saturation(&s).unwrap();
        assert_eq!(sat.basis_int().unwrap(), IntMatrix::from_i64(&[&[1, 0]]));
        assert_eq!(saturation_index(&s).unwrap(), BigInt::from(2));

        let s = sublattice(&a1neg2(), &IntMatrix::from_i64(&[&[1, 1], &[1, -1]])).unwrap();
        assert_eq!(saturation_index(&s).unwrap(), BigInt::from(2));
        let sat = saturation(&s).unwrap();
        assert_eq!(sat.basis_int().unwrap(), IntMatrix::identity(2));
        assert!(!is_primitive_sublattice(&s).unwrap());
        assert!(is_primitive_sublattice(&sat).unwrap());
        assert_eq!(saturation(&sat).unwrap(), sat);
    }

    #[test]
    fn complement_examples() {
        let amb = a1neg2();
        let diag = sublattice(&amb, &IntMatrix::from_i64(&[&[1, 1]])).unwrap();
        let c = orth_complement(&diag).unwrap();
        assert_eq!(c.basis_int().unwrap(), IntMatrix::from_i64(&[&[1, -1]]));
        assert_eq!(c.gram(), &IntMatrix::from_i64(&[&[-4]]));
        let cc = orth_complement(&c).unwrap();
        assert_eq!(cc, saturation(&diag).unwrap());
        let iso = sublattice(&u(), &IntMatrix::from_i64(&[&[1, 0]])).unwrap();
        assert!(matches!(orth_complement(&iso), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn primitive_vectors() {
        let e = int_vec(&[1]);
        assert!(is_primitive_vector(&e, &a1neg()).unwrap());
        assert!(!is_primitive_in_dual(&e, &a1neg()).unwrap());
        assert!(is_primitive_in_dual(&int_vec(&[1, 0]), &u()).unwrap());
        let a3 = Lattice::from_gram(IntMatrix::from_i64(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]])).unwrap();
        let v = int_vec(&[1, 1, 0]);
        assert_eq!(a3.gram().vec_mul(&v), int_vec(&[3, 3, 1]));
        assert!(is_primitive_in_dual(&v, &a3).unwrap());
        assert_eq!(is_primitive_vector(&int_vec(&[0]), &a1neg()), Err(Error::ZeroVector));
    }

    #[test]
    fn split_examples() {
        let amb = a1neg2();
        let diag = sublattice(&amb, &IntMatrix::from_i64(&[&[1, 1]])).unwrap();
        let (v1, v2) = split_decompose(&[rat(1, 1), rat(0, 1)], &diag).unwrap();
        assert_eq!(v1, alloc::vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(v2, alloc::vec![rat(1, 2), rat(-1, 2)]);
        let (v1, v2) = split_decompose(&[rat(3, 1), rat(3, 1)], &diag).unwrap();
        assert_eq!(v1, alloc::vec![rat(3, 1), rat(3, 1)]);
        assert!(v2.iter().all(Zero::is_zero));
        let (v1, v2) = split_decompose(&[rat(1, 1), rat(-1, 1)], &diag).unwrap();
        assert!(v1.iter().all(Zero::is_zero));
        assert_eq!(v2, alloc::vec![rat(1, 1), rat(-1, 1)]);
    }

    #[test]
    fn embedded_checks_integrality() {
        let b = RatMatrix::from_rows(alloc::vec![alloc::vec![rat(1, 2), rat(0, 1)]], 2);
        assert!(Lattice::embedded(&a1neg2(), b).is_err());
        let dep = IntMatrix::from_i64(&[&[1, 1], &[2, 2]]).to_rat();
        assert_eq!(Lattice::embedded(&a1neg2(), dep), Err(Error::DependentSpan));
    }
}

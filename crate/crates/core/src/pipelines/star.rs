use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::arith::{snf, IntMatrix, IntVec};
use crate::enumerate::{is_positive_definite_gram, short_vectors, value_order};
use crate::error::{Error, Result};
use crate::lattice::{is_primitive_in_dual, is_primitive_sublattice, saturation, sublattice, whole, Lattice};

use super::{precondition, Bounds, Certificate, Evidence, Kind};

/// `L` primitive in the context, positive definite, and `d₁ = 1` in the
/// Smith form of its Gram matrix (equivalently `ℓ(A_L) < 3`).
pub fn star_check(l: &Lattice, context: &Lattice) -> Result<Certificate> {
    if l.rank() != 3 {
        return Err(precondition("L must have rank 3"));
    }
    let amb = l.ambient().ok_or(Error::NoAmbient)?;
    if amb.gram() != context.gram() {
        return Err(precondition("L must be given inside the context lattice"));
    }
    let primitive = is_primitive_sublattice(l)?;
    let pd = l.is_positive_definite();
    let (d, _, _) = snf(l.gram());
    let diag: Vec<BigInt> = (0..3).map(|i| d[(i, i)].clone()).collect();
    let d1_one = diag[0].is_one();
    let mut c = Certificate::new(Kind::Star);
    c.put("gram", Evidence::int_matrix(l.gram()));
    c.put("basis", Evidence::rat_matrix(l.basis().expect("embedded")));
    c.put("primitive", Evidence::Bool(primitive));
    c.put("positive_definite", Evidence::Bool(pd));
    c.put("snf", Evidence::int_vec(&diag));
    c.put("ell", Evidence::int(diag.iter().filter(|x| **x != BigInt::one()).count() as u64));
    c.pass = primitive && pd && d1_one;
    if c.pass {
        let v = dual_primitive_vector(l)?;
        c.put("dual_primitive_vector", Evidence::int_vec(&v));
    }
    Ok(c)
}

/// The first short vector (by norm, then lexicographically) that is
/// primitive in `L*`.
fn dual_primitive_vector(l: &Lattice) -> Result<IntVec> {
    let mut bound = (0..l.rank()).map(|i| l.gram()[(i, i)].clone()).max().expect("rank 3");
    loop {
        let mut vs = short_vectors(l, &bound)?;
        vs.sort_by(|(a, na), (b, nb)| na.cmp(nb).then_with(|| a.cmp(b)));
        for (v, _) in vs {
            if is_primitive_in_dual(&v, l)? {
                return Ok(v);
            }
        }
        bound *= 2;
    }
}

/// Largest support (number of nonzero coordinates) of a candidate vector
/// in [`star_search`].
pub const STAR_MAX_SUPPORT: usize = 3;

/// Positive vectors of norm at most `norm_bound` with at most
/// [`STAR_MAX_SUPPORT`] nonzero coordinates, each in `[−coord_bound,
/// coord_bound]`, canonical sign, ordered by support size, norm, then
/// lexicographically.
fn sparse_candidates(ctx: &Lattice, bounds: &Bounds) -> Result<Vec<IntVec>> {
    let n = ctx.rank();
    let c = i64::try_from(bounds.coord_bound).map_err(|_| Error::Overflow)?;
    let g: Vec<i128> = ctx
        .gram()
        .entries()
        .iter()
        .map(|x| x.to_i64().map(i128::from))
        .collect::<Option<_>>()
        .ok_or(Error::Overflow)?;
    let nb = i128::from(bounds.norm_bound);
    let values: Vec<i64> = value_order(c).filter(|&v| v != 0).collect();
    let mut out: Vec<(usize, i128, Vec<i64>)> = Vec::new();
    let mut support: Vec<usize> = Vec::new();
    for size in 1..=STAR_MAX_SUPPORT.min(n) {
        support.clear();
        support.extend(0..size);
        loop {
            let mut coef = alloc::vec![0usize; size];
            loop {
                // The first nonzero coordinate is positive.
                if values[coef[0]] > 0 {
                    let mut norm = 0i128;
                    for (a, &i) in support.iter().enumerate() {
                        for (b, &j) in support.iter().enumerate() {
                            norm += g[i * n + j] * i128::from(values[coef[a]]) * i128::from(values[coef[b]]);
                        }
                    }
                    if norm > 0 && norm <= nb {
                        let mut v = alloc::vec![0i64; n];
                        for (a, &i) in support.iter().enumerate() {
                            v[i] = values[coef[a]];
                        }
                        out.push((size, norm, v));
                    }
                }
                // Next coefficient tuple.
                let mut t = size;
                while t > 0 && coef[t - 1] + 1 == values.len() {
                    coef[t - 1] = 0;
                    t -= 1;
                }
                if t == 0 {
                    break;
                }
                coef[t - 1] += 1;
            }
            // Next support set.
            let mut t = size;
            while t > 0 && support[t - 1] == n - size + t - 1 {
                t -= 1;
            }
            if t == 0 {
                break;
            }
            support[t - 1] += 1;
            for u in t..size {
                support[u] = support[u - 1] + 1;
            }
        }
    }
    out.sort();
    Ok(out.into_iter().map(|(_, _, v)| v.into_iter().map(BigInt::from).collect()).collect())
}

/// Bounded search for a rank-3 sublattice of the context passing
/// [`star_check`]. Candidates come from [`sparse_candidates`]; triples are
/// visited in lexicographic index order, and each triple counts towards
/// `bounds.cap`. `Ok(None)` means nothing was found within the bounds.
pub fn star_search(context: &Lattice, bounds: &Bounds) -> Result<Option<(Lattice, Certificate)>> {
    if !context.is_nondegenerate() {
        return Err(precondition("context must be nondegenerate"));
    }
    if context.signature().pos != 4 {
        return Err(precondition("context must have exactly four positive directions"));
    }
    let ctx = context.to_abstract();
    let cands = sparse_candidates(&ctx, bounds)?;
    let amb = whole(&ctx);
    let n = cands.len();
    let mut nodes = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            let rows2 = IntMatrix::from_rows(alloc::vec![cands[i].clone(), cands[j].clone()], ctx.rank());
            let g2 = rows2.mul(ctx.gram()).mul(&rows2.transpose());
            let pd2 = is_positive_definite_gram(&g2);
            for k in j + 1..n {
                nodes += 1;
                if nodes > bounds.cap {
                    return Err(Error::ResourceCap { what: "star search", cap: bounds.cap });
                }
                if !pd2 {
                    continue;
                }
                let rows = rows2.vstack(&IntMatrix::from_rows(alloc::vec![cands[k].clone()], ctx.rank()));
                let g = rows.mul(ctx.gram()).mul(&rows.transpose());
                if !is_positive_definite_gram(&g) {
                    continue;
                }
                let l = saturation(&sublattice(&amb, &rows)?)?;
                let mut cert = star_check(&l, &ctx)?;
                if cert.pass {
                    cert.put("search_nodes", Evidence::int(nodes));
                    cert.put("candidates", Evidence::int(n as u64));
                    if let Some(b) = context.basis() {
                        cert.put("basis_ambient", Evidence::rat_matrix(&l.basis().expect("embedded").mul(b)));
                    }
                    return Ok(Some((l, cert)));
                }
            }
        }
    }
    Ok(None)
}

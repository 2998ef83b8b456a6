use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::arith::{clear_denominators, diagonalize, signature_of, IntVec, RatMatrix};
use crate::enumerate::roots_in_complement_capped;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, RationalSubspace};

use super::Bounds;

/// A root-free positive subspace together with how it was sampled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveSpace {
    pub subspace: RationalSubspace,
    /// Zero-based index of the successful attempt.
    pub attempt: u32,
    /// Multiplier applied to the diagonalizing vectors.
    pub scale: BigInt,
}

/// Draws positive subspaces of a sublattice.
///
/// A candidate is spanned by `M·w_k + noise_k`, where the `w_k` are the
/// positive rows of a diagonalization of the Gram matrix and the noise has
/// coordinates in `[−coord_bound, coord_bound]`. `M` starts at 1 and
/// doubles until the candidate is positive.
pub(super) struct Sampler<'a> {
    region: &'a Lattice,
    w: Vec<IntVec>,
    gram: RatMatrix,
    coord_bound: i64,
}

impl<'a> Sampler<'a> {
    pub fn new(region: &'a Lattice, dim: usize, coord_bound: u64) -> Result<Self> {
        let gram = region.gram().to_rat();
        let (p, d) = diagonalize(&gram);
        let w: Vec<IntVec> =
            (0..d.len()).filter(|&i| d[i].is_positive()).map(|i| clear_denominators(p.row(i)).0).collect();
        if w.len() < dim {
            return Err(Error::Precondition("region has too few positive directions".into()));
        }
        let coord_bound = i64::try_from(coord_bound).map_err(|_| Error::Overflow)?;
        Ok(Self { region, w, gram, coord_bound })
    }

    /// Integral spanning rows in region coordinates, and the multiplier.
    pub fn draw(&self, rng: &mut ChaCha8Rng, dim: usize) -> (RatMatrix, BigInt) {
        let n = self.region.rank();
        let noise: Vec<Vec<BigInt>> =
            (0..dim).map(|_| (0..n).map(|_| BigInt::from(uniform(rng, self.coord_bound))).collect()).collect();
        let mut m = BigInt::one();
        loop {
            let rows: Vec<Vec<BigRational>> = (0..dim)
                .map(|k| (0..n).map(|j| BigRational::from_integer(&m * &self.w[k][j] + &noise[k][j])).collect())
                .collect();
            let v = RatMatrix::from_rows(rows, n);
            if signature_of(&v.mul(&self.gram).mul(&v.transpose())).pos == dim {
                return (v, m);
            }
            m *= 2;
        }
    }

    /// Region coordinates to ambient coordinates.
    pub fn to_ambient(&self, local: &RatMatrix) -> RatMatrix {
        local.mul(self.region.basis().expect("embedded region"))
    }
}

pub(super) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Samples `dim` vectors in `region ⊗ Q` spanning a positive space and
/// returns `fixed ⊕ span` once its orthogonal complement in the ambient has
/// no roots. The random stream is ChaCha8 seeded with `bounds.seed`;
/// `region` must be orthogonal to `fixed`.
pub fn find_root_free_positive_space(
    region: &Lattice,
    fixed: &RatMatrix,
    dim: usize,
    bounds: &Bounds,
) -> Result<Option<PositiveSpace>> {
    let amb = region.ambient().ok_or(Error::NoAmbient)?;
    let sampler = Sampler::new(region, dim, bounds.coord_bound)?;
    let mut rng = rng(bounds.seed);
    for attempt in 0..bounds.attempts {
        let (local, m) = sampler.draw(&mut rng, dim);
        let span = fixed.vstack(&sampler.to_ambient(&local));
        let sub = RationalSubspace::new(amb.clone(), span)?;
        if !sub.is_positive() {
            continue;
        }
        if roots_in_complement_capped(&sub, bounds.cap)?.is_empty() {
            return Ok(Some(PositiveSpace { subspace: sub, attempt, scale: m }));
        }
    }
    Ok(None)
}

fn uniform(rng: &mut ChaCha8Rng, c: i64) -> i64 {
    if c == 0 {
        return 0;
    }
    let width = (2 * c + 1) as u64;
    (rng.next_u64() % width) as i64 - c
}

/// A matrix with no rows, for ambients of rank `n`.
pub(super) fn no_rows(n: usize) -> RatMatrix {
    RatMatrix::zeros(0, n)
}

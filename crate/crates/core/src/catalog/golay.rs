//! The extended binary Golay code and generators of its automorphism group.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Nonzero squares modulo 23.
const RESIDUES: [usize; 11] = [1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18];
/// The point at infinity of the projective line over F₂₃.
pub const INFINITY: usize = 23;

fn is_residue(i: usize) -> bool {
    RESIDUES.contains(&i)
}

fn pow_mod(mut b: usize, mut e: usize, m: usize) -> usize {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn inv_mod23(i: usize) -> usize {
    pow_mod(i, 21, 23)
}

/// A binary linear code of length 24; bit `i` of a word is coordinate `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    /// Generator rows in reduced echelon form (pivot = highest set bit).
    generator: Vec<u32>,
}

impl BinaryCode {
    pub fn from_rows(rows: &[u32]) -> Self {
        Self { generator: echelon(rows) }
    }

    pub fn generator(&self) -> &[u32] {
        &self.generator
    }

    pub fn dimension(&self) -> usize {
        self.generator.len()
    }

    pub fn contains(&self, w: u32) -> bool {
        let mut r = w;
        for &g in &self.generator {
            let p = 31 - g.leading_zeros();
            if r >> p & 1 == 1 {
                r ^= g;
            }
        }
        r == 0
    }

    /// All codewords, ordered by their coefficient vector.
    pub fn codewords(&self) -> Vec<u32> {
        let k = self.generator.len();
        (0u32..1 << k)
            .map(|m| (0..k).filter(|&i| m >> i & 1 == 1).fold(0u32, |acc, i| acc ^ self.generator[i]))
            .collect()
    }

    /// Number of codewords of each weight `0..=24`.
    pub fn weight_distribution(&self) -> [u64; 25] {
        let mut out = [0u64; 25];
        for w in self.codewords() {
            out[w.count_ones() as usize] += 1;
        }
        out
    }

    pub fn hex_rows(&self) -> Vec<alloc::string::String> {
        self.generator.iter().map(|g| alloc::format!("{g:06x}")).collect()
    }
}

fn echelon(rows: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            let p = 31 - b.leading_zeros();
            if v >> p & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let p = 31 - v.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> p & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort_unstable_by(|a, b| b.cmp(a));
    basis
}

/// Extended Golay code: the length-23 quadratic-residue code plus an
/// overall parity bit at coordinate 23.
pub fn golay() -> BinaryCode {
    let base: u32 = (0..23).filter(|&i| !is_residue(i) && i != 0).fold(0, |acc, i| acc | 1 << i);
    let rows: Vec<u32> = (0..23)
        .map(|s| {
            let mut w = 0u32;
            for i in 0..23 {
                if base >> i & 1 == 1 {
                    w |= 1 << ((i + s) % 23);
                }
            }
            if w.count_ones() % 2 == 1 {
                w |= 1 << 23;
            }
            w
        })
        .collect();
    BinaryCode::from_rows(&rows)
}

/// A permutation of `0..n`, stored as its image array: point `i` goes to
/// `image[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = alloc::vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::DegenerateInput("permutation image is not a bijection".into()));
            }
            seen[i] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self { image: (0..n).collect() }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        Self { image: self.image.iter().map(|&i| other.image[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Self { image: inv }
    }

    pub fn apply_word(&self, w: u32) -> u32 {
        self.image.iter().enumerate().filter(|(i, _)| w >> i & 1 == 1).fold(0, |acc, (_, &j)| acc | 1 << j)
    }

    /// Sorted cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.image.len();
        let mut seen = alloc::vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.image[i];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn preserves(&self, code: &BinaryCode) -> bool {
        self.image.len() == 24 && code.generator().iter().all(|&g| code.contains(self.apply_word(g)))
    }
}

/// Four permutations generating the automorphism group of [`golay`]:
/// `i ↦ i+1`, `i ↦ 2i`, `i ↦ −1/i` on the projective line over F₂₃, and
/// the extra generator fixing 0 and ∞ that sends a square `i` to `i³/9`
/// and a non-square `i` to `9i³`.
pub fn m24_generators() -> Vec<Permutation> {
    let shift: Vec<usize> = (0..24).map(|i| if i == INFINITY { i } else { (i + 1) % 23 }).collect();
    let double: Vec<usize> = (0..24).map(|i| if i == INFINITY { i } else { 2 * i % 23 }).collect();
    let invert: Vec<usize> = (0..24)
        .map(|i| match i {
            0 => INFINITY,
            INFINITY => 0,
            _ => (23 - inv_mod23(i)) % 23,
        })
        .collect();
    let inv9 = inv_mod23(9);
    let delta: Vec<usize> = (0..24)
        .map(|i| match i {
            0 | INFINITY => i,
            _ if is_residue(i) => pow_mod(i, 3, 23) * inv9 % 23,
            _ => 9 * pow_mod(i, 3, 23) % 23,
        })
        .collect();
    [shift, double, invert, delta]
        .into_iter()
        .map(|p| Permutation::new(p).expect("bijective by construction"))
        .collect()
}

/// Curated code automorphisms with the named cycle types.
pub fn curated_permutation(name: &str) -> Result<Permutation> {
    let image: &[usize] = match name {
        "1^8 2^8" | "1^82^8" | "2A" => {
            &[0, 1, 7, 10, 4, 14, 23, 2, 8, 17, 3, 22, 12, 13, 5, 20, 18, 9, 16, 19, 15, 21, 11, 6]
        }
        "1^6 3^6" | "1^63^6" | "3A" => {
            &[0, 4, 2, 14, 13, 17, 11, 7, 12, 3, 5, 18, 21, 1, 9, 15, 23, 10, 6, 19, 20, 8, 16, 22]
        }
        // Together with the next one: orbits {7}, {17} and the other 22 points.
        "1^2 11^2" | "11A" => &[16, 19, 11, 14, 15, 6, 4, 7, 5, 22, 21, 10, 2, 12, 13, 1, 3, 17, 8, 9, 0, 20, 23, 18],
        "1^2 2 4 8^2" | "8A" => &[16, 3, 18, 14, 19, 1, 11, 7, 12, 4, 22, 0, 8, 6, 15, 20, 9, 17, 10, 13, 23, 5, 2, 21],
        _ => return Err(Error::UnknownName(name.into())),
    };
    Permutation::new(image.to_vec())
}

//! Named lattices, the Golay code, and distinguished isometries.

mod golay;
mod leech;
mod mukai;

pub use golay::{curated_permutation, golay, m24_generators, BinaryCode, Permutation, INFINITY};
pub use leech::{leech, leech_basis, niemeier_a1, niemeier_a1_basis, perm_isometry_on_leech};
pub use mukai::{
    a1, a1_neg, e8, e8_neg, exp_b, gamma, gamma_mod_w, is_leech_root, k3, k3_in_mukai, k3_to_mukai, mukai,
    period_vector, u, u0_in_mukai, weyl_vector, GAMMA_E, GAMMA_F, K3_RANK, MUKAI_R, MUKAI_RANK, MUKAI_S,
};

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Every name accepted by [`make`].
pub const NAMES: [&str; 10] = ["U", "A1", "A1neg", "E8", "E8neg", "K3", "Mukai", "Gamma", "Leech", "NiemeierA1"];

#[cfg(feature = "std")]
fn cached(name: &str, build: fn() -> Lattice) -> Lattice {
    use std::collections::BTreeMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<BTreeMap<&'static str, Lattice>>> = OnceLock::new();
    let key = NAMES.iter().copied().find(|n| *n == name).expect("known name");
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(l) = cache.lock().expect("cache lock").get(key) {
        return l.clone();
    }
    let l = build();
    cache.lock().expect("cache lock").insert(key, l.clone());
    l
}

#[cfg(not(feature = "std"))]
fn cached(_name: &str, build: fn() -> Lattice) -> Lattice {
    build()
}

/// Builds a catalog lattice by name.
pub fn make(name: &str) -> Result<Lattice> {
    let build: fn() -> Lattice = match name {
        "U" => u,
        "A1" => a1,
        "A1neg" => a1_neg,
        "E8" => e8,
        "E8neg" => e8_neg,
        "K3" => k3,
        "Mukai" => mukai,
        "Gamma" => gamma,
        "Leech" => leech,
        "NiemeierA1" => niemeier_a1,
        _ => return Err(Error::UnknownName(name.into())),
    };
    Ok(cached(name, build))
}

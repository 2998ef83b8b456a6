//! Exact lattice computations around the Leech lattice, Niemeier lattices
//! and the K3 / Mukai lattices.
//!
//! The crate is `no_std` (it needs `alloc`). The `std` feature only matters
//! for the `parallel` feature, which splits enumeration work across a rayon
//! pool; results are identical either way.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arith;
pub mod catalog;
pub mod disc;
pub mod embed;
pub mod enumerate;
pub mod error;
pub mod group;
pub mod lattice;
pub mod pipelines;

pub use error::{Error, Result};

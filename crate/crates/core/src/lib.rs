//! Lattice network coding over Z, Z[i] and Z[ω].
//!
//! The crate is organised bottom-up: exact ring arithmetic ([`rings`]), Smith
//! normal form ([`smith`]), nested lattice quotients and their linear labelings
//! ([`lattices`]), code-based lattice constructions ([`constructions`]), the
//! compute-and-forward encoder/decoder ([`codec`]), coefficient selection
//! ([`coeffs`]), header-based module network coding ([`netcode`]), error
//! estimates ([`analysis`]) and a Monte-Carlo harness ([`sim`]).

pub mod analysis;
pub mod codec;
pub mod coeffs;
pub mod config;
pub mod constructions;
pub mod error;
pub mod lattices;
pub mod netcode;
pub mod rings;
pub mod rng;
pub mod sim;
pub mod smith;

pub use error::{Error, Result};
pub use rings::{EisenInt, EuclideanRing, GaussInt, Residue};
pub use smith::{RingMatrix, SnfResult};

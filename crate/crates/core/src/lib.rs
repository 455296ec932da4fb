//! Linearized Reed-Solomon codes over finite chain rings.
//!
//! The crate covers exact arithmetic in Galois rings and their Galois
//! extensions ([`ring`]), Smith normal form based linear algebra ([`linalg`]),
//! the sum-rank metric ([`metric`]), skew polynomials ([`skew`]), code
//! construction and encoding ([`lrs`]), Welch-Berlekamp decoding
//! ([`decoder`]) and a coherent multishot network-coding simulator
//! ([`netcode`]).

pub mod decoder;
pub mod error;
pub mod linalg;
pub mod lrs;
pub mod metric;
pub mod netcode;
pub mod ring;
pub mod selftest;
pub mod serial;
pub mod skew;

pub use error::{Error, Result};

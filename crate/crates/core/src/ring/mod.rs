//! Exact arithmetic in Galois rings `R = GR(p^r, s) = Z_{p^r}[y]/(g)` and in
//! their Galois extensions `S = R[z]/(h)`.
//!
//! Elements are plain coefficient vectors with every integer reduced into
//! `[0, p^r)`, so equality and hashing are coefficientwise. All arithmetic goes
//! through the ring object, which is immutable after construction and can be
//! shared freely across threads.

mod extension;
mod galois;
pub(crate) mod poly;

pub use extension::{ExtElement, GaloisExtension};
pub use galois::{GaloisRing, RingElement};

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

use crate::error::Result;

/// Operations shared by the finite chain rings `R` and `S`.
///
/// Both rings have the uniformizer `p`, so every element factors as
/// `p^v * u` with `u` a unit; the linear algebra relies on that through
/// [`ChainRing::valuation`] and [`ChainRing::exact_div_p_pow`].
pub trait ChainRing: Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Largest `k` with `a ∈ (p^k)`; the zero element has valuation `r`.
    fn valuation(&self, a: &Self::Elem) -> u32;

    /// Nilpotency index `r` of the maximal ideal.
    fn nilpotency(&self) -> u32;

    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Divides every integer coordinate by `p^v`. Only meaningful when
    /// `valuation(a) >= v`; then `p^v * result == a`.
    fn exact_div_p_pow(&self, a: &Self::Elem, v: u32) -> Self::Elem;

    /// Number of elements, saturating at `u128::MAX`.
    fn size(&self) -> u128;

    /// The `idx`-th element in the fixed enumeration order (mixed radix,
    /// lowest coordinate fastest).
    fn element_at(&self, idx: u128) -> Self::Elem;

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem;

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.valuation(a) == 0
    }

    fn p_pow(&self, v: u32) -> Self::Elem;
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

pub(crate) fn reduce_int(v: i64, m: u64) -> u64 {
    v.rem_euclid(m as i64) as u64
}

/// p-adic valuation of an integer residue modulo `p^r`, capped at `r`.
pub(crate) fn int_valuation(mut c: u64, p: u64, r: u32) -> u32 {
    if c == 0 {
        return r;
    }
    let mut v = 0;
    while c.is_multiple_of(p) && v < r {
        c /= p;
        v += 1;
    }
    v
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Distinct prime factors, by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

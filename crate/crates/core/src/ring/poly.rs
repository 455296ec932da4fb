//! Ordinary (commutative) dense polynomials over a [`ChainRing`], used for
//! construction-time checks: Horner evaluation, derivatives and the
//! irreducibility test over residue fields.

use super::ChainRing;
use crate::error::{Error, Result};

/// Largest degree the irreducibility test accepts.
pub(crate) const MAX_IRREDUCIBLE_DEGREE: usize = 6;

pub(crate) fn eval<C: ChainRing>(ring: &C, poly: &[C::Elem], x: &C::Elem) -> C::Elem {
    let mut acc = ring.zero();
    for c in poly.iter().rev() {
        acc = ring.add(&ring.mul(&acc, x), c);
    }
    acc
}

pub(crate) fn derivative<C: ChainRing>(ring: &C, poly: &[C::Elem]) -> Vec<C::Elem> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ring.mul(&ring.from_int(i as i64), c))
        .collect()
}

/// Remainder of `num` modulo a monic `den`.
pub(crate) fn rem_monic<C: ChainRing>(ring: &C, num: &[C::Elem], den: &[C::Elem]) -> Vec<C::Elem> {
    let d = den.len() - 1;
    let mut r = num.to_vec();
    while r.len() > d {
        let lead = r.pop().expect("non-empty");
        let shift = r.len() - d;
        if ring.is_zero(&lead) {
            continue;
        }
        for (i, c) in den[..d].iter().enumerate() {
            r[shift + i] = ring.sub(&r[shift + i], &ring.mul(&lead, c));
        }
    }
    r
}

fn is_zero_poly<C: ChainRing>(ring: &C, p: &[C::Elem]) -> bool {
    p.iter().all(|c| ring.is_zero(c))
}

/// Irreducibility of a monic polynomial over a finite field (a chain ring with
/// `r = 1`). Degrees up to 3 use an exhaustive root search, larger degrees
/// trial division by every monic polynomial of degree at most half.
pub(crate) fn is_irreducible_over_field<C: ChainRing>(field: &C, poly: &[C::Elem]) -> Result<bool> {
    debug_assert_eq!(field.nilpotency(), 1);
    let deg = poly.len() - 1;
    if deg == 0 {
        return Ok(false);
    }
    if deg == 1 {
        return Ok(true);
    }
    if deg > MAX_IRREDUCIBLE_DEGREE {
        return Err(Error::Unsupported(format!(
            "irreducibility check limited to degree {MAX_IRREDUCIBLE_DEGREE}, got {deg}"
        )));
    }
    let q = field.size();
    if deg <= 3 {
        for idx in 0..q {
            let x = field.element_at(idx);
            if field.is_zero(&eval(field, poly, &x)) {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    for k in 1..=deg / 2 {
        let count = q.checked_pow(k as u32).ok_or(Error::TooLargeToEnumerate(u128::MAX))?;
        if count > 10_000_000 {
            return Err(Error::TooLargeToEnumerate(count));
        }
        for idx in 0..count {
            let mut rest = idx;
            let mut divisor = Vec::with_capacity(k + 1);
            for _ in 0..k {
                divisor.push(field.element_at(rest % q));
                rest /= q;
            }
            divisor.push(field.one());
            if is_zero_poly(field, &rem_monic(field, poly, &divisor)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

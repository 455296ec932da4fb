use std::sync::OnceLock;

use rand::Rng;

use super::galois::{GaloisRing, RingElement};
use super::{add_mod, gcd, int_valuation, mul_mod, poly, reduce_int, sub_mod, ChainRing};
use crate::error::{Error, Result};

/// Element of `S = R[z]/(h)`.
///
/// Stored flat: coordinate `t` of the `R`-coefficient of `ξ^j` lives at index
/// `j * s + t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement(pub(crate) Vec<u64>);

impl ExtElement {
    pub fn flat(&self) -> &[u64] {
        &self.0
    }
}

/// A free local Galois extension `S = R[z]/(h)` of rank `m` together with the
/// automorphism `σ` lifting the `q`-power Frobenius of the residue field.
#[derive(Clone, Debug)]
pub struct GaloisExtension {
    base: GaloisRing,
    /// Monic, ascending degree, length `m + 1`.
    h: Vec<RingElement>,
    xi: ExtElement,
    sigma_image: ExtElement,
    /// `frob[i][j] = σ^i(ξ^j)`.
    frob: Vec<Vec<ExtElement>>,
    /// `F_{q^m}` presented the same way; `None` when `r = 1`.
    residue: Option<Box<GaloisExtension>>,
    /// Distinct `σ(β) β^{-1}` over all units, filled on first use.
    ratios: OnceLock<Vec<ExtElement>>,
}

impl PartialEq for GaloisExtension {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.h == other.h
    }
}

impl Eq for GaloisExtension {}

impl GaloisExtension {
    /// Validates `h` (monic, irreducible modulo the maximal ideal) and
    /// computes `σ(ξ)` by Hensel lifting `ξ^q` to an exact root of `h`.
    pub fn new(base: GaloisRing, h: Vec<RingElement>) -> Result<Self> {
        for c in &h {
            base.check(c)?;
        }
        let mut h = h;
        while h.len() > 1 && base.is_zero(h.last().unwrap()) {
            h.pop();
        }
        if h.len() < 2 {
            return Err(Error::Unsupported("h must have degree at least 1".into()));
        }
        if *h.last().unwrap() != base.one() {
            return Err(Error::NotMonic);
        }
        let field = base.residue_field();
        let h_bar: Vec<RingElement> = h.iter().map(|c| base.project(c)).collect();
        if !poly::is_irreducible_over_field(&field, &h_bar)? {
            return Err(Error::ReducibleModIdeal);
        }
        let residue = if base.r() > 1 {
            Some(Box::new(GaloisExtension::build(field, h_bar, None)?))
        } else {
            None
        };
        GaloisExtension::build(base, h, residue)
    }

    /// Convenience constructor for `h` with integer coefficients.
    pub fn with_int_coeffs(base: GaloisRing, h: &[i64]) -> Result<Self> {
        let h = h.iter().map(|&c| base.from_int(c)).collect();
        GaloisExtension::new(base, h)
    }

    fn build(base: GaloisRing, h: Vec<RingElement>, residue: Option<Box<GaloisExtension>>) -> Result<Self> {
        let m = h.len() - 1;
        let s = base.s();
        let mut ext = GaloisExtension {
            base,
            h,
            xi: ExtElement(vec![0; m * s]),
            sigma_image: ExtElement(vec![0; m * s]),
            frob: Vec::new(),
            residue,
            ratios: OnceLock::new(),
        };
        let mut z = vec![0u64; (m + 1) * s];
        z[s] = 1;
        ext.xi = ext.reduce_flat(z);

        let h_ext: Vec<ExtElement> = ext.h.iter().map(|c| ext.embed(c)).collect();
        let h_der = poly::derivative(&ext, &h_ext);
        let mut t = ext.pow(&ext.xi, ext.base.q());
        let mut converged = false;
        for _ in 0..=(2 * ext.base.r() + 4) {
            let ht = poly::eval(&ext, &h_ext, &t);
            if ext.is_zero(&ht) {
                converged = true;
                break;
            }
            let d = poly::eval(&ext, &h_der, &t);
            let step = ext.mul(&ht, &ext.inverse(&d).map_err(|_| Error::LiftDivergence)?);
            t = ext.sub(&t, &step);
        }
        if !converged {
            return Err(Error::LiftDivergence);
        }
        ext.sigma_image = t;

        let sigma_powers = ext.powers(&ext.sigma_image);
        let mut frob = Vec::with_capacity(m);
        let mut root = ext.xi.clone();
        for i in 0..m {
            if i > 0 && root == ext.xi {
                return Err(Error::LiftDivergence);
            }
            frob.push(ext.powers(&root));
            root = ext.combine(&root, &sigma_powers);
        }
        if root != ext.xi {
            return Err(Error::LiftDivergence);
        }
        ext.frob = frob;
        Ok(ext)
    }

    pub fn base(&self) -> &GaloisRing {
        &self.base
    }

    /// Rank `m` of `S` over `R`.
    pub fn m(&self) -> usize {
        self.h.len() - 1
    }

    pub fn h(&self) -> &[RingElement] {
        &self.h
    }

    /// The canonical generator `ξ = z mod h`.
    pub fn xi(&self) -> &ExtElement {
        &self.xi
    }

    /// `σ(ξ)`.
    pub fn sigma_image(&self) -> &ExtElement {
        &self.sigma_image
    }

    /// Residue field size of `R`.
    pub fn q(&self) -> u64 {
        self.base.q()
    }

    /// `F_{q^m} = S / (p)`, itself presented as a Galois extension with `r = 1`.
    pub fn residue_field(&self) -> &GaloisExtension {
        self.residue.as_deref().unwrap_or(self)
    }

    /// Number of units, `|S| (1 - q^{-m})`.
    pub fn unit_count(&self) -> u128 {
        let qm = (self.q() as u128).saturating_pow(self.m() as u32);
        self.size() - self.size() / qm
    }

    /// Builds an element from nested ascending-degree integers: entry `j`
    /// holds the coordinates of the `R`-coefficient of `ξ^j`.
    pub fn element(&self, coeffs: &[&[i64]]) -> ExtElement {
        let s = self.base.s();
        let m = self.m();
        let mut flat = vec![0u64; coeffs.len().max(m) * s];
        for (j, c) in coeffs.iter().enumerate() {
            let re = self.base.element(c);
            flat[j * s..(j + 1) * s].copy_from_slice(&re.0);
        }
        self.reduce_flat(flat)
    }

    /// Element with integer coordinates along the power basis `1, ξ, ...`
    /// (constant terms only in `R`).
    pub fn from_power_coeffs(&self, coeffs: &[i64]) -> ExtElement {
        let nested: Vec<[i64; 1]> = coeffs.iter().map(|&c| [c]).collect();
        let refs: Vec<&[i64]> = nested.iter().map(|c| c.as_slice()).collect();
        self.element(&refs)
    }

    pub fn check(&self, x: &ExtElement) -> Result<()> {
        let m = self.base.modulus();
        if x.0.len() != self.m() * self.base.s() || x.0.iter().any(|&c| c >= m) {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    /// `R`-coefficient of `ξ^j`.
    pub fn coordinate(&self, x: &ExtElement, j: usize) -> RingElement {
        let s = self.base.s();
        RingElement(x.0[j * s..(j + 1) * s].to_vec())
    }

    pub fn from_coordinates(&self, coords: &[RingElement]) -> ExtElement {
        ExtElement(coords.iter().flat_map(|c| c.0.iter().copied()).collect())
    }

    /// The inclusion `R -> S`.
    pub fn embed(&self, c: &RingElement) -> ExtElement {
        let mut flat = vec![0; self.m() * self.base.s()];
        flat[..self.base.s()].copy_from_slice(&c.0);
        ExtElement(flat)
    }

    /// Whether `x` lies in the fixed ring `R`.
    pub fn in_base(&self, x: &ExtElement) -> bool {
        x.0[self.base.s()..].iter().all(|&c| c == 0)
    }

    /// Scalar action of `R` on `S`.
    pub fn scale(&self, c: &RingElement, x: &ExtElement) -> ExtElement {
        let s = self.base.s();
        let mut out = Vec::with_capacity(x.0.len());
        for chunk in x.0.chunks(s) {
            out.extend(self.base.mul_slices(&c.0, chunk));
        }
        ExtElement(out)
    }

    /// `σ^i(x)` for any integer `i` (taken mod `m`).
    pub fn frobenius(&self, x: &ExtElement, i: i64) -> ExtElement {
        let i = i.rem_euclid(self.m() as i64) as usize;
        if i == 0 {
            return x.clone();
        }
        self.apply_table(x, i)
    }

    fn apply_table(&self, x: &ExtElement, i: usize) -> ExtElement {
        self.combine(x, &self.frob[i])
    }

    /// `Σ_j x_j images[j]` where `x_j` are the power-basis coordinates of `x`.
    fn combine(&self, x: &ExtElement, images: &[ExtElement]) -> ExtElement {
        let mut acc = self.zero();
        for (j, img) in images.iter().enumerate() {
            let c = self.coordinate(x, j);
            if self.base.is_zero(&c) {
                continue;
            }
            acc = self.add(&acc, &self.scale(&c, img));
        }
        acc
    }

    fn powers(&self, root: &ExtElement) -> Vec<ExtElement> {
        let mut row = Vec::with_capacity(self.m());
        let mut acc = self.one();
        for _ in 0..self.m() {
            row.push(acc.clone());
            acc = self.mul(&acc, root);
        }
        row
    }

    /// `ρ : S -> F_{q^m}`, coefficientwise reduction mod `p`. The result is an
    /// element of [`GaloisExtension::residue_field`].
    pub fn project(&self, x: &ExtElement) -> ExtElement {
        let p = self.base.p();
        ExtElement(x.0.iter().map(|&c| c % p).collect())
    }

    /// Canonical coefficientwise lift of a residue-field element.
    pub fn lift(&self, x: &ExtElement) -> ExtElement {
        ExtElement(x.0.clone())
    }

    pub fn pow(&self, x: &ExtElement, mut e: u64) -> ExtElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Conjugation `a^β = σ(β) a β^{-1}`.
    pub fn conjugate(&self, a: &ExtElement, beta: &ExtElement) -> Result<ExtElement> {
        let inv = self.inverse(beta)?;
        Ok(self.mul(&self.mul(&self.frobenius(beta, 1), a), &inv))
    }

    /// The distinct values of `σ(β) β^{-1}` for units `β`, so that the
    /// conjugates of `a` are exactly `u a` for `u` in this list. Enumerates
    /// `S` on first call.
    pub fn conjugation_ratios(&self) -> &[ExtElement] {
        self.ratios.get_or_init(|| {
            let mut out: Vec<ExtElement> = Vec::new();
            for idx in 0..self.size() {
                let beta = self.element_at(idx);
                if let Ok(inv) = self.inverse(&beta) {
                    let u = self.mul(&self.frobenius(&beta, 1), &inv);
                    if !out.contains(&u) {
                        out.push(u);
                    }
                }
            }
            out
        })
    }

    /// Whether `gcd(q, m) = 1`.
    pub fn q_m_coprime(&self) -> bool {
        gcd(self.q(), self.m() as u64) == 1
    }

    /// Reduces a flat `(deg_z + 1) * s` coordinate vector modulo `h`.
    fn reduce_flat(&self, mut raw: Vec<u64>) -> ExtElement {
        let s = self.base.s();
        let m = self.m();
        let modulus = self.base.modulus();
        while raw.len() > m * s {
            let lead: Vec<u64> = raw.split_off(raw.len() - s);
            if lead.iter().all(|&c| c == 0) {
                continue;
            }
            let shift = raw.len() / s - m;
            for i in 0..m {
                let prod = self.base.mul_slices(&lead, &self.h[i].0);
                for t in 0..s {
                    let idx = (shift + i) * s + t;
                    raw[idx] = sub_mod(raw[idx], prod[t], modulus);
                }
            }
        }
        raw.resize(m * s, 0);
        ExtElement(raw)
    }
}

impl ChainRing for GaloisExtension {
    type Elem = ExtElement;

    fn zero(&self) -> ExtElement {
        ExtElement(vec![0; self.m() * self.base.s()])
    }

    fn one(&self) -> ExtElement {
        self.from_int(1)
    }

    fn from_int(&self, v: i64) -> ExtElement {
        let mut c = vec![0; self.m() * self.base.s()];
        c[0] = reduce_int(v, self.base.modulus());
        ExtElement(c)
    }

    fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let m = self.base.modulus();
        ExtElement(a.0.iter().zip(&b.0).map(|(&x, &y)| add_mod(x, y, m)).collect())
    }

    fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let m = self.base.modulus();
        ExtElement(a.0.iter().zip(&b.0).map(|(&x, &y)| sub_mod(x, y, m)).collect())
    }

    fn neg(&self, a: &ExtElement) -> ExtElement {
        let m = self.base.modulus();
        ExtElement(a.0.iter().map(|&x| sub_mod(0, x, m)).collect())
    }

    fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let s = self.base.s();
        let m = self.m();
        let modulus = self.base.modulus();
        if m == 1 {
            return ExtElement(self.base.mul_slices(&a.0, &b.0));
        }
        // Convolve in both variables, then reduce mod g (in y) and mod h (in z).
        let ys = 2 * s - 1;
        let mut tmp = vec![0u64; (2 * m - 1) * ys];
        for i in 0..m {
            for t in 0..s {
                let x = a.0[i * s + t];
                if x == 0 {
                    continue;
                }
                for j in 0..m {
                    for u in 0..s {
                        let y = b.0[j * s + u];
                        if y == 0 {
                            continue;
                        }
                        let idx = (i + j) * ys + t + u;
                        tmp[idx] = add_mod(tmp[idx], mul_mod(x, y, modulus), modulus);
                    }
                }
            }
        }
        let mut flat = Vec::with_capacity((2 * m - 1) * s);
        if s == 1 {
            flat = tmp;
        } else {
            for chunk in tmp.chunks(ys) {
                let reduced = self.base.element_from_raw(chunk.to_vec());
                flat.extend(reduced.0);
            }
        }
        self.reduce_flat(flat)
    }

    fn is_zero(&self, a: &ExtElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn valuation(&self, a: &ExtElement) -> u32 {
        let (p, r) = (self.base.p(), self.base.r());
        a.0.iter().map(|&c| int_valuation(c, p, r)).min().unwrap_or(r)
    }

    fn nilpotency(&self) -> u32 {
        self.base.r()
    }

    fn inverse(&self, a: &ExtElement) -> Result<ExtElement> {
        if self.valuation(a) > 0 {
            return Err(Error::NotUnit);
        }
        // a^(q^m - 2) inverts modulo the maximal ideal; Newton steps lift it.
        let qm = self.q().pow(self.m() as u32);
        let mut w = self.pow(a, qm - 2);
        let one = self.one();
        let two = self.from_int(2);
        for _ in 0..=32 {
            let aw = self.mul(a, &w);
            if aw == one {
                return Ok(w);
            }
            w = self.mul(&w, &self.sub(&two, &aw));
        }
        Err(Error::LiftDivergence)
    }

    fn exact_div_p_pow(&self, a: &ExtElement, v: u32) -> ExtElement {
        let d = self.base.p().pow(v);
        ExtElement(a.0.iter().map(|&c| c / d).collect())
    }

    fn size(&self) -> u128 {
        self.base.size().saturating_pow(self.m() as u32)
    }

    fn element_at(&self, mut idx: u128) -> ExtElement {
        let md = self.base.modulus() as u128;
        ExtElement(
            (0..self.m() * self.base.s())
                .map(|_| {
                    let c = (idx % md) as u64;
                    idx /= md;
                    c
                })
                .collect(),
        )
    }

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> ExtElement {
        let md = self.base.modulus();
        ExtElement((0..self.m() * self.base.s()).map(|_| rng.gen_range(0..md)).collect())
    }

    fn p_pow(&self, v: u32) -> ExtElement {
        if v >= self.base.r() {
            self.zero()
        } else {
            self.from_int(self.base.p().pow(v) as i64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr9_2() -> GaloisExtension {
        GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(3, 2).unwrap(), &[1, 0, 1]).unwrap()
    }

    #[test]
    fn sigma_image_over_z4() {
        let ext = GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(2, 2).unwrap(), &[1, 1, 1]).unwrap();
        assert_eq!(*ext.sigma_image(), ext.from_power_coeffs(&[3, 3]));
    }

    #[test]
    fn sigma_image_over_z9() {
        let ext = gr9_2();
        assert_eq!(*ext.sigma_image(), ext.from_power_coeffs(&[0, 8]));
        assert_eq!(ext.frobenius(ext.xi(), 1), ext.from_power_coeffs(&[0, 8]));
        assert_eq!(ext.frobenius(&ext.from_int(2), 1), ext.from_int(2));
    }

    #[test]
    fn degree_one_extension_has_trivial_sigma() {
        let ext = GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(3, 2).unwrap(), &[-1, 1]).unwrap();
        assert_eq!(ext.m(), 1);
        assert_eq!(*ext.sigma_image(), ext.one());
        let x = ext.from_int(7);
        assert_eq!(ext.frobenius(&x, 1), x);
    }

    #[test]
    fn arithmetic_examples_gr9_2() {
        let ext = gr9_2();
        let xi = ext.xi().clone();
        assert_eq!(ext.mul(&xi, &xi), ext.from_int(8));
        assert_eq!(ext.inverse(&xi).unwrap(), ext.from_power_coeffs(&[0, 8]));
        assert_eq!(ext.valuation(&ext.from_power_coeffs(&[3, 3])), 1);
        assert_eq!(ext.project(&ext.from_power_coeffs(&[0, 8])), ext.residue_field().from_power_coeffs(&[0, 2]));
        assert_eq!(ext.conjugate(&ext.from_int(2), &xi).unwrap(), ext.from_int(7));
    }

    #[test]
    fn rejects_reducible_h() {
        let z4 = GaloisRing::integers_mod(2, 2).unwrap();
        // z^2 + 1 = (z + 1)^2 over F_2
        assert_eq!(GaloisExtension::with_int_coeffs(z4.clone(), &[1, 0, 1]).unwrap_err(), Error::ReducibleModIdeal);
        assert_eq!(GaloisExtension::with_int_coeffs(z4, &[1, 1, 2]).unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn tower_over_gr_4_2() {
        let base = GaloisRing::new(2, 2, &[1, 1, 1]).unwrap();
        // z^2 + z + y is irreducible over F_4 = F_2[y]/(y^2+y+1)
        let h = vec![base.element(&[0, 1]), base.one(), base.one()];
        let ext = GaloisExtension::new(base, h).unwrap();
        assert_eq!(ext.m(), 2);
        let x = ext.xi().clone();
        assert_eq!(ext.frobenius(&ext.frobenius(&x, 1), 1), x);
        assert_ne!(ext.frobenius(&x, 1), x);
        let res = ext.residue_field();
        assert_eq!(ext.project(ext.sigma_image()), res.pow(&ext.project(&x), 4));
    }
}

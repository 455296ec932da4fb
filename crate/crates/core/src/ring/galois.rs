use rand::Rng;

use super::{add_mod, int_valuation, is_prime, mul_mod, poly, reduce_int, sub_mod, ChainRing};
use crate::error::{Error, Result};

/// Largest supported `p^r`; keeps every intermediate product inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Element of `R = Z_{p^r}[y]/(g)`: `s` integer coordinates with respect to
/// `1, y, ..., y^{s-1}`, each in `[0, p^r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement(pub(crate) Vec<u64>);

impl RingElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

/// The Galois ring `GR(p^r, s)` presented as `Z_{p^r}[y]/(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRing {
    p: u64,
    r: u32,
    modulus: u64,
    /// Monic, ascending degree, length `s + 1`.
    g: Vec<u64>,
}

impl GaloisRing {
    /// Validates `p` prime, `r >= 1`, `g` monic with irreducible reduction
    /// mod `p`. Coefficients of `g` are ascending-degree integers.
    pub fn new(p: u64, r: u32, g: &[i64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::Unsupported("r must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(r)
            .filter(|&m| m < MAX_MODULUS)
            .ok_or_else(|| Error::Unsupported(format!("p^r = {p}^{r} exceeds 2^31")))?;
        let mut g: Vec<u64> = g.iter().map(|&c| reduce_int(c, modulus)).collect();
        while g.len() > 1 && *g.last().unwrap() == 0 {
            g.pop();
        }
        if g.len() < 2 {
            return Err(Error::Unsupported("g must have degree at least 1".into()));
        }
        if *g.last().unwrap() != 1 {
            return Err(Error::NotMonic);
        }
        let ring = GaloisRing { p, r, modulus, g };
        let prime_field = GaloisRing::prime_field(p);
        let g_bar: Vec<RingElement> = ring.g.iter().map(|&c| RingElement(vec![c % p])).collect();
        if !poly::is_irreducible_over_field(&prime_field, &g_bar)? {
            return Err(Error::ReducibleModP);
        }
        Ok(ring)
    }

    /// `Z_{p^r}`, i.e. `g = y`.
    pub fn integers_mod(p: u64, r: u32) -> Result<Self> {
        GaloisRing::new(p, r, &[0, 1])
    }

    pub(crate) fn prime_field(p: u64) -> Self {
        GaloisRing { p, r: 1, modulus: p, g: vec![0, 1] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Degree `s` of `g`.
    pub fn s(&self) -> usize {
        self.g.len() - 1
    }

    /// `p^r`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Residue field size `q = p^s`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.s() as u32)
    }

    /// Ascending-degree coefficients of `g`.
    pub fn g(&self) -> &[u64] {
        &self.g
    }

    /// The residue field `F_q = R / (p)`, presented as `GR(p, s)`.
    pub fn residue_field(&self) -> GaloisRing {
        GaloisRing {
            p: self.p,
            r: 1,
            modulus: self.p,
            g: self.g.iter().map(|&c| c % self.p).collect(),
        }
    }

    /// Builds an element from ascending-degree integer coordinates; longer
    /// inputs are reduced modulo `g`.
    pub fn element(&self, coeffs: &[i64]) -> RingElement {
        let raw: Vec<u64> = coeffs.iter().map(|&c| reduce_int(c, self.modulus)).collect();
        self.reduce_poly(raw)
    }

    /// Checks length and range of a foreign element.
    pub fn check(&self, x: &RingElement) -> Result<()> {
        if x.0.len() != self.s() || x.0.iter().any(|&c| c >= self.modulus) {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    /// Coefficientwise reduction into the residue field.
    pub fn project(&self, x: &RingElement) -> RingElement {
        RingElement(x.0.iter().map(|&c| c % self.p).collect())
    }

    /// Coefficientwise integer lift of a residue-field element.
    pub fn lift(&self, x: &RingElement) -> RingElement {
        RingElement(x.0.clone())
    }

    pub(crate) fn element_from_raw(&self, raw: Vec<u64>) -> RingElement {
        self.reduce_poly(raw)
    }

    fn reduce_poly(&self, mut raw: Vec<u64>) -> RingElement {
        let s = self.s();
        let m = self.modulus;
        while raw.len() > s {
            let lead = raw.pop().unwrap();
            if lead == 0 {
                continue;
            }
            let shift = raw.len() - s;
            for i in 0..s {
                raw[shift + i] = sub_mod(raw[shift + i], mul_mod(lead, self.g[i], m), m);
            }
        }
        raw.resize(s, 0);
        RingElement(raw)
    }

    pub(crate) fn mul_slices(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let s = self.s();
        let m = self.modulus;
        if s == 1 {
            return vec![mul_mod(a[0], b[0], m)];
        }
        let mut prod = vec![0u64; 2 * s - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, m), m);
            }
        }
        self.reduce_poly(prod).0
    }

    fn pow(&self, x: &RingElement, mut e: u64) -> RingElement {
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
}

impl ChainRing for GaloisRing {
    type Elem = RingElement;

    fn zero(&self) -> RingElement {
        RingElement(vec![0; self.s()])
    }

    fn one(&self) -> RingElement {
        self.from_int(1)
    }

    fn from_int(&self, v: i64) -> RingElement {
        let mut c = vec![0; self.s()];
        c[0] = reduce_int(v, self.modulus);
        RingElement(c)
    }

    fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement(a.0.iter().zip(&b.0).map(|(&x, &y)| add_mod(x, y, self.modulus)).collect())
    }

    fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement(a.0.iter().zip(&b.0).map(|(&x, &y)| sub_mod(x, y, self.modulus)).collect())
    }

    fn neg(&self, a: &RingElement) -> RingElement {
        RingElement(a.0.iter().map(|&x| sub_mod(0, x, self.modulus)).collect())
    }

    fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement(self.mul_slices(&a.0, &b.0))
    }

    fn is_zero(&self, a: &RingElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn valuation(&self, a: &RingElement) -> u32 {
        a.0.iter().map(|&c| int_valuation(c, self.p, self.r)).min().unwrap_or(self.r)
    }

    fn nilpotency(&self) -> u32 {
        self.r
    }

    fn inverse(&self, a: &RingElement) -> Result<RingElement> {
        if self.valuation(a) > 0 {
            return Err(Error::NotUnit);
        }
        // a^(q-2) inverts modulo p; Newton steps w <- w(2 - aw) lift it.
        let mut w = self.pow(a, self.q() - 2);
        let two = self.from_int(2);
        for _ in 0..=32 {
            if self.mul(a, &w) == self.one() {
                return Ok(w);
            }
            w = self.mul(&w, &self.sub(&two, &self.mul(a, &w)));
        }
        Err(Error::LiftDivergence)
    }

    fn exact_div_p_pow(&self, a: &RingElement, v: u32) -> RingElement {
        let d = self.p.pow(v);
        RingElement(a.0.iter().map(|&c| c / d).collect())
    }

    fn size(&self) -> u128 {
        (self.modulus as u128).saturating_pow(self.s() as u32)
    }

    fn element_at(&self, mut idx: u128) -> RingElement {
        let m = self.modulus as u128;
        RingElement(
            (0..self.s())
                .map(|_| {
                    let c = (idx % m) as u64;
                    idx /= m;
                    c
                })
                .collect(),
        )
    }

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> RingElement {
        RingElement((0..self.s()).map(|_| rng.gen_range(0..self.modulus)).collect())
    }

    fn p_pow(&self, v: u32) -> RingElement {
        if v >= self.r {
            self.zero()
        } else {
            self.from_int(self.p.pow(v) as i64)
        }
    }
}

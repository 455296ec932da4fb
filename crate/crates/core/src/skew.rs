//! The skew polynomial ring `S[x; σ]`, where `x a = σ(a) x`.
//!
//! Two evaluation notions coexist. The remainder evaluation `F(a)` is the
//! remainder of right division by `x - a` and equals `Σ F_i N_i(a)`. The
//! operator evaluation `F_a(β) = Σ F_i σ^i(β) N_i(a)` is `R`-linear in `β`
//! and is what codewords are made of. They are linked by
//! `F_a(β) = F(a^β) β` for units `β`.

use crate::error::{Error, Result};
use crate::linalg::{free_rank, matrix_representation, smith_normal_form, RBasis, RingMatrix};
use crate::metric::LengthPartition;
use crate::ring::{ChainRing, ExtElement, GaloisExtension};

/// Ascending-degree coefficients with no trailing zeros; the zero polynomial
/// is the empty sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SkewPolynomial {
    coeffs: Vec<ExtElement>,
}

impl SkewPolynomial {
    pub fn new(ext: &GaloisExtension, mut coeffs: Vec<ExtElement>) -> Self {
        while coeffs.last().is_some_and(|c| ext.is_zero(c)) {
            coeffs.pop();
        }
        SkewPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        SkewPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(ext: &GaloisExtension, c: ExtElement) -> Self {
        SkewPolynomial::new(ext, vec![c])
    }

    pub fn one(ext: &GaloisExtension) -> Self {
        SkewPolynomial::constant(ext, ext.one())
    }

    /// `x^d`.
    pub fn monomial(ext: &GaloisExtension, d: usize) -> Self {
        let mut coeffs = vec![ext.zero(); d + 1];
        coeffs[d] = ext.one();
        SkewPolynomial { coeffs }
    }

    /// `x - a`.
    pub fn linear(ext: &GaloisExtension, a: &ExtElement) -> Self {
        SkewPolynomial::new(ext, vec![ext.neg(a), ext.one()])
    }

    pub fn coeffs(&self) -> &[ExtElement] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&ExtElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, ext: &GaloisExtension) -> bool {
        self.leading().is_some_and(|c| *c == ext.one())
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, ext: &GaloisExtension, i: usize) -> ExtElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ext.zero())
    }

    /// Coefficients padded with zeros to length `len`.
    pub fn padded(&self, ext: &GaloisExtension, len: usize) -> Vec<ExtElement> {
        let mut v = self.coeffs.clone();
        v.resize(len.max(v.len()), ext.zero());
        v
    }
}

/// Arithmetic and evaluation in `S[x; σ]` over a fixed extension.
#[derive(Clone, Copy, Debug)]
pub struct SkewRing<'a> {
    ext: &'a GaloisExtension,
}

impl<'a> SkewRing<'a> {
    pub fn new(ext: &'a GaloisExtension) -> Self {
        SkewRing { ext }
    }

    pub fn ext(&self) -> &'a GaloisExtension {
        self.ext
    }

    pub fn add(&self, f: &SkewPolynomial, g: &SkewPolynomial) -> SkewPolynomial {
        let ext = self.ext;
        let n = f.coeffs.len().max(g.coeffs.len());
        let coeffs = (0..n).map(|i| ext.add(&f.coeff(ext, i), &g.coeff(ext, i))).collect();
        SkewPolynomial::new(ext, coeffs)
    }

    pub fn sub(&self, f: &SkewPolynomial, g: &SkewPolynomial) -> SkewPolynomial {
        let ext = self.ext;
        let n = f.coeffs.len().max(g.coeffs.len());
        let coeffs = (0..n).map(|i| ext.sub(&f.coeff(ext, i), &g.coeff(ext, i))).collect();
        SkewPolynomial::new(ext, coeffs)
    }

    /// `c · F` (scalar on the left).
    pub fn scale_left(&self, c: &ExtElement, f: &SkewPolynomial) -> SkewPolynomial {
        SkewPolynomial::new(self.ext, f.coeffs.iter().map(|a| self.ext.mul(c, a)).collect())
    }

    /// `(F G)_k = Σ_{i+j=k} F_i σ^i(G_j)`.
    pub fn mul(&self, f: &SkewPolynomial, g: &SkewPolynomial) -> SkewPolynomial {
        let ext = self.ext;
        if f.is_zero() || g.is_zero() {
            return SkewPolynomial::zero();
        }
        let mut out = vec![ext.zero(); f.coeffs.len() + g.coeffs.len() - 1];
        for (i, fi) in f.coeffs.iter().enumerate() {
            if ext.is_zero(fi) {
                continue;
            }
            for (j, gj) in g.coeffs.iter().enumerate() {
                let term = ext.mul(fi, &ext.frobenius(gj, i as i64));
                out[i + j] = ext.add(&out[i + j], &term);
            }
        }
        SkewPolynomial::new(ext, out)
    }

    /// `F = Q · G + Rm` with `deg Rm < deg G`.
    pub fn right_divmod(&self, f: &SkewPolynomial, g: &SkewPolynomial) -> Result<(SkewPolynomial, SkewPolynomial)> {
        let ext = self.ext;
        let d = g.degree().ok_or(Error::LeadingNotUnit)?;
        let lead_inv = ext.inverse(g.leading().unwrap()).map_err(|_| Error::LeadingNotUnit)?;
        let mut rem = f.coeffs.clone();
        let mut quot = vec![ext.zero(); rem.len().saturating_sub(d)];
        while rem.len() > d {
            let top = rem.pop().unwrap();
            if ext.is_zero(&top) {
                continue;
            }
            let e = rem.len() - d;
            // c x^e · g_d x^d = c σ^e(g_d) x^{e+d}
            let c = ext.mul(&top, &ext.frobenius(&lead_inv, e as i64));
            for (j, gj) in g.coeffs[..d].iter().enumerate() {
                let t = ext.mul(&c, &ext.frobenius(gj, e as i64));
                rem[e + j] = ext.sub(&rem[e + j], &t);
            }
            quot[e] = c;
        }
        Ok((SkewPolynomial::new(ext, quot), SkewPolynomial::new(ext, rem)))
    }

    /// `F = G · Q + Rm` with `deg Rm < deg G`; uses `σ^{-1} = σ^{m-1}`.
    pub fn left_divmod(&self, f: &SkewPolynomial, g: &SkewPolynomial) -> Result<(SkewPolynomial, SkewPolynomial)> {
        let ext = self.ext;
        let d = g.degree().ok_or(Error::LeadingNotUnit)?;
        let lead_inv = ext.inverse(g.leading().unwrap()).map_err(|_| Error::LeadingNotUnit)?;
        let mut rem = f.coeffs.clone();
        let mut quot = vec![ext.zero(); rem.len().saturating_sub(d)];
        while rem.len() > d {
            let top = rem.pop().unwrap();
            if ext.is_zero(&top) {
                continue;
            }
            let e = rem.len() - d;
            // g_d x^d · c x^e = g_d σ^d(c) x^{d+e}
            let c = ext.frobenius(&ext.mul(&lead_inv, &top), -(d as i64));
            for (j, gj) in g.coeffs[..d].iter().enumerate() {
                let t = ext.mul(gj, &ext.frobenius(&c, j as i64));
                rem[j + e] = ext.sub(&rem[j + e], &t);
            }
            quot[e] = c;
        }
        Ok((SkewPolynomial::new(ext, quot), SkewPolynomial::new(ext, rem)))
    }

    /// `N_i(a) = σ^{i-1}(a) ··· σ(a) a`, with `N_0 = 1`.
    pub fn norm(&self, a: &ExtElement, i: usize) -> ExtElement {
        let ext = self.ext;
        let mut acc = ext.one();
        for j in 0..i {
            acc = ext.mul(&ext.frobenius(a, j as i64), &acc);
        }
        acc
    }

    /// `N_0(a), ..., N_{len-1}(a)`.
    pub fn norms(&self, a: &ExtElement, len: usize) -> Vec<ExtElement> {
        let ext = self.ext;
        let mut out = Vec::with_capacity(len);
        let mut acc = ext.one();
        for j in 0..len {
            out.push(acc.clone());
            acc = ext.mul(&ext.frobenius(a, j as i64), &acc);
        }
        out
    }

    /// `D_a^i(β) = σ^i(β) N_i(a)` for `i < len`.
    pub fn operator_powers(&self, a: &ExtElement, beta: &ExtElement, len: usize) -> Vec<ExtElement> {
        let ext = self.ext;
        let mut out = Vec::with_capacity(len);
        let mut cur = beta.clone();
        for _ in 0..len {
            out.push(cur.clone());
            // D_a(y) = σ(y) a
            cur = ext.mul(&ext.frobenius(&cur, 1), a);
        }
        out
    }

    /// `F_a(β) = Σ F_i σ^i(β) N_i(a)`.
    pub fn operator_eval(&self, f: &SkewPolynomial, a: &ExtElement, beta: &ExtElement) -> ExtElement {
        let ext = self.ext;
        self.operator_powers(a, beta, f.coeffs.len())
            .iter()
            .zip(&f.coeffs)
            .fold(ext.zero(), |acc, (d, c)| ext.add(&acc, &ext.mul(c, d)))
    }

    /// `F(a) = Σ F_i N_i(a)`.
    pub fn remainder_eval(&self, f: &SkewPolynomial, a: &ExtElement) -> ExtElement {
        let ext = self.ext;
        self.norms(a, f.coeffs.len())
            .iter()
            .zip(&f.coeffs)
            .fold(ext.zero(), |acc, (n, c)| ext.add(&acc, &ext.mul(c, n)))
    }

    /// `a^β = σ(β) a β^{-1}`.
    pub fn conjugate(&self, a: &ExtElement, beta: &ExtElement) -> Result<ExtElement> {
        self.ext.conjugate(a, beta)
    }

    /// Monic minimal annihilator of the listed `(a, β)` pairs, built as the
    /// product `(x - a^{γ_t}) ··· (x - a^{γ_1})` with
    /// `γ = G(a^β) β` taken from the running product `G`.
    pub(crate) fn annihilate_pairs(&self, pairs: &[(&ExtElement, &ExtElement)]) -> Result<SkewPolynomial> {
        let ext = self.ext;
        let mut g = SkewPolynomial::one(ext);
        for (idx, &(a, beta)) in pairs.iter().enumerate() {
            let conj = self.conjugate(a, beta).map_err(|_| {
                Error::MsrdPropertyViolated(format!("evaluation direction {idx} is not a unit"))
            })?;
            let value = self.remainder_eval(&g, &conj);
            if !ext.is_unit(&value) {
                return Err(Error::MsrdPropertyViolated(format!(
                    "remainder evaluation at point {idx} is not a unit"
                )));
            }
            let gamma = ext.mul(&value, beta);
            let root = self.conjugate(a, &gamma)?;
            g = self.mul(&SkewPolynomial::linear(ext, &root), &g);
        }
        Ok(g)
    }

    /// Monic degree-`n` polynomial whose operator evaluation vanishes at
    /// every point of the system.
    pub fn annihilator(&self, points: &PointSystem) -> Result<SkewPolynomial> {
        self.annihilate_pairs(&points.pairs())
    }

    /// Monic annihilator of arbitrary per-block vectors `u_i ∈ S^{n_i}`, of
    /// degree `Σ rk(u_i)`. Each block is factored as `u_i = α_i B_i` through
    /// Smith normal form with `α_i` of full free rank.
    pub fn annihilator_of_vectors(&self, a: &[ExtElement], u: &[Vec<ExtElement>]) -> Result<SkewPolynomial> {
        let ext = self.ext;
        if a.len() != u.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), got: u.len() });
        }
        let basis = RBasis::power(ext);
        let mut alphas: Vec<(usize, ExtElement)> = Vec::new();
        let r = ext.base().r();
        for (i, block) in u.iter().enumerate() {
            if block.is_empty() {
                continue;
            }
            let coords = matrix_representation(ext, block, &basis);
            let snf = smith_normal_form(ext.base(), &coords);
            let rank = snf.valuations.iter().filter(|&&v| v < r).count();
            for k in 0..rank {
                let col = snf.p.column(k);
                let alpha = (0..ext.m()).fold(ext.zero(), |acc, row| ext.add(&acc, &ext.scale(&col[row], &basis.elements()[row])));
                alphas.push((i, alpha));
            }
        }
        let pairs: Vec<(&ExtElement, &ExtElement)> = alphas.iter().map(|(i, al)| (&a[*i], al)).collect();
        self.annihilate_pairs(&pairs).map_err(|_| Error::ConditionViolated)
    }

    /// Dual basis `F_{i,j}` with `F_{i,j, a_u}(β_{u,v}) = δ`, each of degree
    /// `n - 1`, in block-major order.
    pub fn lagrange_basis(&self, points: &PointSystem) -> Result<Vec<SkewPolynomial>> {
        let ext = self.ext;
        let pairs = points.pairs();
        let mut out = Vec::with_capacity(pairs.len());
        for target in 0..pairs.len() {
            let others: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| *i != target).map(|(_, p)| *p).collect();
            let g = self.annihilate_pairs(&others)?;
            let (a, beta) = pairs[target];
            let value = self.operator_eval(&g, a, beta);
            let inv = ext.inverse(&value).map_err(|_| {
                Error::MsrdPropertyViolated(format!("operator value at point {target} is not a unit"))
            })?;
            out.push(self.scale_left(&inv, &g));
        }
        Ok(out)
    }

    /// The unique `F` of degree `< n` with `F_{a_i}(β_{i,j}) = values_{i,j}`.
    pub fn interpolate(&self, points: &PointSystem, values: &[ExtElement]) -> Result<SkewPolynomial> {
        let basis = self.lagrange_basis(points)?;
        self.interpolate_with(&basis, values)
    }

    /// Interpolation against a precomputed Lagrange basis.
    pub fn interpolate_with(&self, basis: &[SkewPolynomial], values: &[ExtElement]) -> Result<SkewPolynomial> {
        if values.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: values.len() });
        }
        Ok(basis
            .iter()
            .zip(values)
            .fold(SkewPolynomial::zero(), |acc, (f, c)| self.add(&acc, &self.scale_left(c, f))))
    }

    /// Extended Moore matrix `M_k(a, β)`: entry `(u, (i,j))` is
    /// `D_{a_i}^u(β_{i,j})`, columns block-major.
    pub fn moore_matrix(&self, points: &PointSystem, k: usize) -> Result<RingMatrix<ExtElement>> {
        let n = points.len();
        if k == 0 || k > n {
            return Err(Error::BadDimension(format!("k = {k} must satisfy 1 <= k <= n = {n}")));
        }
        let columns: Vec<Vec<ExtElement>> = points.pairs().iter().map(|(a, b)| self.operator_powers(a, b, k)).collect();
        let mut m = RingMatrix::zeros(self.ext, k, n);
        for (j, col) in columns.into_iter().enumerate() {
            for (u, v) in col.into_iter().enumerate() {
                m[(u, j)] = v;
            }
        }
        Ok(m)
    }
}

/// Evaluation points `(a, β)` for a length partition.
///
/// Construction checks the MSRD property: every `a_i` is a unit,
/// `a_i - a_j^β` is a unit for all units `β` and `i < j`, and each block
/// `β_i` is `R`-linearly independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSystem {
    a: Vec<ExtElement>,
    beta: Vec<Vec<ExtElement>>,
    partition: LengthPartition,
    validated: bool,
}

/// `|S*|` up to which the conjugacy condition is checked by brute force.
pub const EXHAUSTIVE_UNIT_LIMIT: u128 = 10_000;

impl PointSystem {
    pub fn new(ext: &GaloisExtension, a: Vec<ExtElement>, beta: Vec<Vec<ExtElement>>) -> Result<Self> {
        let mut sys = PointSystem::unvalidated(ext, a, beta)?;
        sys.check_units(ext)?;
        if ext.unit_count() <= EXHAUSTIVE_UNIT_LIMIT {
            sys.check_conjugacy_exhaustive(ext)?;
        } else {
            sys.check_conjugacy_residue(ext)?;
        }
        sys.check_independence(ext)?;
        sys.validated = true;
        Ok(sys)
    }

    /// Shape and membership checks only. Interpolation and annihilators
    /// still report `MsrdPropertyViolated` when they hit a non-unit.
    pub fn unvalidated(ext: &GaloisExtension, a: Vec<ExtElement>, beta: Vec<Vec<ExtElement>>) -> Result<Self> {
        if a.len() != beta.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), got: beta.len() });
        }
        for x in a.iter().chain(beta.iter().flatten()) {
            ext.check(x)?;
        }
        let partition = LengthPartition::new(beta.iter().map(Vec::len).collect())?;
        Ok(PointSystem { a, beta, partition, validated: false })
    }

    /// Whether the MSRD property was checked at construction.
    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Same `a`, new directions. Only the independence condition is
    /// rechecked; the conjugacy condition depends on `a` alone.
    pub fn with_beta(&self, ext: &GaloisExtension, beta: Vec<Vec<ExtElement>>) -> Result<Self> {
        self.with_points(ext, self.a.clone(), beta)
    }

    /// A sub-system on a subset of the `a_i` (conjugacy is inherited).
    pub fn with_points(&self, ext: &GaloisExtension, a: Vec<ExtElement>, beta: Vec<Vec<ExtElement>>) -> Result<Self> {
        if a.len() != beta.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), got: beta.len() });
        }
        if self.validated && a.iter().any(|x| !self.a.contains(x)) {
            return Err(Error::MsrdPropertyViolated("points must come from the parent system".into()));
        }
        let partition = LengthPartition::new(beta.iter().map(Vec::len).collect())?;
        let sys = PointSystem { a, beta, partition, validated: self.validated };
        if self.validated {
            sys.check_independence(ext)?;
        }
        Ok(sys)
    }

    pub fn a(&self) -> &[ExtElement] {
        &self.a
    }

    pub fn beta(&self) -> &[Vec<ExtElement>] {
        &self.beta
    }

    pub fn partition(&self) -> &LengthPartition {
        &self.partition
    }

    /// Total length `n`.
    pub fn len(&self) -> usize {
        self.partition.total()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All `β_{i,j}` flattened block-major.
    pub fn beta_flat(&self) -> Vec<ExtElement> {
        self.beta.iter().flatten().cloned().collect()
    }

    /// `(a_i, β_{i,j})` pairs, block-major.
    pub fn pairs(&self) -> Vec<(&ExtElement, &ExtElement)> {
        self.a
            .iter()
            .zip(&self.beta)
            .flat_map(|(a, block)| block.iter().map(move |b| (a, b)))
            .collect()
    }

    /// `b_{i,j} = a_i^{β_{i,j}}`, block-major.
    pub fn conjugate_points(&self, ext: &GaloisExtension) -> Vec<ExtElement> {
        self.pairs()
            .into_iter()
            .map(|(a, b)| ext.conjugate(a, b).expect("independent directions are units"))
            .collect()
    }

    fn check_units(&self, ext: &GaloisExtension) -> Result<()> {
        if let Some(i) = self.a.iter().position(|x| !ext.is_unit(x)) {
            return Err(Error::MsrdPropertyViolated(format!("a_{} is not a unit", i + 1)));
        }
        Ok(())
    }

    /// Ground truth: tries every unit `β`.
    pub fn check_conjugacy_exhaustive(&self, ext: &GaloisExtension) -> Result<()> {
        if self.a.len() < 2 {
            return Ok(());
        }
        // a^β = (σ(β) β^{-1}) a, so only the distinct ratios matter.
        let ratios = ext.conjugation_ratios();
        for j in 1..self.a.len() {
            for u in ratios {
                let conj = ext.mul(u, &self.a[j]);
                for i in 0..j {
                    if !ext.is_unit(&ext.sub(&self.a[i], &conj)) {
                        return Err(Error::MsrdPropertyViolated(format!(
                            "a_{} - a_{}^β is not a unit for some unit β",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Residue criterion: `ā_i` and `ā_j` are σ̄-conjugate iff `ā_i / ā_j` is
    /// a `(q-1)`-th power, i.e. has norm one down to `F_q`.
    pub fn check_conjugacy_residue(&self, ext: &GaloisExtension) -> Result<()> {
        let res = ext.residue_field();
        let q = ext.q();
        let qm = q.pow(ext.m() as u32);
        let exponent = (qm - 1) / (q - 1);
        let bars: Vec<ExtElement> = self.a.iter().map(|x| ext.project(x)).collect();
        for j in 0..bars.len() {
            let inv = res.inverse(&bars[j])?;
            for i in 0..j {
                let ratio = res.mul(&bars[i], &inv);
                if res.pow(&ratio, exponent) == res.one() {
                    return Err(Error::MsrdPropertyViolated(format!(
                        "a_{} and a_{} have conjugate residues",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_independence(&self, ext: &GaloisExtension) -> Result<()> {
        for (i, block) in self.beta.iter().enumerate() {
            if block.len() > ext.m() {
                return Err(Error::MsrdPropertyViolated(format!("block {} is longer than m", i + 1)));
            }
            let coords = crate::linalg::power_coordinates(ext, block);
            if free_rank(ext.base(), &coords) != block.len() {
                return Err(Error::MsrdPropertyViolated(format!(
                    "block {} directions are not R-linearly independent",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::invert_matrix;
    use crate::ring::GaloisRing;

    fn gr9_2() -> GaloisExtension {
        GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(3, 2).unwrap(), &[1, 0, 1]).unwrap()
    }

    fn running_points(ext: &GaloisExtension) -> PointSystem {
        let xi = ext.xi().clone();
        PointSystem::unvalidated(
            ext,
            vec![ext.one(), ext.from_int(2)],
            vec![vec![ext.one(), xi.clone()], vec![ext.one(), xi]],
        )
        .unwrap()
    }

    /// Residues 1 and 1 + ξ̄ are not conjugate: N(1 + ξ̄) = 2 in F_3.
    fn msrd_points(ext: &GaloisExtension) -> PointSystem {
        let xi = ext.xi().clone();
        PointSystem::new(
            ext,
            vec![ext.one(), ext.from_power_coeffs(&[1, 1])],
            vec![vec![ext.one(), xi.clone()], vec![ext.one(), xi]],
        )
        .unwrap()
    }

    #[test]
    fn twisted_product() {
        let ext = gr9_2();
        let sk = SkewRing::new(&ext);
        let x = SkewPolynomial::monomial(&ext, 1);
        let c = SkewPolynomial::constant(&ext, ext.xi().clone());
        let expected = SkewPolynomial::new(&ext, vec![ext.zero(), ext.from_power_coeffs(&[0, 8])]);
        assert_eq!(sk.mul(&x, &c), expected);
        let xm1 = SkewPolynomial::linear(&ext, &ext.one());
        let xp1 = SkewPolynomial::linear(&ext, &ext.from_int(-1));
        let sq = SkewPolynomial::new(&ext, vec![ext.from_int(-1), ext.zero(), ext.one()]);
        assert_eq!(sk.mul(&xm1, &xp1), sq);
    }

    #[test]
    fn division_examples() {
        let ext = gr9_2();
        let sk = SkewRing::new(&ext);
        let x2 = SkewPolynomial::monomial(&ext, 2);
        let lin = SkewPolynomial::linear(&ext, ext.xi());
        let (q, r) = sk.right_divmod(&x2, &lin).unwrap();
        assert_eq!(r, SkewPolynomial::one(&ext));
        assert_eq!(sk.add(&sk.mul(&q, &lin), &r), x2);
        assert_eq!(sk.right_divmod(&lin, &x2).unwrap(), (SkewPolynomial::zero(), lin.clone()));
        assert_eq!(sk.right_divmod(&lin, &lin).unwrap(), (SkewPolynomial::one(&ext), SkewPolynomial::zero()));

        let f = SkewPolynomial::new(&ext, vec![ext.zero(), ext.from_power_coeffs(&[0, 8])]);
        let x = SkewPolynomial::monomial(&ext, 1);
        let (q, r) = sk.left_divmod(&f, &x).unwrap();
        assert!(r.is_zero());
        assert_eq!(sk.mul(&x, &q), f);
        assert_eq!(q, SkewPolynomial::constant(&ext, ext.xi().clone()));
    }

    #[test]
    fn norms_and_evaluations() {
        let ext = gr9_2();
        let sk = SkewRing::new(&ext);
        let xi = ext.xi().clone();
        assert_eq!(sk.norm(&xi, 0), ext.one());
        assert_eq!(sk.norm(&xi, 2), ext.one());
        assert_eq!(sk.norm(&ext.one(), 5), ext.one());
        assert_eq!(sk.remainder_eval(&SkewPolynomial::monomial(&ext, 2), &xi), ext.one());
        let x = SkewPolynomial::monomial(&ext, 1);
        assert_eq!(sk.operator_eval(&x, &ext.one(), &xi), ext.from_power_coeffs(&[0, 8]));
        assert_eq!(sk.operator_eval(&SkewPolynomial::one(&ext), &ext.from_int(2), &xi), xi);
        let a = ext.from_int(2);
        let root = sk.conjugate(&a, &xi).unwrap();
        assert_eq!(root, ext.from_int(7));
        assert_eq!(sk.operator_eval(&SkewPolynomial::linear(&ext, &root), &a, &xi), ext.zero());
    }

    #[test]
    fn annihilators() {
        let ext = gr9_2();
        let sk = SkewRing::new(&ext);
        let single = PointSystem::new(&ext, vec![ext.one()], vec![vec![ext.one()]]).unwrap();
        assert_eq!(sk.annihilator(&single).unwrap(), SkewPolynomial::linear(&ext, &ext.one()));
        let pts = msrd_points(&ext);
        let g = sk.annihilator(&pts).unwrap();
        assert_eq!(g.degree(), Some(4));
        assert!(g.is_monic(&ext));
        for (a, b) in pts.pairs() {
            assert!(ext.is_zero(&sk.operator_eval(&g, a, b)));
        }
    }

    #[test]
    fn annihilator_of_non_free_vector() {
        let ext = gr9_2();
        let sk = SkewRing::new(&ext);
        let u = vec![vec![ext.from_int(3), ext.from_power_coeffs(&[0, 3])]];
        let f = sk.annihilator_of_vectors(&[ext.one()], &u).unwrap();
        assert_eq!(f.degree(), Some(2));
        for v in &u[0] {
            assert!(ext.is_zero(&sk.operator_eval(&f, &ext.one(), v)));
        }
        let zero = sk.annihilator_of_vectors(&[ext.one()], &[vec![ext.zero(), ext.zero()]]).unwrap();
        assert_eq!(zero, SkewPolynomial::one(&ext));
    }

    #[test]
    fn moore_matrix_of_running_example() {
        let ext = gr9_2();
        let sk = SkewRing::new(&ext);
        let pts = running_points(&ext);
        let xi = ext.xi().clone();
        let m = sk.moore_matrix(&pts, 2).unwrap();
        let expected = RingMatrix::from_rows(vec![
            vec![ext.one(), xi.clone(), ext.one(), xi],
            vec![ext.one(), ext.from_power_coeffs(&[0, 8]), ext.from_int(2), ext.from_power_coeffs(&[0, 7])],
        ]);
        assert_eq!(m, expected);
        let first = sk.moore_matrix(&pts, 1).unwrap();
        assert_eq!(first.row(0), pts.beta_flat().as_slice());
        // 2 and 1^ξ = 8 differ by a non-unit, so these points are degenerate.
        assert_eq!(sk.moore_matrix(&pts, 4).and_then(|m| invert_matrix(&ext, &m)), Err(Error::NotInvertible));
        assert!(matches!(sk.annihilator(&pts), Err(Error::MsrdPropertyViolated(_))));
        let pts = msrd_points(&ext);
        let full = sk.moore_matrix(&pts, 4).unwrap();
        let inv = invert_matrix(&ext, &full).unwrap();
        let basis = sk.lagrange_basis(&pts).unwrap();
        for (i, f) in basis.iter().enumerate() {
            assert_eq!(f.padded(&ext, 4), inv.row(i).to_vec());
        }
    }

    #[test]
    fn rejects_conjugate_points() {
        let ext = gr9_2();
        // 1 and 2 = -1 mod 3: -1 has norm (-1)^4 = 1, so they are conjugate.
        for other in [2, 8] {
            let err = PointSystem::new(&ext, vec![ext.one(), ext.from_int(other)], vec![vec![ext.one()], vec![ext.one()]]);
            assert!(matches!(err, Err(Error::MsrdPropertyViolated(_))));
        }
        let pts = running_points(&ext);
        assert!(!pts.is_validated());
        assert!(pts.check_conjugacy_residue(&ext).is_err());
        let dependent = PointSystem::new(&ext, vec![ext.one()], vec![vec![ext.one(), ext.from_int(4)]]);
        assert!(matches!(dependent, Err(Error::MsrdPropertyViolated(_))));
    }
}

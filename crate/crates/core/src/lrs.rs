//! Linearized Reed-Solomon codes `C_k(a, β)`: point generation, encoding and
//! brute-force distance certification.

use crate::error::{Error, Result};
use crate::linalg::{ext_times_base, free_rank, power_coordinates, RBasis, RingMatrix};
use crate::metric::{min_distance_bruteforce, LengthPartition};
use crate::ring::{gcd, prime_factors, ChainRing, ExtElement, GaloisExtension, RingElement};
use crate::skew::{PointSystem, SkewPolynomial, SkewRing};

/// `β` blocks taken as prefixes of the power basis `1, ξ, ξ², ...`.
pub fn power_basis_directions(ext: &GaloisExtension, partition: &LengthPartition) -> Vec<Vec<ExtElement>> {
    partition
        .blocks()
        .iter()
        .map(|&n| (0..n).map(|j| ext.pow(ext.xi(), j as u64)).collect())
        .collect()
}

fn validated(ext: &GaloisExtension, a: Vec<ExtElement>, partition: &LengthPartition) -> Result<PointSystem> {
    PointSystem::new(ext, a, power_basis_directions(ext, partition)).map_err(|e| match e {
        Error::MsrdPropertyViolated(msg) => Error::ValidationFailed(msg),
        other => other,
    })
}

fn check_ell(ext: &GaloisExtension, partition: &LengthPartition) -> Result<()> {
    let max = ext.q() - 1;
    let ell = partition.len();
    if ell as u64 > max {
        return Err(Error::EllTooLarge { ell, max });
    }
    Ok(())
}

/// First primitive element of `F_{q^m}` in enumeration order.
pub fn primitive_element(ext: &GaloisExtension) -> Result<ExtElement> {
    let res = ext.residue_field();
    let order = ext
        .q()
        .checked_pow(ext.m() as u32)
        .ok_or_else(|| Error::Unsupported("q^m exceeds 64 bits".into()))?
        - 1;
    let factors = prime_factors(order);
    (1..res.size())
        .map(|i| res.element_at(i))
        .find(|x| factors.iter().all(|f| res.pow(x, order / f) != res.one()))
        .ok_or_else(|| Error::ValidationFailed("no primitive element found".into()))
}

/// `a_i` = canonical lift of `γ^{i-1}` for a primitive `γ`, `β` from the
/// power basis; validated before returning.
pub fn gen_points_primitive(ext: &GaloisExtension, partition: &LengthPartition) -> Result<PointSystem> {
    check_ell(ext, partition)?;
    let res = ext.residue_field();
    let gamma = primitive_element(ext)?;
    let a = (0..partition.len()).map(|i| ext.lift(&res.pow(&gamma, i as u64))).collect();
    validated(ext, a, partition)
}

/// `a_i` = canonical lifts of the first `ℓ` nonzero elements of `F_q` in
/// enumeration order, requiring `gcd(q, m) = 1`; validated before returning.
pub fn gen_points_coprime(ext: &GaloisExtension, partition: &LengthPartition) -> Result<PointSystem> {
    if gcd(ext.q(), ext.m() as u64) != 1 {
        return Err(Error::NotCoprime { q: ext.q(), m: ext.m() });
    }
    check_ell(ext, partition)?;
    let fq = ext.base().residue_field();
    let a = (1..=partition.len() as u128)
        .map(|i| ext.embed(&RingElement(fq.element_at(i).coeffs().to_vec())))
        .collect();
    validated(ext, a, partition)
}

/// Attempts before [`random_point_system`] gives up.
pub const POINT_SAMPLING_RETRIES: usize = 10_000;

/// Uniformly drawn units `a_i` and directions `β_{i,j}`, redrawn until the
/// system validates. The `a_i` are screened by the residue criterion and each
/// block is redrawn on its own before the full validation runs.
pub fn random_point_system<G: rand::Rng + ?Sized>(
    ext: &GaloisExtension,
    partition: &LengthPartition,
    rng: &mut G,
) -> Result<PointSystem> {
    check_ell(ext, partition)?;
    if partition.blocks().iter().any(|&n| n > ext.m()) {
        return Err(Error::BadDimension(format!("blocks must not exceed m = {}", ext.m())));
    }
    let unit = |rng: &mut G| {
        (0..POINT_SAMPLING_RETRIES).map(|_| ext.random(rng)).find(|x| ext.is_unit(x)).ok_or(Error::SamplingExhausted)
    };
    for _ in 0..POINT_SAMPLING_RETRIES {
        let a = (0..partition.len()).map(|_| unit(rng)).collect::<Result<Vec<_>>>()?;
        let screen = PointSystem::unvalidated(ext, a.clone(), vec![vec![ext.one()]; a.len()])?;
        if screen.check_conjugacy_residue(ext).is_err() {
            continue;
        }
        let beta = partition
            .blocks()
            .iter()
            .map(|&n| {
                (0..POINT_SAMPLING_RETRIES)
                    .map(|_| (0..n).map(|_| ext.random(rng)).collect::<Vec<_>>())
                    .find(|b| free_rank(ext.base(), &power_coordinates(ext, b)) == n)
                    .ok_or(Error::SamplingExhausted)
            })
            .collect::<Result<Vec<_>>>()?;
        if let Ok(pts) = PointSystem::new(ext, a, beta) {
            return Ok(pts);
        }
    }
    Err(Error::SamplingExhausted)
}

/// `C_k(a, β)` with its cached `k × n` Moore generator.
#[derive(Clone, Debug)]
pub struct LrsCode {
    ext: GaloisExtension,
    points: PointSystem,
    k: usize,
    generator: RingMatrix<ExtElement>,
    basis: RBasis,
}

impl LrsCode {
    /// Requires a validated point system.
    pub fn new(ext: &GaloisExtension, points: PointSystem, k: usize) -> Result<Self> {
        if !points.is_validated() {
            return Err(Error::MsrdPropertyViolated("point system was not validated".into()));
        }
        LrsCode::new_unvalidated(ext, points, k)
    }

    /// Builds the generator without the MSRD precondition, for studying
    /// degenerate point systems.
    pub fn new_unvalidated(ext: &GaloisExtension, points: PointSystem, k: usize) -> Result<Self> {
        let generator = SkewRing::new(ext).moore_matrix(&points, k)?;
        Ok(LrsCode { ext: ext.clone(), points, k, generator, basis: RBasis::power(ext) })
    }

    pub fn ext(&self) -> &GaloisExtension {
        &self.ext
    }

    pub fn points(&self) -> &PointSystem {
        &self.points
    }

    pub fn partition(&self) -> &LengthPartition {
        self.points.partition()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn generator(&self) -> &RingMatrix<ExtElement> {
        &self.generator
    }

    pub fn basis(&self) -> &RBasis {
        &self.basis
    }

    /// `n - k + 1`.
    pub fn designed_distance(&self) -> usize {
        self.n() - self.k + 1
    }

    /// `⌊(n - k) / 2⌋`.
    pub fn error_capacity(&self) -> usize {
        (self.n() - self.k) / 2
    }

    fn check_message(&self, msg: &[ExtElement]) -> Result<()> {
        if msg.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: msg.len() });
        }
        msg.iter().try_for_each(|x| self.ext.check(x))
    }

    /// `msg · M_k(a, β)`.
    pub fn encode(&self, msg: &[ExtElement]) -> Result<Vec<ExtElement>> {
        self.check_message(msg)?;
        Ok(self.generator.left_apply(&self.ext, msg))
    }

    /// `F = Σ msg_u x^u`.
    pub fn message_polynomial(&self, msg: &[ExtElement]) -> SkewPolynomial {
        SkewPolynomial::new(&self.ext, msg.to_vec())
    }

    /// `c_{i,j} = F_{a_i}(β_{i,j})`, the evaluation form of [`LrsCode::encode`].
    pub fn encode_by_evaluation(&self, msg: &[ExtElement]) -> Result<Vec<ExtElement>> {
        self.check_message(msg)?;
        Ok(self.evaluate(&self.message_polynomial(msg)))
    }

    /// Operator evaluation of `F` at every point.
    pub fn evaluate(&self, f: &SkewPolynomial) -> Vec<ExtElement> {
        let sk = SkewRing::new(&self.ext);
        self.points.pairs().into_iter().map(|(a, b)| sk.operator_eval(f, a, b)).collect()
    }

    /// The code with directions `β_i A_i` for square blocks `A_i` over `R`.
    pub fn transform(&self, blocks: &[RingMatrix<RingElement>]) -> Result<LrsCode> {
        if blocks.len() != self.points.partition().len() {
            return Err(Error::DimensionMismatch { expected: self.points.partition().len(), got: blocks.len() });
        }
        let beta = self
            .points
            .beta()
            .iter()
            .zip(blocks)
            .map(|(b, a)| {
                if a.rows() != b.len() {
                    return Err(Error::DimensionMismatch { expected: b.len(), got: a.rows() });
                }
                Ok(ext_times_base(&self.ext, b, a))
            })
            .collect::<Result<Vec<_>>>()?;
        let points = self.points.with_beta(&self.ext, beta)?;
        LrsCode::new_unvalidated(&self.ext, points, self.k)
    }

    /// Brute-force minimum sum-rank distance, required to equal `n - k + 1`.
    pub fn certify_msrd(&self) -> Result<usize> {
        let d = min_distance_bruteforce(&self.ext, &self.generator, self.partition(), &self.basis)?;
        if d != self.designed_distance() {
            return Err(Error::MsrdViolated { found: d, expected: self.designed_distance() });
        }
        Ok(d)
    }

    /// Brute-force minimum distance without the MSRD assertion.
    pub fn min_distance(&self) -> Result<usize> {
        min_distance_bruteforce(&self.ext, &self.generator, self.partition(), &self.basis)
    }
}

//! Welch-Berlekamp decoding of LRS codes up to `⌊(n - k) / 2⌋` sum-rank
//! errors, and the erasure-aware variant used on coherent network channels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ext_times_base, free_rank, power_coordinates, solve, RingMatrix};
use crate::lrs::LrsCode;
use crate::metric::{sum_rank_weight, LengthPartition};
use crate::ring::{ChainRing, ExtElement, GaloisExtension, RingElement};
use crate::skew::{SkewPolynomial, SkewRing};

/// Why a decode attempt gave up. Every reason indicates an error beyond the
/// correction capability (or a degenerate point system).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    /// The point system admits no interpolation basis.
    DegeneratePoints,
    /// The key system has no solution.
    Inconsistent,
    /// `L` does not left-divide `Q`.
    NonzeroRemainder,
    /// The quotient has degree at least `k`.
    DegreeTooHigh,
    /// The recovered codeword is farther than `t` from the received word.
    WeightExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeResult {
    Success { message: Vec<ExtElement>, codeword: Vec<ExtElement>, error_weight: usize },
    Failure { reason: FailureReason },
}

impl DecodeResult {
    pub fn is_success(&self) -> bool {
        matches!(self, DecodeResult::Success { .. })
    }

    pub fn message(&self) -> Option<&[ExtElement]> {
        match self {
            DecodeResult::Success { message, .. } => Some(message),
            DecodeResult::Failure { .. } => None,
        }
    }
}

/// The linear system for `(L R)(b_j) = Q(b_j)` with `L` monic of degree `t`.
///
/// Unknowns are laid out as `L_0, ..., L_{t-1}, Q_0, ..., Q_{t+k-1}`.
#[derive(Clone, Debug)]
pub struct KeySystem {
    pub matrix: RingMatrix<ExtElement>,
    pub rhs: Vec<ExtElement>,
    pub t: usize,
    pub k: usize,
}

/// Per-code data reused across decodes: the Lagrange basis and the
/// conjugated points `b_{i,j} = a_i^{β_{i,j}}`.
#[derive(Clone, Debug)]
pub struct WbDecoder<'a> {
    code: &'a LrsCode,
    lagrange: Vec<SkewPolynomial>,
    b: Vec<ExtElement>,
}

impl<'a> WbDecoder<'a> {
    pub fn new(code: &'a LrsCode) -> Result<Self> {
        let ext = code.ext();
        let lagrange = SkewRing::new(ext).lagrange_basis(code.points())?;
        let b = code.points().conjugate_points(ext);
        Ok(WbDecoder { code, lagrange, b })
    }

    /// `R` with `R_{a_i}(β_{i,j}) = r_{i,j}`, equivalently `R(b_{i,j}) = r_{i,j} β_{i,j}^{-1}`.
    pub fn received_polynomial(&self, received: &[ExtElement]) -> Result<SkewPolynomial> {
        SkewRing::new(self.code.ext()).interpolate_with(&self.lagrange, received)
    }

    pub fn key_system(&self, r_poly: &SkewPolynomial) -> KeySystem {
        let ext = self.code.ext();
        let sk = SkewRing::new(ext);
        let n = self.code.n();
        let k = self.code.k();
        let t = self.code.error_capacity();
        let ru = r_poly.padded(ext, n);
        let unknowns = 2 * t + k;
        let mut matrix = RingMatrix::zeros(ext, n, unknowns);
        let mut rhs = Vec::with_capacity(n);
        // σ^i(R_u) for i <= t
        let twisted: Vec<Vec<ExtElement>> =
            (0..=t).map(|i| ru.iter().map(|c| ext.frobenius(c, i as i64)).collect()).collect();
        for (j, b) in self.b.iter().enumerate() {
            let norms = sk.norms(b, (t + n).max(t + k));
            let row_term = |i: usize| {
                twisted[i]
                    .iter()
                    .enumerate()
                    .fold(ext.zero(), |acc, (u, c)| ext.add(&acc, &ext.mul(c, &norms[i + u])))
            };
            for i in 0..t {
                matrix[(j, i)] = row_term(i);
            }
            for s in 0..t + k {
                matrix[(j, t + s)] = ext.neg(&norms[s]);
            }
            rhs.push(ext.neg(&row_term(t)));
        }
        KeySystem { matrix, rhs, t, k }
    }

    pub fn decode(&self, received: &[ExtElement]) -> Result<DecodeResult> {
        let code = self.code;
        let ext = code.ext();
        if received.len() != code.n() {
            return Err(Error::DimensionMismatch { expected: code.n(), got: received.len() });
        }
        received.iter().try_for_each(|x| ext.check(x))?;
        let sk = SkewRing::new(ext);
        let r_poly = self.received_polynomial(received)?;
        let sys = self.key_system(&r_poly);
        let sol = match solve(ext, &sys.matrix, &sys.rhs) {
            Ok(sol) => sol,
            Err(Error::Inconsistent) => return Ok(DecodeResult::Failure { reason: FailureReason::Inconsistent }),
            Err(e) => return Err(e),
        };
        let t = sys.t;
        let mut l_coeffs = sol[..t].to_vec();
        l_coeffs.push(ext.one());
        let l = SkewPolynomial::new(ext, l_coeffs);
        let q = SkewPolynomial::new(ext, sol[t..].to_vec());
        let (f, rem) = sk.left_divmod(&q, &l)?;
        if !rem.is_zero() {
            return Ok(DecodeResult::Failure { reason: FailureReason::NonzeroRemainder });
        }
        if f.degree().is_some_and(|d| d >= code.k()) {
            return Ok(DecodeResult::Failure { reason: FailureReason::DegreeTooHigh });
        }
        let message = f.padded(ext, code.k());
        let codeword = code.encode(&message)?;
        let diff: Vec<ExtElement> = received.iter().zip(&codeword).map(|(a, b)| ext.sub(a, b)).collect();
        let error_weight = sum_rank_weight(ext, &diff, code.partition(), code.basis())?;
        if error_weight > t {
            return Ok(DecodeResult::Failure { reason: FailureReason::WeightExceeded });
        }
        Ok(DecodeResult::Success { message, codeword, error_weight })
    }
}

/// Decodes `received` against `code`; degenerate point systems yield a
/// `DegeneratePoints` failure rather than an error.
pub fn wb_decode(code: &LrsCode, received: &[ExtElement]) -> Result<DecodeResult> {
    if received.len() != code.n() {
        return Err(Error::DimensionMismatch { expected: code.n(), got: received.len() });
    }
    match WbDecoder::new(code) {
        Ok(dec) => dec.decode(received),
        Err(Error::MsrdPropertyViolated(_)) => Ok(DecodeResult::Failure { reason: FailureReason::DegeneratePoints }),
        Err(e) => Err(e),
    }
}

/// Greedy column choice: ascending index, keep a column iff the selected
/// directions stay `R`-linearly independent.
pub fn select_columns(ext: &GaloisExtension, directions: &[ExtElement]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut cols: Vec<ExtElement> = Vec::new();
    for (j, d) in directions.iter().enumerate() {
        cols.push(d.clone());
        if free_rank(ext.base(), &power_coordinates(ext, &cols)) == cols.len() {
            chosen.push(j);
        } else {
            cols.pop();
        }
    }
    chosen
}

/// Decodes `y = c A + e` for a known block-diagonal transfer matrix
/// `A = Diag(A_1, ..., A_ℓ)` with `A_i` of shape `n_i × N_i`.
///
/// Columns are selected so that `β_i A'_i` stays free, and the shortened code
/// `C_k(a, β')` is decoded. The returned codeword belongs to `code`; the
/// reported error weight is that of `y - c A` over the `N_i` partition.
pub fn erasure_decode(code: &LrsCode, received: &[ExtElement], transfer: &[RingMatrix<RingElement>]) -> Result<DecodeResult> {
    let ext = code.ext();
    let partition = code.partition();
    if transfer.len() != partition.len() {
        return Err(Error::DimensionMismatch { expected: partition.len(), got: transfer.len() });
    }
    for (a, &n) in transfer.iter().zip(partition.blocks()) {
        if a.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.rows() });
        }
    }
    let out_dims: Vec<usize> = transfer.iter().map(RingMatrix::cols).collect();
    let total: usize = out_dims.iter().sum();
    if received.len() != total {
        return Err(Error::DimensionMismatch { expected: total, got: received.len() });
    }

    let mut a_sel = Vec::new();
    let mut beta_sel = Vec::new();
    let mut y_sel = Vec::new();
    let mut offset = 0;
    for (i, (a_i, beta_i)) in transfer.iter().zip(code.points().beta()).enumerate() {
        let directions = ext_times_base(ext, beta_i, a_i);
        let chosen = select_columns(ext, &directions);
        if !chosen.is_empty() {
            a_sel.push(code.points().a()[i].clone());
            beta_sel.push(chosen.iter().map(|&j| directions[j].clone()).collect::<Vec<_>>());
            y_sel.extend(chosen.iter().map(|&j| received[offset + j].clone()));
        }
        offset += a_i.cols();
    }
    let free: usize = beta_sel.iter().map(Vec::len).sum();
    if free < code.k() {
        return Err(Error::InsufficientFreeRank { free_rank: free, k: code.k() });
    }
    let points = code.points().with_points(ext, a_sel, beta_sel)?;
    let shortened = if code.points().is_validated() {
        LrsCode::new(ext, points, code.k())?
    } else {
        LrsCode::new_unvalidated(ext, points, code.k())?
    };
    match wb_decode(&shortened, &y_sel)? {
        DecodeResult::Success { message, .. } => {
            let codeword = code.encode(&message)?;
            let mut residual = Vec::with_capacity(total);
            let mut start = 0;
            for ((a_i, block), &len) in transfer.iter().zip(partition.ranges()).zip(&out_dims) {
                let image = ext_times_base(ext, &codeword[block], a_i);
                residual.extend(image.iter().zip(&received[start..start + len]).map(|(c, y)| ext.sub(y, c)));
                start += len;
            }
            let out_partition = LengthPartition::new(out_dims)?;
            let error_weight = sum_rank_weight(ext, &residual, &out_partition, code.basis())?;
            Ok(DecodeResult::Success { message, codeword, error_weight })
        }
        failure => Ok(failure),
    }
}

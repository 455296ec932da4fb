//! Sum-rank weight and distance for a length partition, plus the brute-force
//! oracles that certify them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ext_times_base, invert_matrix, matrix_representation, rank_and_free_rank, RBasis, RingMatrix};
use crate::ring::{ChainRing, ExtElement, GaloisExtension, GaloisRing, RingElement};

/// Guard on `|GL_n(R)|`-style enumerations.
pub const GL_ENUMERATION_LIMIT: u128 = 100_000;
/// Guard on the number of candidate matrices scanned while enumerating GL.
pub const MATRIX_SCAN_LIMIT: u128 = 1_000_000;
/// Guard on `|S|^k` for minimum-distance brute force.
pub const MESSAGE_ENUMERATION_LIMIT: u128 = 1_000_000;

/// `n = n_1 + ... + n_ℓ` with every block positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct LengthPartition(Vec<usize>);

impl LengthPartition {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::BadDimension("partition blocks must be positive and non-empty".into()));
        }
        Ok(LengthPartition(blocks))
    }

    /// `n` blocks of length one: the Hamming-metric partition.
    pub fn hamming(n: usize) -> Self {
        LengthPartition(vec![1; n])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.0
    }

    /// Number of blocks `ℓ`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total length `n`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Half-open index ranges of each block.
    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.0
            .iter()
            .map(|&n| {
                let r = start..start + n;
                start += n;
                r
            })
            .collect()
    }

    /// `Σ min(n_i, m)`, the largest possible weight.
    pub fn max_weight(&self, m: usize) -> usize {
        self.0.iter().map(|&n| n.min(m)).sum()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.total() {
            return Err(Error::PartitionMismatch { expected: self.total(), got: len });
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for LengthPartition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        LengthPartition::new(v)
    }
}

impl From<LengthPartition> for Vec<usize> {
    fn from(p: LengthPartition) -> Vec<usize> {
        p.0
    }
}

/// Per-block `(rank, free_rank)` of the coordinate matrices.
pub fn block_ranks(
    ext: &GaloisExtension,
    v: &[ExtElement],
    partition: &LengthPartition,
    basis: &RBasis,
) -> Result<Vec<(usize, usize)>> {
    partition.check_len(v.len())?;
    Ok(partition
        .ranges()
        .into_iter()
        .map(|r| rank_and_free_rank(ext.base(), &matrix_representation(ext, &v[r], basis)))
        .collect())
}

pub fn sum_rank_weight(ext: &GaloisExtension, v: &[ExtElement], partition: &LengthPartition, basis: &RBasis) -> Result<usize> {
    Ok(block_ranks(ext, v, partition, basis)?.iter().map(|b| b.0).sum())
}

pub fn sum_rank_distance(
    ext: &GaloisExtension,
    u: &[ExtElement],
    v: &[ExtElement],
    partition: &LengthPartition,
    basis: &RBasis,
) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), got: v.len() });
    }
    let diff: Vec<ExtElement> = u.iter().zip(v).map(|(a, b)| ext.sub(a, b)).collect();
    sum_rank_weight(ext, &diff, partition, basis)
}

pub fn hamming_weight(ext: &GaloisExtension, v: &[ExtElement]) -> usize {
    v.iter().filter(|x| !ext.is_zero(x)).count()
}

/// Every invertible `n × n` matrix over `R`, found by filtering all
/// matrices through [`invert_matrix`].
pub fn enumerate_gl(ring: &GaloisRing, n: usize) -> Result<Vec<RingMatrix<RingElement>>> {
    let size = ring.size();
    let total = size.checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if total > MATRIX_SCAN_LIMIT {
        return Err(Error::TooLargeToEnumerate(total));
    }
    let out: Vec<_> = (0..total)
        .filter_map(|mut idx| {
            let data = (0..n * n)
                .map(|_| {
                    let e = ring.element_at(idx % size);
                    idx /= size;
                    e
                })
                .collect();
            let m = RingMatrix::from_vec(n, n, data);
            invert_matrix(ring, &m).ok().map(|_| m)
        })
        .collect();
    if out.len() as u128 > GL_ENUMERATION_LIMIT {
        return Err(Error::TooLargeToEnumerate(out.len() as u128));
    }
    Ok(out)
}

/// Exhaustive oracle for the sum-rank weight: the minimum Hamming weight of
/// `v · Diag(A_1, ..., A_ℓ)` over all invertible blocks `A_i`.
///
/// The Hamming weight splits over blocks, so each block is minimized on its
/// own. Groups are enumerated once per distinct block size and cached.
pub struct HammingMinOracle {
    partition: LengthPartition,
    groups: std::collections::BTreeMap<usize, Vec<RingMatrix<RingElement>>>,
}

impl HammingMinOracle {
    pub fn new(ext: &GaloisExtension, partition: &LengthPartition) -> Result<Self> {
        let mut groups = std::collections::BTreeMap::new();
        for &n in partition.blocks() {
            if let std::collections::btree_map::Entry::Vacant(e) = groups.entry(n) {
                e.insert(enumerate_gl(ext.base(), n)?);
            }
        }
        Ok(HammingMinOracle { partition: partition.clone(), groups })
    }

    pub fn weight(&self, ext: &GaloisExtension, v: &[ExtElement]) -> Result<usize> {
        self.partition.check_len(v.len())?;
        Ok(self
            .partition
            .ranges()
            .into_iter()
            .map(|r| {
                let block = &v[r.clone()];
                self.groups[&r.len()]
                    .iter()
                    .map(|a| hamming_weight(ext, &ext_times_base(ext, block, a)))
                    .min()
                    .unwrap_or(0)
            })
            .sum())
    }
}

pub fn hamming_min_oracle(ext: &GaloisExtension, v: &[ExtElement], partition: &LengthPartition) -> Result<usize> {
    HammingMinOracle::new(ext, partition)?.weight(ext, v)
}

/// Minimum sum-rank weight over all nonzero `x · G`, `x ∈ S^k`.
pub fn min_distance_bruteforce(
    ext: &GaloisExtension,
    generator: &RingMatrix<ExtElement>,
    partition: &LengthPartition,
    basis: &RBasis,
) -> Result<usize> {
    partition.check_len(generator.cols())?;
    let k = generator.rows();
    let size = ext.size();
    let total = size.checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > MESSAGE_ENUMERATION_LIMIT {
        return Err(Error::TooLargeToEnumerate(total));
    }
    let best = (1..total)
        .into_par_iter()
        .map(|mut idx| {
            let msg: Vec<ExtElement> = (0..k)
                .map(|_| {
                    let e = ext.element_at(idx % size);
                    idx /= size;
                    e
                })
                .collect();
            let c = generator.left_apply(ext, &msg);
            sum_rank_weight(ext, &c, partition, basis).expect("partition checked")
        })
        .min();
    Ok(best.unwrap_or(partition.total() + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr9_2() -> GaloisExtension {
        GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(3, 2).unwrap(), &[1, 0, 1]).unwrap()
    }

    #[test]
    fn weights_of_examples() {
        let ext = gr9_2();
        let basis = RBasis::power(&ext);
        let part = LengthPartition::new(vec![2]).unwrap();
        let zero = vec![ext.zero(), ext.zero()];
        assert_eq!(sum_rank_weight(&ext, &zero, &part, &basis).unwrap(), 0);
        let v = vec![ext.one(), ext.xi().clone()];
        assert_eq!(sum_rank_weight(&ext, &v, &part, &basis).unwrap(), 2);
        let w = vec![ext.from_int(3), ext.from_power_coeffs(&[0, 3])];
        assert_eq!(block_ranks(&ext, &w, &part, &basis).unwrap(), vec![(2, 0)]);
        assert_eq!(
            sum_rank_weight(&ext, &[ext.one()], &part, &basis),
            Err(Error::PartitionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn oracle_examples() {
        let z4 = GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(2, 2).unwrap(), &[-1, 1]).unwrap();
        let part = LengthPartition::new(vec![1]).unwrap();
        assert_eq!(hamming_min_oracle(&z4, &[z4.from_int(2)], &part).unwrap(), 1);
        assert_eq!(hamming_min_oracle(&z4, &[z4.zero()], &part).unwrap(), 0);
        assert_eq!(enumerate_gl(GaloisRing::integers_mod(3, 2).as_ref().unwrap(), 2).unwrap().len(), 3888);
    }

    #[test]
    fn identity_generator_has_distance_one() {
        let ext = gr9_2();
        let g = RingMatrix::identity(&ext, 2);
        let part = LengthPartition::hamming(2);
        assert_eq!(min_distance_bruteforce(&ext, &g, &part, &RBasis::power(&ext)).unwrap(), 1);
    }
}

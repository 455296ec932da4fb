//! Coherent multishot network-coding channel: `y = c A + e` with a known
//! block-diagonal transfer matrix `A` and a sum-rank error `e`.
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream
//! `i`, so serial and parallel runs produce the same outcomes.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::{erasure_decode, DecodeResult, FailureReason};
use crate::error::{Error, Result};
use crate::linalg::{ext_times_base, free_rank, random_invertible, RBasis, RingMatrix};
use crate::lrs::LrsCode;
use crate::metric::{sum_rank_weight, LengthPartition};
use crate::ring::{ChainRing, ExtElement, GaloisExtension, GaloisRing, RingElement};

/// Attempts per block before [`Error::SamplingExhausted`].
pub const SAMPLING_RETRIES: usize = 1000;

/// RNG for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Splits `total` into parts bounded by `caps`, uniformly over unit
/// increments.
fn random_split<G: Rng + ?Sized>(total: usize, caps: &[usize], rng: &mut G) -> Option<Vec<usize>> {
    if total > caps.iter().sum() {
        return None;
    }
    let mut parts = vec![0; caps.len()];
    for _ in 0..total {
        let open: Vec<usize> = (0..caps.len()).filter(|&i| parts[i] < caps[i]).collect();
        parts[*open.choose(rng)?] += 1;
    }
    Some(parts)
}

fn random_matrix<G: Rng + ?Sized>(ring: &GaloisRing, rows: usize, cols: usize, rng: &mut G) -> RingMatrix<RingElement> {
    RingMatrix::from_vec(rows, cols, (0..rows * cols).map(|_| ring.random(rng)).collect())
}

/// Block-diagonal transfer matrix with `Σ frk(A_i) = n - ρ` exactly.
///
/// Each `A_i` (`n_i × N_i`) is drawn uniformly until it has full free rank,
/// then `ρ_i` random rows are multiplied by `p`; the free rank is
/// re-verified. `ρ` must cover the deficiency forced by any `N_i < n_i`.
pub fn sample_transfer<G: Rng + ?Sized>(
    ring: &GaloisRing,
    partition: &LengthPartition,
    out_dims: &[usize],
    rho: usize,
    rng: &mut G,
) -> Result<Vec<RingMatrix<RingElement>>> {
    if out_dims.len() != partition.len() {
        return Err(Error::DimensionMismatch { expected: partition.len(), got: out_dims.len() });
    }
    let n = partition.total();
    let caps: Vec<usize> = partition.blocks().iter().zip(out_dims).map(|(&a, &b)| a.min(b)).collect();
    let forced = n - caps.iter().sum::<usize>();
    if rho > n || rho < forced {
        return Err(Error::BadDimension(format!("rho = {rho} must lie in [{forced}, {n}] for these dimensions")));
    }
    let split = random_split(rho - forced, &caps, rng).ok_or(Error::SamplingExhausted)?;
    let p = ring.from_int(ring.p() as i64);
    partition
        .blocks()
        .iter()
        .zip(out_dims)
        .zip(caps.iter().zip(&split))
        .map(|((&rows, &cols), (&cap, &drop))| {
            for _ in 0..SAMPLING_RETRIES {
                let mut a = random_matrix(ring, rows, cols, rng);
                if free_rank(ring, &a) != cap {
                    continue;
                }
                let mut idx: Vec<usize> = (0..rows).collect();
                idx.shuffle(rng);
                for &i in &idx[..drop] {
                    for j in 0..cols {
                        a[(i, j)] = ring.mul(&p, &a[(i, j)]);
                    }
                }
                if free_rank(ring, &a) == cap - drop {
                    return Ok(a);
                }
            }
            Err(Error::SamplingExhausted)
        })
        .collect()
}

/// Error of sum-rank weight exactly `t` over `partition`: block `i` is
/// `α_i B_i` with `α_i ∈ S^{t_i}` and `B_i ∈ R^{t_i × N_i}` both of full free
/// rank, taken from random invertible matrices.
pub fn sample_error<G: Rng + ?Sized>(
    ext: &GaloisExtension,
    partition: &LengthPartition,
    t: usize,
    rng: &mut G,
) -> Result<Vec<ExtElement>> {
    let m = ext.m();
    let caps: Vec<usize> = partition.blocks().iter().map(|&n| n.min(m)).collect();
    let max = caps.iter().sum();
    let ranks = random_split(t, &caps, rng).ok_or(Error::BudgetInfeasible { t, max })?;
    let mut e = Vec::with_capacity(partition.total());
    for (&n, &ti) in partition.blocks().iter().zip(&ranks) {
        if ti == 0 {
            e.extend(std::iter::repeat_with(|| ext.zero()).take(n));
            continue;
        }
        let alpha_src = random_invertible(ext.base(), m, rng);
        let alpha: Vec<ExtElement> = (0..ti).map(|c| ext.from_coordinates(&alpha_src.column(c))).collect();
        let b = random_invertible(ext.base(), n, rng).select_rows(&(0..ti).collect::<Vec<_>>());
        e.extend(ext_times_base(ext, &alpha, &b));
    }
    let w = sum_rank_weight(ext, &e, partition, &RBasis::power(ext))?;
    debug_assert_eq!(w, t);
    if w != t {
        return Err(Error::SamplingExhausted);
    }
    Ok(e)
}

/// Channel parameters for a batch of trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelConfig {
    /// Out-dimensions `N_i` per shot.
    pub out_dims: Vec<usize>,
    /// Link-error budget: sum-rank weight of `e`.
    pub t: usize,
    /// Erasure budget: `n - frk(A)`.
    pub rho: usize,
    pub trials: usize,
    pub seed: u64,
    /// Allow configurations beyond `2t + ρ + 1 <= n - k + 1`.
    pub stress: bool,
    /// Keep a per-trial log.
    pub log: bool,
}

impl ChannelConfig {
    /// Square shots (`N_i = n_i`), no stress, no log.
    pub fn square(code: &LrsCode, t: usize, rho: usize, trials: usize, seed: u64) -> Self {
        ChannelConfig {
            out_dims: code.partition().blocks().to_vec(),
            t,
            rho,
            trials,
            seed,
            stress: false,
            log: false,
        }
    }

    /// `2t + ρ + 1 <= n - k + 1`.
    pub fn guaranteed(&self, code: &LrsCode) -> bool {
        2 * self.t + self.rho < code.designed_distance()
    }

    /// `(n - 2t - ρ) / n`, clamped at zero.
    pub fn rate(&self, code: &LrsCode) -> f64 {
        let n = code.n();
        n.saturating_sub(2 * self.t + self.rho) as f64 / n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Failure,
    Miscorrection,
}

/// One line of the optional JSON-lines log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub outcome: Outcome,
    pub free_rank: usize,
    pub error_weight: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub miscorrections: usize,
    pub rate: f64,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log: Option<Vec<TrialRecord>>,
}

impl TrialStats {
    /// Counters and log, ignoring wall time.
    pub fn same_outcomes(&self, other: &TrialStats) -> bool {
        (self.trials, self.successes, self.failures, self.miscorrections, &self.log)
            == (other.trials, other.successes, other.failures, other.miscorrections, &other.log)
    }
}

/// One row of the simulation CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub p: u64,
    pub r: u32,
    pub s: usize,
    pub m: usize,
    pub partition: String,
    pub k: usize,
    pub t: usize,
    pub rho: usize,
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub miscorrections: usize,
    pub rate: f64,
    pub seconds: f64,
}

impl CsvRow {
    pub fn new(code: &LrsCode, config: &ChannelConfig, stats: &TrialStats) -> Self {
        let ext = code.ext();
        CsvRow {
            p: ext.base().p(),
            r: ext.base().r(),
            s: ext.base().s(),
            m: ext.m(),
            partition: code.partition().blocks().iter().map(usize::to_string).collect::<Vec<_>>().join("+"),
            k: code.k(),
            t: config.t,
            rho: config.rho,
            trials: stats.trials,
            successes: stats.successes,
            failures: stats.failures,
            miscorrections: stats.miscorrections,
            rate: stats.rate,
            seconds: stats.seconds,
        }
    }
}

/// Runs one trial; sampling errors abort, decoding problems are outcomes.
pub fn run_trial(code: &LrsCode, config: &ChannelConfig, index: usize) -> Result<TrialRecord> {
    let ext = code.ext();
    let mut rng = trial_rng(config.seed, index as u64);
    let msg: Vec<ExtElement> = (0..code.k()).map(|_| ext.random(&mut rng)).collect();
    let c = code.encode(&msg)?;
    let transfer = sample_transfer(ext.base(), code.partition(), &config.out_dims, config.rho, &mut rng)?;
    let out_partition = LengthPartition::new(config.out_dims.clone())?;
    let e = sample_error(ext, &out_partition, config.t, &mut rng)?;
    let mut y = Vec::with_capacity(e.len());
    for (a_i, block) in transfer.iter().zip(code.partition().ranges()) {
        y.extend(ext_times_base(ext, &c[block], a_i));
    }
    for (yi, ei) in y.iter_mut().zip(&e) {
        *yi = ext.add(yi, ei);
    }
    let frk: usize = transfer.iter().map(|a| free_rank(ext.base(), a)).sum();
    let (outcome, reason) = match erasure_decode(code, &y, &transfer) {
        Ok(DecodeResult::Success { message, .. }) if message == msg => (Outcome::Success, None),
        Ok(DecodeResult::Success { .. }) => (Outcome::Miscorrection, None),
        Ok(DecodeResult::Failure { reason }) => (Outcome::Failure, Some(reason_name(reason).to_string())),
        Err(err) => (Outcome::Failure, Some(err.code().to_string())),
    };
    Ok(TrialRecord { trial: index, outcome, free_rank: frk, error_weight: config.t, reason })
}

fn reason_name(r: FailureReason) -> &'static str {
    match r {
        FailureReason::DegeneratePoints => "degenerate_points",
        FailureReason::Inconsistent => "inconsistent",
        FailureReason::NonzeroRemainder => "nonzero_remainder",
        FailureReason::DegreeTooHigh => "degree_too_high",
        FailureReason::WeightExceeded => "weight_exceeded",
    }
}

/// Runs `config.trials` independent trials in parallel.
pub fn run_trials(code: &LrsCode, config: &ChannelConfig) -> Result<TrialStats> {
    if config.out_dims.len() != code.partition().len() {
        return Err(Error::DimensionMismatch { expected: code.partition().len(), got: config.out_dims.len() });
    }
    if !config.stress && !config.guaranteed(code) {
        return Err(Error::BoundViolated { lhs: 2 * config.t + config.rho + 1, d: code.designed_distance() });
    }
    let out_partition = LengthPartition::new(config.out_dims.clone())?;
    let max = out_partition.max_weight(code.ext().m());
    if config.t > max {
        return Err(Error::BudgetInfeasible { t: config.t, max });
    }
    let start = Instant::now();
    let records = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(code, config, i))
        .collect::<Result<Vec<_>>>()?;
    let count = |o: Outcome| records.iter().filter(|r| r.outcome == o).count();
    Ok(TrialStats {
        trials: config.trials,
        successes: count(Outcome::Success),
        failures: count(Outcome::Failure),
        miscorrections: count(Outcome::Miscorrection),
        rate: config.rate(code),
        seconds: start.elapsed().as_secs_f64(),
        log: config.log.then_some(records),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrs::gen_points_primitive;

    fn gr9_2() -> GaloisExtension {
        GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(3, 2).unwrap(), &[1, 0, 1]).unwrap()
    }

    fn code(ext: &GaloisExtension, k: usize) -> LrsCode {
        let pts = gen_points_primitive(ext, &LengthPartition::new(vec![2, 2]).unwrap()).unwrap();
        LrsCode::new(ext, pts, k).unwrap()
    }

    #[test]
    fn transfer_free_rank_is_exact() {
        let ext = gr9_2();
        let part = LengthPartition::new(vec![2, 2]).unwrap();
        let mut rng = trial_rng(1, 0);
        for rho in 0..=4 {
            let a = sample_transfer(ext.base(), &part, &[2, 2], rho, &mut rng).unwrap();
            let frk: usize = a.iter().map(|b| free_rank(ext.base(), b)).sum();
            assert_eq!(frk, 4 - rho);
        }
        let wide = sample_transfer(ext.base(), &part, &[3, 1], 1, &mut rng).unwrap();
        assert_eq!(wide.iter().map(|b| free_rank(ext.base(), b)).sum::<usize>(), 3);
        assert!(matches!(sample_transfer(ext.base(), &part, &[3, 1], 0, &mut rng), Err(Error::BadDimension(_))));
    }

    #[test]
    fn error_weight_is_exact() {
        let ext = gr9_2();
        let part = LengthPartition::new(vec![2, 2]).unwrap();
        let basis = RBasis::power(&ext);
        let mut rng = trial_rng(2, 0);
        for t in 0..=4 {
            let e = sample_error(&ext, &part, t, &mut rng).unwrap();
            assert_eq!(sum_rank_weight(&ext, &e, &part, &basis).unwrap(), t);
        }
        assert_eq!(sample_error(&ext, &part, 5, &mut rng), Err(Error::BudgetInfeasible { t: 5, max: 4 }));
    }

    #[test]
    fn guaranteed_regime_and_replay() {
        let ext = gr9_2();
        let code = code(&ext, 1);
        let mut cfg = ChannelConfig::square(&code, 1, 1, 40, 42);
        cfg.log = true;
        let a = run_trials(&code, &cfg).unwrap();
        assert_eq!((a.successes, a.failures, a.miscorrections), (40, 0, 0));
        assert_eq!(a.rate, 0.25);
        let b = run_trials(&code, &cfg).unwrap();
        assert!(a.same_outcomes(&b));
    }

    #[test]
    fn bound_guard() {
        let ext = gr9_2();
        let code = code(&ext, 1);
        let cfg = ChannelConfig::square(&code, 2, 1, 10, 0);
        assert_eq!(run_trials(&code, &cfg).unwrap_err(), Error::BoundViolated { lhs: 6, d: 4 });
        let stress = ChannelConfig { stress: true, ..cfg };
        let stats = run_trials(&code, &stress).unwrap();
        assert_eq!(stats.successes + stats.failures + stats.miscorrections, 10);
    }
}

//! Runtime self-test: seeded property checks over small rings, plus the
//! brute-force certifications at the `full` level.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decoder::{wb_decode, DecodeResult};
use crate::error::{Error, Result};
use crate::linalg::{invert_matrix, smith_normal_form, solve, RBasis, RingMatrix};
use crate::lrs::{gen_points_primitive, random_point_system, LrsCode};
use crate::metric::{hamming_min_oracle, sum_rank_weight, LengthPartition};
use crate::netcode::{run_trials, sample_error, trial_rng, ChannelConfig};
use crate::ring::{ChainRing, ExtElement, GaloisExtension, GaloisRing};
use crate::skew::{SkewPolynomial, SkewRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Extensions the checks run over: `Z_4`, `Z_9` and `GR(4,2)` bases.
pub fn test_extensions() -> Vec<(&'static str, GaloisExtension)> {
    let z4 = GaloisRing::integers_mod(2, 2).unwrap();
    let z9 = GaloisRing::integers_mod(3, 2).unwrap();
    let gr42 = GaloisRing::new(2, 2, &[1, 1, 1]).unwrap();
    let gr42_h = vec![gr42.element(&[0, 1]), gr42.one(), gr42.one()];
    vec![
        ("Z4[z]/(z^2+z+1)", GaloisExtension::with_int_coeffs(z4.clone(), &[1, 1, 1]).unwrap()),
        ("Z4[z]/(z^3+z+1)", GaloisExtension::with_int_coeffs(z4, &[1, 1, 0, 1]).unwrap()),
        ("Z9[z]/(z^2+1)", GaloisExtension::with_int_coeffs(z9, &[1, 0, 1]).unwrap()),
        ("GR(4,2)[z]/(z^2+z+y)", GaloisExtension::new(gr42, gr42_h).unwrap()),
    ]
}

fn random_poly(ext: &GaloisExtension, max_deg: usize, rng: &mut ChaCha8Rng) -> SkewPolynomial {
    let d = rng.gen_range(0..=max_deg);
    SkewPolynomial::new(ext, (0..=d).map(|_| ext.random(rng)).collect())
}

fn random_unit(ext: &GaloisExtension, rng: &mut ChaCha8Rng) -> ExtElement {
    loop {
        let x = ext.random(rng);
        if ext.is_unit(&x) {
            return x;
        }
    }
}

/// Runs `f` for `cases` seeded cases on every test extension; the first
/// failing case is reported.
fn property<F>(name: &str, cases: usize, seed: u64, mut f: F) -> CheckResult
where
    F: FnMut(&GaloisExtension, &mut ChaCha8Rng) -> std::result::Result<(), String>,
{
    for (idx, (label, ext)) in test_extensions().iter().enumerate() {
        let mut rng = trial_rng(seed, idx as u64);
        for case in 0..cases {
            if let Err(msg) = f(ext, &mut rng) {
                return CheckResult {
                    name: name.to_string(),
                    passed: false,
                    detail: format!("{label}, case {case}: {msg}"),
                };
            }
        }
    }
    CheckResult { name: name.to_string(), passed: true, detail: format!("{cases} cases per ring") }
}

fn ensure(cond: bool, msg: &str) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn check_ring_axioms(cases: usize) -> CheckResult {
    property("ring-axioms", cases, 1, |ext, rng| {
        let (a, b, c) = (ext.random(rng), ext.random(rng), ext.random(rng));
        ensure(ext.mul(&ext.mul(&a, &b), &c) == ext.mul(&a, &ext.mul(&b, &c)), "associativity")?;
        ensure(ext.mul(&a, &ext.add(&b, &c)) == ext.add(&ext.mul(&a, &b), &ext.mul(&a, &c)), "distributivity")?;
        ensure(ext.mul(&a, &b) == ext.mul(&b, &a), "commutativity")?;
        match ext.inverse(&a) {
            Ok(inv) => ensure(ext.mul(&a, &inv) == ext.one(), "inverse"),
            Err(_) => ensure(!ext.is_unit(&a), "unit without inverse"),
        }
    })
}

fn check_sigma_order(cases: usize) -> CheckResult {
    property("sigma-order", cases, 2, |ext, rng| {
        let m = ext.m() as i64;
        for i in 1..m {
            ensure(ext.frobenius(ext.xi(), i) != *ext.xi(), "sigma^i fixes xi for 0 < i < m")?;
        }
        let x = ext.random(rng);
        ensure(ext.frobenius(&x, m) == x, "sigma^m is not the identity")?;
        let y = ext.random(rng);
        ensure(ext.frobenius(&ext.mul(&x, &y), 1) == ext.mul(&ext.frobenius(&x, 1), &ext.frobenius(&y, 1)), "sigma not multiplicative")?;
        ensure(ext.frobenius(&ext.add(&x, &y), 1) == ext.add(&ext.frobenius(&x, 1), &ext.frobenius(&y, 1)), "sigma not additive")?;
        ensure((ext.frobenius(&x, 1) == x) == ext.in_base(&x), "fixed ring differs from R")?;
        let res = ext.residue_field();
        ensure(ext.project(&ext.frobenius(&x, 1)) == res.pow(&ext.project(&x), ext.q()), "sigma does not reduce to Frobenius")
    })
}

fn check_snf(cases: usize) -> CheckResult {
    property("smith-normal-form", cases, 3, |ext, rng| {
        let ring = ext.base();
        let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let mut a = RingMatrix::from_vec(rows, cols, (0..rows * cols).map(|_| ring.random(rng)).collect());
        if rng.gen_bool(0.5) {
            // force some non-unit structure
            let p = ring.from_int(ring.p() as i64);
            for j in 0..cols {
                a[(0, j)] = ring.mul(&p, &a[(0, j)]);
            }
        }
        let snf = smith_normal_form(ring, &a);
        ensure(snf.p.mul(ring, &snf.d).mul(ring, &snf.q) == a, "A != P D Q")?;
        ensure(snf.p.mul(ring, &snf.p_inv) == RingMatrix::identity(ring, rows), "P P^-1 != I")?;
        ensure(snf.q.mul(ring, &snf.q_inv) == RingMatrix::identity(ring, cols), "Q Q^-1 != I")?;
        ensure(snf.valuations.windows(2).all(|w| w[0] <= w[1]), "diagonal valuations not sorted")?;
        let x0: Vec<_> = (0..cols).map(|_| ring.random(rng)).collect();
        let b = a.apply(ring, &x0);
        let x = solve(ring, &a, &b).map_err(|e| e.to_string())?;
        ensure(a.apply(ring, &x) == b, "solve returned a non-solution")
    })
}

fn check_weight_oracle(cases: usize) -> CheckResult {
    property("sum-rank-oracle", cases, 4, |ext, rng| {
        if ext.base().size() > 16 {
            return Ok(());
        }
        let part = LengthPartition::new(vec![1, ext.m().min(2)]).unwrap();
        let v: Vec<_> = (0..part.total()).map(|_| ext.random(rng)).collect();
        let w = sum_rank_weight(ext, &v, &part, &RBasis::power(ext)).map_err(|e| e.to_string())?;
        let o = hamming_min_oracle(ext, &v, &part).map_err(|e| e.to_string())?;
        ensure(w == o, &format!("weight {w} but oracle {o}"))
    })
}

fn check_skew_identities(cases: usize) -> CheckResult {
    property("skew-identities", cases, 5, |ext, rng| {
        let sk = SkewRing::new(ext);
        let f = random_poly(ext, 4, rng);
        let g = random_poly(ext, 4, rng);
        let a = ext.random(rng);
        let beta = random_unit(ext, rng);
        // x a = σ(a) x
        let x = SkewPolynomial::monomial(ext, 1);
        let c = SkewPolynomial::constant(ext, a.clone());
        ensure(sk.mul(&x, &c) == sk.mul(&SkewPolynomial::constant(ext, ext.frobenius(&a, 1)), &x), "x a != sigma(a) x")?;
        let conj = sk.conjugate(&a, &beta).map_err(|e| e.to_string())?;
        ensure(sk.operator_eval(&f, &a, &beta) == ext.mul(&sk.remainder_eval(&f, &conj), &beta), "F_a(b) != F(a^b) b")?;
        // product rule for unit G(a)
        let ga = sk.remainder_eval(&g, &a);
        let fg = sk.remainder_eval(&sk.mul(&f, &g), &a);
        if ext.is_unit(&ga) {
            let shifted = sk.conjugate(&a, &ga).map_err(|e| e.to_string())?;
            ensure(fg == ext.mul(&sk.remainder_eval(&f, &shifted), &ga), "product rule")?;
        } else if ext.is_zero(&ga) {
            ensure(ext.is_zero(&fg), "product rule at a root")?;
        }
        // remainder evaluation is the remainder of division by x - a
        let (_, rem) = sk.right_divmod(&f, &SkewPolynomial::linear(ext, &a)).map_err(|e| e.to_string())?;
        ensure(rem.coeff(ext, 0) == sk.remainder_eval(&f, &a), "remainder evaluation")?;
        let mut monic = g.clone();
        if monic.is_zero() || !ext.is_unit(monic.leading().unwrap()) {
            monic = sk.add(&monic, &SkewPolynomial::monomial(ext, 5));
        }
        let (q, r) = sk.right_divmod(&f, &monic).map_err(|e| e.to_string())?;
        ensure(sk.add(&sk.mul(&q, &monic), &r) == f, "right division reconstruction")?;
        let (q, r) = sk.left_divmod(&f, &monic).map_err(|e| e.to_string())?;
        ensure(sk.add(&sk.mul(&monic, &q), &r) == f, "left division reconstruction")?;
        let pow = sk.operator_powers(&a, &beta, 4);
        for i in 0..3 {
            ensure(pow[i + 1] == ext.mul(&ext.frobenius(&pow[i], 1), &a), "D^{i+1} != D D^i")?;
        }
        Ok(())
    })
}

fn check_interpolation(cases: usize) -> CheckResult {
    property("interpolation", cases, 6, |ext, rng| {
        let sk = SkewRing::new(ext);
        let ell = (ext.q() as usize - 1).min(2);
        let part = LengthPartition::new((0..ell).map(|_| rng.gen_range(1..=ext.m())).collect()).unwrap();
        let pts = random_point_system(ext, &part, rng).map_err(|e| e.to_string())?;
        let n = pts.len();
        let basis = sk.lagrange_basis(&pts).map_err(|e| e.to_string())?;
        let values: Vec<_> = (0..n).map(|_| ext.random(rng)).collect();
        let f = sk.interpolate_with(&basis, &values).map_err(|e| e.to_string())?;
        ensure(f.degree().is_none_or(|d| d < n), "interpolant degree")?;
        let back: Vec<_> = pts.pairs().into_iter().map(|(a, b)| sk.operator_eval(&f, a, b)).collect();
        ensure(back == values, "evaluate(interpolate(v)) != v")?;
        let g = random_poly(ext, n - 1, rng);
        let vals: Vec<_> = pts.pairs().into_iter().map(|(a, b)| sk.operator_eval(&g, a, b)).collect();
        ensure(sk.interpolate_with(&basis, &vals).map_err(|e| e.to_string())? == g, "interpolate(evaluate(F)) != F")?;
        let moore = sk.moore_matrix(&pts, n).map_err(|e| e.to_string())?;
        let inv = invert_matrix(ext, &moore).map_err(|e| e.to_string())?;
        for (i, l) in basis.iter().enumerate() {
            ensure(l.padded(ext, n) == inv.row(i), "Moore inverse != Lagrange coefficients")?;
        }
        let ann = sk.annihilator(&pts).map_err(|e| e.to_string())?;
        ensure(ann.degree() == Some(n) && ann.is_monic(ext), "annihilator shape")?;
        ensure(back.len() == n && pts.pairs().into_iter().all(|(a, b)| ext.is_zero(&sk.operator_eval(&ann, a, b))), "annihilator does not vanish")
    })
}

fn check_codes(cases: usize) -> CheckResult {
    property("encode-decode", cases, 7, |ext, rng| {
        let ell = (ext.q() as usize - 1).min(2);
        let part = LengthPartition::new(vec![ext.m(); ell]).unwrap();
        let pts = random_point_system(ext, &part, rng).map_err(|e| e.to_string())?;
        let n = pts.len();
        let k = rng.gen_range(1..=n);
        let code = LrsCode::new(ext, pts, k).map_err(|e| e.to_string())?;
        let msg: Vec<_> = (0..k).map(|_| ext.random(rng)).collect();
        let c = code.encode(&msg).map_err(|e| e.to_string())?;
        ensure(code.encode_by_evaluation(&msg).map_err(|e| e.to_string())? == c, "encoding paths disagree")?;
        let t = code.error_capacity();
        let e = sample_error(ext, &part, rng.gen_range(0..=t), rng).map_err(|e| e.to_string())?;
        let y: Vec<_> = c.iter().zip(&e).map(|(a, b)| ext.add(a, b)).collect();
        match wb_decode(&code, &y).map_err(|e| e.to_string())? {
            DecodeResult::Success { message, .. } => ensure(message == msg, "miscorrection"),
            DecodeResult::Failure { reason } => Err(format!("decoding failure {reason:?}")),
        }
    })
}

fn check_erasures(trials: usize) -> CheckResult {
    let name = "erasure-decoding".to_string();
    let ext = &test_extensions()[2].1;
    let outcome = (|| -> Result<(usize, usize)> {
        let pts = gen_points_primitive(ext, &LengthPartition::new(vec![2, 2])?)?;
        let code = LrsCode::new(ext, pts, 1)?;
        let stats = run_trials(&code, &ChannelConfig::square(&code, 1, 1, trials, 42))?;
        Ok((stats.successes, stats.trials))
    })();
    match outcome {
        Ok((s, t)) if s == t => CheckResult { name, passed: true, detail: format!("{s}/{t} recovered") },
        Ok((s, t)) => CheckResult { name, passed: false, detail: format!("{s}/{t} recovered") },
        Err(e) => CheckResult { name, passed: false, detail: e.to_string() },
    }
}

fn certify(name: &str, build: impl FnOnce() -> Result<LrsCode>) -> CheckResult {
    match build().and_then(|c| c.certify_msrd()) {
        Ok(d) => CheckResult { name: name.to_string(), passed: true, detail: format!("d = {d}") },
        Err(e) => CheckResult { name: name.to_string(), passed: false, detail: e.to_string() },
    }
}

fn check_certifications() -> Vec<CheckResult> {
    let gr9 = test_extensions()[2].1.clone();
    let part = LengthPartition::new(vec![2, 2]).unwrap();
    let mut out = Vec::new();
    for k in 1..=2 {
        out.push(certify(&format!("msrd-gr9-2-k{k}"), || {
            LrsCode::new(&gr9, gen_points_primitive(&gr9, &part)?, k)
        }));
    }
    out.push(certify("mrd-gr4-4-k2", || {
        let ext = GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(2, 2)?, &[1, 1, 0, 0, 1])?;
        LrsCode::new(&ext, gen_points_primitive(&ext, &LengthPartition::new(vec![4])?)?, 2)
    }));
    out.push(certify("mds-z25-k2", || {
        let ext = GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(5, 2)?, &[-1, 1])?;
        let pts = crate::skew::PointSystem::new(&ext, (1..=4).map(|i| ext.from_int(i)).collect(), vec![vec![ext.one()]; 4])?;
        LrsCode::new(&ext, pts, 2)
    }));
    out
}

/// Runs every check of the level, in a fixed order.
pub fn run(level: Level) -> Vec<CheckResult> {
    let scale = match level {
        Level::Quick => 1,
        Level::Full => 10,
    };
    let mut out = vec![
        check_ring_axioms(200 * scale),
        check_sigma_order(200 * scale),
        check_snf(100 * scale),
        check_weight_oracle(20 * scale),
        check_skew_identities(200 * scale),
        check_interpolation(20 * scale),
        check_codes(20 * scale),
        check_erasures(50 * scale),
    ];
    if level == Level::Full {
        out.extend(check_certifications());
    }
    out
}

/// Names of failed checks.
pub fn failures(results: &[CheckResult]) -> Vec<&str> {
    results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect()
}

/// `Err` listing the failures, for callers that want a single status.
pub fn run_checked(level: Level) -> Result<Vec<CheckResult>> {
    let results = run(level);
    let failed = failures(&results);
    if failed.is_empty() {
        Ok(results)
    } else {
        Err(Error::ValidationFailed(failed.join(", ")))
    }
}

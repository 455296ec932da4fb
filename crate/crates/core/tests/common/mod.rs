//! Fixtures and oracles shared by the integration tests. The oracles avoid
//! the library's Smith-normal-form code paths.
#![allow(dead_code)]

use std::collections::HashSet;

use lrs_core::linalg::RingMatrix;
use lrs_core::metric::LengthPartition;
use lrs_core::ring::{ChainRing, ExtElement, GaloisExtension, GaloisRing, RingElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Z_9[z]/(z^2 + 1)`.
pub fn gr9_2() -> GaloisExtension {
    GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(3, 2).unwrap(), &[1, 0, 1]).unwrap()
}

/// `Z_4[z]/(z^2 + z + 1)`.
pub fn gr4_2() -> GaloisExtension {
    GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(2, 2).unwrap(), &[1, 1, 1]).unwrap()
}

/// `Z_4[z]/(z^4 + z + 1)`.
pub fn gr4_4() -> GaloisExtension {
    GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(2, 2).unwrap(), &[1, 1, 0, 0, 1]).unwrap()
}

/// `Z_25` seen as the trivial extension `z - 1`.
pub fn z25() -> GaloisExtension {
    GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(5, 2).unwrap(), &[-1, 1]).unwrap()
}

/// `GR(4,2) = Z_4[y]/(y^2 + y + 1)` extended by `z^2 + z + y`.
pub fn gr42_ext() -> GaloisExtension {
    let base = GaloisRing::new(2, 2, &[1, 1, 1]).unwrap();
    let h = vec![base.element(&[0, 1]), base.one(), base.one()];
    GaloisExtension::new(base, h).unwrap()
}

/// `Z_8[z]/(z^3 + z + 1)`, a deeper chain.
pub fn gr8_3() -> GaloisExtension {
    GaloisExtension::with_int_coeffs(GaloisRing::integers_mod(2, 3).unwrap(), &[1, 1, 0, 1]).unwrap()
}

/// Extensions over `Z_4`, `Z_9` and `GR(4,2)` bases.
pub fn identity_suite() -> Vec<(&'static str, GaloisExtension)> {
    vec![("Z4 m=2", gr4_2()), ("Z9 m=2", gr9_2()), ("GR(4,2) m=2", gr42_ext())]
}

pub fn random_unit<G: Rng>(ext: &GaloisExtension, rng: &mut G) -> ExtElement {
    loop {
        let x = ext.random(rng);
        if ext.is_unit(&x) {
            return x;
        }
    }
}

/// `log_q` of an exact power of `q`.
fn log_q(count: usize, q: u64) -> usize {
    let mut k = 0;
    let mut c = 1usize;
    while c < count {
        c *= q as usize;
        k += 1;
    }
    assert_eq!(c, count, "{count} is not a power of {q}");
    k
}

/// Rank of the `R`-span of `block`, counted as `log_q` of the number of
/// span elements annihilated by `p`. For `M ≅ ⊕ R/(p^{a_i})` the
/// `p`-torsion is `F_q^{#\{a_i > 0\}}`.
pub fn torsion_rank(ext: &GaloisExtension, block: &[ExtElement]) -> usize {
    let base = ext.base();
    let size = base.size();
    let mut span: HashSet<ExtElement> = HashSet::new();
    span.insert(ext.zero());
    for v in block {
        let mut next = HashSet::new();
        for x in &span {
            for i in 0..size {
                next.insert(ext.add(x, &ext.scale(&base.element_at(i), v)));
            }
        }
        span = next;
    }
    let p = ext.from_int(base.p() as i64);
    let torsion = span.iter().filter(|x| ext.is_zero(&ext.mul(&p, x))).count();
    log_q(torsion, ext.q())
}

pub fn torsion_sum_rank(ext: &GaloisExtension, v: &[ExtElement], partition: &LengthPartition) -> usize {
    partition.ranges().into_iter().map(|r| torsion_rank(ext, &v[r])).sum()
}

/// Laplace expansion along the first row.
pub fn determinant(ring: &GaloisRing, a: &RingMatrix<RingElement>) -> RingElement {
    let n = a.rows();
    if n == 1 {
        return a[(0, 0)].clone();
    }
    let mut acc = ring.zero();
    for j in 0..n {
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = a.select_rows(&rows).select_columns(&cols);
        let term = ring.mul(&a[(0, j)], &determinant(ring, &minor));
        acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
    }
    acc
}

/// `GL_n(R)` as all matrices with unit determinant.
pub fn gl_by_determinant(ring: &GaloisRing, n: usize) -> Vec<RingMatrix<RingElement>> {
    let size = ring.size();
    let total = size.pow((n * n) as u32);
    (0..total)
        .filter_map(|mut idx| {
            let data = (0..n * n)
                .map(|_| {
                    let e = ring.element_at(idx % size);
                    idx /= size;
                    e
                })
                .collect();
            let m = RingMatrix::from_vec(n, n, data);
            ring.is_unit(&determinant(ring, &m)).then_some(m)
        })
        .collect()
}

/// `x · A` computed entrywise.
pub fn times(ext: &GaloisExtension, x: &[ExtElement], a: &RingMatrix<RingElement>) -> Vec<ExtElement> {
    (0..a.cols())
        .map(|j| (0..a.rows()).fold(ext.zero(), |acc, i| ext.add(&acc, &ext.scale(&a[(i, j)], &x[i]))))
        .collect()
}

/// Minimum Hamming weight of `v · Diag(A_i)` over blocks from `groups`
/// (indexed by block length).
pub fn hamming_min(
    ext: &GaloisExtension,
    v: &[ExtElement],
    partition: &LengthPartition,
    groups: &dyn Fn(usize) -> Vec<RingMatrix<RingElement>>,
) -> usize {
    partition
        .ranges()
        .into_iter()
        .map(|r| {
            groups(r.len())
                .iter()
                .map(|a| times(ext, &v[r.clone()], a).iter().filter(|x| !ext.is_zero(x)).count())
                .min()
                .unwrap()
        })
        .sum()
}

/// `N_i(a) = σ^{i-1}(a) ··· a`, directly.
pub fn norm(ext: &GaloisExtension, a: &ExtElement, i: usize) -> ExtElement {
    (0..i).fold(ext.one(), |acc, j| ext.mul(&acc, &ext.frobenius(a, j as i64)))
}

/// Moore matrix from `σ^u(β) N_u(a)`.
pub fn moore(ext: &GaloisExtension, a: &[ExtElement], beta: &[Vec<ExtElement>], k: usize) -> Vec<Vec<ExtElement>> {
    (0..k)
        .map(|u| {
            a.iter()
                .zip(beta)
                .flat_map(|(ai, block)| {
                    let nu = norm(ext, ai, u);
                    block.iter().map(move |b| ext.mul(&ext.frobenius(b, u as i64), &nu)).collect::<Vec<_>>()
                })
                .collect()
        })
        .collect()
}

/// `x · G` for a row-list generator.
pub fn codeword(ext: &GaloisExtension, msg: &[ExtElement], g: &[Vec<ExtElement>]) -> Vec<ExtElement> {
    let n = g[0].len();
    (0..n)
        .map(|j| msg.iter().zip(g).fold(ext.zero(), |acc, (m, row)| ext.add(&acc, &ext.mul(m, &row[j]))))
        .collect()
}

/// Brute-force minimum sum-rank distance with the torsion-rank oracle.
pub fn min_distance(ext: &GaloisExtension, g: &[Vec<ExtElement>], partition: &LengthPartition) -> usize {
    use rayon::prelude::*;
    let k = g.len();
    let size = ext.size();
    let total = size.pow(k as u32);
    (1..total)
        .into_par_iter()
        .map(|mut idx| {
            let msg: Vec<ExtElement> = (0..k)
                .map(|_| {
                    let e = ext.element_at(idx % size);
                    idx /= size;
                    e
                })
                .collect();
            torsion_sum_rank(ext, &codeword(ext, &msg, g), partition)
        })
        .min()
        .unwrap()
}

//! Dense exact linear algebra over the chain rings `R` and `S`.
//!
//! In a chain ring an entry of minimal valuation divides every other entry,
//! so Smith normal form needs only swaps, unit scalings and plain
//! eliminations; no Bézout steps.

use crate::error::{Error, Result};
use crate::ring::{ChainRing, ExtElement, GaloisExtension, GaloisRing, RingElement};

/// Row-major dense matrix over a single ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> RingMatrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        RingMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<E> = rows.into_iter().flatten().collect();
        RingMatrix::from_vec(r, c, data)
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        RingMatrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn zeros<C: ChainRing<Elem = E>>(ring: &C, rows: usize, cols: usize) -> Self {
        RingMatrix::filled(rows, cols, ring.zero())
    }

    pub fn identity<C: ChainRing<Elem = E>>(ring: &C, n: usize) -> Self {
        let mut m = RingMatrix::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        RingMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Submatrix made of the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self[(i, j)].clone());
            }
        }
        RingMatrix { rows: self.rows, cols: cols.len(), data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.cols * rows.len());
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        RingMatrix { rows: rows.len(), cols: self.cols, data }
    }

    pub fn mul<C: ChainRing<Elem = E>>(&self, ring: &C, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = RingMatrix::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = ring.mul(a, &other[(k, j)]);
                    out[(i, j)] = ring.add(&out[(i, j)], &prod);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply<C: ChainRing<Elem = E>>(&self, ring: &C, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.rows, "vector-matrix shape");
        let mut out = vec![ring.zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if ring.is_zero(x) {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = ring.add(o, &ring.mul(x, &self[(i, j)]));
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply<C: ChainRing<Elem = E>>(&self, ring: &C, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)))
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row<C: ChainRing<Elem = E>>(&mut self, ring: &C, i: usize, c: &E) {
        for j in 0..self.cols {
            self[(i, j)] = ring.mul(c, &self[(i, j)]);
        }
    }

    fn scale_col<C: ChainRing<Elem = E>>(&mut self, ring: &C, j: usize, c: &E) {
        for i in 0..self.rows {
            self[(i, j)] = ring.mul(&self[(i, j)], c);
        }
    }

    /// `row[dst] += c * row[src]`
    fn add_row<C: ChainRing<Elem = E>>(&mut self, ring: &C, dst: usize, src: usize, c: &E) {
        for j in 0..self.cols {
            let t = ring.mul(c, &self[(src, j)]);
            self[(dst, j)] = ring.add(&self[(dst, j)], &t);
        }
    }

    /// `col[dst] += col[src] * c`
    fn add_col<C: ChainRing<Elem = E>>(&mut self, ring: &C, dst: usize, src: usize, c: &E) {
        for i in 0..self.rows {
            let t = ring.mul(&self[(i, src)], c);
            self[(i, dst)] = ring.add(&self[(i, dst)], &t);
        }
    }
}

impl<E> std::ops::Index<(usize, usize)> for RingMatrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> std::ops::IndexMut<(usize, usize)> for RingMatrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

/// `A = P · D · Q` with `P`, `Q` invertible and `D` diagonal with entries
/// `p^{v_1}, p^{v_2}, ...` of non-decreasing valuation (zero once `v_i = r`).
#[derive(Clone, Debug)]
pub struct SnfDecomposition<E> {
    pub p: RingMatrix<E>,
    pub d: RingMatrix<E>,
    pub q: RingMatrix<E>,
    pub p_inv: RingMatrix<E>,
    pub q_inv: RingMatrix<E>,
    /// Valuations of the `min(rows, cols)` diagonal entries; `r` marks zero.
    pub valuations: Vec<u32>,
}

impl<E: Clone> SnfDecomposition<E> {
    pub fn diagonal(&self) -> Vec<E> {
        (0..self.valuations.len()).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn find_pivot<C: ChainRing>(ring: &C, a: &RingMatrix<C::Elem>, t: usize) -> Option<(usize, usize, u32)> {
    let r = ring.nilpotency();
    let mut best: Option<(usize, usize, u32)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = ring.valuation(&a[(i, j)]);
            if v < r && best.is_none_or(|(_, _, bv)| v < bv) {
                best = Some((i, j, v));
                if v == 0 {
                    return best;
                }
            }
        }
    }
    best
}

/// Smith normal form with recorded transforms. The pivot is the first entry
/// (row-major) of minimal valuation in the remaining block.
pub fn smith_normal_form<C: ChainRing>(ring: &C, a: &RingMatrix<C::Elem>) -> SnfDecomposition<C::Elem> {
    let (rows, cols) = (a.rows, a.cols);
    let r = ring.nilpotency();
    let mut d = a.clone();
    let mut p = RingMatrix::identity(ring, rows);
    let mut p_inv = p.clone();
    let mut q = RingMatrix::identity(ring, cols);
    let mut q_inv = q.clone();
    let n = rows.min(cols);
    let mut valuations = vec![r; n];
    // Invariant: a = p · d · q and p_inv · a · q_inv = d.
    for t in 0..n {
        let Some((pi, pj, v)) = find_pivot(ring, &d, t) else {
            break;
        };
        valuations[t] = v;
        d.swap_rows(t, pi);
        p_inv.swap_rows(t, pi);
        p.swap_cols(t, pi);
        d.swap_cols(t, pj);
        q_inv.swap_cols(t, pj);
        q.swap_rows(t, pj);

        let unit = ring.exact_div_p_pow(&d[(t, t)], v);
        let unit_inv = ring.inverse(&unit).expect("pivot cofactor is a unit");
        d.scale_row(ring, t, &unit_inv);
        p_inv.scale_row(ring, t, &unit_inv);
        p.scale_col(ring, t, &unit);

        for i in t + 1..rows {
            if ring.is_zero(&d[(i, t)]) {
                continue;
            }
            let c = ring.exact_div_p_pow(&d[(i, t)], v);
            let neg = ring.neg(&c);
            d.add_row(ring, i, t, &neg);
            p_inv.add_row(ring, i, t, &neg);
            // p ← p · E^{-1} where E adds neg·row t to row i: column t += column i · c
            p.add_col(ring, t, i, &c);
        }
        for j in t + 1..cols {
            if ring.is_zero(&d[(t, j)]) {
                continue;
            }
            let c = ring.exact_div_p_pow(&d[(t, j)], v);
            let neg = ring.neg(&c);
            d.add_col(ring, j, t, &neg);
            q_inv.add_col(ring, j, t, &neg);
            q.add_row(ring, t, j, &c);
        }
    }
    SnfDecomposition { p, d, q, p_inv, q_inv, valuations }
}

/// Diagonal valuations only, without tracking transforms.
pub fn snf_valuations<C: ChainRing>(ring: &C, a: &RingMatrix<C::Elem>) -> Vec<u32> {
    let r = ring.nilpotency();
    let mut d = a.clone();
    let n = a.rows.min(a.cols);
    let mut valuations = vec![r; n];
    for t in 0..n {
        let Some((pi, pj, v)) = find_pivot(ring, &d, t) else {
            break;
        };
        valuations[t] = v;
        d.swap_rows(t, pi);
        d.swap_cols(t, pj);
        let unit = ring.exact_div_p_pow(&d[(t, t)], v);
        let unit_inv = ring.inverse(&unit).expect("pivot cofactor is a unit");
        d.scale_row(ring, t, &unit_inv);
        for i in t + 1..d.rows {
            if ring.is_zero(&d[(i, t)]) {
                continue;
            }
            let c = ring.neg(&ring.exact_div_p_pow(&d[(i, t)], v));
            d.add_row(ring, i, t, &c);
        }
        // Clearing row t to the right only touches row t, which later steps never read.
    }
    valuations
}

/// `(rank, free_rank)`: counts of nonzero and of unit Smith diagonal entries.
pub fn rank_and_free_rank<C: ChainRing>(ring: &C, a: &RingMatrix<C::Elem>) -> (usize, usize) {
    let r = ring.nilpotency();
    let vals = snf_valuations(ring, a);
    let rank = vals.iter().filter(|&&v| v < r).count();
    let free = vals.iter().filter(|&&v| v == 0).count();
    (rank, free)
}

pub fn free_rank<C: ChainRing>(ring: &C, a: &RingMatrix<C::Elem>) -> usize {
    rank_and_free_rank(ring, a).1
}

/// One solution of `A x = b`, chosen canonically: each Smith coordinate
/// takes its smallest integer representative and free coordinates are zero.
pub fn solve<C: ChainRing>(ring: &C, a: &RingMatrix<C::Elem>, b: &[C::Elem]) -> Result<Vec<C::Elem>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch { expected: a.rows, got: b.len() });
    }
    let snf = smith_normal_form(ring, a);
    solve_with(ring, &snf, b)
}

/// Solves against a precomputed decomposition.
pub fn solve_with<C: ChainRing>(ring: &C, snf: &SnfDecomposition<C::Elem>, b: &[C::Elem]) -> Result<Vec<C::Elem>> {
    let r = ring.nilpotency();
    let c = snf.p_inv.apply(ring, b);
    let n = snf.valuations.len();
    let mut y = vec![ring.zero(); snf.q.rows];
    for (i, ci) in c.iter().enumerate() {
        let v = if i < n { snf.valuations[i] } else { r };
        if v == r {
            if !ring.is_zero(ci) {
                return Err(Error::Inconsistent);
            }
        } else if v == 0 {
            y[i] = ci.clone();
        } else {
            if ring.valuation(ci) < v {
                return Err(Error::Inconsistent);
            }
            y[i] = ring.exact_div_p_pow(ci, v);
        }
    }
    Ok(snf.q_inv.apply(ring, &y))
}

pub fn invert_matrix<C: ChainRing>(ring: &C, a: &RingMatrix<C::Elem>) -> Result<RingMatrix<C::Elem>> {
    if a.rows != a.cols {
        return Err(Error::NotInvertible);
    }
    let snf = smith_normal_form(ring, a);
    if snf.valuations.iter().any(|&v| v != 0) {
        return Err(Error::NotInvertible);
    }
    // D is the identity, so A^{-1} = Q^{-1} P^{-1}.
    Ok(snf.q_inv.mul(ring, &snf.p_inv))
}

/// An ordered `R`-basis of `S`, with the inverse of its coordinate matrix
/// cached for coordinate extraction.
#[derive(Clone, Debug)]
pub struct RBasis {
    elements: Vec<ExtElement>,
    /// Inverse of the `m × m` matrix whose column `i` holds the power-basis
    /// coordinates of `elements[i]`.
    inverse: RingMatrix<RingElement>,
}

impl RBasis {
    pub fn new(ext: &GaloisExtension, elements: Vec<ExtElement>) -> Result<Self> {
        let m = ext.m();
        if elements.len() != m {
            return Err(Error::NotABasis);
        }
        let coords = power_coordinates(ext, &elements);
        let inverse = invert_matrix(ext.base(), &coords).map_err(|_| Error::NotABasis)?;
        Ok(RBasis { elements, inverse })
    }

    /// `1, ξ, ..., ξ^{m-1}`.
    pub fn power(ext: &GaloisExtension) -> Self {
        let elements = (0..ext.m()).map(|j| ext.pow(ext.xi(), j as u64)).collect();
        RBasis { elements, inverse: RingMatrix::identity(ext.base(), ext.m()) }
    }

    pub fn elements(&self) -> &[ExtElement] {
        &self.elements
    }
}

/// `m × t` matrix over `R` whose column `j` holds the power-basis coordinates
/// of `v[j]`.
pub fn power_coordinates(ext: &GaloisExtension, v: &[ExtElement]) -> RingMatrix<RingElement> {
    let m = ext.m();
    let mut out = RingMatrix::zeros(ext.base(), m, v.len());
    for (j, x) in v.iter().enumerate() {
        for i in 0..m {
            out[(i, j)] = ext.coordinate(x, i);
        }
    }
    out
}

/// The matrix representation map: column `j` holds the coordinates of
/// `v[j]` with respect to `basis`.
pub fn matrix_representation(ext: &GaloisExtension, v: &[ExtElement], basis: &RBasis) -> RingMatrix<RingElement> {
    basis.inverse.mul(ext.base(), &power_coordinates(ext, v))
}

/// Inverse of [`matrix_representation`]: combines the columns of `coords`
/// with the basis elements.
pub fn from_representation(ext: &GaloisExtension, coords: &RingMatrix<RingElement>, basis: &RBasis) -> Vec<ExtElement> {
    (0..coords.cols())
        .map(|j| {
            basis
                .elements
                .iter()
                .enumerate()
                .fold(ext.zero(), |acc, (i, b)| ext.add(&acc, &ext.scale(&coords[(i, j)], b)))
        })
        .collect()
}

/// `x · A` for `x ∈ S^n` and `A` over `R`: the `R`-linear action used by
/// block-diagonal transforms and transfer matrices.
pub fn ext_times_base(ext: &GaloisExtension, x: &[ExtElement], a: &RingMatrix<RingElement>) -> Vec<ExtElement> {
    assert_eq!(x.len(), a.rows(), "vector-matrix shape");
    (0..a.cols())
        .map(|j| {
            x.iter()
                .enumerate()
                .fold(ext.zero(), |acc, (i, xi)| ext.add(&acc, &ext.scale(&a[(i, j)], xi)))
        })
        .collect()
}

/// Embeds a matrix over `R` into `S`.
pub fn embed_matrix(ext: &GaloisExtension, a: &RingMatrix<RingElement>) -> RingMatrix<ExtElement> {
    RingMatrix::from_vec(a.rows(), a.cols(), a.data().iter().map(|c| ext.embed(c)).collect())
}

/// Uniformly random square matrix over `R` that is invertible (rejection
/// sampling; the acceptance probability is at least `∏ (1 - q^{-i})`).
pub fn random_invertible<G: rand::Rng + ?Sized>(ring: &GaloisRing, n: usize, rng: &mut G) -> RingMatrix<RingElement> {
    loop {
        let data = (0..n * n).map(|_| ring.random(rng)).collect();
        let m = RingMatrix::from_vec(n, n, data);
        if free_rank(ring, &m) == n {
            return m;
        }
    }
}

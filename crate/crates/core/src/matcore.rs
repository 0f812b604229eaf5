//! Dense complex matrices: Hilbert–Schmidt products, unitarity and
//! commutation tests, and simultaneous diagonalization of commuting families.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `exp(2πik/d)`, exact at the quarter turns.
pub fn omega(d: usize, k: usize) -> Complex64 {
    let k = k % d;
    if k == 0 {
        ONE
    } else if 2 * k == d {
        Complex64::new(-1.0, 0.0)
    } else if 4 * k == d {
        Complex64::new(0.0, 1.0)
    } else if 4 * k == 3 * d {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Equality tolerance for matrices, inner products and residual checks.
    pub eq_tol: f64,
    /// Eigenvalues closer than this are clustered into one eigenspace.
    pub eig_gap: f64,
    /// Quantization grid used for hashing and canonical ordering.
    pub hash_grid: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { eq_tol: 1e-9, eig_gap: 1e-6, hash_grid: 1e-6 }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.hash_grid > 0.0
            && self.eq_tol > 0.0
            && self.eq_tol < self.eig_gap
            && self.eig_gap < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "tolerances must satisfy 0 < hash_grid and 0 < eq_tol < eig_gap < 1, got {self:?}"
            )))
        }
    }
}

/// A square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m.set(i, i, z);
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        ComplexMatrix { dim, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[ComplexVector]) -> Self {
        let dim = cols.len();
        Self::from_fn(dim, |i, j| cols[j].0[i])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.dim + j] = z;
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector((0..self.dim).map(|i| self.get(i, j)).collect())
    }

    fn same_dim(&self, other: &ComplexMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Matrix product; panics on dimension mismatch.
    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let other_row = &other.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(other_row) {
                    *d += a * b;
                }
            }
        }
        ComplexMatrix { dim: n, data: out }
    }

    pub fn checked_mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.same_dim(other)?;
        Ok(self.mul(other))
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn pow(&self, k: u32) -> ComplexMatrix {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) < tol
    }

    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim;
        (0..n * n)
            .filter(|k| k / n != k % n)
            .map(|k| self.data[k].norm())
            .fold(0.0, f64::max)
    }

    /// Distance of `self` from the scalar matrix `(tr/D)·id`.
    pub fn scalar_residual(&self) -> f64 {
        let c = self.trace() / self.dim as f64;
        let n = self.dim;
        (0..n * n)
            .map(|k| {
                let target = if k / n == k % n { c } else { ZERO };
                (self.data[k] - target).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.max_abs_diff(&Self::identity(self.dim)) < tol
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        Self::from_fn(self.dim, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5)
    }

    /// `(A - A†)/(2i)`, Hermitian, so that `A = H + iK`.
    pub fn skew_part(&self) -> ComplexMatrix {
        let half_i = Complex64::new(0.0, -0.5);
        Self::from_fn(self.dim, |i, j| (self.get(i, j) - self.get(j, i).conj()) * half_i)
    }

    /// `W† A W` for a matrix `W` whose `k` columns are given.
    pub fn compress(&self, cols: &[ComplexVector]) -> ComplexMatrix {
        let aw: Vec<ComplexVector> = cols.iter().map(|c| self.apply(c)).collect();
        Self::from_fn(cols.len(), |i, j| cols[i].inner(&aw[j]))
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        let n = self.dim;
        ComplexVector(
            (0..n)
                .map(|i| self.data[i * n..(i + 1) * n].iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// Rotates the largest-modulus entry (first within `tie_tol` of the
    /// maximum, row-major) onto the positive real axis.
    pub fn phase_canonical(&self, tie_tol: f64) -> ComplexMatrix {
        match anchor_phase(&self.data, tie_tol) {
            Some(rot) => self.scale(rot),
            None => self.clone(),
        }
    }
}

/// Unit scalar rotating the anchor entry to the positive real axis.
pub(crate) fn anchor_phase(entries: &[Complex64], tie_tol: f64) -> Option<Complex64> {
    let max = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    let anchor = entries.iter().find(|z| z.norm() >= max - tie_tol)?;
    Some(anchor.conj() / anchor.norm())
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| pair(self.get(i, j))).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(D::Error::custom("matrix must be square"));
        }
        if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(D::Error::custom("matrix has non-finite entries"));
        }
        let data = rows.into_iter().flatten().map(|[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::new(dim, data).map_err(D::Error::custom)
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    // normalize -0.0 so output is byte-stable
    [z.re + 0.0, z.im + 0.0]
}

/// A complex column vector (a ket).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(pub Vec<Complex64>);

impl ComplexVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[i] = ONE;
        ComplexVector(v)
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> ComplexVector {
        ComplexVector(self.0.iter().map(|z| z * s).collect())
    }

    pub fn axpy(&mut self, s: Complex64, x: &ComplexVector) {
        for (a, b) in self.0.iter_mut().zip(&x.0) {
            *a += s * b;
        }
    }

    pub fn normalized(&self) -> ComplexVector {
        self.scale(Complex64::new(1.0 / self.norm(), 0.0))
    }

    /// Rotates the largest-modulus entry (lowest index within `tie_tol` of
    /// the maximum) to the positive real axis.
    pub fn phase_normalized(&self, tie_tol: f64) -> ComplexVector {
        let Some(rot) = anchor_phase(&self.0, tie_tol) else {
            return self.clone();
        };
        let mut v = self.scale(rot);
        let max = v.0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(z) = v.0.iter_mut().find(|z| z.norm() >= max - tie_tol) {
            *z = Complex64::new(z.norm(), 0.0);
        }
        v
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, |i, j| self.0[i] * self.0[j].conj())
    }
}

impl Serialize for ComplexVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[f64; 2]> = self.0.iter().map(|&z| pair(z)).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<[f64; 2]> = Vec::deserialize(d)?;
        if v.iter().flatten().any(|x| !x.is_finite()) {
            return Err(D::Error::custom("vector has non-finite entries"));
        }
        Ok(ComplexVector(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
    }
}

/// `tr(A B†)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    a.same_dim(b)?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x * y.conj()).sum())
}

/// Max entrywise deviation of `A A†` from the identity.
pub fn unitarity_residual(a: &ComplexMatrix) -> f64 {
    a.mul(&a.adjoint()).max_abs_diff(&ComplexMatrix::identity(a.dim))
}

pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> bool {
    unitarity_residual(a) < tol
}

pub fn commutator_residual(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.same_dim(b)?;
    Ok(a.mul(b).max_abs_diff(&b.mul(a)))
}

pub fn commute(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(commutator_residual(a, b)? < tol)
}

/// Cyclic Jacobi eigensolver for Hermitian matrices. Returns ascending
/// eigenvalues and the matching orthonormal eigenvectors.
pub fn eigh(a: &ComplexMatrix) -> (Vec<f64>, Vec<ComplexVector>) {
    let n = a.dim;
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                let g = apq.norm();
                if g <= 1e-300 {
                    continue;
                }
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                // Rotate the phase out of a_pq, then apply a real Givens rotation.
                let phase = apq / g;
                let theta = 0.5 * (2.0 * g).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                let e = phase.conj();
                // G restricted to (p, q): [[c, s], [-s e, c e]]
                let gpp = Complex64::new(c, 0.0);
                let gpq = Complex64::new(s, 0.0);
                let gqp = -e * s;
                let gqq = e * c;
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, mkp * gpp + mkq * gqp);
                    m.set(k, q, mkp * gpq + mkq * gqq);
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * gpp + vkq * gqp);
                    v.set(k, q, vkp * gpq + vkq * gqq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, gpp.conj() * mpk + gqp.conj() * mqk);
                    m.set(q, k, gpq.conj() * mpk + gqq.conj() * mqk);
                }
                m.set(p, q, ZERO);
                m.set(q, p, ZERO);
                let (dp, dq) = (m.get(p, p).re, m.get(q, q).re);
                m.set(p, p, Complex64::new(dp, 0.0));
                m.set(q, q, Complex64::new(dq, 0.0));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).re.total_cmp(&m.get(j, j).re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m.get(i, i).re).collect();
    let vectors = order.iter().map(|&i| v.column(i)).collect();
    (values, vectors)
}

/// Tolerance below which Hermitian-part eigenvalues are treated as one
/// eigenspace inside [`eig_normal`].
const NORMAL_SPLIT_TOL: f64 = 1e-8;

/// Eigendecomposition of a normal matrix `A = H + iK`: diagonalize `H`,
/// then diagonalize `K` inside each eigenspace of `H`. Eigenvalues are the
/// Rayleigh quotients `v†Av`.
pub fn eig_normal(a: &ComplexMatrix) -> (Vec<Complex64>, Vec<ComplexVector>) {
    let h = a.hermitian_part();
    let k = a.skew_part();
    let (hvals, hvecs) = eigh(&h);
    let scale = a.max_abs().max(1.0);
    let mut vectors = Vec::with_capacity(a.dim);
    let mut start = 0;
    while start < hvals.len() {
        let mut end = start + 1;
        while end < hvals.len() && hvals[end] - hvals[end - 1] < NORMAL_SPLIT_TOL * scale {
            end += 1;
        }
        let block = &hvecs[start..end];
        if block.len() == 1 {
            vectors.push(block[0].clone());
        } else {
            let (_, inner) = eigh(&k.compress(block));
            vectors.extend(inner.iter().map(|y| combine(block, y)));
        }
        start = end;
    }
    let values = vectors.iter().map(|v| v.inner(&a.apply(v))).collect();
    (values, vectors)
}

/// `Σ_j y_j · cols_j`.
fn combine(cols: &[ComplexVector], y: &ComplexVector) -> ComplexVector {
    let mut out = ComplexVector(vec![ZERO; cols[0].dim()]);
    for (c, &w) in cols.iter().zip(&y.0) {
        out.axpy(w, c);
    }
    out
}

/// Modified Gram–Schmidt, in place.
fn orthonormalize(vs: &mut [ComplexVector]) {
    for i in 0..vs.len() {
        let (done, rest) = vs.split_at_mut(i);
        let v = &mut rest[0];
        for u in done.iter() {
            let c = u.inner(v);
            v.axpy(-c, u);
        }
        *v = v.normalized();
    }
}

/// Groups indices whose eigenvalues are within `gap` (single linkage).
/// Clusters are ordered by their first index.
fn cluster(values: &[Complex64], gap: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() < gap {
                let (ri, rj) = (find(&mut label, i), find(&mut label, j));
                let (lo, hi) = (ri.min(rj), ri.max(rj));
                label[hi] = lo;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut label, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// A common orthonormal eigenbasis of a commuting family of unitaries, by
/// block refinement: each operator splits every current block into its
/// eigenspaces. Fails if a block of dimension > 1 survives, i.e. the
/// family is not maximal abelian.
pub fn simultaneous_eigenbasis(ops: &[ComplexMatrix], cfg: &ToleranceConfig) -> Result<Vec<ComplexVector>> {
    let Some(first) = ops.first() else {
        return Err(Error::InvalidParameter("empty operator family".into()));
    };
    let dim = first.dim();
    for (i, u) in ops.iter().enumerate() {
        if u.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: u.dim() });
        }
        let r = unitarity_residual(u);
        if r >= cfg.eq_tol {
            return Err(Error::NonUnitary(format!("operator {i}, residual {r:e}")));
        }
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let r = commutator_residual(&ops[i], &ops[j])?;
            if r >= cfg.eq_tol {
                return Err(Error::NonCommuting(format!("operators {i} and {j}, residual {r:e}")));
            }
        }
    }

    let mut blocks: Vec<Vec<ComplexVector>> = vec![(0..dim).map(|i| ComplexVector::basis(dim, i)).collect()];
    for u in ops {
        let mut next = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.len() == 1 {
                next.push(block);
                continue;
            }
            let (vals, vecs) = eig_normal(&u.compress(&block));
            for group in cluster(&vals, cfg.eig_gap) {
                let mut sub: Vec<ComplexVector> = group.iter().map(|&g| combine(&block, &vecs[g])).collect();
                orthonormalize(&mut sub);
                next.push(sub);
            }
        }
        blocks = next;
        if blocks.len() == dim {
            break;
        }
    }
    if let Some(b) = blocks.iter().find(|b| b.len() > 1) {
        return Err(Error::ResidualBlock(b.len()));
    }
    Ok(blocks
        .into_iter()
        .map(|mut b| b.pop().unwrap().phase_normalized(cfg.hash_grid))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn x2() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    fn z2() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[ONE, c(-1.0, 0.0)])
    }

    fn x3() -> ComplexMatrix {
        ComplexMatrix::from_fn(3, |i, j| if i == (j + 1) % 3 { ONE } else { ZERO })
    }

    fn z3() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[omega(3, 0), omega(3, 1), omega(3, 2)])
    }

    /// Deterministic pseudo-random unitary via Gram–Schmidt of a fixed
    /// quasi-random matrix.
    fn pseudo_random_unitary(n: usize, seed: u64) -> ComplexMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut cols: Vec<ComplexVector> =
            (0..n).map(|_| ComplexVector((0..n).map(|_| c(next(), next())).collect())).collect();
        orthonormalize(&mut cols);
        ComplexMatrix::from_columns(&cols)
    }

    #[test]
    fn hs_examples() {
        assert_eq!(hs_inner(&x2(), &z2()).unwrap(), ZERO);
        assert_eq!(hs_inner(&x2(), &x2()).unwrap(), c(2.0, 0.0));
        assert_eq!(hs_inner(&ComplexMatrix::identity(5), &ComplexMatrix::identity(5)).unwrap(), c(5.0, 0.0));
        assert!(hs_inner(&x2(), &x3()).is_err());
    }

    #[test]
    fn unitarity_and_commutation() {
        assert!(is_unitary(&x3(), 1e-12));
        assert!(!is_unitary(&x3().scale(c(2.0, 0.0)), 1e-12));
        assert!(!commute(&x2(), &z2(), 1e-12).unwrap());
        assert!(commute(&z3(), &z3().mul(&z3()), 1e-12).unwrap());
        assert!(commute(&x2(), &x3(), 1e-12).is_err());
    }

    #[test]
    fn tolerance_config_bounds() {
        assert!(ToleranceConfig::default().validate().is_ok());
        let bad = ToleranceConfig { eq_tol: 1e-5, eig_gap: 1e-6, hash_grid: 1e-6 };
        assert!(bad.validate().is_err());
        let bad = ToleranceConfig { hash_grid: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn eigh_reconstructs() {
        let u = pseudo_random_unitary(12, 3);
        let h = u.hermitian_part();
        let (vals, vecs) = eigh(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for (l, v) in vals.iter().zip(&vecs) {
            let r = h.apply(v);
            let resid = r.0.iter().zip(&v.0).map(|(a, b)| (a - b * l).norm()).fold(0.0, f64::max);
            assert!(resid < 1e-12);
        }
    }

    #[test]
    fn eig_normal_contract() {
        // reconstruction residual < 1e-10 on unitary matrices up to dimension 32
        for (n, seed) in [(2, 1), (5, 2), (9, 3), (16, 4), (32, 5)] {
            let u = pseudo_random_unitary(n, seed);
            let (vals, vecs) = eig_normal(&u);
            let v = ComplexMatrix::from_columns(&vecs);
            let recon = v.mul(&ComplexMatrix::diagonal(&vals)).mul(&v.adjoint());
            let resid = recon.max_abs_diff(&u);
            assert!(resid < 1e-10, "n={n}: residual {resid:e}");
        }
        // degenerate spectrum
        let x = x3();
        let big = ComplexMatrix::from_fn(9, |i, j| if i % 3 == j % 3 { x.get(i / 3, j / 3) } else { ZERO });
        let (vals, vecs) = eig_normal(&big);
        let v = ComplexMatrix::from_columns(&vecs);
        let recon = v.mul(&ComplexMatrix::diagonal(&vals)).mul(&v.adjoint());
        assert!(recon.max_abs_diff(&big) < 1e-10);
    }

    #[test]
    fn eigenbasis_examples() {
        let cfg = ToleranceConfig::default();
        let b = simultaneous_eigenbasis(&[z2()], &cfg).unwrap();
        assert!(b.iter().all(|v| v.0.iter().filter(|z| z.norm() > 1e-12).count() == 1));

        let b = simultaneous_eigenbasis(&[x2()], &cfg).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut found: Vec<[f64; 2]> = b.iter().map(|v| [v.0[0].re, v.0[1].re]).collect();
        found.sort_by(|a, b| b[1].total_cmp(&a[1]));
        assert!((found[0][0] - s).abs() < 1e-12 && (found[0][1] - s).abs() < 1e-12);
        assert!((found[1][0] - s).abs() < 1e-12 && (found[1][1] + s).abs() < 1e-12);

        let b = simultaneous_eigenbasis(&[z3(), z3().mul(&z3())], &cfg).unwrap();
        assert_eq!(b.len(), 3);
        for v in &b {
            assert_eq!(v.0.iter().filter(|z| z.norm() > 1e-12).count(), 1);
        }
    }

    #[test]
    fn eigenbasis_errors() {
        let cfg = ToleranceConfig::default();
        assert!(matches!(simultaneous_eigenbasis(&[x2(), z2()], &cfg), Err(Error::NonCommuting(_))));
        let id = ComplexMatrix::identity(3);
        assert!(matches!(simultaneous_eigenbasis(&[id], &cfg), Err(Error::ResidualBlock(3))));
        assert!(matches!(
            simultaneous_eigenbasis(&[x2().scale(c(2.0, 0.0))], &cfg),
            Err(Error::NonUnitary(_))
        ));
    }

    #[test]
    fn eigenbasis_is_deterministic_and_orthonormal() {
        let cfg = ToleranceConfig::default();
        let a = simultaneous_eigenbasis(&[x3()], &cfg).unwrap();
        let b = simultaneous_eigenbasis(&[x3()], &cfg).unwrap();
        assert_eq!(a, b);
        for (i, u) in a.iter().enumerate() {
            for (j, v) in a.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((u.inner(v) - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn omega_table() {
        assert_eq!(omega(2, 1), c(-1.0, 0.0));
        assert_eq!(omega(4, 1), c(0.0, 1.0));
        assert!((omega(3, 1).powu(3) - ONE).norm() < 1e-15);
    }
}

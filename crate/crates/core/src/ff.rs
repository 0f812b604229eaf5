//! Prime fields, vectors over them, and the extension fields `F_{d^N}`.
//!
//! Residues are stored as `u32` in `[0, d)`. All moduli are primes no larger
//! than [`MAX_PRIME`], so every product of two residues fits comfortably in a
//! `u32` before reduction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PRIME: u32 = 97;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// A prime modulus in `2..=97`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(d: u32) -> Result<Self> {
        if d <= MAX_PRIME && is_prime(d) {
            Ok(Prime(d))
        } else {
            Err(Error::NotPrime(d))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduces an arbitrary signed integer into `[0, d)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, x: u32, y: u32) -> u32 {
        (x + y) % self.0
    }

    #[inline]
    pub fn sub(self, x: u32, y: u32) -> u32 {
        (x + self.0 - y) % self.0
    }

    #[inline]
    pub fn mul(self, x: u32, y: u32) -> u32 {
        (x * y) % self.0
    }

    #[inline]
    pub fn neg(self, x: u32) -> u32 {
        (self.0 - x) % self.0
    }

    pub fn pow(self, x: u32, mut e: u64) -> u32 {
        let mut base = x % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, x: u32) -> Result<u32> {
        if x % self.0 == 0 {
            return Err(Error::InverseOfZero);
        }
        // Fermat: x^(d-2)
        Ok(self.pow(x, (self.0 - 2) as u64))
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Prime::new(d)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the prime field `F_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: Prime,
}

impl Fp {
    pub fn new(value: i64, modulus: Prime) -> Self {
        Fp {
            value: modulus.reduce(value),
            modulus,
        }
    }

    pub fn zero(modulus: Prime) -> Self {
        Fp { value: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        Fp { value: 1, modulus }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: Fp) -> Result<Prime> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.0, other.modulus.0));
        }
        Ok(self.modulus)
    }

    pub fn add(self, other: Fp) -> Result<Fp> {
        let p = self.same_field(other)?;
        Ok(Fp { value: p.add(self.value, other.value), modulus: p })
    }

    pub fn sub(self, other: Fp) -> Result<Fp> {
        let p = self.same_field(other)?;
        Ok(Fp { value: p.sub(self.value, other.value), modulus: p })
    }

    pub fn mul(self, other: Fp) -> Result<Fp> {
        let p = self.same_field(other)?;
        Ok(Fp { value: p.mul(self.value, other.value), modulus: p })
    }

    pub fn neg(self) -> Fp {
        Fp { value: self.modulus.neg(self.value), modulus: self.modulus }
    }

    pub fn inv(self) -> Result<Fp> {
        Ok(Fp { value: self.modulus.inv(self.value)?, modulus: self.modulus })
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

/// Dispatches a single field operation. Binary operations require `y`.
pub fn field_arith(op: FieldOp, x: Fp, y: Option<Fp>) -> Result<Fp> {
    let rhs = || y.ok_or_else(|| Error::InvalidParameter("binary operation needs two operands".into()));
    match op {
        FieldOp::Add => x.add(rhs()?),
        FieldOp::Mul => x.mul(rhs()?),
        FieldOp::Neg => Ok(x.neg()),
        FieldOp::Inv => x.inv(),
    }
}

/// A vector over `F_d`, stored as raw residues sharing one modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector {
    modulus: Prime,
    coords: Vec<u32>,
}

impl FpVector {
    pub fn new(modulus: Prime, coords: &[i64]) -> Self {
        FpVector {
            modulus,
            coords: coords.iter().map(|&c| modulus.reduce(c)).collect(),
        }
    }

    pub fn from_residues(modulus: Prime, coords: Vec<u32>) -> Self {
        debug_assert!(coords.iter().all(|&c| c < modulus.get()));
        FpVector { modulus, coords }
    }

    pub fn zero(modulus: Prime, len: usize) -> Self {
        FpVector { modulus, coords: vec![0; len] }
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, i: usize) -> Fp {
        Fp { value: self.coords[i], modulus: self.modulus }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &FpVector) -> Result<Prime> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.0, other.modulus.0));
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        Ok(self.modulus)
    }

    pub fn add(&self, other: &FpVector) -> Result<FpVector> {
        let p = self.check(other)?;
        Ok(FpVector {
            modulus: p,
            coords: self.coords.iter().zip(&other.coords).map(|(&x, &y)| p.add(x, y)).collect(),
        })
    }

    pub fn scale(&self, k: u32) -> FpVector {
        let p = self.modulus;
        FpVector {
            modulus: p,
            coords: self.coords.iter().map(|&x| p.mul(x, k % p.get())).collect(),
        }
    }

    pub fn dot(&self, other: &FpVector) -> Result<Fp> {
        let p = self.check(other)?;
        let v = self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(0, |acc, (&x, &y)| p.add(acc, p.mul(x, y)));
        Ok(Fp { value: v, modulus: p })
    }

    /// Scales the vector so that its first nonzero coordinate is 1.
    /// Returns `None` for the zero vector.
    pub fn projective_normalize(&self) -> Option<FpVector> {
        let lead = *self.coords.iter().find(|&&c| c != 0)?;
        let inv = self.modulus.inv(lead).expect("lead is nonzero");
        Some(self.scale(inv))
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Iterates over every vector of `F_d^len` in base-`d` counting order, the
/// last coordinate varying fastest.
pub fn all_vectors(p: Prime, len: usize) -> impl Iterator<Item = Vec<u32>> {
    let d = p.get() as u64;
    let total = d.pow(len as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0u32; len];
        for slot in v.iter_mut().rev() {
            *slot = (k % d) as u32;
            k /= d;
        }
        v
    })
}

/// Brings `rows` into reduced row-echelon form in place, dropping zero rows.
/// Returns the pivot columns.
pub fn row_reduce(p: Prime, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = p.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = p.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let t = p.mul(f, rows[r][j]);
                    rows[i][j] = p.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(p: Prime, rows: &[Vec<u32>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(p, &mut m).len()
}

/// Inverse of a square matrix over `F_d`, or `None` if it is singular.
pub fn invert_matrix(p: Prime, m: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let n = m.len();
    let mut aug: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    let pivots = row_reduce(p, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Descriptor of `F_{d^N} = F_d[t]/(f)` for a monic irreducible `f` of degree `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtField {
    prime: Prime,
    degree: usize,
    /// Coefficients of `f`, constant term first; the last entry is 1.
    irreducible: Vec<u32>,
}

/// An element of an extension field in the basis `1, t, ..., t^(N-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement {
    coeffs: Vec<u32>,
}

impl ExtElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

/// Remainder of `a` modulo the monic polynomial `m` (both constant term first).
fn poly_rem(p: Prime, a: &[u32], m: &[u32]) -> Vec<u32> {
    let deg_m = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > deg_m {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - deg_m;
            for (i, &mc) in m[..deg_m].iter().enumerate() {
                let t = p.mul(lead, mc);
                r[shift + i] = p.sub(r[shift + i], t);
            }
        }
    }
    r.resize(deg_m, 0);
    r
}

fn is_irreducible(p: Prime, f: &[u32]) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    for k in 1..=n / 2 {
        for low in all_vectors(p, k) {
            let mut g: Vec<u32> = low.into_iter().rev().collect();
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Builds `F_{d^N}` using the lexicographically smallest monic irreducible
/// polynomial, comparing coefficient tuples constant term first.
pub fn build_extension(d: u32, degree: usize) -> Result<ExtField> {
    let prime = Prime::new(d)?;
    if degree == 0 {
        return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
    }
    // all_vectors counts with the first coordinate most significant, which is
    // exactly lexicographic order on (c_0, ..., c_{N-1}).
    let irreducible = all_vectors(prime, degree)
        .map(|mut c| {
            c.push(1);
            c
        })
        .find(|f| is_irreducible(prime, f))
        .expect("irreducible polynomials exist in every degree");
    Ok(ExtField { prime, degree, irreducible })
}

impl ExtField {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn irreducible(&self) -> &[u32] {
        &self.irreducible
    }

    pub fn order(&self) -> usize {
        (self.prime.get() as usize).pow(self.degree as u32)
    }

    pub fn element(&self, coeffs: &[i64]) -> ExtElement {
        let raw: Vec<u32> = coeffs.iter().map(|&c| self.prime.reduce(c)).collect();
        let mut padded = raw;
        if padded.len() < self.degree {
            padded.resize(self.degree, 0);
        }
        ExtElement { coeffs: poly_rem(self.prime, &padded, &self.irreducible) }
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement { coeffs: vec![0; self.degree] }
    }

    pub fn one(&self) -> ExtElement {
        self.element(&[1])
    }

    /// The class of `t^i`.
    pub fn basis_element(&self, i: usize) -> ExtElement {
        let mut c = vec![0i64; i + 1];
        c[i] = 1;
        self.element(&c)
    }

    /// All field elements, enumerated by their coefficient vectors.
    pub fn elements(&self) -> Vec<ExtElement> {
        all_vectors(self.prime, self.degree)
            .map(|coeffs| ExtElement { coeffs })
            .collect()
    }

    pub fn add(&self, x: &ExtElement, y: &ExtElement) -> ExtElement {
        let p = self.prime;
        ExtElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| p.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, x: &ExtElement, y: &ExtElement) -> ExtElement {
        let p = self.prime;
        ExtElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| p.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, k: u32, x: &ExtElement) -> ExtElement {
        let p = self.prime;
        ExtElement { coeffs: x.coeffs.iter().map(|&a| p.mul(a, k)).collect() }
    }

    pub fn mul(&self, x: &ExtElement, y: &ExtElement) -> ExtElement {
        let p = self.prime;
        let mut prod = vec![0u32; 2 * self.degree - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] = p.add(prod[i + j], p.mul(a, b));
            }
        }
        ExtElement { coeffs: poly_rem(p, &prod, &self.irreducible) }
    }

    pub fn pow(&self, x: &ExtElement, mut e: u64) -> ExtElement {
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

    /// Absolute trace `Tr(x) = x + x^d + ... + x^(d^(N-1))`.
    pub fn trace(&self, x: &ExtElement) -> Fp {
        let d = self.prime.get() as u64;
        let mut acc = self.zero();
        let mut conj = x.clone();
        for _ in 0..self.degree {
            acc = self.add(&acc, &conj);
            conj = self.pow(&conj, d);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace must lie in F_d");
        Fp { value: acc.coeffs[0], modulus: self.prime }
    }
}

/// Convenience wrapper matching [`ExtField::trace`].
pub fn ext_trace(field: &ExtField, x: &ExtElement) -> Fp {
    field.trace(x)
}

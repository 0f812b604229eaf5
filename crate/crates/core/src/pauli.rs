//! The general Pauli group `P_N(d)` in symbolic form.
//!
//! An element `ω^c X^{a_1}Z^{b_1} ⊗ ... ⊗ X^{a_N}Z^{b_N}` is stored as the
//! triple `(c, a, b)` over `F_d`, with `ω = exp(2πi/d)`. Multiplication uses
//! `Z^b X^{a'} = ω^{b·a'} X^{a'} Z^b`.
//!
//! Points of the polar space use interleaved coordinates
//! `(a_1, b_1, a_2, b_2, ...)`, so the canonical symplectic form of
//! [`crate::symplectic`] is exactly the commutator form `a·b' - b·a'`.

use std::fmt;


use crate::error::{Error, Result};
use crate::ff::{all_vectors, Fp, FpVector, Prime};
use crate::matcore::{omega, ComplexMatrix};
use crate::symplectic::{canonical_form, validate_spread, Spread};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliElement {
    prime: Prime,
    a: Vec<u32>,
    b: Vec<u32>,
    phase: u32,
}

impl PauliElement {
    pub fn new(prime: Prime, phase: i64, a: &[i64], b: &[i64]) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "a and b must have the same positive length, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(PauliElement {
            prime,
            phase: prime.reduce(phase),
            a: a.iter().map(|&x| prime.reduce(x)).collect(),
            b: b.iter().map(|&x| prime.reduce(x)).collect(),
        })
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        PauliElement { prime, phase: 0, a: vec![0; n], b: vec![0; n] }
    }

    /// `X` acting on tensor slot `k`.
    pub fn x(prime: Prime, n: usize, k: usize) -> Self {
        let mut p = Self::identity(prime, n);
        p.a[k] = 1;
        p
    }

    /// `Z` acting on tensor slot `k`.
    pub fn z(prime: Prime, n: usize, k: usize) -> Self {
        let mut p = Self::identity(prime, n);
        p.b[k] = 1;
        p
    }

    /// `ω · id`.
    pub fn omega(prime: Prime, n: usize) -> Self {
        let mut p = Self::identity(prime, n);
        p.phase = 1 % prime.get();
        p
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    pub fn is_central(&self) -> bool {
        self.a.iter().chain(&self.b).all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_central()
    }

    /// Interleaved `(a_1, b_1, ..., a_N, b_N)`.
    pub fn symplectic_vector(&self) -> Vec<u32> {
        self.a.iter().zip(&self.b).flat_map(|(&x, &z)| [x, z]).collect()
    }

    pub fn from_symplectic_vector(prime: Prime, phase: u32, v: &[u32]) -> Self {
        let a = v.iter().step_by(2).copied().collect();
        let b = v.iter().skip(1).step_by(2).copied().collect();
        PauliElement { prime, phase, a, b }
    }

    fn compatible(&self, other: &PauliElement) -> Result<()> {
        if self.prime != other.prime || self.n() != other.n() {
            return Err(Error::ParameterMismatch);
        }
        Ok(())
    }

    pub fn inverse(&self) -> PauliElement {
        // (ω^c X^a Z^b)^{-1} = ω^{-c} Z^{-b} X^{-a} = ω^{a·b - c} X^{-a} Z^{-b}
        let p = self.prime;
        let ab = self.a.iter().zip(&self.b).fold(0, |acc, (&x, &z)| p.add(acc, p.mul(x, z)));
        PauliElement {
            prime: p,
            phase: p.sub(ab, self.phase),
            a: self.a.iter().map(|&x| p.neg(x)).collect(),
            b: self.b.iter().map(|&x| p.neg(x)).collect(),
        }
    }
}

impl fmt::Display for PauliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            write!(f, "w^{} ", self.phase)?;
        }
        for (k, (&x, &z)) in self.a.iter().zip(&self.b).enumerate() {
            if k > 0 {
                write!(f, "⊗")?;
            }
            match (x, z) {
                (0, 0) => write!(f, "I")?,
                (x, 0) => write!(f, "X^{x}")?,
                (0, z) => write!(f, "Z^{z}")?,
                (x, z) => write!(f, "X^{x}Z^{z}")?,
            }
        }
        Ok(())
    }
}

/// `(c, a, b) · (c', a', b') = (c + c' + b·a', a + a', b + b')`.
pub fn pauli_mul(p: &PauliElement, q: &PauliElement) -> Result<PauliElement> {
    p.compatible(q)?;
    Ok(mul_unchecked(p, q))
}

pub(crate) fn mul_unchecked(p: &PauliElement, q: &PauliElement) -> PauliElement {
    let m = p.prime;
    let cross = p.b.iter().zip(&q.a).fold(0, |acc, (&x, &y)| m.add(acc, m.mul(x, y)));
    PauliElement {
        prime: m,
        phase: m.add(m.add(p.phase, q.phase), cross),
        a: p.a.iter().zip(&q.a).map(|(&x, &y)| m.add(x, y)).collect(),
        b: p.b.iter().zip(&q.b).map(|(&x, &y)| m.add(x, y)).collect(),
    }
}

/// `a·b' - b·a'`; `p q = ω^e q p` with `e` the negative of this value, so
/// the two commute exactly when it vanishes.
pub fn pauli_commutator_exponent(p: &PauliElement, q: &PauliElement) -> Result<Fp> {
    p.compatible(q)?;
    let m = p.prime;
    let ab = p.a.iter().zip(&q.b).fold(0, |acc, (&x, &y)| m.add(acc, m.mul(x, y)));
    let ba = p.b.iter().zip(&q.a).fold(0, |acc, (&x, &y)| m.add(acc, m.mul(x, y)));
    Ok(Fp::new(m.sub(ab, ba) as i64, m))
}

/// Least `k >= 1` with `p^k = id`, by repeated multiplication.
pub fn pauli_order(p: &PauliElement) -> u64 {
    let mut acc = p.clone();
    let mut k = 1;
    while !acc.is_identity() {
        acc = mul_unchecked(&acc, p);
        k += 1;
    }
    k
}

/// A point of `PG(2N-1, d)`: first nonzero coordinate equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    rep: FpVector,
}

impl ProjPoint {
    pub fn new(v: &FpVector) -> Result<Self> {
        v.projective_normalize().map(|rep| ProjPoint { rep }).ok_or(Error::CentralElement)
    }

    pub fn rep(&self) -> &FpVector {
        &self.rep
    }
}

/// The point spanned by `(a|b)`; phases are discarded.
pub fn gamma(p: &PauliElement) -> Result<ProjPoint> {
    if p.is_central() {
        return Err(Error::CentralElement);
    }
    ProjPoint::new(&FpVector::from_residues(p.prime, p.symplectic_vector()))
}

/// Maximal commuting classes of Pauli operators with all phases zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMcc {
    prime: Prime,
    n: usize,
    classes: Vec<Vec<PauliElement>>,
}

impl SymbolicMcc {
    pub fn new(prime: Prime, n: usize, classes: Vec<Vec<PauliElement>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        for c in &classes {
            if c.is_empty() {
                return Err(Error::InvalidMcc("empty class".into()));
            }
            if let Some(p) = c.iter().find(|p| p.prime != prime || p.n() != n) {
                return Err(Error::InvalidMcc(format!("operator {p} has mismatched parameters")));
            }
        }
        Ok(SymbolicMcc { prime, n, classes })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Hilbert-space dimension `d^N`.
    pub fn dimension(&self) -> usize {
        (self.prime.get() as usize).pow(self.n as u32)
    }

    pub fn classes(&self) -> &[Vec<PauliElement>] {
        &self.classes
    }

    pub fn operators(&self) -> impl Iterator<Item = &PauliElement> {
        self.classes.iter().flatten()
    }
}

/// One class per spread member: every nonzero vector of the member read as
/// `X^a Z^b` with phase 0.
pub fn gamma_inverse(spread: &Spread) -> Result<SymbolicMcc> {
    let form = canonical_form(spread.prime().get(), spread.n())?;
    let report = validate_spread(&form, spread);
    if !report.passed() {
        return Err(Error::InvalidSpread(report.to_string()));
    }
    let classes = spread
        .members()
        .iter()
        .map(|m| {
            m.nonzero_vectors()
                .into_iter()
                .map(|v| PauliElement::from_symplectic_vector(spread.prime(), 0, &v))
                .collect()
        })
        .collect();
    SymbolicMcc::new(spread.prime(), spread.n(), classes)
}

/// The `d^N × d^N` matrix `ω^c ⊗_k X^{a_k} Z^{b_k}`; slot 1 is the most
/// significant tensor factor.
pub fn materialize(p: &PauliElement) -> ComplexMatrix {
    let d = p.prime.get() as usize;
    let n = p.n();
    let dim = d.pow(n as u32);
    let mut m = ComplexMatrix::zeros(dim);
    let prime = p.prime;
    for (col, s) in all_vectors(prime, n).enumerate() {
        // X^a Z^b |s> = ω^{b·s} |s + a>
        let mut phase = p.phase;
        let mut row = 0usize;
        for k in 0..n {
            phase = prime.add(phase, prime.mul(p.b[k], s[k]));
            row = row * d + prime.add(s[k], p.a[k]) as usize;
        }
        m.set(row, col, omega(d, phase as usize));
    }
    m
}

/// The `2N` generators `X_k, Z_k` of `P_N(d)` (with `ω·id` arising as a
/// commutator).
pub fn pauli_generators(prime: Prime, n: usize) -> Vec<PauliElement> {
    (0..n)
        .flat_map(|k| [PauliElement::x(prime, n, k), PauliElement::z(prime, n, k)])
        .collect()
}

/// All `d^{2N}` phase-free Pauli operators, identity first.
pub fn all_phase_free(prime: Prime, n: usize) -> Vec<PauliElement> {
    all_vectors(prime, 2 * n)
        .map(|v| PauliElement::from_symplectic_vector(prime, 0, &v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::desarguesian_spread;
    use num_complex::Complex64;

    fn pr(d: u32) -> Prime {
        Prime::new(d).unwrap()
    }

    #[test]
    fn product_rule() {
        let p = pr(3);
        let x = PauliElement::x(p, 1, 0);
        let z = PauliElement::z(p, 1, 0);
        let xz = pauli_mul(&x, &z).unwrap();
        assert_eq!((xz.phase(), xz.a(), xz.b()), (0, &[1][..], &[1][..]));
        let zx = pauli_mul(&z, &x).unwrap();
        assert_eq!((zx.phase(), zx.a(), zx.b()), (1, &[1][..], &[1][..]));
        let id = PauliElement::identity(p, 1);
        assert_eq!(pauli_mul(&id, &xz).unwrap(), xz);

        let q = pr(2);
        let xz2 = PauliElement::new(q, 0, &[1], &[1]).unwrap();
        let sq = pauli_mul(&xz2, &xz2).unwrap();
        assert_eq!(sq, PauliElement::new(q, 1, &[0], &[0]).unwrap());
        let m = materialize(&xz2);
        assert!(m.mul(&m).approx_eq(&ComplexMatrix::identity(2).scale(Complex64::new(-1.0, 0.0)), 1e-14));

        assert!(pauli_mul(&x, &PauliElement::x(p, 2, 0)).is_err());
        assert!(pauli_mul(&x, &PauliElement::x(q, 1, 0)).is_err());
    }

    #[test]
    fn commutator_examples() {
        let p2 = pr(2);
        let x = PauliElement::x(p2, 1, 0);
        let z = PauliElement::z(p2, 1, 0);
        assert_eq!(pauli_commutator_exponent(&x, &z).unwrap().value(), 1);
        assert!(pauli_commutator_exponent(&x, &x).unwrap().is_zero());
        let p3 = pr(3);
        let xi = PauliElement::x(p3, 2, 0);
        let iz = PauliElement::z(p3, 2, 1);
        assert!(pauli_commutator_exponent(&xi, &iz).unwrap().is_zero());
    }

    #[test]
    fn orders() {
        assert_eq!(pauli_order(&PauliElement::identity(pr(5), 2)), 1);
        assert_eq!(pauli_order(&PauliElement::new(pr(3), 0, &[1], &[1]).unwrap()), 3);
        assert_eq!(pauli_order(&PauliElement::new(pr(2), 0, &[1], &[1]).unwrap()), 4);
        for d in [3u32, 5, 7] {
            for q in all_phase_free(pr(d), 1).into_iter().skip(1) {
                assert_eq!(pauli_order(&q), d as u64);
            }
        }
        for q in all_phase_free(pr(2), 2) {
            assert!([1, 2, 4].contains(&pauli_order(&q)));
        }
    }

    #[test]
    fn inverse_is_two_sided() {
        for (d, n) in [(2u32, 2usize), (3, 2), (5, 1)] {
            for q in all_phase_free(pr(d), n) {
                let q = pauli_mul(&q, &PauliElement::omega(pr(d), n)).unwrap();
                assert!(pauli_mul(&q, &q.inverse()).unwrap().is_identity());
                assert!(pauli_mul(&q.inverse(), &q).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let x = PauliElement::x(pr(2), 1, 0);
        assert_eq!(gamma(&x).unwrap().rep().coords(), &[1, 0]);
        let wz = PauliElement::new(pr(3), 1, &[0], &[1]).unwrap();
        assert_eq!(gamma(&wz).unwrap().rep().coords(), &[0, 1]);
        let z2 = PauliElement::new(pr(3), 0, &[0], &[2]).unwrap();
        assert_eq!(gamma(&z2).unwrap(), gamma(&PauliElement::z(pr(3), 1, 0)).unwrap());
        assert_eq!(gamma(&PauliElement::omega(pr(3), 1)), Err(Error::CentralElement));
    }

    #[test]
    fn gamma_is_onto_points() {
        for (d, n) in [(2u32, 1usize), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3)] {
            let p = pr(d);
            let images: std::collections::BTreeSet<ProjPoint> =
                all_phase_free(p, n).iter().skip(1).map(|q| gamma(q).unwrap()).collect();
            let expected = ((d as usize).pow(2 * n as u32) - 1) / (d as usize - 1);
            assert_eq!(images.len(), expected);
        }
    }

    #[test]
    fn gamma_inverse_classes() {
        let mcc = gamma_inverse(&desarguesian_spread(2, 1).unwrap()).unwrap();
        let mut names: Vec<String> = mcc.classes().iter().map(|c| c[0].to_string()).collect();
        names.sort();
        assert_eq!(names, ["X^1", "X^1Z^1", "Z^1"]);

        let mcc = gamma_inverse(&desarguesian_spread(3, 1).unwrap()).unwrap();
        assert_eq!(mcc.classes().len(), 4);
        for c in mcc.classes() {
            assert_eq!(c.len(), 2);
            assert_eq!(gamma(&c[0]).unwrap(), gamma(&c[1]).unwrap());
        }

        let mcc = gamma_inverse(&desarguesian_spread(3, 2).unwrap()).unwrap();
        assert_eq!(mcc.classes().len(), 10);
        for c in mcc.classes() {
            assert_eq!(c.len(), 8);
            for p in c {
                assert_eq!(p.phase(), 0);
                for q in c {
                    assert!(pauli_commutator_exponent(p, q).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn gamma_inverse_rejects_invalid_spread() {
        let s = desarguesian_spread(3, 1).unwrap();
        let mut members = s.clone().into_members();
        members[1] = members[0].clone();
        let bad = Spread::new(s.prime(), 1, members).unwrap();
        assert!(matches!(gamma_inverse(&bad), Err(Error::InvalidSpread(_))));
    }

    #[test]
    fn materialized_examples() {
        let z = materialize(&PauliElement::z(pr(2), 1, 0));
        assert!(z.approx_eq(&ComplexMatrix::diagonal(&[1.0.into(), (-1.0).into()]), 1e-15));
        let x = materialize(&PauliElement::x(pr(3), 1, 0));
        for s in 0..3 {
            for r in 0..3 {
                let expected = if r == (s + 1) % 3 { 1.0 } else { 0.0 };
                assert_eq!(x.get(r, s), Complex64::new(expected, 0.0));
            }
        }
    }
}

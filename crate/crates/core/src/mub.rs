//! Mutually unbiased bases, the maps `alpha` (MUB → MCC) and `beta`
//! (MCC → MUB), and ray- and order-insensitive MUB equality.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{omega, simultaneous_eigenbasis, ComplexMatrix, ComplexVector, ToleranceConfig};
use crate::mcc::{validate_mcc, MccValue, NumericMcc};
use crate::report::ValidationReport;

pub const SHAPE: &str = "shape";
pub const ORTHONORMALITY: &str = "orthonormality";
pub const UNBIASEDNESS: &str = "unbiasedness";

/// An orthonormal basis of `C^D`, as a list of kets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Basis {
    vectors: Vec<ComplexVector>,
}

impl Basis {
    pub fn new(vectors: Vec<ComplexVector>) -> Self {
        Basis { vectors }
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The computational basis of `C^dim`.
    pub fn computational(dim: usize) -> Self {
        Basis { vectors: (0..dim).map(|i| ComplexVector::basis(dim, i)).collect() }
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((u.inner(v) - target).norm());
            }
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MubSet {
    dimension: usize,
    bases: Vec<Basis>,
}

impl MubSet {
    pub fn new(dimension: usize, bases: Vec<Basis>) -> Self {
        MubSet { dimension, bases }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn is_maximal(&self) -> bool {
        self.bases.len() == self.dimension + 1
    }
}

/// Residuals behind [`validate_mub`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MubResiduals {
    /// Per basis: max |⟨v_i|v_j⟩ - δ_ij|.
    pub orthonormality: Vec<f64>,
    /// Per pair of bases `(j, k)`, `j < k`: max | |⟨φ|ψ⟩|² - 1/D |.
    pub unbiasedness: Vec<(usize, usize, f64)>,
}

impl MubResiduals {
    pub fn max_orthonormality(&self) -> f64 {
        self.orthonormality.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_unbiasedness(&self) -> f64 {
        self.unbiasedness.iter().map(|t| t.2).fold(0.0, f64::max)
    }
}

pub fn mub_residuals(b: &MubSet) -> MubResiduals {
    let inv_d = 1.0 / b.dimension as f64;
    let orthonormality = b.bases.iter().map(Basis::orthonormality_residual).collect();
    let mut unbiasedness = Vec::new();
    for j in 0..b.bases.len() {
        for k in j + 1..b.bases.len() {
            let mut worst = 0.0f64;
            for phi in b.bases[j].vectors() {
                for psi in b.bases[k].vectors() {
                    worst = worst.max((phi.inner(psi).norm_sqr() - inv_d).abs());
                }
            }
            unbiasedness.push((j, k, worst));
        }
    }
    MubResiduals { orthonormality, unbiasedness }
}

pub fn validate_mub(b: &MubSet, cfg: &ToleranceConfig) -> ValidationReport {
    let mut report = ValidationReport::new("mub");
    let d = b.dimension;
    let bad_shape = b.bases.iter().enumerate().find_map(|(k, basis)| {
        if basis.len() != d {
            Some(format!("basis {k} has {} vectors, expected {d}", basis.len()))
        } else {
            basis
                .vectors()
                .iter()
                .position(|v| v.dim() != d)
                .map(|i| format!("basis {k} vector {i} has length {}", basis.vectors()[i].dim()))
        }
    });
    let shape_ok = bad_shape.is_none();
    report.push(SHAPE, bad_shape, None);
    report.maximal = Some(b.is_maximal());
    if !shape_ok {
        return report;
    }

    let res = mub_residuals(b);
    let bad = res
        .orthonormality
        .iter()
        .position(|&r| r >= cfg.eq_tol)
        .map(|k| format!("basis {k}: residual {:e}", res.orthonormality[k]));
    report.push(ORTHONORMALITY, bad, Some(res.max_orthonormality()));
    let bad = res
        .unbiasedness
        .iter()
        .find(|t| t.2 >= cfg.eq_tol)
        .map(|&(j, k, r)| format!("bases {j} and {k}: residual {r:e}"));
    report.push(UNBIASEDNESS, bad, Some(res.max_unbiasedness()));
    report
}

/// Common eigenbases of the classes, one basis per class, canonicalized.
pub fn beta(u: &MccValue, cfg: &ToleranceConfig) -> Result<MubSet> {
    let report = validate_mcc(u, cfg);
    if !report.passed() {
        return Err(Error::InvalidMcc(report.to_string()));
    }
    let numeric = u.to_numeric();
    let bases = numeric
        .classes()
        .iter()
        .map(|class| simultaneous_eigenbasis(class, cfg).map(Basis::new))
        .collect::<Result<Vec<_>>>()?;
    Ok(canonicalize_mub(&MubSet::new(numeric.dimension(), bases), cfg))
}

/// `U_j^k = Σ_{r=1}^{D} e^{2πijr/D} |ψ_r^k⟩⟨ψ_r^k|` for `j = 1..D-1`; class
/// `k` comes from basis `k`. `j = D` is left out since it gives the identity.
pub fn alpha(b: &MubSet) -> Result<NumericMcc> {
    if !b.is_maximal() {
        return Err(Error::InvalidMub(format!(
            "alpha needs D + 1 = {} bases, got {}",
            b.dimension + 1,
            b.bases.len()
        )));
    }
    let report = validate_mub(b, &ToleranceConfig::default());
    if !report.passed() {
        return Err(Error::InvalidMub(report.to_string()));
    }
    let d = b.dimension;
    let classes = b
        .bases
        .iter()
        .map(|basis| {
            let projectors: Vec<ComplexMatrix> = basis.vectors().iter().map(ComplexVector::projector).collect();
            (1..d)
                .map(|j| {
                    projectors.iter().enumerate().fold(ComplexMatrix::zeros(d), |acc, (idx, p)| {
                        let r = idx + 1;
                        acc.add(&p.scale(omega(d, (j * r) % d)))
                    })
                })
                .collect()
        })
        .collect();
    NumericMcc::new(d, classes)
}

fn quantize(z: Complex64, grid: f64) -> (i64, i64) {
    ((z.re / grid).round() as i64, (z.im / grid).round() as i64)
}

fn vector_key(v: &ComplexVector, grid: f64) -> Vec<(i64, i64)> {
    v.0.iter().map(|&z| quantize(z, grid)).collect()
}

/// Phase-normalizes every vector, sorts vectors within each basis by their
/// quantized entries, then sorts the bases.
pub fn canonicalize_mub(b: &MubSet, cfg: &ToleranceConfig) -> MubSet {
    let grid = cfg.hash_grid;
    let mut bases: Vec<(Vec<Vec<(i64, i64)>>, Basis)> = b
        .bases
        .iter()
        .map(|basis| {
            let mut keyed: Vec<(Vec<(i64, i64)>, ComplexVector)> = basis
                .vectors()
                .iter()
                .map(|v| {
                    let n = v.phase_normalized(grid);
                    (vector_key(&n, grid), n)
                })
                .collect();
            keyed.sort_by(|x, y| x.0.cmp(&y.0));
            let (keys, vectors): (Vec<_>, Vec<_>) = keyed.into_iter().unzip();
            (keys, Basis::new(vectors))
        })
        .collect();
    bases.sort_by(|x, y| x.0.cmp(&y.0));
    MubSet::new(b.dimension, bases.into_iter().map(|(_, basis)| basis).collect())
}

/// Max entrywise distance between canonical forms, or `None` when the two
/// sets differ in shape.
pub fn mub_distance(b1: &MubSet, b2: &MubSet, cfg: &ToleranceConfig) -> Option<f64> {
    if b1.dimension != b2.dimension || b1.bases.len() != b2.bases.len() {
        return None;
    }
    let c1 = canonicalize_mub(b1, cfg);
    let c2 = canonicalize_mub(b2, cfg);
    let mut worst = 0.0f64;
    for (x, y) in c1.bases.iter().zip(&c2.bases) {
        if x.len() != y.len() {
            return None;
        }
        for (u, v) in x.vectors().iter().zip(y.vectors()) {
            if u.dim() != v.dim() {
                return None;
            }
            for (a, b) in u.0.iter().zip(&v.0) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    Some(worst)
}

pub fn mub_equal(b1: &MubSet, b2: &MubSet, cfg: &ToleranceConfig) -> bool {
    mub_distance(b1, b2, cfg).is_some_and(|d| d < cfg.eq_tol)
}

/// Lexicographic comparison of canonical forms; exposed for sorting.
pub fn compare_canonical(b1: &MubSet, b2: &MubSet, cfg: &ToleranceConfig) -> Ordering {
    let key = |b: &MubSet| -> Vec<Vec<Vec<(i64, i64)>>> {
        canonicalize_mub(b, cfg)
            .bases
            .iter()
            .map(|basis| basis.vectors().iter().map(|v| vector_key(v, cfg.hash_grid)).collect())
            .collect()
    };
    key(b1).cmp(&key(b2))
}

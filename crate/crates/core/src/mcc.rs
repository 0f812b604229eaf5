//! Maximal commuting classes: data model, validation, scaling and
//! materialization of symbolic Pauli classes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{commutator_residual, hs_inner, unitarity_residual, ComplexMatrix, ToleranceConfig};
use crate::pauli::{materialize, pauli_commutator_exponent, PauliElement, SymbolicMcc};
use crate::report::ValidationReport;

pub const UNITARITY: &str = "unitarity";
pub const NOT_IDENTITY: &str = "not_identity";
pub const COMMUTING: &str = "commuting";
pub const DISTINCT: &str = "distinct";
pub const HS_ORTHOGONAL: &str = "hs_orthogonal";
pub const CLASS_SIZES: &str = "class_sizes";
pub const CLASS_COUNT: &str = "class_count";

/// Classes of numeric unitaries acting on `C^dimension`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericMcc {
    dimension: usize,
    classes: Vec<Vec<ComplexMatrix>>,
}

impl NumericMcc {
    pub fn new(dimension: usize, classes: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        for c in &classes {
            if c.is_empty() {
                return Err(Error::InvalidMcc("empty class".into()));
            }
            if let Some(m) = c.iter().find(|m| m.dim() != dimension) {
                return Err(Error::DimensionMismatch { expected: dimension, found: m.dim() });
            }
        }
        Ok(NumericMcc { dimension, classes })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn classes(&self) -> &[Vec<ComplexMatrix>] {
        &self.classes
    }

    pub fn operators(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.classes.iter().flatten()
    }

    pub fn is_maximal(&self) -> bool {
        self.classes.len() == self.dimension + 1
    }
}

/// An MCC in either flavor.
#[derive(Clone, Debug, PartialEq)]
pub enum MccValue {
    Symbolic(SymbolicMcc),
    Numeric(NumericMcc),
}

impl From<SymbolicMcc> for MccValue {
    fn from(m: SymbolicMcc) -> Self {
        MccValue::Symbolic(m)
    }
}

impl From<NumericMcc> for MccValue {
    fn from(m: NumericMcc) -> Self {
        MccValue::Numeric(m)
    }
}

impl MccValue {
    pub fn dimension(&self) -> usize {
        match self {
            MccValue::Symbolic(s) => s.dimension(),
            MccValue::Numeric(n) => n.dimension(),
        }
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        match self {
            MccValue::Symbolic(s) => s.classes().iter().map(Vec::len).collect(),
            MccValue::Numeric(n) => n.classes().iter().map(Vec::len).collect(),
        }
    }

    pub fn is_maximal(&self) -> bool {
        self.class_sizes().len() == self.dimension() + 1
    }

    pub fn operator_count(&self) -> usize {
        self.class_sizes().iter().sum()
    }

    /// Numeric view; symbolic operators are materialized in order.
    pub fn to_numeric(&self) -> NumericMcc {
        match self {
            MccValue::Symbolic(s) => to_numeric(s),
            MccValue::Numeric(n) => n.clone(),
        }
    }
}

pub fn to_numeric(mcc: &SymbolicMcc) -> NumericMcc {
    let classes = mcc.classes().iter().map(|c| c.iter().map(materialize).collect()).collect();
    NumericMcc { dimension: mcc.dimension(), classes }
}

/// Checks unitarity, condition (a) (commuting classes), condition (b) at
/// operator granularity, Hilbert–Schmidt orthogonality among all operators
/// and against the identity, and the class-size arithmetic.
pub fn validate_mcc(u: &MccValue, cfg: &ToleranceConfig) -> ValidationReport {
    let mut report = match u {
        MccValue::Symbolic(s) => validate_symbolic(s),
        MccValue::Numeric(n) => validate_numeric(n, cfg),
    };
    let dim = u.dimension();
    let sizes = u.class_sizes();
    let bad_size = sizes
        .iter()
        .position(|&s| s + 1 != dim)
        .map(|j| format!("class {j} has {} operators, expected {}", sizes[j], dim - 1));
    report.push(CLASS_SIZES, bad_size, None);
    let bad_count = (sizes.len() > dim + 1).then(|| format!("{} classes exceed D + 1 = {}", sizes.len(), dim + 1));
    report.push(CLASS_COUNT, bad_count, None);
    report.maximal = Some(u.is_maximal());
    report
}

/// Flattened `(class, index)` labels in deterministic order.
fn labels(sizes: &[usize]) -> Vec<(usize, usize)> {
    sizes.iter().enumerate().flat_map(|(j, &s)| (0..s).map(move |i| (j, i))).collect()
}

fn validate_numeric(u: &NumericMcc, cfg: &ToleranceConfig) -> ValidationReport {
    let mut report = ValidationReport::new("mcc");
    let tol = cfg.eq_tol;
    let ops: Vec<&ComplexMatrix> = u.operators().collect();
    let sizes: Vec<usize> = u.classes().iter().map(Vec::len).collect();
    let lab = labels(&sizes);
    let id = ComplexMatrix::identity(u.dimension());

    let mut worst = 0.0f64;
    let mut bad = None;
    for (k, m) in ops.iter().enumerate() {
        let r = unitarity_residual(m);
        worst = worst.max(r);
        if r >= tol && bad.is_none() {
            bad = Some(format!("operator {:?}: |UU† - id| = {r:e}", lab[k]));
        }
    }
    report.push(UNITARITY, bad, Some(worst));

    let bad = ops
        .iter()
        .position(|m| m.is_identity(tol))
        .map(|k| format!("operator {:?} equals the identity", lab[k]));
    report.push(NOT_IDENTITY, bad, None);

    let mut worst = 0.0f64;
    let mut bad = None;
    for (j, class) in u.classes().iter().enumerate() {
        for a in 0..class.len() {
            for b in a + 1..class.len() {
                let r = commutator_residual(&class[a], &class[b]).unwrap_or(f64::INFINITY);
                worst = worst.max(r);
                if r >= tol && bad.is_none() {
                    bad = Some(format!("class {j}: operators {a} and {b} do not commute ({r:e})"));
                }
            }
        }
    }
    report.push(COMMUTING, bad, Some(worst));

    let mut bad_distinct = None;
    let mut bad_orth = None;
    let mut worst_orth = 0.0f64;
    for a in 0..ops.len() {
        let t = hs_inner(ops[a], &id).map(|z| z.norm()).unwrap_or(f64::INFINITY);
        worst_orth = worst_orth.max(t);
        if t >= tol && bad_orth.is_none() {
            bad_orth = Some(format!("operator {:?}: |tr(U)| = {t:e}", lab[a]));
        }
        for b in a + 1..ops.len() {
            if ops[a].max_abs_diff(ops[b]) < tol && bad_distinct.is_none() {
                bad_distinct = Some(format!("operators {:?} and {:?} coincide", lab[a], lab[b]));
            }
            let t = hs_inner(ops[a], ops[b]).map(|z| z.norm()).unwrap_or(f64::INFINITY);
            worst_orth = worst_orth.max(t);
            if t >= tol && bad_orth.is_none() {
                bad_orth = Some(format!("operators {:?} and {:?}: |tr(AB†)| = {t:e}", lab[a], lab[b]));
            }
        }
    }
    report.push(DISTINCT, bad_distinct, None);
    report.push(HS_ORTHOGONAL, bad_orth, Some(worst_orth));
    report
}

fn validate_symbolic(u: &SymbolicMcc) -> ValidationReport {
    let mut report = ValidationReport::new("mcc");
    report.push(UNITARITY, None, Some(0.0));
    let ops: Vec<&PauliElement> = u.operators().collect();
    let sizes: Vec<usize> = u.classes().iter().map(Vec::len).collect();
    let lab = labels(&sizes);

    let bad = ops
        .iter()
        .position(|p| p.is_identity())
        .map(|k| format!("operator {:?} is the identity", lab[k]));
    report.push(NOT_IDENTITY, bad, None);

    let mut bad = None;
    'outer: for (j, class) in u.classes().iter().enumerate() {
        for a in 0..class.len() {
            for b in a + 1..class.len() {
                let e = pauli_commutator_exponent(&class[a], &class[b]).expect("same parameters");
                if !e.is_zero() {
                    bad = Some(format!("class {j}: {} and {} do not commute", class[a], class[b]));
                    break 'outer;
                }
            }
        }
    }
    report.push(COMMUTING, bad, None);

    // tr(P Q†) vanishes exactly when the (a|b) parts differ; tr(P) when P is
    // not central.
    let mut bad_distinct = None;
    let mut bad_orth = None;
    for a in 0..ops.len() {
        if ops[a].is_central() && bad_orth.is_none() {
            bad_orth = Some(format!("operator {} is not orthogonal to id", ops[a]));
        }
        for b in a + 1..ops.len() {
            if ops[a] == ops[b] && bad_distinct.is_none() {
                bad_distinct = Some(format!("operators {:?} and {:?} coincide", lab[a], lab[b]));
            }
            if ops[a].a() == ops[b].a() && ops[a].b() == ops[b].b() && bad_orth.is_none() {
                bad_orth = Some(format!("{} and {} are proportional", ops[a], ops[b]));
            }
        }
    }
    report.push(DISTINCT, bad_distinct, None);
    report.push(HS_ORTHOGONAL, bad_orth, None);
    report
}

/// Multiplies operator `i` (flattened class order) by `scalars[i]`.
pub fn scale_mcc(u: &MccValue, scalars: &[Complex64]) -> Result<NumericMcc> {
    let n = u.to_numeric();
    let count: usize = n.classes.iter().map(Vec::len).sum();
    if scalars.len() != count {
        return Err(Error::DimensionMismatch { expected: count, found: scalars.len() });
    }
    if let Some(s) = scalars.iter().find(|s| (s.norm() - 1.0).abs() > 1e-12) {
        return Err(Error::NonUnitScalar(s.to_string()));
    }
    let mut it = scalars.iter();
    let classes = n
        .classes
        .iter()
        .map(|c| c.iter().map(|m| m.scale(*it.next().unwrap())).collect())
        .collect();
    Ok(NumericMcc { dimension: n.dimension, classes })
}

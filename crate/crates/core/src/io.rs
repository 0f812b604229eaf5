//! JSON encodings of spreads, MCCs and MUB sets.
//!
//! Keys come out in a fixed order and floats in shortest round-trip form,
//! so identical values always serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::Prime;
use crate::mcc::{MccValue, NumericMcc};
use crate::mub::MubSet;
use crate::pauli::{PauliElement, SymbolicMcc};
use crate::symplectic::{Spread, Subspace};

#[derive(Serialize, Deserialize)]
struct SpreadJson {
    d: u32,
    #[serde(rename = "N")]
    n: usize,
    members: Vec<Vec<Vec<u32>>>,
}

#[derive(Serialize, Deserialize)]
struct PauliJson {
    phase: i64,
    a: Vec<i64>,
    b: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct SymbolicMccJson {
    d: u32,
    #[serde(rename = "N")]
    n: usize,
    phase_order: u32,
    classes: Vec<Vec<PauliJson>>,
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn spread_to_json(s: &Spread) -> Result<String> {
    to_json(&SpreadJson {
        d: s.prime().get(),
        n: s.n(),
        members: s.members().iter().map(|m| m.basis().to_vec()).collect(),
    })
}

pub fn spread_from_json(text: &str) -> Result<Spread> {
    let raw: SpreadJson = parse(text)?;
    let prime = Prime::new(raw.d)?;
    if raw.n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    if let Some(x) = raw.members.iter().flatten().flatten().find(|&&x| x >= raw.d) {
        return Err(Error::Parse(format!("coordinate {x} is not a residue mod {}", raw.d)));
    }
    let members = raw
        .members
        .iter()
        .map(|rows| Subspace::span(prime, 2 * raw.n, rows))
        .collect::<Result<Vec<_>>>()?;
    Spread::new(prime, raw.n, members)
}

pub fn symbolic_mcc_to_json(u: &SymbolicMcc) -> Result<String> {
    let classes = u
        .classes()
        .iter()
        .map(|c| {
            c.iter()
                .map(|p| PauliJson {
                    phase: p.phase() as i64,
                    a: p.a().iter().map(|&x| x as i64).collect(),
                    b: p.b().iter().map(|&x| x as i64).collect(),
                })
                .collect()
        })
        .collect();
    to_json(&SymbolicMccJson { d: u.prime().get(), n: u.n(), phase_order: u.prime().get(), classes })
}

fn symbolic_from_raw(raw: SymbolicMccJson) -> Result<SymbolicMcc> {
    let prime = Prime::new(raw.d)?;
    if raw.phase_order != raw.d {
        return Err(Error::Parse(format!("phase_order {} differs from d = {}", raw.phase_order, raw.d)));
    }
    let classes = raw
        .classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|p| {
                    if p.a.len() != raw.n {
                        return Err(Error::DimensionMismatch { expected: raw.n, found: p.a.len() });
                    }
                    PauliElement::new(prime, p.phase, &p.a, &p.b)
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    SymbolicMcc::new(prime, raw.n, classes)
}

pub fn numeric_mcc_to_json(u: &NumericMcc) -> Result<String> {
    to_json(u)
}

pub fn mcc_to_json(u: &MccValue) -> Result<String> {
    match u {
        MccValue::Symbolic(s) => symbolic_mcc_to_json(s),
        MccValue::Numeric(n) => numeric_mcc_to_json(n),
    }
}

/// Reads either flavor; symbolic files carry `"d"`, numeric ones
/// `"dimension"`.
pub fn mcc_from_json(text: &str) -> Result<MccValue> {
    let value: serde_json::Value = parse(text)?;
    if value.get("d").is_some() {
        let raw: SymbolicMccJson = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(symbolic_from_raw(raw)?.into())
    } else {
        let raw: NumericMcc = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(NumericMcc::new(raw.dimension(), raw.classes().to_vec())?.into())
    }
}

pub fn mub_to_json(b: &MubSet) -> Result<String> {
    to_json(b)
}

pub fn mub_from_json(text: &str) -> Result<MubSet> {
    parse(text)
}

//! Finite closures of the group `A(U)` generated by MCC operators, and the
//! group invariants computed on them: order, exponent, center, derived
//! subgroup, lower central series, height and projective fingerprints.
//!
//! Three closure modes share one breadth-first engine:
//!
//! * exact-symbolic closes Pauli elements with exact `F_d` arithmetic;
//! * numeric-hashed closes matrices, deduplicating through a bucket grid
//!   with neighbor probing and a max-entry distance check;
//! * numeric-projective does the same after rotating each matrix's anchor
//!   entry to the positive reals, so it closes the image modulo scalars.
//!
//! Subgroup computations run in index space over a finished closure.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matcore::{anchor_phase, unitarity_residual, ComplexMatrix};
use crate::mcc::MccValue;
use crate::pauli::{materialize, mul_unchecked, PauliElement};

pub const DEFAULT_CAP: usize = 1_000_000;
pub const DEFAULT_SERIES_DEPTH: usize = 16;
/// Bucket width of the numeric element store.
pub const BUCKET_GRID: f64 = 1e-6;
/// Two stored matrices are equal when every entry differs by less.
pub const ELEMENT_EQ_TOL: f64 = 1e-8;
/// `A^k` counts as scalar when within this of `(tr A^k / D)·id`.
pub const SCALAR_TOL: f64 = 1e-8;
const UNITARY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureMode {
    ExactSymbolic,
    NumericHashed,
    NumericProjective,
}

/// Generators in either representation.
#[derive(Clone, Debug)]
pub enum GeneratorSet {
    Symbolic(Vec<PauliElement>),
    Numeric(Vec<ComplexMatrix>),
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        match self {
            GeneratorSet::Symbolic(g) => g.len(),
            GeneratorSet::Numeric(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All operators of an MCC, in class order.
    pub fn from_mcc(u: &MccValue) -> Self {
        match u {
            MccValue::Symbolic(s) => GeneratorSet::Symbolic(s.operators().cloned().collect()),
            MccValue::Numeric(n) => GeneratorSet::Numeric(n.operators().cloned().collect()),
        }
    }

    fn into_numeric(self) -> Vec<ComplexMatrix> {
        match self {
            GeneratorSet::Symbolic(g) => g.iter().map(materialize).collect(),
            GeneratorSet::Numeric(g) => g,
        }
    }
}

/// A group order or the marker that closure stopped at the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupOrder {
    Finite(usize),
    CapExceeded,
}

impl GroupOrder {
    pub fn finite(self) -> Option<usize> {
        match self {
            GroupOrder::Finite(n) => Some(n),
            GroupOrder::CapExceeded => None,
        }
    }
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Finite(n) => write!(f, "{n}"),
            GroupOrder::CapExceeded => f.write_str("CAP_EXCEEDED"),
        }
    }
}

impl Serialize for GroupOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupOrder::Finite(n) => s.serialize_u64(*n as u64),
            GroupOrder::CapExceeded => s.serialize_str("CAP_EXCEEDED"),
        }
    }
}

/// A value that may be unavailable because a closure hit its cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Known<T> {
    Value(T),
    Unknown,
}

impl<T> Known<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Known::Value(v) => Some(v),
            Known::Unknown => None,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Known<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Known::Value(v) => v.fmt(f),
            Known::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

impl<T: Serialize> Serialize for Known<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Known::Value(v) => v.serialize(s),
            Known::Unknown => s.serialize_str("UNKNOWN"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NilpotenceClass {
    Class(usize),
    NotNilpotentAtDepth(usize),
    Unknown,
}

impl fmt::Display for NilpotenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NilpotenceClass::Class(c) => write!(f, "{c}"),
            NilpotenceClass::NotNilpotentAtDepth(k) => write!(f, "NOT_NILPOTENT_AT_DEPTH({k})"),
            NilpotenceClass::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

impl Serialize for NilpotenceClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NilpotenceClass::Class(c) => s.serialize_u64(*c as u64),
            NilpotenceClass::NotNilpotentAtDepth(k) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("NOT_NILPOTENT_AT_DEPTH", k)?;
                m.end()
            }
            NilpotenceClass::Unknown => s.serialize_str("UNKNOWN"),
        }
    }
}

trait ElementStore {
    type Elem;
    fn len(&self) -> usize;
    fn find(&self, e: &Self::Elem) -> Option<usize>;
    fn push(&mut self, e: Self::Elem) -> usize;
    fn mul_by(&self, i: usize, g: &Self::Elem) -> Self::Elem;
    fn mul_idx(&self, i: usize, j: usize) -> Self::Elem;
    fn inverse_of(&self, i: usize) -> Self::Elem;
}

#[derive(Clone, Debug)]
struct SymbolicStore {
    elements: Vec<PauliElement>,
    index: HashMap<PauliElement, usize>,
}

impl SymbolicStore {
    fn new(identity: PauliElement) -> Self {
        let mut s = SymbolicStore { elements: Vec::new(), index: HashMap::new() };
        s.push(identity);
        s
    }
}

impl ElementStore for SymbolicStore {
    type Elem = PauliElement;

    fn len(&self) -> usize {
        self.elements.len()
    }

    fn find(&self, e: &PauliElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    fn push(&mut self, e: PauliElement) -> usize {
        let i = self.elements.len();
        self.index.insert(e.clone(), i);
        self.elements.push(e);
        i
    }

    fn mul_by(&self, i: usize, g: &PauliElement) -> PauliElement {
        mul_unchecked(&self.elements[i], g)
    }

    fn mul_idx(&self, i: usize, j: usize) -> PauliElement {
        mul_unchecked(&self.elements[i], &self.elements[j])
    }

    fn inverse_of(&self, i: usize) -> PauliElement {
        self.elements[i].inverse()
    }
}

/// Flat matrix arena with a bucketed lookup keyed on a fixed complex
/// linear projection of the entries.
#[derive(Clone, Debug)]
struct NumericStore {
    dim: usize,
    projective: bool,
    weights: Vec<Complex64>,
    data: Vec<Complex64>,
    buckets: HashMap<(i64, i64), Vec<u32>>,
}

impl NumericStore {
    fn new(dim: usize, projective: bool) -> Self {
        let n2 = dim * dim;
        let weights = (0..n2)
            .map(|k| Complex64::from_polar((1.0 + k as f64 * 1e-3) / n2 as f64, k as f64 * 0.754_877_666_2))
            .collect();
        let mut s = NumericStore { dim, projective, weights, data: Vec::new(), buckets: HashMap::new() };
        s.push(ComplexMatrix::identity(dim).data().to_vec());
        s
    }

    fn n2(&self) -> usize {
        self.dim * self.dim
    }

    fn slice(&self, i: usize) -> &[Complex64] {
        let n2 = self.n2();
        &self.data[i * n2..(i + 1) * n2]
    }

    fn key(&self, m: &[Complex64]) -> (i64, i64) {
        let p: Complex64 = m.iter().zip(&self.weights).map(|(a, w)| a * w).sum();
        ((p.re / BUCKET_GRID).round() as i64, (p.im / BUCKET_GRID).round() as i64)
    }

    fn canonical(&self, mut m: Vec<Complex64>) -> Vec<Complex64> {
        if self.projective {
            if let Some(rot) = anchor_phase(&m, BUCKET_GRID) {
                m.iter_mut().for_each(|z| *z *= rot);
            }
        }
        m
    }

    fn product(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let dst = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let x = a[i * n + k];
                if x.re == 0.0 && x.im == 0.0 {
                    continue;
                }
                for (d, y) in dst.iter_mut().zip(&b[k * n..(k + 1) * n]) {
                    *d += x * y;
                }
            }
        }
        self.canonical(out)
    }

    fn matrix(&self, i: usize) -> ComplexMatrix {
        ComplexMatrix::new(self.dim, self.slice(i).to_vec()).expect("stored matrices are square")
    }
}

impl ElementStore for NumericStore {
    type Elem = Vec<Complex64>;

    fn len(&self) -> usize {
        self.data.len() / self.n2()
    }

    fn find(&self, m: &Vec<Complex64>) -> Option<usize> {
        let (kr, ki) = self.key(m);
        for dr in -1..=1 {
            for di in -1..=1 {
                let Some(bucket) = self.buckets.get(&(kr + dr, ki + di)) else { continue };
                for &idx in bucket {
                    let s = self.slice(idx as usize);
                    if s.iter().zip(m).all(|(x, y)| (x - y).norm() < ELEMENT_EQ_TOL) {
                        return Some(idx as usize);
                    }
                }
            }
        }
        None
    }

    fn push(&mut self, m: Vec<Complex64>) -> usize {
        let i = self.len();
        let key = self.key(&m);
        self.data.extend_from_slice(&m);
        self.buckets.entry(key).or_default().push(i as u32);
        i
    }

    fn mul_by(&self, i: usize, g: &Vec<Complex64>) -> Vec<Complex64> {
        self.product(self.slice(i), g)
    }

    fn mul_idx(&self, i: usize, j: usize) -> Vec<Complex64> {
        self.product(self.slice(i), self.slice(j))
    }

    fn inverse_of(&self, i: usize) -> Vec<Complex64> {
        self.canonical(self.matrix(i).adjoint().data().to_vec())
    }
}

/// Breadth-first closure from the identity at index 0. Each generator is
/// skipped if the closure so far already contains it; otherwise every
/// element seen so far is multiplied by it before the search resumes.
/// Returns the indices of the generators actually used, or `None` once
/// the element count passes `cap`.
fn close<S: ElementStore>(store: &mut S, gens: Vec<S::Elem>, cap: usize) -> Option<Vec<usize>> {
    let mut used: Vec<S::Elem> = Vec::new();
    let mut processed = 0usize;
    let insert = |store: &mut S, e: S::Elem| -> bool {
        if store.find(&e).is_none() {
            store.push(e);
        }
        store.len() <= cap
    };
    for g in gens {
        if store.find(&g).is_some() {
            continue;
        }
        for i in 0..processed {
            let p = store.mul_by(i, &g);
            if !insert(store, p) {
                return None;
            }
        }
        used.push(g);
        while processed < store.len() {
            for g in &used {
                let p = store.mul_by(processed, g);
                if !insert(store, p) {
                    return None;
                }
            }
            processed += 1;
        }
    }
    Some(used.iter().map(|g| store.find(g).expect("generator lies in its closure")).collect())
}

#[derive(Clone, Debug)]
enum Store {
    Symbolic(SymbolicStore),
    Numeric(NumericStore),
}

/// The closure of a generating set: identity at index 0, then elements in
/// breadth-first order from the sorted generators.
#[derive(Clone, Debug)]
pub struct GroupClosure {
    mode: ClosureMode,
    store: Store,
    order: GroupOrder,
    generators: Vec<usize>,
    cap: usize,
}

fn sort_key(m: &[Complex64]) -> Vec<(i64, i64)> {
    m.iter()
        .map(|z| ((z.re / BUCKET_GRID).round() as i64, (z.im / BUCKET_GRID).round() as i64))
        .collect()
}

/// Closes `gens` under multiplication. Symbolic generators are
/// materialized for the numeric modes; numeric generators cannot be closed
/// in exact-symbolic mode.
pub fn closure(gens: GeneratorSet, mode: ClosureMode, cap: usize) -> Result<GroupClosure> {
    if cap < gens.len().max(1) {
        return Err(Error::CapExceeded(cap));
    }
    match (mode, gens) {
        (ClosureMode::ExactSymbolic, GeneratorSet::Symbolic(mut g)) => {
            let first = g.first().ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
            let (prime, n) = (first.prime(), first.n());
            if g.iter().any(|p| p.prime() != prime || p.n() != n) {
                return Err(Error::ParameterMismatch);
            }
            g.sort();
            let mut store = SymbolicStore::new(PauliElement::identity(prime, n));
            let generators = close(&mut store, g, cap);
            Ok(finish(mode, Store::Symbolic(store), generators, cap))
        }
        (ClosureMode::ExactSymbolic, GeneratorSet::Numeric(_)) => {
            Err(Error::InvalidParameter("exact-symbolic closure needs Pauli generators".into()))
        }
        (mode, gens) => {
            let g = gens.into_numeric();
            let dim = g.first().map(ComplexMatrix::dim).ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
            if let Some(m) = g.iter().find(|m| m.dim() != dim) {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
            if let Some(k) = g.iter().position(|m| unitarity_residual(m) >= UNITARY_TOL) {
                return Err(Error::NonUnitary(format!("generator {k}")));
            }
            let mut store = NumericStore::new(dim, mode == ClosureMode::NumericProjective);
            let mut g: Vec<Vec<Complex64>> = g.into_iter().map(|m| store.canonical(m.data().to_vec())).collect();
            g.sort_by_cached_key(|m| sort_key(m));
            let generators = close(&mut store, g, cap);
            Ok(finish(mode, Store::Numeric(store), generators, cap))
        }
    }
}

fn finish(mode: ClosureMode, store: Store, generators: Option<Vec<usize>>, cap: usize) -> GroupClosure {
    let len = match &store {
        Store::Symbolic(s) => s.len(),
        Store::Numeric(s) => s.len(),
    };
    let (order, generators) = match generators {
        Some(g) => (GroupOrder::Finite(len), g),
        None => (GroupOrder::CapExceeded, Vec::new()),
    };
    GroupClosure { mode, store, order, generators, cap }
}

/// Closure of all operators of an MCC.
pub fn mcc_closure(u: &MccValue, mode: ClosureMode, cap: usize) -> Result<GroupClosure> {
    let mode = match (mode, u) {
        (ClosureMode::ExactSymbolic, MccValue::Numeric(_)) => ClosureMode::NumericHashed,
        (m, _) => m,
    };
    closure(GeneratorSet::from_mcc(u), mode, cap)
}

impl GroupClosure {
    pub fn mode(&self) -> ClosureMode {
        self.mode
    }

    pub fn order(&self) -> GroupOrder {
        self.order
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Number of elements found (all of them unless the cap was hit).
    pub fn len(&self) -> usize {
        match &self.store {
            Store::Symbolic(s) => s.len(),
            Store::Numeric(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Indices of the irredundant generators the closure was built from.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn symbolic_elements(&self) -> Option<&[PauliElement]> {
        match &self.store {
            Store::Symbolic(s) => Some(&s.elements),
            Store::Numeric(_) => None,
        }
    }

    pub fn element_matrix(&self, i: usize) -> ComplexMatrix {
        match &self.store {
            Store::Symbolic(s) => materialize(&s.elements[i]),
            Store::Numeric(s) => s.matrix(i),
        }
    }

    fn require_finite(&self) -> Result<usize> {
        self.order.finite().ok_or(Error::CapExceeded(self.cap))
    }

    fn lookup(&self, found: Option<usize>) -> usize {
        found.expect("closed group contains every product")
    }

    /// Index of `g_i g_j`.
    pub fn product(&self, i: usize, j: usize) -> usize {
        match &self.store {
            Store::Symbolic(s) => self.lookup(s.find(&s.mul_idx(i, j))),
            Store::Numeric(s) => self.lookup(s.find(&s.mul_idx(i, j))),
        }
    }

    pub fn inverse(&self, i: usize) -> usize {
        match &self.store {
            Store::Symbolic(s) => self.lookup(s.find(&s.inverse_of(i))),
            Store::Numeric(s) => self.lookup(s.find(&s.inverse_of(i))),
        }
    }

    /// `[g, h] = g^{-1} h^{-1} g h`.
    pub fn commutator(&self, g: usize, h: usize) -> usize {
        let gi = self.inverse(g);
        let hi = self.inverse(h);
        self.product(self.product(gi, hi), self.product(g, h))
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut acc = i;
        let mut k = 1;
        while acc != 0 {
            acc = self.product(acc, i);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`, as sorted element indices.
    fn span(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = self.product(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[usize]) -> Result<Subgroup> {
        self.require_finite()?;
        let mut gens: Vec<usize> = Vec::new();
        for &s in seeds {
            if s != 0 && !gens.contains(&s) {
                gens.push(s);
            }
        }
        loop {
            let elements = self.span(&gens);
            let mut fresh = Vec::new();
            for &h in &gens {
                for &x in &self.generators {
                    let c = self.product(self.product(self.inverse(x), h), x);
                    if elements.binary_search(&c).is_err() && !fresh.contains(&c) {
                        fresh.push(c);
                    }
                }
            }
            if fresh.is_empty() {
                return Ok(Subgroup { elements, generators: gens });
            }
            gens.extend(fresh);
        }
    }

    pub fn whole(&self) -> Result<Subgroup> {
        let n = self.require_finite()?;
        Ok(Subgroup { elements: (0..n).collect(), generators: self.generators.clone() })
    }
}

/// A subgroup of a finished closure, by element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Sorted indices into the parent closure.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupInvariants {
    pub order: usize,
    pub exponent: usize,
    pub element_orders: BTreeMap<usize, usize>,
    pub center_order: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Elements commuting with every generator.
pub fn center(g: &GroupClosure) -> Result<Subgroup> {
    let n = g.require_finite()?;
    let elements: Vec<usize> = (0..n)
        .filter(|&x| g.generators.iter().all(|&s| g.product(x, s) == g.product(s, x)))
        .collect();
    Ok(Subgroup { generators: elements.clone(), elements })
}

pub fn group_invariants(g: &GroupClosure) -> Result<GroupInvariants> {
    let n = g.require_finite()?;
    let mut element_orders = BTreeMap::new();
    let mut exponent = 1;
    for i in 0..n {
        let o = g.element_order(i);
        *element_orders.entry(o).or_insert(0) += 1;
        exponent = lcm(exponent, o);
    }
    Ok(GroupInvariants { order: n, exponent, element_orders, center_order: center(g)?.order() })
}

/// Normal closure of the commutators of the generators.
pub fn derived_subgroup(g: &GroupClosure) -> Result<Subgroup> {
    g.require_finite()?;
    let gens = &g.generators;
    let mut seeds = Vec::new();
    for (i, &x) in gens.iter().enumerate() {
        for &y in &gens[i + 1..] {
            seeds.push(g.commutator(x, y));
        }
    }
    g.normal_closure(&seeds)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    /// `|G_1|, |G_2|, ...` with `G_1 = G`.
    pub orders: Vec<usize>,
    pub nilpotence_class: NilpotenceClass,
}

/// `G_{k+1}` is the normal closure of `{[g, x]}` over generators `g` of
/// `G_k` and `x` of `G`.
pub fn lower_central_series(g: &GroupClosure, max_depth: usize) -> Result<SeriesReport> {
    let mut term = g.whole()?;
    let mut orders = vec![term.order()];
    for depth in 1..=max_depth {
        if term.is_trivial() {
            return Ok(SeriesReport { orders, nilpotence_class: NilpotenceClass::Class(depth - 1) });
        }
        let seeds: Vec<usize> = term
            .generators
            .iter()
            .flat_map(|&h| g.generators.iter().map(move |&x| (h, x)))
            .map(|(h, x)| g.commutator(h, x))
            .collect();
        let next = g.normal_closure(&seeds)?;
        if next.order() == term.order() {
            return Ok(SeriesReport { orders, nilpotence_class: NilpotenceClass::NotNilpotentAtDepth(depth) });
        }
        orders.push(next.order());
        term = next;
    }
    let nilpotence_class = if term.is_trivial() {
        NilpotenceClass::Class(max_depth)
    } else {
        NilpotenceClass::NotNilpotentAtDepth(max_depth)
    };
    Ok(SeriesReport { orders, nilpotence_class })
}

/// `|A(U)| / D²` in lowest terms, or unbounded when the closure hit its cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeightResult {
    Rational { num: usize, den: usize },
    UnboundedAtCap,
}

impl HeightResult {
    pub fn from_order(order: GroupOrder, dimension: usize) -> Self {
        match order {
            GroupOrder::Finite(n) => {
                let den = dimension * dimension;
                let g = gcd(n, den);
                HeightResult::Rational { num: n / g, den: den / g }
            }
            GroupOrder::CapExceeded => HeightResult::UnboundedAtCap,
        }
    }

    pub fn is_integral(&self) -> Option<bool> {
        match self {
            HeightResult::Rational { den, .. } => Some(*den == 1),
            HeightResult::UnboundedAtCap => None,
        }
    }

    /// Strictly greater than one.
    pub fn exceeds_one(&self) -> bool {
        match self {
            HeightResult::Rational { num, den } => num > den,
            HeightResult::UnboundedAtCap => true,
        }
    }
}

impl fmt::Display for HeightResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightResult::Rational { num, den: 1 } => write!(f, "{num}"),
            HeightResult::Rational { num, den } => write!(f, "{num}/{den}"),
            HeightResult::UnboundedAtCap => f.write_str("UNBOUNDED_AT_CAP"),
        }
    }
}

impl Serialize for HeightResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HeightResult::Rational { num, den } => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("num", num)?;
                m.serialize_entry("den", den)?;
                m.serialize_entry("integral", &(*den == 1))?;
                m.end()
            }
            HeightResult::UnboundedAtCap => s.serialize_str("UNBOUNDED_AT_CAP"),
        }
    }
}

/// Height of an MCC. Cap overruns, including a cap below the operator
/// count, give [`HeightResult::UnboundedAtCap`].
pub fn height(u: &MccValue, mode: ClosureMode, cap: usize) -> Result<HeightResult> {
    match mcc_closure(u, mode, cap) {
        Ok(g) => Ok(HeightResult::from_order(g.order(), u.dimension())),
        Err(Error::CapExceeded(_)) => Ok(HeightResult::UnboundedAtCap),
        Err(e) => Err(e),
    }
}

/// Least `k >= 1` with `A^k` scalar.
pub fn projective_order(a: &ComplexMatrix, cap: usize) -> Result<usize> {
    if unitarity_residual(a) >= UNITARY_TOL {
        return Err(Error::NonUnitary("projective_order".into()));
    }
    let mut power = a.clone();
    let mut k = 1;
    while power.scalar_residual() >= SCALAR_TOL {
        if k >= cap {
            return Err(Error::CapExceeded(cap));
        }
        power = power.mul(a);
        k += 1;
    }
    Ok(k)
}

/// Scaling-invariant summary of an MCC, computed modulo scalars.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub dimension: usize,
    pub classes: usize,
    #[serde(serialize_with = "serialize_order_multiset")]
    pub projective_orders: BTreeMap<GroupOrder, usize>,
    pub projective_closure_order: GroupOrder,
    pub projective_exponent: Known<usize>,
    pub projective_nilpotence_class: NilpotenceClass,
}

fn serialize_order_multiset<S: Serializer>(
    m: &BTreeMap<GroupOrder, usize>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut out = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        out.serialize_entry(&k.to_string(), v)?;
    }
    out.end()
}

impl Fingerprint {
    pub fn multiset_string(&self) -> String {
        let parts: Vec<String> = self.projective_orders.iter().map(|(k, v)| format!("{k}x{v}")).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

pub fn fingerprint(u: &MccValue, cap: usize) -> Result<Fingerprint> {
    let numeric = u.to_numeric();
    let mut projective_orders = BTreeMap::new();
    for m in numeric.operators() {
        let o = match projective_order(m, cap) {
            Ok(k) => GroupOrder::Finite(k),
            Err(Error::CapExceeded(_)) => GroupOrder::CapExceeded,
            Err(e) => return Err(e),
        };
        *projective_orders.entry(o).or_insert(0) += 1;
    }
    let gens = GeneratorSet::Numeric(numeric.operators().cloned().collect());
    let (order, exponent, class) = match closure(gens, ClosureMode::NumericProjective, cap) {
        Ok(g) if g.order().finite().is_some() => {
            let exponent = group_invariants(&g)?.exponent;
            let class = lower_central_series(&g, DEFAULT_SERIES_DEPTH)?.nilpotence_class;
            (g.order(), Known::Value(exponent), class)
        }
        Ok(_) | Err(Error::CapExceeded(_)) => (GroupOrder::CapExceeded, Known::Unknown, NilpotenceClass::Unknown),
        Err(e) => return Err(e),
    };
    Ok(Fingerprint {
        dimension: numeric.dimension(),
        classes: numeric.classes().len(),
        projective_orders,
        projective_closure_order: order,
        projective_exponent: exponent,
        projective_nilpotence_class: class,
    })
}

/// A proof of non-isomorphism modulo scaling: an invariant on which the two
/// fingerprints disagree.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    NonIsomorphic { invariant: String, left: serde_json::Value, right: serde_json::Value },
    Inconclusive,
}

impl Certificate {
    pub fn is_certificate(&self) -> bool {
        matches!(self, Certificate::NonIsomorphic { .. })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::NonIsomorphic { invariant, left, right } => {
                write!(f, "non-isomorphic: {invariant} differs ({left} vs {right})")
            }
            Certificate::Inconclusive => f.write_str("INCONCLUSIVE"),
        }
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Certificate::NonIsomorphic { invariant, left, right } => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("invariant", invariant)?;
                m.serialize_entry("left", left)?;
                m.serialize_entry("right", right)?;
                m.end()
            }
            Certificate::Inconclusive => s.serialize_str("INCONCLUSIVE"),
        }
    }
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("fingerprint fields serialize")
}

/// Compares the fields known on both sides, in declaration order.
pub fn compare_fingerprints(f1: &Fingerprint, f2: &Fingerprint) -> Certificate {
    let cert = |name: &str, l: serde_json::Value, r: serde_json::Value| Certificate::NonIsomorphic {
        invariant: name.to_string(),
        left: l,
        right: r,
    };
    if f1.dimension != f2.dimension {
        return cert("dimension", json(&f1.dimension), json(&f2.dimension));
    }
    if f1.classes != f2.classes {
        return cert("classes", json(&f1.classes), json(&f2.classes));
    }
    if f1.projective_orders != f2.projective_orders {
        let l = serde_json::to_value(Wrap(&f1.projective_orders)).expect("multiset serializes");
        let r = serde_json::to_value(Wrap(&f2.projective_orders)).expect("multiset serializes");
        return cert("projective_orders", l, r);
    }
    if let (GroupOrder::Finite(a), GroupOrder::Finite(b)) = (f1.projective_closure_order, f2.projective_closure_order) {
        if a != b {
            return cert("projective_closure_order", json(&a), json(&b));
        }
    }
    if let (Known::Value(a), Known::Value(b)) = (f1.projective_exponent, f2.projective_exponent) {
        if a != b {
            return cert("projective_exponent", json(&a), json(&b));
        }
    }
    if let (NilpotenceClass::Class(a), NilpotenceClass::Class(b)) =
        (f1.projective_nilpotence_class, f2.projective_nilpotence_class)
    {
        if a != b {
            return cert("projective_nilpotence_class", json(&a), json(&b));
        }
    }
    Certificate::Inconclusive
}

struct Wrap<'a>(&'a BTreeMap<GroupOrder, usize>);

impl Serialize for Wrap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_order_multiset(self.0, s)
    }
}

pub fn certify_nonisomorphic(u1: &MccValue, u2: &MccValue, cap: usize) -> Result<Certificate> {
    if u1.dimension() != u2.dimension() {
        return Err(Error::DimensionMismatch { expected: u1.dimension(), found: u2.dimension() });
    }
    Ok(compare_fingerprints(&fingerprint(u1, cap)?, &fingerprint(u2, cap)?))
}

/// Everything `mublab analyze` reports for one MCC.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub order: GroupOrder,
    pub exponent: Known<usize>,
    pub center_order: Known<usize>,
    pub nilpotence_class: NilpotenceClass,
    pub height: HeightResult,
    pub fingerprint: Fingerprint,
}

impl AnalysisReport {
    pub fn cap_exceeded(&self) -> bool {
        self.order == GroupOrder::CapExceeded
            || self.fingerprint.projective_closure_order == GroupOrder::CapExceeded
            || self.fingerprint.projective_orders.contains_key(&GroupOrder::CapExceeded)
    }
}

/// Closure (exact for symbolic input), invariants, height and fingerprint.
pub fn analyze(u: &MccValue, cap: usize) -> Result<AnalysisReport> {
    let g = match mcc_closure(u, ClosureMode::ExactSymbolic, cap) {
        Ok(g) => Some(g),
        Err(Error::CapExceeded(_)) => None,
        Err(e) => return Err(e),
    };
    let order = g.as_ref().map_or(GroupOrder::CapExceeded, GroupClosure::order);
    let (exponent, center_order, nilpotence_class) = match g.filter(|g| g.order().finite().is_some()) {
        Some(g) => {
            let inv = group_invariants(&g)?;
            let class = lower_central_series(&g, DEFAULT_SERIES_DEPTH)?.nilpotence_class;
            (Known::Value(inv.exponent), Known::Value(inv.center_order), class)
        }
        None => (Known::Unknown, Known::Unknown, NilpotenceClass::Unknown),
    };
    Ok(AnalysisReport {
        order,
        exponent,
        center_order,
        nilpotence_class,
        height: HeightResult::from_order(order, u.dimension()),
        fingerprint: fingerprint(u, cap)?,
    })
}

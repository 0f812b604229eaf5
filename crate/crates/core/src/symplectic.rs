//! The symplectic polar space `W(2N-1, d)`: alternating forms, totally
//! isotropic subspaces and spreads.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ff::{self, all_vectors, build_extension, ExtElement, ExtField, Fp, FpVector, Prime};
use crate::report::ValidationReport;

/// A non-degenerate alternating form on `F_d^{2N}` given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    prime: Prime,
    n: usize,
    gram: Vec<Vec<u32>>,
}

impl SymplecticForm {
    /// Validates that `gram` is alternating and invertible.
    pub fn from_gram(prime: Prime, gram: Vec<Vec<u32>>) -> Result<Self> {
        let m = gram.len();
        if m == 0 || m % 2 != 0 || gram.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidParameter("gram matrix must be square of even size".into()));
        }
        for i in 0..m {
            if gram[i][i] != 0 {
                return Err(Error::InvalidParameter("gram matrix has nonzero diagonal".into()));
            }
            for j in 0..m {
                if prime.add(gram[i][j], gram[j][i]) != 0 {
                    return Err(Error::InvalidParameter("gram matrix is not antisymmetric".into()));
                }
            }
        }
        if ff::invert_matrix(prime, &gram).is_none() {
            return Err(Error::InvalidParameter("form is degenerate".into()));
        }
        Ok(SymplecticForm { prime, n: m / 2, gram })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Half the vector dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn gram(&self) -> &[Vec<u32>] {
        &self.gram
    }

    pub fn eval_raw(&self, u: &[u32], v: &[u32]) -> u32 {
        let p = self.prime;
        let mut acc = 0;
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 && vj != 0 {
                    acc = p.add(acc, p.mul(ui, p.mul(g, vj)));
                }
            }
        }
        acc
    }

    pub fn is_nondegenerate(&self) -> bool {
        ff::invert_matrix(self.prime, &self.gram).is_some()
    }
}

/// `(X_0 Y_1 - X_1 Y_0) + (X_2 Y_3 - X_3 Y_2) + ...` on `F_d^{2N}`.
pub fn canonical_form(d: u32, n: usize) -> Result<SymplecticForm> {
    let prime = Prime::new(d)?;
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let mut gram = vec![vec![0u32; 2 * n]; 2 * n];
    for k in 0..n {
        gram[2 * k][2 * k + 1] = 1;
        gram[2 * k + 1][2 * k] = prime.neg(1);
    }
    Ok(SymplecticForm { prime, n, gram })
}

pub fn form_eval(form: &SymplecticForm, u: &FpVector, v: &FpVector) -> Result<Fp> {
    for w in [u, v] {
        if w.modulus() != form.prime {
            return Err(Error::ModulusMismatch(form.prime.get(), w.modulus().get()));
        }
        if w.len() != form.dim() {
            return Err(Error::DimensionMismatch { expected: form.dim(), found: w.len() });
        }
    }
    Ok(Fp::new(form.eval_raw(u.coords(), v.coords()) as i64, form.prime))
}

/// A linear subspace held by its reduced row-echelon basis, which is unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Vec<Vec<u32>>,
    prime: Prime,
    ambient: usize,
}

impl Subspace {
    pub fn span(prime: Prime, ambient: usize, rows: &[Vec<u32>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: r.len() });
        }
        let mut basis: Vec<Vec<u32>> =
            rows.iter().map(|r| r.iter().map(|&x| x % prime.get()).collect()).collect();
        ff::row_reduce(prime, &mut basis);
        Ok(Subspace { basis, prime, ambient })
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Vector (not projective) dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// All nonzero vectors of the subspace, in coefficient counting order.
    pub fn nonzero_vectors(&self) -> Vec<Vec<u32>> {
        let p = self.prime;
        all_vectors(p, self.dim())
            .skip(1)
            .map(|coeffs| {
                let mut v = vec![0u32; self.ambient];
                for (c, row) in coeffs.iter().zip(&self.basis) {
                    if *c == 0 {
                        continue;
                    }
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x = p.add(*x, p.mul(*c, r));
                    }
                }
                v
            })
            .collect()
    }

    /// The projective points of the subspace, normalized and sorted.
    pub fn points(&self) -> Vec<Vec<u32>> {
        let mut pts: Vec<Vec<u32>> = self
            .nonzero_vectors()
            .into_iter()
            .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
            .collect();
        pts.sort();
        pts
    }

    pub fn flattened(&self) -> Vec<u32> {
        self.basis.iter().flatten().copied().collect()
    }
}

pub fn is_totally_isotropic(form: &SymplecticForm, w: &Subspace) -> Result<bool> {
    if w.ambient_dim() != form.dim() {
        return Err(Error::DimensionMismatch { expected: form.dim(), found: w.ambient_dim() });
    }
    let b = w.basis();
    Ok((0..b.len()).all(|i| (i + 1..b.len()).all(|j| form.eval_raw(&b[i], &b[j]) == 0)))
}

/// A set of maximal totally isotropic subspaces meant to partition the points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spread {
    prime: Prime,
    n: usize,
    members: Vec<Subspace>,
}

impl Spread {
    pub fn new(prime: Prime, n: usize, members: Vec<Subspace>) -> Result<Self> {
        if let Some(m) = members.iter().find(|m| m.ambient_dim() != 2 * n || m.prime() != prime) {
            return Err(Error::InvalidSpread(format!(
                "member lives in F_{}^{}, expected F_{}^{}",
                m.prime(),
                m.ambient_dim(),
                prime,
                2 * n
            )));
        }
        Ok(Spread { prime, n, members })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Subspace> {
        self.members
    }
}

/// Coordinates for the trace-form model `F_q^2` that turn
/// `Tr(x1 y2 - x2 y1)` into the canonical form: `x` is expanded in the basis
/// `1, t, ..., t^(N-1)` via the dual basis and `y` in the dual basis itself.
struct TraceModel {
    field: ExtField,
    /// dual[i] satisfies Tr(t^j * dual[i]) = [i == j].
    dual: Vec<ExtElement>,
}

impl TraceModel {
    fn new(d: u32, n: usize) -> Result<Self> {
        let field = build_extension(d, n)?;
        let p = field.prime();
        let powers: Vec<ExtElement> = (0..n).map(|i| field.basis_element(i)).collect();
        let gram: Vec<Vec<u32>> = powers
            .iter()
            .map(|a| powers.iter().map(|b| field.trace(&field.mul(a, b)).value()).collect())
            .collect();
        let inv = ff::invert_matrix(p, &gram).expect("trace form is non-degenerate");
        let dual = (0..n)
            .map(|j| {
                (0..n).fold(field.zero(), |acc, k| {
                    field.add(&acc, &field.scale(inv[k][j], &powers[k]))
                })
            })
            .collect();
        Ok(TraceModel { field, dual })
    }

    /// Maps `(x, y)` to `(X_0, Y_0, X_1, Y_1, ...)` with `X_i = Tr(x dual_i)`
    /// and `Y_i = Tr(y t^i)`.
    fn coordinates(&self, x: &ExtElement, y: &ExtElement) -> Vec<u32> {
        let f = &self.field;
        let n = f.degree();
        let mut v = Vec::with_capacity(2 * n);
        for i in 0..n {
            v.push(f.trace(&f.mul(x, &self.dual[i])).value());
            v.push(f.trace(&f.mul(y, &f.basis_element(i))).value());
        }
        v
    }
}

/// The regular spread `{(x, m x)} ∪ {(0, y)}` of `F_{d^N}^2`, written in
/// coordinates where it is totally isotropic for [`canonical_form`].
/// Members are sorted by their echelon bases.
pub fn desarguesian_spread(d: u32, n: usize) -> Result<Spread> {
    let prime = Prime::new(d)?;
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let model = TraceModel::new(d, n)?;
    let f = &model.field;
    let basis: Vec<ExtElement> = (0..n).map(|i| f.basis_element(i)).collect();
    let mut members = Vec::with_capacity(f.order() + 1);
    for m in f.elements() {
        let rows: Vec<Vec<u32>> =
            basis.iter().map(|x| model.coordinates(x, &f.mul(&m, x))).collect();
        members.push(Subspace::span(prime, 2 * n, &rows)?);
    }
    let rows: Vec<Vec<u32>> = basis.iter().map(|y| model.coordinates(&f.zero(), y)).collect();
    members.push(Subspace::span(prime, 2 * n, &rows)?);
    members.sort();
    Spread::new(prime, n, members)
}

pub const ISOTROPY: &str = "isotropy";
pub const MEMBER_DIMENSION: &str = "member_dimension";
pub const PARTITION: &str = "partition";

/// Checks isotropy, member dimensions and the exact-partition property.
pub fn validate_spread(form: &SymplecticForm, spread: &Spread) -> ValidationReport {
    let mut report = ValidationReport::new("spread");
    if spread.prime() != form.prime() || spread.n() != form.n() {
        report.push_flag(
            "parameters",
            false,
            Some(format!(
                "spread over (d={}, N={}) but form over (d={}, N={})",
                spread.prime(),
                spread.n(),
                form.prime(),
                form.n()
            )),
        );
        return report;
    }

    let bad_iso = spread.members().iter().enumerate().find_map(|(i, m)| {
        let b = m.basis();
        (0..b.len()).flat_map(|r| (r + 1..b.len()).map(move |s| (r, s))).find_map(|(r, s)| {
            let v = form.eval_raw(&b[r], &b[s]);
            (v != 0).then(|| format!("member {i}: F({:?}, {:?}) = {v}", b[r], b[s]))
        })
    });
    report.push(ISOTROPY, bad_iso, None);

    let bad_dim = spread.members().iter().enumerate().find_map(|(i, m)| {
        (m.dim() != form.n()).then(|| format!("member {i} has dimension {}, expected {}", m.dim(), form.n()))
    });
    report.push(MEMBER_DIMENSION, bad_dim, None);

    let p = form.prime();
    let mut owner: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut partition_err = None;
    'outer: for (i, m) in spread.members().iter().enumerate() {
        for v in m.nonzero_vectors() {
            if let Some(j) = owner.insert(v.clone(), i) {
                partition_err = Some(format!("vector {v:?} lies in members {j} and {i}"));
                break 'outer;
            }
        }
    }
    if partition_err.is_none() {
        let total = (p.get() as usize).pow(form.dim() as u32) - 1;
        if owner.len() != total {
            let missing = all_vectors(p, form.dim()).skip(1).find(|v| !owner.contains_key(v));
            partition_err = Some(format!(
                "{} of {} nonzero vectors covered; first uncovered {:?}",
                owner.len(),
                total,
                missing.unwrap_or_default()
            ));
        }
    }
    report.push(PARTITION, partition_err, None);
    report
}

/// All `k`-dimensional subspaces of `F_d^len`, sorted by echelon basis.
pub fn all_subspaces(prime: Prime, len: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    fn choose(start: usize, len: usize, k: usize, pivots: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if pivots.len() == k {
            f(pivots);
            return;
        }
        for c in start..len {
            pivots.push(c);
            choose(c + 1, len, k, pivots, f);
            pivots.pop();
        }
    }
    choose(0, len, k, &mut pivots, &mut |piv: &[usize]| {
        // free slots: (row, col) with col > pivot of row and col not a pivot
        let free: Vec<(usize, usize)> = piv
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| (pc + 1..len).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
            .collect();
        for fill in all_vectors(prime, free.len()) {
            let mut rows = vec![vec![0u32; len]; k];
            for (r, &pc) in piv.iter().enumerate() {
                rows[r][pc] = 1;
            }
            for (&(r, c), &x) in free.iter().zip(&fill) {
                rows[r][c] = x;
            }
            out.push(Subspace { basis: rows, prime, ambient: len });
        }
    });
    out.sort();
    out
}

/// Every totally isotropic subspace of vector dimension `N`, sorted.
pub fn maximal_isotropic_subspaces(form: &SymplecticForm) -> Vec<Subspace> {
    all_subspaces(form.prime(), form.dim(), form.n())
        .into_iter()
        .filter(|w| is_totally_isotropic(form, w).unwrap_or(false))
        .collect()
}

pub const ENUMERATION_GUARD: usize = 9;

/// All spreads of the polar space, in lexicographic order of their sorted
/// member lists, truncated to `limit`. Requires `d^N <= 9`.
pub fn enumerate_spreads(form: &SymplecticForm, limit: usize) -> Result<Vec<Spread>> {
    let q = (form.prime().get() as usize).pow(form.n() as u32);
    if q > ENUMERATION_GUARD {
        return Err(Error::GuardViolation(format!(
            "exhaustive spread enumeration needs d^N <= {ENUMERATION_GUARD}, got {q}"
        )));
    }
    let subspaces = maximal_isotropic_subspaces(form);
    let mut points: Vec<Vec<u32>> = all_vectors(form.prime(), form.dim())
        .skip(1)
        .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
        .collect();
    points.sort();
    let index: HashMap<&[u32], usize> = points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let covers: Vec<Vec<usize>> = subspaces
        .iter()
        .map(|s| s.points().iter().map(|p| index[p.as_slice()]).collect())
        .collect();
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    for (s, pts) in covers.iter().enumerate() {
        for &pt in pts {
            candidates[pt].push(s);
        }
    }

    let mut solutions = Vec::new();
    let mut covered = vec![false; points.len()];
    let mut chosen = Vec::new();
    exact_cover(&covers, &candidates, &mut covered, &mut chosen, &mut solutions);

    for s in solutions.iter_mut() {
        s.sort_unstable();
    }
    solutions.sort();
    solutions.truncate(limit);
    solutions
        .into_iter()
        .map(|sol| {
            Spread::new(form.prime(), form.n(), sol.into_iter().map(|i| subspaces[i].clone()).collect())
        })
        .collect()
}

/// Backtracking exact cover: always branch on the smallest uncovered point.
fn exact_cover(
    covers: &[Vec<usize>],
    candidates: &[Vec<usize>],
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    solutions: &mut Vec<Vec<usize>>,
) {
    let Some(pt) = covered.iter().position(|&c| !c) else {
        solutions.push(chosen.clone());
        return;
    };
    for &s in &candidates[pt] {
        if covers[s].iter().any(|&q| covered[q]) {
            continue;
        }
        for &q in &covers[s] {
            covered[q] = true;
        }
        chosen.push(s);
        exact_cover(covers, candidates, covered, chosen, solutions);
        chosen.pop();
        for &q in &covers[s] {
            covered[q] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec(d: u32, c: &[i64]) -> FpVector {
        FpVector::new(Prime::new(d).unwrap(), c)
    }

    #[test]
    fn canonical_grams() {
        assert_eq!(canonical_form(2, 1).unwrap().gram(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(canonical_form(3, 1).unwrap().gram(), &[vec![0, 1], vec![2, 0]]);
        for (d, n) in [(2, 1), (3, 2), (5, 3)] {
            let f = canonical_form(d, n).unwrap();
            assert!(f.is_nondegenerate());
            let mut e0 = vec![0i64; 2 * n];
            let mut e1 = vec![0i64; 2 * n];
            e0[0] = 1;
            e1[1] = 1;
            assert_eq!(form_eval(&f, &vec(d, &e0), &vec(d, &e1)).unwrap().value(), 1);
        }
        assert!(canonical_form(4, 1).is_err());
    }

    #[test]
    fn evaluation() {
        let f = canonical_form(3, 1).unwrap();
        assert_eq!(form_eval(&f, &vec(3, &[1, 0]), &vec(3, &[0, 1])).unwrap().value(), 1);
        let f2 = canonical_form(3, 2).unwrap();
        assert_eq!(form_eval(&f2, &vec(3, &[1, 0, 0, 0]), &vec(3, &[0, 0, 0, 1])).unwrap().value(), 0);
        assert!(form_eval(&f2, &vec(3, &[1, 0]), &vec(3, &[0, 1])).is_err());
        for u in all_vectors(Prime::new(3).unwrap(), 4) {
            let u = FpVector::from_residues(Prime::new(3).unwrap(), u);
            assert!(form_eval(&f2, &u, &u).unwrap().is_zero());
        }
    }

    #[test]
    fn from_gram_rejects_bad_matrices() {
        let p = Prime::new(3).unwrap();
        assert!(SymplecticForm::from_gram(p, vec![vec![1, 1], vec![2, 0]]).is_err());
        assert!(SymplecticForm::from_gram(p, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(SymplecticForm::from_gram(p, vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(SymplecticForm::from_gram(p, vec![vec![0, 2], vec![1, 0]]).is_ok());
    }

    #[test]
    fn isotropy_examples() {
        let p = Prime::new(2).unwrap();
        let f = canonical_form(2, 2).unwrap();
        let a = Subspace::span(p, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let b = Subspace::span(p, 4, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        assert!(!is_totally_isotropic(&f, &a).unwrap());
        assert!(is_totally_isotropic(&f, &b).unwrap());
        for v in all_vectors(p, 4).skip(1) {
            let line = Subspace::span(p, 4, &[v]).unwrap();
            assert!(is_totally_isotropic(&f, &line).unwrap());
        }
        let wrong = Subspace::span(p, 2, &[vec![1, 0]]).unwrap();
        assert!(is_totally_isotropic(&f, &wrong).is_err());
    }

    #[test]
    fn point_spreads() {
        for d in [2u32, 3, 5, 7] {
            let s = desarguesian_spread(d, 1).unwrap();
            assert_eq!(s.members().len(), d as usize + 1);
            let f = canonical_form(d, 1).unwrap();
            assert!(validate_spread(&f, &s).passed());
            assert_eq!(enumerate_spreads(&f, usize::MAX).unwrap().len(), 1);
        }
    }

    #[test]
    fn spread_validation_failures() {
        let f = canonical_form(3, 2).unwrap();
        let s = desarguesian_spread(3, 2).unwrap();
        let report = validate_spread(&f, &s);
        assert!(report.passed(), "{report}");
        assert_eq!(s.members().len(), 10);

        let mut dup = s.clone().into_members();
        dup[1] = dup[0].clone();
        let report = validate_spread(&f, &Spread::new(s.prime(), 2, dup).unwrap());
        assert!(!report.check(PARTITION).unwrap().passed);
        assert!(report.check(ISOTROPY).unwrap().passed);

        let mut bad = s.clone().into_members();
        bad[0] = Subspace::span(s.prime(), 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let report = validate_spread(&f, &Spread::new(s.prime(), 2, bad).unwrap());
        assert!(!report.check(ISOTROPY).unwrap().passed);
    }

    #[test]
    fn enumeration_guard_and_limit() {
        assert!(matches!(
            enumerate_spreads(&canonical_form(11, 1).unwrap(), 1),
            Err(Error::GuardViolation(_))
        ));
        assert!(enumerate_spreads(&canonical_form(5, 2).unwrap(), 1).is_err());
        let f = canonical_form(2, 2).unwrap();
        let one = enumerate_spreads(&f, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(validate_spread(&f, &one[0]).passed());
    }

    #[test]
    fn enumerated_spreads_are_valid_and_sorted() {
        for (d, n) in [(2, 2), (3, 2)] {
            let f = canonical_form(d, n).unwrap();
            let all = enumerate_spreads(&f, usize::MAX).unwrap();
            assert!(!all.is_empty());
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            for s in &all {
                assert!(validate_spread(&f, s).passed());
            }
            assert!(all.contains(&desarguesian_spread(d, n).unwrap()));
        }
    }
}

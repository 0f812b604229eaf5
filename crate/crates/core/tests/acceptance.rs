//! Acceptance suite. Runs every criterion in sequence, prints one
//! PASS/FAIL line each, and exits non-zero if any fails.

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mublab::cli::beta_noninjective_demo;
use mublab::ff::{all_vectors, Prime};
use mublab::grouplab::{
    center, closure, derived_subgroup, fingerprint, group_invariants, height, lower_central_series, mcc_closure,
    ClosureMode, GeneratorSet, GroupOrder, HeightResult, NilpotenceClass, DEFAULT_CAP,
};
use mublab::matcore::{commutator_residual, hs_inner};
use mublab::mcc::{scale_mcc, validate_mcc, MccValue, NumericMcc};
use mublab::mub::{alpha, beta, mub_distance, mub_residuals, MubSet};
use mublab::pauli::{gamma_inverse, materialize, pauli_generators, pauli_mul, PauliElement, SymbolicMcc};
use mublab::symplectic::{canonical_form, desarguesian_spread, enumerate_spreads, maximal_isotropic_subspaces};
use mublab::{ComplexMatrix, ToleranceConfig};

const PARAMS: [(u32, usize); 5] = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)];
const SMALL_PARAMS: [(u32, usize); 7] = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3)];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn pr(d: u32) -> Prime {
    Prime::new(d).unwrap()
}

fn pauli_mcc(d: u32, n: usize) -> SymbolicMcc {
    gamma_inverse(&desarguesian_spread(d, n).unwrap()).unwrap()
}

fn pauli_mub(d: u32, n: usize, cfg: &ToleranceConfig) -> MubSet {
    beta(&pauli_mcc(d, n).into(), cfg).unwrap()
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t < limit, format!("{:.1}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (d, n) in PARAMS {
        let du = d as usize;
        let g = closure(GeneratorSet::Symbolic(pauli_generators(pr(d), n)), ClosureMode::ExactSymbolic, DEFAULT_CAP)
            .unwrap();
        let inv = group_invariants(&g).unwrap();
        let z = center(&g).unwrap();
        let dg = derived_subgroup(&g).unwrap();
        let series = lower_central_series(&g, 8).unwrap();
        let quotient = closure(
            GeneratorSet::Symbolic(pauli_generators(pr(d), n)),
            ClosureMode::NumericProjective,
            DEFAULT_CAP,
        )
        .unwrap();
        let expected_exponent = if d == 2 { 4 } else { du };
        let checks = [
            ("order", inv.order == du.pow(2 * n as u32 + 1)),
            ("center", inv.center_order == du && z.order() == du),
            ("derived = center", dg.elements() == z.elements()),
            ("exponent", inv.exponent == expected_exponent),
            ("class", series.nilpotence_class == NilpotenceClass::Class(2)),
            ("P/Z", quotient.order() == GroupOrder::Finite(du.pow(2 * n as u32))),
        ];
        for (name, ok) in checks {
            if !ok {
                failures.push(format!("({d},{n}) {name}"));
            }
        }
    }
    let (fast, time) = within(start, Duration::from_secs(60));
    outcome(failures.is_empty() && fast, format!("failures {failures:?}, {time}"))
}

fn criterion_2_and_3() -> (Outcome, Outcome) {
    let start = Instant::now();
    let cfg = ToleranceConfig::default();
    let mut ok2 = true;
    let mut ok3 = true;
    let mut worst = (0.0f64, 0.0f64);
    let mut worst_round = 0.0f64;
    let mut mubs = Vec::new();
    for (d, n) in PARAMS {
        let b = pauli_mub(d, n, &cfg);
        mubs.push((d, n, b));
    }
    let (fast, time) = within(start, Duration::from_secs(30));
    for (d, n, b) in &mubs {
        let dim = (*d as usize).pow(*n as u32);
        let res = mub_residuals(b);
        worst.0 = worst.0.max(res.max_unbiasedness());
        worst.1 = worst.1.max(res.max_orthonormality());
        ok2 &= b.dimension() == dim && b.bases().len() == dim + 1 && b.bases().iter().all(|x| x.len() == dim);
        ok2 &= res.max_unbiasedness() < 1e-8 && res.max_orthonormality() < 1e-9;

        let round = beta(&alpha(b).unwrap().into(), &cfg).unwrap();
        match mub_distance(&round, b, &cfg) {
            Some(dist) => {
                worst_round = worst_round.max(dist);
                ok3 &= dist < 1e-8;
            }
            None => ok3 = false,
        }
    }
    (
        outcome(
            ok2 && fast,
            format!("D in {{2,3,5,4,9}}: max unbiasedness {:.2e}, max orthonormality {:.2e}, {time}", worst.0, worst.1),
        ),
        outcome(ok3, format!("max canonical distance {worst_round:.2e}")),
    )
}

fn criterion_4() -> Outcome {
    let cfg = ToleranceConfig::default();
    let mut ok = true;
    let mut worst_power = 0.0f64;
    let mut worst_hs = 0.0f64;
    for (d, n) in PARAMS {
        let u = alpha(&pauli_mub(d, n, &cfg)).unwrap();
        let dim = u.dimension();
        ok &= u.classes().iter().all(|c| c.len() == dim - 1);
        for class in u.classes() {
            for (j, op) in class.iter().enumerate() {
                let diff = class[0].pow(j as u32 + 1).max_abs_diff(op);
                worst_power = worst_power.max(diff);
            }
        }
        let ops: Vec<&ComplexMatrix> = u.operators().collect();
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                worst_hs = worst_hs.max(hs_inner(ops[i], ops[j]).unwrap().norm());
            }
        }
        ok &= validate_mcc(&u.into(), &cfg).passed();
    }
    ok &= worst_power < 1e-9 && worst_hs < 1e-8;
    outcome(ok, format!("max |U_j - U_1^j| {worst_power:.2e}, max |<U,V>_HS| {worst_hs:.2e}"))
}

/// Some pair of operators fails to commute; a proof the group is nonabelian.
fn has_noncommuting_pair(u: &NumericMcc) -> bool {
    let ops: Vec<&ComplexMatrix> = u.operators().collect();
    ops.iter().enumerate().any(|(i, a)| ops[i + 1..].iter().any(|b| commutator_residual(a, b).unwrap() > 1e-6))
}

fn constructed_mccs(cfg: &ToleranceConfig) -> Vec<(String, MccValue)> {
    let mut out = Vec::new();
    for (d, n) in PARAMS {
        out.push((format!("pauli({d},{n})"), pauli_mcc(d, n).into()));
    }
    for (d, n) in [(2u32, 2usize), (3, 2)] {
        for (k, s) in enumerate_spreads(&canonical_form(d, n).unwrap(), usize::MAX).unwrap().iter().enumerate() {
            out.push((format!("spread{k}({d},{n})"), gamma_inverse(s).unwrap().into()));
        }
    }
    for (d, n) in PARAMS {
        out.push((format!("alpha({d},{n})"), alpha(&pauli_mub(d, n, cfg)).unwrap().into()));
    }
    out
}

fn criterion_5() -> Outcome {
    let cfg = ToleranceConfig::default();
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, u) in constructed_mccs(&cfg) {
        let h = height(&u, ClosureMode::ExactSymbolic, DEFAULT_CAP).unwrap();
        ok &= h.exceeds_one();
        if let MccValue::Symbolic(s) = &u {
            let d = s.prime().get() as usize;
            ok &= h == HeightResult::Rational { num: d, den: 1 };
        }
        let nonabelian = match mcc_closure(&u, ClosureMode::ExactSymbolic, DEFAULT_CAP) {
            Ok(g) if g.order().finite().is_some() => {
                let class = lower_central_series(&g, 16).unwrap().nilpotence_class;
                !matches!(class, NilpotenceClass::Class(0) | NilpotenceClass::Class(1))
            }
            _ => has_noncommuting_pair(&u.to_numeric()),
        };
        ok &= nonabelian;
        if name.starts_with("alpha") || name.starts_with("pauli") {
            notes.push(format!("{name}: rho={h}"));
        }
    }
    outcome(ok, notes.join(", "))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cfg = ToleranceConfig { eq_tol: 1e-8, ..ToleranceConfig::default() };
    let r = beta_noninjective_demo(3, 2, DEFAULT_CAP, &cfg).unwrap();
    let all_threes = r.fingerprint_pauli.projective_orders.keys().all(|&k| k == GroupOrder::Finite(3));
    let has_nine = r.fingerprint_alpha.projective_orders.contains_key(&GroupOrder::Finite(9));
    let (fast, time) = within(start, Duration::from_secs(300));
    outcome(
        r.passed && r.mub_equal && all_threes && has_nine && fast,
        format!(
            "mub distance {:.2e}, {}, Pauli {} vs alpha {}, {time}",
            r.mub_distance.unwrap_or(f64::INFINITY),
            r.certificate,
            r.fingerprint_pauli.multiset_string(),
            r.fingerprint_alpha.multiset_string()
        ),
    )
}

/// Independent counts of totally isotropic planes and spreads of
/// `W(3, d)`: isotropy straight from the interleaved form, planes as
/// bitmasks of nonzero vectors, and a plain increasing-index search for
/// disjoint covers.
fn brute_force_spread_count(d: u32) -> (usize, usize) {
    let vecs: Vec<[u32; 4]> = (1..d.pow(4))
        .map(|mut x| {
            let mut v = [0u32; 4];
            for c in v.iter_mut().rev() {
                *c = x % d;
                x /= d;
            }
            v
        })
        .collect();
    let index = |v: [u32; 4]| -> usize { vecs.iter().position(|w| *w == v).unwrap() };
    let form = |u: &[u32; 4], v: &[u32; 4]| -> u32 {
        (u[0] * v[1] + d * d - u[1] * v[0] + u[2] * v[3] + d * d - u[3] * v[2]) % d
    };
    let mut planes: HashSet<u128> = HashSet::new();
    for u in &vecs {
        for v in &vecs {
            if form(u, v) != 0 {
                continue;
            }
            let mut mask = 0u128;
            for s in 0..d {
                for t in 0..d {
                    let w: [u32; 4] = std::array::from_fn(|k| (s * u[k] + t * v[k]) % d);
                    if w != [0; 4] {
                        mask |= 1 << index(w);
                    }
                }
            }
            if mask.count_ones() == d * d - 1 {
                planes.insert(mask);
            }
        }
    }
    let planes: Vec<u128> = planes.into_iter().collect();
    let full: u128 = (1u128 << vecs.len()) - 1;
    fn search(planes: &[u128], from: usize, covered: u128, full: u128) -> usize {
        if covered == full {
            return 1;
        }
        (from..planes.len())
            .filter(|&i| planes[i] & covered == 0)
            .map(|i| search(planes, i + 1, covered | planes[i], full))
            .sum()
    }
    (planes.len(), search(&planes, 0, 0, full))
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();

    let mut agree = 0;
    for (d, n) in SMALL_PARAMS {
        let mut sets = vec![pauli_generators(pr(d), n)];
        let mcc = pauli_mcc(d, n);
        sets.push(mcc.operators().cloned().collect());
        sets.extend(mcc.classes().iter().cloned());
        for gens in sets {
            let sym = closure(GeneratorSet::Symbolic(gens.clone()), ClosureMode::ExactSymbolic, DEFAULT_CAP).unwrap();
            let num = closure(GeneratorSet::Symbolic(gens), ClosureMode::NumericHashed, DEFAULT_CAP).unwrap();
            ok &= sym.order() == num.order() && sym.order() != GroupOrder::CapExceeded;
            agree += 1;
        }
    }
    notes.push(format!("{agree} generating sets agree"));

    for d in [2u32, 3] {
        let form = canonical_form(d, 2).unwrap();
        let lines = maximal_isotropic_subspaces(&form).len();
        let found = enumerate_spreads(&form, usize::MAX).unwrap().len();
        let (oracle_lines, oracle) = brute_force_spread_count(d);
        ok &= found == oracle && lines == oracle_lines;
        notes.push(format!("W(3,{d}): {lines} lines vs oracle {oracle_lines}, {found} spreads vs oracle {oracle}"));
    }

    let mut worst = 0.0f64;
    let mut pairs = 0usize;
    for (d, n) in SMALL_PARAMS {
        let p = pr(d);
        let elements: Vec<PauliElement> = (0..d)
            .flat_map(|c| {
                all_vectors(p, 2 * n).map(move |v| PauliElement::from_symplectic_vector(p, c, &v)).collect::<Vec<_>>()
            })
            .collect();
        let mats: Vec<ComplexMatrix> = elements.iter().map(materialize).collect();
        for (x, mx) in elements.iter().zip(&mats) {
            for (y, my) in elements.iter().zip(&mats) {
                let lhs = materialize(&pauli_mul(x, y).unwrap());
                worst = worst.max(lhs.max_abs_diff(&mx.mul(my)));
                pairs += 1;
            }
        }
    }
    ok &= worst < 1e-12;
    notes.push(format!("homomorphism on {pairs} pairs, max error {worst:.2e}"));
    outcome(ok, notes.join(", "))
}

fn criterion_8() -> Outcome {
    let cfg = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut ok = true;
    let mut count = 0;
    let cap = 20_000;
    let mut mccs: Vec<(String, MccValue)> = Vec::new();
    for (d, n) in PARAMS {
        mccs.push((format!("pauli({d},{n})"), pauli_mcc(d, n).into()));
        mccs.push((format!("alpha({d},{n})"), alpha(&pauli_mub(d, n, &cfg)).unwrap().into()));
    }
    let mut failures = Vec::new();
    for (name, u) in &mccs {
        let base = fingerprint(u, cap).unwrap();
        let verdicts = validate_mcc(u, &cfg).verdicts();
        for _ in 0..100 {
            let scalars: Vec<Complex64> = (0..u.operator_count())
                .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
                .collect();
            let scaled: MccValue = scale_mcc(u, &scalars).unwrap().into();
            let same = fingerprint(&scaled, cap).unwrap() == base && validate_mcc(&scaled, &cfg).verdicts() == verdicts;
            if !same {
                failures.push(name.clone());
            }
            ok &= same;
            count += 1;
        }
    }
    outcome(ok, format!("{count} rescalings over {} MCCs (cap {cap}), mismatches {failures:?}", mccs.len()))
}

fn main() {
    let mut results: BTreeMap<usize, (&str, Outcome)> = BTreeMap::new();
    let mut record = |k: usize, name: &'static str, o: Outcome| {
        println!("criterion {k} [{name}]: {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        results.insert(k, (name, o));
    };
    record(1, "Pauli group structure", criterion_1());
    let (c2, c3) = criterion_2_and_3();
    record(2, "maximal MUBs from beta", c2);
    record(3, "alpha/beta round trip", c3);
    record(4, "alpha spectral structure", criterion_4());
    record(5, "heights and nonabelian closures", criterion_5());
    record(6, "beta non-injectivity", criterion_6());
    record(7, "oracle equivalences", criterion_7());
    record(8, "scaling invariance", criterion_8());
    let failed: Vec<usize> = results.iter().filter(|(_, (_, o))| !o.passed).map(|(k, _)| *k).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}

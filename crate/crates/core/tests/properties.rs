use num_complex::Complex64;
use proptest::prelude::*;

use mublab::ff::{build_extension, FpVector, Prime};
use mublab::grouplab::{closure, ClosureMode, GeneratorSet};
use mublab::matcore::ComplexVector;
use mublab::mcc::{scale_mcc, validate_mcc, MccValue};
use mublab::mub::{beta, mub_equal, Basis, MubSet};
use mublab::pauli::{gamma_inverse, materialize, pauli_commutator_exponent, pauli_generators, pauli_mul, PauliElement};
use mublab::symplectic::{canonical_form, desarguesian_spread, form_eval};
use mublab::ToleranceConfig;

const SMALL_PRIMES: [u32; 4] = [2, 3, 5, 7];

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(SMALL_PRIMES.to_vec()).prop_map(|d| Prime::new(d).unwrap())
}

fn pauli(p: Prime, n: usize) -> impl Strategy<Value = PauliElement> {
    let d = p.get() as i64;
    (0..d, prop::collection::vec(0..d, n), prop::collection::vec(0..d, n))
        .prop_map(move |(c, a, b)| PauliElement::new(p, c, &a, &b).unwrap())
}

fn pauli_triple() -> impl Strategy<Value = (PauliElement, PauliElement, PauliElement)> {
    (prime(), 1usize..=2).prop_flat_map(|(p, n)| (pauli(p, n), pauli(p, n), pauli(p, n)))
}

fn phases(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(0.0..std::f64::consts::TAU, len)
        .prop_map(|v| v.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(p in prime(), x in 0u32..97, y in 0u32..97, z in 0u32..97) {
        let (x, y, z) = (x % p.get(), y % p.get(), z % p.get());
        prop_assert_eq!(p.mul(x, p.add(y, z)), p.add(p.mul(x, y), p.mul(x, z)));
        prop_assert_eq!(p.add(x, p.neg(x)), 0);
        if x != 0 {
            prop_assert_eq!(p.mul(x, p.inv(x).unwrap()), 1);
        }
    }

    #[test]
    fn trace_is_additive(p in prime(), n in 1usize..=3, xs in prop::collection::vec(0i64..7, 3), ys in prop::collection::vec(0i64..7, 3)) {
        let f = build_extension(p.get(), n).unwrap();
        let x = f.element(&xs[..n]);
        let y = f.element(&ys[..n]);
        let lhs = f.trace(&f.add(&x, &y));
        prop_assert_eq!(lhs, f.trace(&x).add(f.trace(&y)).unwrap());
    }

    #[test]
    fn form_is_alternating(
        (p, n, u, v) in (prime(), 1usize..=3).prop_flat_map(|(p, n)| {
            let d = p.get() as i64;
            (Just(p), Just(n), prop::collection::vec(0..d, 2 * n), prop::collection::vec(0..d, 2 * n))
        })
    ) {
        let form = canonical_form(p.get(), n).unwrap();
        let (u, v) = (FpVector::new(p, &u), FpVector::new(p, &v));
        prop_assert!(form_eval(&form, &u, &u).unwrap().is_zero());
        prop_assert_eq!(form_eval(&form, &u, &v).unwrap(), form_eval(&form, &v, &u).unwrap().neg());
    }

    #[test]
    fn pauli_product_is_associative((x, y, z) in pauli_triple()) {
        let left = pauli_mul(&pauli_mul(&x, &y).unwrap(), &z).unwrap();
        let right = pauli_mul(&x, &pauli_mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(pauli_mul(&x, &x.inverse()).unwrap().is_identity());
    }

    #[test]
    fn materialize_is_a_homomorphism((x, y, _) in pauli_triple()) {
        let lhs = materialize(&pauli_mul(&x, &y).unwrap());
        let rhs = materialize(&x).mul(&materialize(&y));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn commutator_matches_symplectic_form((x, y, _) in pauli_triple()) {
        let p = x.prime();
        let e = pauli_commutator_exponent(&x, &y).unwrap();
        let xy = pauli_mul(&x, &y).unwrap();
        let yx = pauli_mul(&y, &x).unwrap();
        prop_assert_eq!(xy.a(), yx.a());
        prop_assert_eq!(xy.b(), yx.b());
        prop_assert_eq!(p.add(xy.phase(), e.value()), yx.phase());
        let form = canonical_form(p.get(), x.n()).unwrap();
        let sx = FpVector::from_residues(p, x.symplectic_vector());
        let sy = FpVector::from_residues(p, y.symplectic_vector());
        prop_assert_eq!(form_eval(&form, &sx, &sy).unwrap(), e);
    }

    #[test]
    fn symbolic_and_numeric_closures_agree(
        (p, mask) in (prop::sample::select(vec![2u32, 3]), 1u32..16)
    ) {
        let gens: Vec<PauliElement> = pauli_generators(Prime::new(p).unwrap(), 2)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, g)| g)
            .collect();
        let sym = closure(GeneratorSet::Symbolic(gens.clone()), ClosureMode::ExactSymbolic, 10_000).unwrap();
        let num = closure(GeneratorSet::Symbolic(gens), ClosureMode::NumericHashed, 10_000).unwrap();
        prop_assert_eq!(sym.order(), num.order());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn validation_ignores_unit_rescaling(s in phases(8)) {
        let cfg = ToleranceConfig::default();
        let u: MccValue = gamma_inverse(&desarguesian_spread(3, 1).unwrap()).unwrap().into();
        let scaled: MccValue = scale_mcc(&u, &s).unwrap().into();
        prop_assert_eq!(validate_mcc(&scaled, &cfg).verdicts(), validate_mcc(&u, &cfg).verdicts());
        prop_assert!(mub_equal(&beta(&scaled, &cfg).unwrap(), &beta(&u, &cfg).unwrap(), &cfg));
    }

    #[test]
    fn mub_equality_ignores_phases_and_order(s in phases(20), perm in Just(()).prop_perturb(|_, mut rng| {
        let mut idx: Vec<usize> = (0..5).collect();
        for i in (1..idx.len()).rev() {
            idx.swap(i, rng.random_range(0..=i));
        }
        idx
    })) {
        let cfg = ToleranceConfig::default();
        let u: MccValue = gamma_inverse(&desarguesian_spread(2, 2).unwrap()).unwrap().into();
        let b = beta(&u, &cfg).unwrap();
        let mut k = 0;
        let bases: Vec<Basis> = perm
            .iter()
            .map(|&i| {
                let mut vs: Vec<ComplexVector> = b.bases()[i]
                    .vectors()
                    .iter()
                    .map(|v| { k += 1; v.scale(s[k - 1]) })
                    .collect();
                vs.rotate_left(i % 4);
                Basis::new(vs)
            })
            .collect();
        prop_assert!(mub_equal(&b, &MubSet::new(4, bases), &cfg));
    }
}

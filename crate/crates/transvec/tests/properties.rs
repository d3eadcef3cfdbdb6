//! Randomized algebraic invariants, with shrinking on failure.

use proptest::prelude::*;

use transvec::circuit::{
    parse_circuit_text, reduce_weight, synthesize_trotter, Circuit, Gate, ReduceStrategy,
};
use transvec::code::{builtin_833, LogicalEffect};
use transvec::f2::BitVec;
use transvec::noise::wilson_interval;
use transvec::oracle::{dense_circuit, dense_pauli};
use transvec::pauli::{format_pauli, parse_pauli, PhasedPauli};
use transvec::propagate::conjugate_circuit;

fn pauli(n: usize) -> impl Strategy<Value = PhasedPauli> {
    (
        proptest::collection::vec(any::<bool>(), n),
        proptest::collection::vec(any::<bool>(), n),
        0u8..4,
    )
        .prop_map(move |(xs, zs, kappa)| {
            let mut x = BitVec::zeros(n);
            let mut z = BitVec::zeros(n);
            for (i, b) in xs.into_iter().enumerate() {
                x.set(i, b);
            }
            for (i, b) in zs.into_iter().enumerate() {
                z.set(i, b);
            }
            PhasedPauli::from_xz(x, z, kappa)
        })
}

fn sized_pauli(max_n: usize) -> impl Strategy<Value = PhasedPauli> {
    (1..=max_n).prop_flat_map(pauli)
}

fn clifford_gate(n: usize) -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0..n).prop_map(Gate::H),
        (0..n).prop_map(Gate::Hy),
        (0..n).prop_map(Gate::Phase),
        (0..n, 0..n)
            .prop_filter("distinct qubits", |(a, b)| a != b)
            .prop_map(|(control, target)| Gate::Cnot { control, target }),
    ]
}

fn clifford_circuit(max_n: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(clifford_gate(n), 0..12)
            .prop_map(move |gates| Circuit { n, gates })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn format_parse_roundtrip(p in sized_pauli(12)) {
        let text = format_pauli(&p);
        prop_assert_eq!(parse_pauli(&text, p.n()).unwrap(), p);
    }

    #[test]
    fn hermitian_part_is_a_fixed_point(p in sized_pauli(12)) {
        let h = p.hermitian_part();
        prop_assert!(h.kappa() % 2 == 0);
        prop_assert_eq!(h.hermitian_part(), h.clone());
        // dropping the i factor clears the low bit of the phase exponent
        prop_assert_eq!(h, p.with_kappa(p.kappa() & 2));
        prop_assert_eq!(p.hermitian_sign(), if p.kappa() & 2 == 0 { 1 } else { -1 });
    }

    #[test]
    fn wilson_interval_brackets_the_rate(shots in 1u64..1_000_000, frac in 0.0f64..=1.0) {
        let failures = ((shots as f64) * frac) as u64;
        let (lo, hi) = wilson_interval(failures, shots);
        let rate = failures as f64 / shots as f64;
        prop_assert!((0.0..=rate).contains(&lo));
        prop_assert!((rate..=1.0).contains(&hi));
        if failures == 0 {
            prop_assert_eq!(lo, 0.0);
        }
        if failures == shots {
            prop_assert_eq!(hi, 1.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_matches_the_dense_oracle(
        (p, q) in (1usize..=3).prop_flat_map(|n| (pauli(n), pauli(n)))
    ) {
        let lhs = dense_pauli(&p.mul(&q)).unwrap();
        let rhs = dense_pauli(&p).unwrap().mul(&dense_pauli(&q).unwrap());
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn clifford_conjugation_matches_the_dense_oracle(
        (circuit, p) in clifford_circuit(4).prop_flat_map(|c| {
            let n = c.n;
            (Just(c), pauli(n))
        })
    ) {
        let image = conjugate_circuit(&p, &circuit).unwrap();
        let single = image.as_single().expect("Clifford images are single terms");
        let u = dense_circuit(&circuit).unwrap();
        let want = u.conjugate(&dense_pauli(&p).unwrap());
        prop_assert!(dense_pauli(&single).unwrap().approx_eq(&want, 1e-10));
    }

    #[test]
    fn coset_reduction_preserves_the_logical_class(
        logical in pauli(3).prop_filter("nonidentity", |p| !(p.x().is_zero() && p.z().is_zero())),
        strategy in prop_oneof![Just(ReduceStrategy::Exhaustive), Just(ReduceStrategy::Greedy)],
    ) {
        let code = builtin_833();
        let lifted = code.lift(&logical).unwrap();
        let reduced = reduce_weight(&lifted, &code, strategy).unwrap();
        prop_assert!(reduced.weight() <= lifted.weight());
        prop_assert!(code.syndrome(&reduced).is_zero());
        prop_assert_eq!(code.logical_effect(&lifted.mul(&reduced)), LogicalEffect::Trivial);
    }

    #[test]
    fn synthesized_circuit_text_roundtrips(
        p in sized_pauli(8).prop_filter("nonidentity", |p| !(p.x().is_zero() && p.z().is_zero())),
        theta in -6.0f64..6.0,
    ) {
        let circuit = synthesize_trotter(&p, theta).unwrap();
        let parsed = parse_circuit_text(&circuit.to_text()).unwrap();
        prop_assert_eq!(parsed, circuit);
    }
}

use dh_core::density::{diagonal_probabilities, purity_condition, reconstruct_density};
use dh_core::oracle::{self, expectation_dense, pauli_sum_matrix, reduced_density, DenseState};
use dh_core::protocols::dependency_trace_circuit;
use dh_core::relative::{condition, decohere, renormalized_bloch, RelativeContext};
use dh_core::verify::{case_rng, random_clifford_circuit};
use dh_core::{
    evolve_circuit, parse_circuit, string_mul, Circuit, ComplexDyadic, Dyadic, Error, PauliLetter, PauliString,
    PauliSum,
};
use proptest::prelude::*;

fn letters(n: usize) -> impl Strategy<Value = Vec<PauliLetter>> {
    proptest::collection::vec((0usize..4).prop_map(PauliLetter::from_index), n)
}

fn circuit(seed: u64, n: usize, depth: usize) -> Circuit {
    random_clifford_circuit(&mut case_rng(seed, 0), n, depth)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn string_product_matches_dense(n in 1usize..=4, pa in 0u8..4, pb in 0u8..4, seed in any::<u64>()) {
        let mut rng = case_rng(seed, 1);
        let a: Vec<PauliLetter> = (0..n).map(|_| PauliLetter::from_index(rand::Rng::gen_range(&mut rng, 0..4))).collect();
        let b: Vec<PauliLetter> = (0..n).map(|_| PauliLetter::from_index(rand::Rng::gen_range(&mut rng, 0..4))).collect();
        let sa = PauliString::new(pa, a);
        let sb = PauliString::new(pb, b);
        let prod = string_mul(&sa, &sb).unwrap();
        let dense = pauli_sum_matrix(&sa.to_sum()) * pauli_sum_matrix(&sb.to_sum());
        prop_assert!(oracle::max_deviation(&pauli_sum_matrix(&prod.to_sum()), &dense) < 1e-12);
    }

    #[test]
    fn sum_product_is_bilinear(a in letters(3), b in letters(3), c in letters(3)) {
        let pa = PauliSum::term(ComplexDyadic::ONE, a);
        let pb = PauliSum::term(ComplexDyadic::I, b);
        let pc = PauliSum::term(ComplexDyadic::from_int(-2), c);
        let left = pa.try_mul(&(&pb + &pc)).unwrap();
        let right = &pa.try_mul(&pb).unwrap() + &pa.try_mul(&pc).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn descriptor_expectations_match_oracle(seed in any::<u64>(), n in 1usize..=4, depth in 0usize..25) {
        let c = circuit(seed, n, depth);
        let set = evolve_circuit(&c).unwrap();
        let state = DenseState::evolve(&c);
        for idx in oracle::all_letter_sequences(n).into_iter().take(64) {
            let (re, im) = set.expectation(&idx).unwrap().to_f64_pair();
            let dense = expectation_dense(&state, &PauliSum::term(ComplexDyadic::ONE, idx)).unwrap();
            prop_assert!(close(re, dense.re) && close(im, dense.im));
        }
    }

    #[test]
    fn density_matches_partial_trace(seed in any::<u64>(), n in 2usize..=4, depth in 0usize..25) {
        let c = circuit(seed, n, depth);
        let set = evolve_circuit(&c).unwrap();
        let state = DenseState::evolve(&c);
        let keep = [n - 1, 0];
        let exact = reconstruct_density(&set, &keep).unwrap();
        prop_assert!(oracle::max_deviation(&exact.dense(), &reduced_density(&state, &keep)) < 1e-9);
        let diag = diagonal_probabilities(&set, &keep).unwrap();
        prop_assert_eq!(&diag, &exact.diagonal());
        let dense = reduced_density(&state, &keep);
        for (k, p) in diag.iter().enumerate() {
            prop_assert!(close(p.to_f64(), dense[(k, k)].re));
        }
    }

    #[test]
    fn purity_identity(seed in any::<u64>(), n in 2usize..=5, depth in 0usize..30) {
        let set = evolve_circuit(&circuit(seed, n, depth)).unwrap();
        let r = purity_condition(&set, (0, n - 1)).unwrap();
        prop_assert_eq!(r.trace_rho_squared, (Dyadic::ONE + r.sum).halve(2));
        prop_assert_eq!(r.mixed, r.sum < Dyadic::from_int(3));
    }

    #[test]
    fn relative_matches_conditional_expectation(
        seed in any::<u64>(),
        n in 2usize..=4,
        depth in 0usize..25,
        r in proptest::array::uniform3(-1i128..=1),
        w in 1i128..=2,
    ) {
        let c = circuit(seed, n, depth);
        let set = evolve_circuit(&c).unwrap();
        let state = DenseState::evolve(&c);
        let r = r.map(|v| Dyadic::new(v, 1));
        let ctx = RelativeContext::element(0, Dyadic::new(w, 1), r).unwrap();
        let e = ctx.operator().embed(n, &[0]).unwrap();
        let p = expectation_dense(&state, &e).unwrap().re;
        prop_assert!(close(p, ctx.outcome_probability(&set).unwrap().to_f64()));
        // Unnormalized: ⟨q'_i⟩ = 2 Tr(ρ σ_i E) + (1 - w) ⟨σ_i⟩.
        let d = set.descriptor(n - 1);
        let rel = condition(d, &ctx, &set).unwrap();
        let one_minus_w = 1.0 - ctx.weight().to_f64();
        for (k, l) in PauliLetter::NON_IDENTITY.iter().enumerate() {
            let sigma = PauliSum::single(n, n - 1, *l);
            let with_e = expectation_dense(&state, &sigma.try_mul(&e).unwrap()).unwrap().re;
            let plain = expectation_dense(&state, &sigma).unwrap().re;
            let got = rel.components()[k].vacuum_expectation().re.to_f64();
            prop_assert!(close(got, 2.0 * with_e + one_minus_w * plain));
            if p > 1e-9 {
                match renormalized_bloch(d, &ctx, &set) {
                    Ok(b) if w == 2 => prop_assert!(close(b[k].to_f64(), with_e / p)),
                    Ok(_) | Err(Error::Inexact(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn supports_grow_locally(seed in any::<u64>(), n in 1usize..=6, depth in 0usize..40) {
        let report = dependency_trace_circuit(&circuit(seed, n, depth)).unwrap();
        prop_assert!(report.locality_ok, "{:?}", report.violations);
    }

    #[test]
    fn decoherence_is_idempotent(seed in any::<u64>(), n in 1usize..=3, depth in 0usize..20) {
        let set = evolve_circuit(&circuit(seed, n, depth)).unwrap();
        let qubits: Vec<usize> = (0..n).collect();
        let once = decohere(&set, &qubits).unwrap();
        let twice = decohere(&once, &qubits).unwrap();
        let a = reconstruct_density(&once, &qubits).unwrap();
        prop_assert_eq!(&a, &reconstruct_density(&twice, &qubits).unwrap());
        prop_assert_eq!(a.diagonal(), reconstruct_density(&set, &qubits).unwrap().diagonal());
    }

    #[test]
    fn canonical_text_round_trips(seed in any::<u64>(), n in 1usize..=4, depth in 0usize..20) {
        let c = circuit(seed, n, depth);
        prop_assert_eq!(&parse_circuit(&c.to_text()).unwrap(), &c);
        let set = evolve_circuit(&c).unwrap();
        for d in set.descriptors() {
            for comp in d.components() {
                prop_assert_eq!(&PauliSum::parse_with_qubits(&comp.canonical(), n).unwrap(), comp);
            }
        }
    }
}

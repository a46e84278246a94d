use std::f64::consts::PI;

use gie_core::qcore::linalg::{c, kron};
use gie_core::qcore::random::{
    haar_unitary, random_density_matrix, random_product_state, random_pure_state,
};
use gie_core::{
    bell_states, coherent_state, concurrence, is_ppt, linear_entropy, negativity,
    normalized_linear_entropy, pre_beam_splitter_state, pure_concurrence, witness_expectation,
    BipartitionSpec, CompositeSpace, DensityMatrix, FockSpace, Operator, PhaseSet, PureState,
    Tensor,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn two_qubits() -> CompositeSpace {
    CompositeSpace::qubits(2).unwrap()
}

fn split() -> BipartitionSpec {
    BipartitionSpec::two_qubits()
}

/// Consistency conditions every generated two-qubit state must meet.
fn check_consistency(rho: &DensityMatrix) {
    let n = negativity(rho, &split()).unwrap();
    let ppt = is_ppt(rho, &split()).unwrap();
    assert_eq!(ppt, n < 1e-10, "negativity {n:e}");
    for t in bell_states() {
        if witness_expectation(rho, &t).unwrap() < 0.0 {
            assert!(n > 0.0);
        }
    }
    let s = linear_entropy(rho);
    assert!((-1e-12..=0.75 + 1e-12).contains(&s));
}

#[test]
fn product_and_bell_concurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let q = CompositeSpace::new(vec![2]).unwrap();
        let prod = random_pure_state(&q, &mut rng).tensor(&random_pure_state(&q, &mut rng));
        assert!(concurrence(&prod.density_matrix()).unwrap() < 1e-7);
        assert!(pure_concurrence(&prod).unwrap() < 1e-12);
    }
    for b in bell_states() {
        assert!((concurrence(&b.density_matrix()).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn pre_beam_splitter_concurrence_grid() {
    for i in 0..20 {
        for j in 0..20 {
            let phi1 = 2.0 * PI * i as f64 / 20.0;
            let dphi = 2.0 * PI * j as f64 / 20.0;
            let psi = pre_beam_splitter_state(&PhaseSet::from_delta(phi1, dphi));
            let closed = ((dphi - phi1) / 2.0).sin().abs();
            let pure = pure_concurrence(&psi).unwrap();
            let wootters = concurrence(&psi.density_matrix()).unwrap();
            assert!((pure - closed).abs() < 1e-10, "({phi1}, {dphi})");
            assert!(
                (wootters - closed).abs() < 1e-10,
                "({phi1}, {dphi}): {wootters} vs {closed}"
            );
        }
    }
}

#[test]
fn separable_mixture_has_zero_negativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let states: Vec<DensityMatrix> = (0..50)
        .map(|_| random_product_state(&two_qubits(), &mut rng))
        .collect();
    let weights = vec![1.0 / 50.0; 50];
    let mix = DensityMatrix::mixture(&weights, &states).unwrap();
    assert!(negativity(&mix, &split()).unwrap() < 1e-10);
    assert!(is_ppt(&mix, &split()).unwrap());
    check_consistency(&mix);
}

#[test]
fn bell_negativity_and_ppt() {
    let rho = bell_states()[0].density_matrix();
    assert!((negativity(&rho, &split()).unwrap() - 0.5).abs() < 1e-12);
    assert!(!is_ppt(&rho, &split()).unwrap());
    let prod = PureState::basis(two_qubits(), 0).unwrap().density_matrix();
    assert!(is_ppt(&prod, &split()).unwrap());
}

#[test]
fn negativity_invariant_under_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let space = CompositeSpace::new(vec![2, 3]).unwrap();
    let cut = BipartitionSpec::new(space.clone(), &[0]).unwrap();
    for _ in 0..50 {
        let rho = random_pure_state(&space, &mut rng).density_matrix();
        let u = Operator::new(
            space.clone(),
            kron(&haar_unitary(2, &mut rng), &haar_unitary(3, &mut rng)),
        )
        .unwrap();
        let before = negativity(&rho, &cut).unwrap();
        let after = negativity(&u.conjugate(&rho).unwrap(), &cut).unwrap();
        assert!((before - after).abs() < 1e-10);
    }
}

#[test]
fn ppt_agrees_with_negativity_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut entangled, mut separable) = (0, 0);
    for k in 0..500 {
        let rho = match k % 3 {
            0 => random_density_matrix(&two_qubits(), &mut rng),
            1 => random_pure_state(&two_qubits(), &mut rng).density_matrix(),
            _ => random_product_state(&two_qubits(), &mut rng),
        };
        check_consistency(&rho);
        if is_ppt(&rho, &split()).unwrap() {
            separable += 1;
        } else {
            entangled += 1;
        }
    }
    assert!(entangled > 50 && separable > 50);
}

#[test]
fn linear_entropy_examples() {
    let pure = PureState::basis(two_qubits(), 3).unwrap().density_matrix();
    assert!(linear_entropy(&pure).abs() < 1e-15);
    let half = DensityMatrix::maximally_mixed(CompositeSpace::new(vec![2]).unwrap());
    assert!((linear_entropy(&half) - 0.5).abs() < 1e-15);
}

/// `(|0>|0> + |1>|sqrt(xi)>)/√2`: the mass marginal carries the overlap
/// `e^{-xi/2}`; its rescaled linear entropy is `1 - e^{-xi}`.
#[test]
fn two_branch_marginal_entropy() {
    for (xi, frozen) in [(0.01, 0.009950166250831893), (0.25, 0.22119921692859512)] {
        let fock = FockSpace::new(24).unwrap();
        let q = CompositeSpace::new(vec![2]).unwrap();
        let zero = PureState::basis(q.clone(), 0).unwrap();
        let one = PureState::basis(q, 1).unwrap();
        let a = zero.tensor(&coherent_state(0.0, &fock).unwrap());
        let b = one.tensor(&coherent_state(f64::sqrt(xi), &fock).unwrap());
        let psi = PureState::normalized(
            a.space().clone(),
            (a.amplitudes() + b.amplitudes()) * c(1.0),
        )
        .unwrap();
        let mass = psi.reduced(&[0]).unwrap();
        let want = 1.0 - (-xi).exp();
        assert!((want - frozen).abs() < 1e-16);
        assert!((normalized_linear_entropy(&mass) - want).abs() < 1e-10);
        assert!((linear_entropy(&mass) - want / 2.0).abs() < 1e-10);
    }
}

#[test]
fn witness_examples() {
    for t in bell_states() {
        assert!((witness_expectation(&t.density_matrix(), &t).unwrap() + 0.5).abs() < 1e-14);
    }
    let zero = PureState::basis(two_qubits(), 0).unwrap().density_matrix();
    assert!(witness_expectation(&zero, &bell_states()[0]).unwrap().abs() < 1e-15);
}

#[test]
fn witness_nonnegative_on_separable_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for k in 0..500 {
        let rho = if k % 2 == 0 {
            random_product_state(&two_qubits(), &mut rng)
        } else {
            let states: Vec<DensityMatrix> = (0..4)
                .map(|_| random_product_state(&two_qubits(), &mut rng))
                .collect();
            DensityMatrix::mixture(&[0.1, 0.2, 0.3, 0.4], &states).unwrap()
        };
        for t in bell_states() {
            assert!(witness_expectation(&rho, &t).unwrap() >= -1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn wootters_matches_pure_formula(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_pure_state(&two_qubits(), &mut rng);
        let w = concurrence(&psi.density_matrix()).unwrap();
        let p = pure_concurrence(&psi).unwrap();
        prop_assert!((w - p).abs() < 1e-10, "{} vs {}", w, p);
    }

    #[test]
    fn entropy_bounds_any_dimension(seed in any::<u64>(), d0 in 2usize..4, d1 in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = CompositeSpace::new(vec![d0, d1]).unwrap();
        let rho = random_density_matrix(&space, &mut rng);
        let s = linear_entropy(&rho);
        let d = space.total_dim() as f64;
        prop_assert!(s >= -1e-12 && s <= 1.0 - 1.0 / d + 1e-12);
        let cut = BipartitionSpec::new(space, &[0]).unwrap();
        let n = negativity(&rho, &cut).unwrap();
        prop_assert_eq!(is_ppt(&rho, &cut).unwrap(), n < 1e-10);
    }
}

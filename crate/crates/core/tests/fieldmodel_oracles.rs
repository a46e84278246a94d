use std::f64::consts::PI;

use gie_core::fieldmodel::CycleRoute;
use gie_core::qcore::linalg::{c, kron, CMatrix};
use gie_core::qcore::random::random_density_matrix;
use gie_core::{
    branch_phase_concurrence, coherent_state, concurrence, dephase_field, displacement_operator,
    entanglement_breaking_threshold, field_cycle, field_cycle_auto, field_cycle_with_dephasing,
    field_cycle_with_route, linear_entropy, mass_field_entanglement, negativity,
    number_phase_operator, partial_trace, planck_ratio_phase, xi_from_phase, BipartitionSpec,
    CompositeSpace, CouplingMatrix, DensityMatrix, DephasedCycle, DephasingSpec, FockSpace,
    Operator, PhysicalConstants,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn xi_from_phase_examples() {
    assert_eq!(xi_from_phase(0.0, 0.3).unwrap().xi, 0.0);
    assert!((xi_from_phase(0.01, 0.01).unwrap().xi - 1.0).abs() < 1e-15);
    assert!(xi_from_phase(0.01, 0.0).is_err());
}

#[test]
fn uncoupled_cycle() {
    let fock = FockSpace::new(16).unwrap();
    let r = field_cycle(&CouplingMatrix::zero(), 1e-3, &fock, 0.0).unwrap();
    assert!(r.concurrence_final < 1e-12);
    assert!((r.field_return_fidelity - 1.0).abs() < 1e-12);
    assert!(r.mass_field_entropy_e1.abs() < 1e-12);
    for s in &r.stage_states {
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }
}

/// The pattern `(0, pi, pi, 0)/w` cancels in `phi00 + phi11 - phi01 - phi10`
/// and leaves the masses in a product state; `(0, 0, 0, pi)/w` is the
/// maximally entangling one.
#[test]
fn symmetric_pattern_is_not_entangling() {
    let w = 1e-3;
    let xis = CouplingMatrix::from_phases([0.0, PI, PI, 0.0], w).unwrap();
    let r = field_cycle_auto(&xis, w, 0.0).unwrap();
    assert!(r.target_concurrence < 1e-12);
    assert!(r.concurrence_final < 5e-3);
}

fn cycle_errors(w: f64) -> (f64, f64, f64) {
    let xis = CouplingMatrix::maximal(w).unwrap();
    let r = field_cycle_auto(&xis, w, 0.0).unwrap();
    for s in &r.stage_states {
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }
    (
        1.0 - r.concurrence_final,
        1.0 - r.field_return_fidelity,
        r.mass_field_entropy_e1,
    )
}

#[test]
fn small_w_limit_converges_linearly() {
    let mut rows = Vec::new();
    for w in [1e-2, 1e-3, 1e-4] {
        let (ce, fe, sl) = cycle_errors(w);
        // Error scale is w * phi_max with phi_max = w * xi_max = pi.
        let fit = ce.max(fe) / (w * PI);
        eprintln!("w = {w:e}: concurrence error {ce:e}, fidelity error {fe:e}, E1 entropy {sl}, C = {fit:.4}");
        rows.push((ce, fe, fit));
    }
    assert!(rows[1].0 <= 5e-3 && rows[1].1 <= 5e-3);
    for k in 0..2 {
        assert!(rows[k].0 / rows[k + 1].0 >= 5.0);
        assert!(rows[k].1 / rows[k + 1].1 >= 5.0);
    }
    // Fitted constant is stable across the decade steps.
    assert!((rows[1].2 / rows[2].2 - 1.0).abs() < 0.05);
}

/// Once the branch separation is many vacuum widths, the E1 marginal is
/// dephased between the displaced branch and the three undisplaced ones:
/// `S_L -> 1 - (10 + 6 e^{-xi})/16 -> 3/8`.
#[test]
fn e1_entropy_of_the_maximal_pattern() {
    let (_, _, sl) = cycle_errors(1e-3);
    assert!((sl - 0.375).abs() < 1e-12);
}

#[test]
fn single_coupling_e1_entropy() {
    const FROZEN: f64 = 0.00373131234406196;
    let xi = 0.01;
    let xis = CouplingMatrix::from_flat([0.0, 0.0, 0.0, xi]).unwrap();
    // 4x4 overlap brute force: Tr rho^2 = (10 + 6 e^{-xi}) / 16.
    let f = FockSpace::new(16).unwrap();
    let vacuum = coherent_state(0.0, &f).unwrap();
    let shifted = coherent_state(f64::sqrt(xi), &f).unwrap();
    let branch = [&vacuum, &vacuum, &vacuum, &shifted];
    let mut purity = 0.0;
    for a in branch {
        for b in branch {
            purity += a.inner(b).unwrap().norm_sqr() / 16.0;
        }
    }
    assert!(((1.0 - purity) - FROZEN).abs() < 1e-12);
    for w in [1e-3, 0.7, 2.0] {
        let r = field_cycle(&xis, w, &f, 0.0).unwrap();
        assert!((r.mass_field_entropy_e1 - FROZEN).abs() < 1e-6);
    }
}

#[test]
fn overlap_entropy_examples() {
    assert_eq!(mass_field_entanglement(0.0).unwrap(), 0.0);
    assert!((mass_field_entanglement(0.01).unwrap() - 0.00995).abs() < 1e-6);
    assert!(mass_field_entanglement(-1.0).is_err());
    for k in 0..=50 {
        let xi = 0.25 * k as f64 / 50.0;
        let f = FockSpace::adaptive(xi.sqrt()).unwrap();
        let overlap = coherent_state(0.0, &f)
            .unwrap()
            .inner(&coherent_state(xi.sqrt(), &f).unwrap())
            .unwrap();
        let s = mass_field_entanglement(xi).unwrap();
        assert!((s - (1.0 - overlap.norm_sqr())).abs() < 1e-8);
        assert!((s - xi).abs() <= xi * xi / 2.0);
    }
}

#[test]
fn planck_ratio_examples() {
    let k = PhysicalConstants::default();
    let unit = planck_ratio_phase(k.planck_mass, 1e-6, 1e-6, &k).unwrap();
    assert!((unit.ratio - 1.0).abs() < 1e-15);
    let p = planck_ratio_phase(1e-12, 1e-6, 1e-6, &k).unwrap();
    assert!((p.ratio - 2.111100263341312e-9).abs() < 1e-21);
    assert!((p.ratio / 2.11e-9 - 1.0).abs() < 0.01);
    assert!(planck_ratio_phase(0.0, 1e-6, 1e-6, &k).is_err());
    // With the tabulated Planck mass the two forms drift apart at ~6e-7.
    let tab = PhysicalConstants::with_tabulated_planck_mass();
    let q = planck_ratio_phase(1e-12, 1e-6, 1e-6, &tab).unwrap();
    assert!((q.phi_planck / q.phi - 1.0).abs() > 1e-7);
}

#[test]
fn dephasing_channel_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let space = CompositeSpace::new(vec![2, 6]).unwrap();
    for _ in 0..50 {
        let rho = random_density_matrix(&space, &mut rng);
        let out = dephase_field(&rho, DephasingSpec::new(0.0).unwrap()).unwrap();
        assert_eq!(out.matrix(), rho.matrix());
        for g in [0.01, 0.3, 5.0] {
            let out = dephase_field(&rho, DephasingSpec::new(g).unwrap()).unwrap();
            assert!((out.trace() - c(1.0)).norm() < 1e-12);
            assert!(out.eigenvalues()[0] >= -1e-12);
            DensityMatrix::new(space.clone(), out.matrix().clone()).unwrap();
        }
        let full = dephase_field(&rho, DephasingSpec::new(1e6).unwrap()).unwrap();
        let field = partial_trace(&full, &[1]).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    assert!(field.matrix()[(i, j)].norm() < 1e-12);
                }
            }
        }
    }
}

/// Gaussian average of `exp(i theta n)` rotations reproduces the channel.
#[test]
fn dephasing_is_a_phase_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let space = CompositeSpace::new(vec![5]).unwrap();
    let rho = random_density_matrix(&space, &mut rng);
    let gamma: f64 = 0.4;
    let f = FockSpace::new(5).unwrap();
    // Gauss-Hermite style quadrature on a fine grid.
    let sd = gamma.sqrt();
    let steps = 4001;
    let mut avg = CMatrix::zeros(5, 5);
    let mut total = 0.0;
    for k in 0..steps {
        let t = -12.0 * sd + 24.0 * sd * k as f64 / (steps - 1) as f64;
        let wgt = (-t * t / (2.0 * gamma)).exp();
        let u = number_phase_operator(t, &f);
        avg += u.conjugate(&rho).unwrap().matrix() * c(wgt);
        total += wgt;
    }
    avg /= c(total);
    let want = dephase_field(&rho, DephasingSpec::new(gamma).unwrap()).unwrap();
    assert!((avg - want.matrix()).iter().all(|z| z.norm() < 1e-10));
}

/// Full density-matrix evaluation of the dephased cycle on the joint space.
fn brute_force_dephased(
    xis: &CouplingMatrix,
    w: f64,
    fock: &FockSpace,
    gamma: f64,
) -> DensityMatrix {
    let n = fock.truncation();
    let start = field_cycle(xis, w, fock, 0.0).unwrap().stage_states[1].density_matrix();
    let spec = DephasingSpec::new(gamma).unwrap();
    let masses = CMatrix::identity(4, 4);
    let space = CompositeSpace::new(vec![2, 2, n]).unwrap();
    let phase = Operator::new(
        space.clone(),
        kron(&masses, number_phase_operator(w, fock).matrix()),
    )
    .unwrap();
    let mut undo = CMatrix::zeros(4 * n, 4 * n);
    for (k, xi) in xis.flat().iter().enumerate() {
        let mut p = CMatrix::zeros(4, 4);
        p[(k, k)] = c(1.0);
        undo += kron(
            &p,
            &displacement_operator(*xi, fock).unwrap().matrix().adjoint(),
        );
    }
    let undo = Operator::new(space, undo).unwrap();
    let rho = dephase_field(&start, spec).unwrap();
    let rho = dephase_field(&phase.conjugate(&rho).unwrap(), spec).unwrap();
    partial_trace(&undo.conjugate(&rho).unwrap(), &[0, 1]).unwrap()
}

#[test]
fn dephased_cycle_matches_brute_force() {
    let w = 0.6;
    let xis = CouplingMatrix::from_phases([0.0, 0.4, 0.9, PI], w).unwrap();
    let fock = FockSpace::adaptive(xis.max().sqrt()).unwrap().enlarged(4);
    let cycle = DephasedCycle::new(&xis, w, &fock, 0.0).unwrap();
    for gamma in [0.0, 1e-3, 0.05, 0.7, 30.0] {
        let fast = cycle.outcome(DephasingSpec::new(gamma).unwrap()).unwrap();
        let slow = brute_force_dephased(&xis, w, &fock, gamma);
        let diff = (fast.mass_state.matrix() - slow.matrix())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(diff < 1e-10, "gamma {gamma}: {diff:e}");
    }
}

#[test]
fn zero_dephasing_reproduces_ideal_cycle() {
    for w in [0.25, 0.02] {
        let xis = CouplingMatrix::maximal(w).unwrap();
        let fock = FockSpace::adaptive(xis.max().sqrt()).unwrap();
        let ideal = field_cycle(&xis, w, &fock, 0.0).unwrap();
        let d = field_cycle_with_dephasing(&xis, w, &fock, 0.0, 0.0).unwrap();
        assert!((d.concurrence - ideal.concurrence_final).abs() < 1e-10);
        assert!((d.negativity - ideal.negativity_final).abs() < 1e-10);
    }
}

#[test]
fn negativity_non_increasing_on_log_grid() {
    let w = 0.02;
    let xis = CouplingMatrix::maximal(w).unwrap();
    let fock = FockSpace::adaptive(xis.max().sqrt()).unwrap();
    let cycle = DephasedCycle::new(&xis, w, &fock, 0.0).unwrap();
    let mut prev = f64::INFINITY;
    for e in -4..=2 {
        for m in [1.0, 2.0, 5.0] {
            let gamma = m * 10f64.powi(e);
            let o = cycle.outcome(DephasingSpec::new(gamma).unwrap()).unwrap();
            assert!(
                o.negativity <= prev + 1e-12,
                "gamma {gamma}: {} > {prev}",
                o.negativity
            );
            prev = o.negativity;
        }
    }
    let full = cycle.outcome(DephasingSpec::new(1e6).unwrap()).unwrap();
    assert!(full.coherence_negativity.abs() < 1e-12);
}

#[test]
fn threshold_bracket_and_truncation_robustness() {
    let w = 0.25;
    let xis = CouplingMatrix::maximal(w).unwrap();
    let fock = FockSpace::adaptive(xis.max().sqrt()).unwrap();
    let tol = 1e-6;
    let b = entanglement_breaking_threshold(&xis, w, &fock, tol).unwrap();
    assert!(b.gamma_lo < b.gamma_hi);
    assert!(b.negativity_lo > tol && b.negativity_hi <= tol);
    let cycle = DephasedCycle::new(&xis, w, &fock, 0.0).unwrap();
    let at = |g: f64| {
        cycle
            .outcome(DephasingSpec::new(g).unwrap())
            .unwrap()
            .coherence_negativity
    };
    assert!(at(b.gamma_lo) > tol && at(b.gamma_hi) <= tol);
    let again = entanglement_breaking_threshold(&xis, w, &fock, tol).unwrap();
    assert_eq!(b, again);
    let bigger = entanglement_breaking_threshold(&xis, w, &fock.enlarged(8), tol).unwrap();
    assert!((bigger.gamma_star / b.gamma_star - 1.0).abs() < 1e-3);
}

/// Larger couplings separate the branches further in the number basis, so
/// the coherences that carry the phase dephase sooner and the threshold
/// falls.
#[test]
fn threshold_falls_with_coupling() {
    let w = 0.25;
    let tol = 1e-6;
    let xis = CouplingMatrix::maximal(w).unwrap();
    let fock = FockSpace::adaptive(xis.max().sqrt()).unwrap();
    let base = entanglement_breaking_threshold(&xis, w, &fock, tol).unwrap();
    let x4 = xis.scaled(4.0).unwrap();
    let fock4 = FockSpace::adaptive(x4.max().sqrt()).unwrap();
    let four = entanglement_breaking_threshold(&x4, w, &fock4, tol).unwrap();
    eprintln!(
        "gamma* = {} at xi, {} at 4 xi",
        base.gamma_star, four.gamma_star
    );
    assert!(four.gamma_star < base.gamma_star);
}

#[test]
fn displaced_start_still_returns_the_field() {
    let w = 1e-3;
    let alpha0 = 0.5;
    let xis = CouplingMatrix::maximal(w).unwrap();
    let r = field_cycle_auto(&xis, w, alpha0).unwrap();
    assert!(r.field_return_fidelity >= 1.0 - 5e-3);
    // Realized branch phases s (alpha0 + s) sin w.
    let realized = xis
        .flat()
        .map(|xi| xi.sqrt() * (alpha0 + xi.sqrt()) * w.sin());
    assert!((r.concurrence_final - branch_phase_concurrence(realized)).abs() < 5e-3);
}

#[test]
fn routes_cross_validate() {
    let w = 0.25;
    let xis = CouplingMatrix::from_phases([0.0, 0.5, 1.0, PI], w).unwrap();
    let fock = FockSpace::adaptive(xis.max().sqrt()).unwrap();
    let a = field_cycle_with_route(&xis, w, &fock, 0.0, CycleRoute::Dense).unwrap();
    let b = field_cycle_with_route(&xis, w, &fock, 0.0, CycleRoute::Frame).unwrap();
    assert!((a.concurrence_final - b.concurrence_final).abs() < 1e-10);
    assert!((a.field_return_fidelity - b.field_return_fidelity).abs() < 1e-10);
    let diff = (a.mass_mass_state.matrix() - b.mass_mass_state.matrix())
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    assert!(diff < 1e-10);
    let n = negativity(&a.mass_mass_state, &BipartitionSpec::two_qubits()).unwrap();
    assert!((n - a.negativity_final).abs() < 1e-15);
    assert!((concurrence(&b.mass_mass_state).unwrap() - b.concurrence_final).abs() < 1e-15);
    assert!(linear_entropy(&a.mass_mass_state) >= 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn xi_round_trip(phi in -10.0f64..10.0, w in 1e-4f64..3.0) {
        let xi = xi_from_phase(phi, w).unwrap();
        prop_assert!((w * xi.xi - phi).abs() <= 1e-15 * phi.abs().max(1.0));
        prop_assert_eq!(xi.sign_mismatch, phi < 0.0);
    }

    #[test]
    fn planck_forms_agree(m in 1e-15f64..1e-6, d in 1e-8f64..1e-2, dt in 1e-9f64..1.0) {
        let p = planck_ratio_phase(m, d, dt, &PhysicalConstants::default()).unwrap();
        prop_assert!((p.phi_planck / p.phi - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ideal_cycle_invariants(x in prop::array::uniform4(0.0f64..6.0), w in 0.05f64..1.5) {
        let xis = CouplingMatrix::from_flat(x).unwrap();
        let r = field_cycle_auto(&xis, w, 0.0).unwrap();
        for s in &r.stage_states {
            prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        }
        prop_assert!((0.0..=1.0).contains(&r.field_return_fidelity));
        r.mass_mass_state.validate().unwrap();
    }
}

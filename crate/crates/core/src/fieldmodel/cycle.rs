use num_complex::Complex64;

use super::CouplingMatrix;
use crate::entanglement::{
    concurrence, linear_entropy, negativity, witness_expectation, BipartitionSpec,
};
use crate::error::{Error, Result};
use crate::protocol::{beam_splitter, branch_phase_concurrence, witness_target};
use crate::qcore::expm::expm;
use crate::qcore::fock::{annihilation, coherent_vector, shift_matrix};
use crate::qcore::linalg::{c, kron, CMatrix, CVector};
use crate::qcore::{CompositeSpace, DensityMatrix, FockSpace, PureState};

/// Above this truncation the cycle is evaluated in the displaced frame.
pub const DENSE_ROUTE_LIMIT: usize = 192;

/// Extra levels on top of the adaptive frame truncation.
const FRAME_MARGIN: usize = 8;

/// How the conditional displacements are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CycleRoute {
    /// Dense below [`DENSE_ROUTE_LIMIT`] levels, frame above.
    #[default]
    Auto,
    /// Every displacement as a dense matrix exponential on the full
    /// truncation.
    Dense,
    /// Closed-form coherent states for the displaced branches; the
    /// return step `D^† e^{iwn} D = exp(i w (n + s (a + a^†) + s^2))` is
    /// exponentiated on a small space sized for the residual displacement.
    Frame,
}

/// Everything recorded along one ideal cycle.
#[derive(Debug, Clone)]
pub struct MediatorRun {
    /// Initial, after the conditional displacement, after the phase
    /// rotation, and final; each on `qubit x qubit x Fock`.
    pub stage_states: [PureState; 4],
    pub xis: CouplingMatrix,
    pub w: f64,
    pub alpha0: f64,
    pub fock: FockSpace,
    /// The route actually used (never `Auto`).
    pub route: CycleRoute,
    /// Two-mass marginal of the final state.
    pub mass_mass_state: DensityMatrix,
    /// `<alpha0| rho_field |alpha0>` for the final field marginal.
    pub field_return_fidelity: f64,
    /// Linear entropy of the two-mass marginal after the displacement.
    pub mass_field_entropy_e1: f64,
    pub concurrence_final: f64,
    pub negativity_final: f64,
    /// Projective witness on the final two-mass marginal, target
    /// `(1, 1, 1, -1)/2`.
    pub witness_final: f64,
    /// Port-0 probability of mass 1 after final beam splitters on the
    /// two-mass marginal.
    pub p0: f64,
    pub p1: f64,
    /// Concurrence the branch phases `w xi_ab` would give exactly.
    pub target_concurrence: f64,
}

/// Largest coherent amplitude any stage or intermediate step reaches.
pub fn required_amplitude(xis: &CouplingMatrix, w: f64, alpha0: f64) -> f64 {
    xis.flat().iter().fold(alpha0.abs(), |acc, &xi| {
        let s = xi.sqrt();
        let shifted = alpha0 + s;
        let back = Complex64::from_polar(shifted, w) - c(s);
        acc.max(shifted.abs()).max(back.norm())
    })
}

fn check_inputs(w: f64, alpha0: f64) -> Result<()> {
    if !w.is_finite() {
        return Err(Error::domain(format!("w = {w} is not finite")));
    }
    if !alpha0.is_finite() {
        return Err(Error::domain(format!("alpha0 = {alpha0} is not finite")));
    }
    Ok(())
}

/// The ideal cycle on a caller-chosen truncation.
pub fn field_cycle(
    xis: &CouplingMatrix,
    w: f64,
    fock: &FockSpace,
    alpha0: f64,
) -> Result<MediatorRun> {
    field_cycle_with_route(xis, w, fock, alpha0, CycleRoute::Auto)
}

/// The ideal cycle on the adaptive truncation for these parameters.
pub fn field_cycle_auto(xis: &CouplingMatrix, w: f64, alpha0: f64) -> Result<MediatorRun> {
    check_inputs(w, alpha0)?;
    let fock = FockSpace::adaptive(required_amplitude(xis, w, alpha0))?;
    field_cycle(xis, w, &fock, alpha0)
}

pub fn field_cycle_with_route(
    xis: &CouplingMatrix,
    w: f64,
    fock: &FockSpace,
    alpha0: f64,
    route: CycleRoute,
) -> Result<MediatorRun> {
    check_inputs(w, alpha0)?;
    fock.check_amplitude(required_amplitude(xis, w, alpha0))?;
    let n = fock.truncation();
    let route = match route {
        CycleRoute::Auto if n <= DENSE_ROUTE_LIMIT => CycleRoute::Dense,
        CycleRoute::Auto => CycleRoute::Frame,
        r => r,
    };
    let shifts = xis.flat().map(f64::sqrt);
    let start = coherent_vector(alpha0, n);
    let phase = CVector::from_fn(n, |k, _| Complex64::from_polar(1.0, w * k as f64));

    let (displaced, returned) = match route {
        CycleRoute::Dense => dense_branches(&shifts, &start, &phase)?,
        _ => frame_branches(&shifts, w, alpha0, fock)?,
    };
    let rotated: Vec<CVector> = displaced.iter().map(|v| v.component_mul(&phase)).collect();

    let initial = vec![start.clone(); 4];
    let stage_states = [
        assemble(&initial, n),
        assemble(&displaced, n),
        assemble(&rotated, n),
        assemble(&returned, n),
    ];

    let e1 = branch_marginal(&displaced);
    let mass_mass_state = branch_marginal(&returned);
    let field_return_fidelity = returned
        .iter()
        .map(|v| start.dotc(v).norm_sqr() / 4.0)
        .sum::<f64>()
        .clamp(0.0, 1.0);

    let bs = beam_splitter();
    let after_bs = kron(&bs, &bs) * mass_mass_state.matrix() * kron(&bs, &bs).adjoint();
    let p0 = (after_bs[(0, 0)] + after_bs[(1, 1)]).re;
    let p1 = (after_bs[(2, 2)] + after_bs[(3, 3)]).re;

    Ok(MediatorRun {
        mass_field_entropy_e1: linear_entropy(&e1),
        concurrence_final: concurrence(&mass_mass_state)?,
        negativity_final: negativity(&mass_mass_state, &BipartitionSpec::two_qubits())?,
        witness_final: witness_expectation(&mass_mass_state, &witness_target())?,
        target_concurrence: branch_phase_concurrence(xis.target_phases(w)),
        stage_states,
        xis: *xis,
        w,
        alpha0,
        fock: *fock,
        route,
        mass_mass_state,
        field_return_fidelity,
        p0,
        p1,
    })
}

type Branches = (Vec<CVector>, Vec<CVector>);

fn dense_branches(shifts: &[f64; 4], start: &CVector, phase: &CVector) -> Result<Branches> {
    let n = start.len();
    let mut displaced = Vec::with_capacity(4);
    let mut returned = Vec::with_capacity(4);
    let mut cache: Vec<(f64, CMatrix)> = Vec::new();
    for &s in shifts {
        let d = match cache.iter().find(|(t, _)| *t == s) {
            Some((_, m)) => m.clone(),
            None => {
                let m = shift_matrix(s, n)?;
                cache.push((s, m.clone()));
                m
            }
        };
        let e1 = &d * start;
        let back = d.adjoint() * e1.component_mul(phase);
        displaced.push(e1);
        returned.push(back);
    }
    Ok((displaced, returned))
}

fn frame_branches(shifts: &[f64; 4], w: f64, alpha0: f64, fock: &FockSpace) -> Result<Branches> {
    let n = fock.truncation();
    let sweep = (w.abs().min(std::f64::consts::PI) / 2.0).sin();
    let reach = shifts.iter().fold(alpha0.abs(), |acc, &s| {
        acc.max(alpha0.abs() + 2.0 * s * sweep)
    });
    let frame =
        FockSpace::adaptive_with_tolerance(reach, fock.tail_tolerance())?.enlarged(FRAME_MARGIN);
    let nf = frame.truncation();
    let a = annihilation(nf);
    let quad = &a + a.adjoint();
    let number = frame.number();
    let start = coherent_vector(alpha0, nf);

    let mut displaced = Vec::with_capacity(4);
    let mut returned = Vec::with_capacity(4);
    for &s in shifts {
        displaced.push(coherent_vector(alpha0 + s, n));
        let gen = (&number + &quad * c(s)) * Complex64::new(0.0, w);
        let v = expm(&gen)? * &start * Complex64::from_polar(1.0, w * s * s);
        returned.push(resize(&v, n));
    }
    Ok((displaced, returned))
}

fn resize(v: &CVector, n: usize) -> CVector {
    CVector::from_fn(n, |k, _| if k < v.len() { v[k] } else { Complex64::ZERO })
}

/// `sum_ab |ab> (x) v_ab / 2` on `qubit x qubit x Fock`.
fn assemble(branches: &[CVector], n: usize) -> PureState {
    let space = CompositeSpace::new(vec![2, 2, n]).expect("n >= 2");
    let mut amps = CVector::zeros(4 * n);
    for (i, v) in branches.iter().enumerate() {
        amps.rows_mut(i * n, n).copy_from(&(v * c(0.5)));
    }
    PureState::from_raw(space, amps)
}

/// Two-mass marginal of `sum_ab |ab> (x) v_ab / 2`: entries
/// `<v_j|v_i> / 4`.
fn branch_marginal(branches: &[CVector]) -> DensityMatrix {
    let m = CMatrix::from_fn(4, 4, |i, j| branches[j].dotc(&branches[i]) * c(0.25));
    DensityMatrix::from_raw(CompositeSpace::qubits(2).expect("valid"), m)
}

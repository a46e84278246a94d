//! One evaluation per mode: settings in, one table row out.

use gie_core::{
    field_cycle, field_cycle_auto, phases_from_geometry, planck_ratio_phase, required_amplitude,
    simulate_run_with, CouplingMatrix, DephasedCycle, DephasingSpec, FockSpace, PhaseAssignment,
    PhaseSet, PhysicalConstants, PhysicalParams,
};

use crate::emit::Cell;
use crate::settings::{need, Assignment, Settings};
use crate::CliError;

pub const DEFAULT_TOL: f64 = 1e-6;

/// What a row describes. `input` is the swept value in sweeps, otherwise the
/// mode's leading input (mass, delta_phi, w, gamma or trial index).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Phase,
    Run,
    Mediator,
    Decohere,
    Threshold,
    Nogo,
}

impl Target {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Target::Phase => &[
                "input",
                "mass",
                "distance",
                "dt",
                "exponent",
                "phi",
                "planck_ratio",
            ],
            Target::Run => &[
                "input",
                "phi1",
                "phi2",
                "delta_phi",
                "p0",
                "p1",
                "concurrence",
                "negativity",
                "witness",
            ],
            Target::Mediator => &[
                "input",
                "phi00",
                "phi01",
                "phi10",
                "phi11",
                "p0",
                "p1",
                "concurrence",
                "negativity",
                "witness",
                "target_concurrence",
                "field_return_fidelity",
                "mass_field_entropy",
            ],
            Target::Decohere => &[
                "input",
                "gamma",
                "negativity",
                "concurrence",
                "record_negativity",
                "coherence_negativity",
            ],
            Target::Threshold => &["input", "tol", "gamma_lo", "gamma_hi", "gamma_star"],
            Target::Nogo => &[
                "input",
                "seed",
                "depth",
                "d_c",
                "negativity",
                "min_witness",
                "ppt",
            ],
        }
    }
}

pub fn decohere_target(s: &Settings) -> Target {
    if s.threshold.unwrap_or(false) {
        Target::Threshold
    } else {
        Target::Decohere
    }
}

pub fn phase_row(s: &Settings) -> Result<Vec<Cell>, CliError> {
    let mass = need(s.mass, "mass", "mass")?;
    let distance = need(s.distance, "distance", "distance")?;
    let dt = need(s.dt, "dt", "dt")?;
    let exponent = s.exponent.unwrap_or(1.0);
    let consts = PhysicalConstants::default();
    let phi = gie_core::gravitational_phase(mass, distance, dt, &consts, exponent)?;
    let planck = planck_ratio_phase(mass, distance, dt, &consts)?;
    Ok(vec![
        Cell::Num(mass),
        Cell::Num(mass),
        Cell::Num(distance),
        Cell::Num(dt),
        Cell::Num(exponent),
        Cell::Num(phi),
        Cell::Num(planck.ratio),
    ])
}

fn assignment(s: &Settings) -> PhaseAssignment {
    match s.assignment.unwrap_or_default() {
        Assignment::Standard => PhaseAssignment::Standard,
        Assignment::Geometric => PhaseAssignment::Geometric,
    }
}

fn geometry_phases(s: &Settings) -> Result<PhaseSet, CliError> {
    let mass = need(s.mass, "mass", "mass")?;
    let d1 = need(s.d1, "d1", "d1")?;
    let d2 = need(s.d2, "d2", "d2")?;
    if s.dt.is_none() && s.velocity.is_none() {
        return Err(CliError::usage("missing --dt, or --L with --velocity"));
    }
    let arm_length = match (s.arm_length, s.velocity) {
        (Some(l), _) => l,
        (None, Some(_)) => return Err(CliError::usage("--velocity needs --L (config key `L`)")),
        // Only enters through L / v.
        (None, None) => 1.0,
    };
    let params = PhysicalParams {
        mass,
        d1,
        d2,
        arm_length,
        velocity: s.velocity,
        interaction_time: s.dt,
        exponent: s.exponent.unwrap_or(1.0),
        constants: PhysicalConstants::default(),
    };
    Ok(phases_from_geometry(&params)?)
}

/// Direct phases when `phi1`/`dphi` are given, geometry otherwise.
pub fn run_row(s: &Settings, input: Option<f64>) -> Result<Vec<Cell>, CliError> {
    let phases = match (s.phi1, s.dphi) {
        (None, None) => geometry_phases(s)?,
        (Some(phi1), Some(dphi)) => {
            let p = PhaseSet::from_delta(phi1, dphi);
            p.validate()?;
            p
        }
        _ => return Err(CliError::usage("--phi1 and --dphi must be given together")),
    };
    let r = simulate_run_with(&phases, assignment(s))?;
    Ok(vec![
        Cell::Num(input.unwrap_or(phases.delta_phi)),
        Cell::Num(phases.phi1),
        Cell::Num(phases.phi2),
        Cell::Num(phases.delta_phi),
        Cell::Num(r.p0),
        Cell::Num(r.p1),
        Cell::Num(r.concurrence),
        Cell::Num(r.negativity),
        Cell::Num(r.witness_value),
    ])
}

/// Couplings from the flags; with none given, the maximal pattern for `w`.
pub fn couplings(s: &Settings, w: f64) -> Result<CouplingMatrix, CliError> {
    let given = [s.xi00, s.xi01, s.xi10, s.xi11];
    let base = if given.iter().all(Option::is_none) {
        CouplingMatrix::maximal(w)?
    } else {
        CouplingMatrix::from_flat(given.map(|x| x.unwrap_or(0.0)))?
    };
    Ok(match s.xi_scale {
        Some(k) => base.scaled(k)?,
        None => base,
    })
}

pub fn mediator_row(s: &Settings, input: Option<f64>) -> Result<Vec<Cell>, CliError> {
    let w = need(s.w, "w", "w")?;
    let xis = couplings(s, w)?;
    let alpha0 = s.alpha0.unwrap_or(0.0);
    let r = match s.fock {
        Some(n) => field_cycle(&xis, w, &FockSpace::new(n)?, alpha0)?,
        None => field_cycle_auto(&xis, w, alpha0)?,
    };
    let mut row = vec![Cell::Num(input.unwrap_or(w))];
    row.extend(xis.target_phases(w).map(Cell::Num));
    row.extend(
        [
            r.p0,
            r.p1,
            r.concurrence_final,
            r.negativity_final,
            r.witness_final,
            r.target_concurrence,
            r.field_return_fidelity,
            r.mass_field_entropy_e1,
        ]
        .map(Cell::Num),
    );
    Ok(row)
}

pub fn dephased_cycle(s: &Settings) -> Result<DephasedCycle, CliError> {
    let w = need(s.w, "w", "w")?;
    let xis = couplings(s, w)?;
    let alpha0 = s.alpha0.unwrap_or(0.0);
    let fock = match s.fock {
        Some(n) => FockSpace::new(n)?,
        None => FockSpace::adaptive(required_amplitude(&xis, w, alpha0))?,
    };
    Ok(DephasedCycle::new(&xis, w, &fock, alpha0)?)
}

pub fn decohere_row(
    cycle: &DephasedCycle,
    gamma: f64,
    input: Option<f64>,
) -> Result<Vec<Cell>, CliError> {
    let o = cycle.outcome(DephasingSpec::new(gamma)?)?;
    Ok(vec![
        Cell::Num(input.unwrap_or(gamma)),
        Cell::Num(o.gamma),
        Cell::Num(o.negativity),
        Cell::Num(o.concurrence),
        Cell::Num(o.record_negativity),
        Cell::Num(o.coherence_negativity),
    ])
}

pub fn threshold_row(s: &Settings, input: Option<f64>) -> Result<Vec<Cell>, CliError> {
    let cycle = dephased_cycle(s)?;
    let tol = s.tol.unwrap_or(DEFAULT_TOL);
    let b = cycle.threshold(tol)?;
    Ok(vec![
        Cell::Num(input.unwrap_or(cycle.w())),
        Cell::Num(tol),
        Cell::Num(b.gamma_lo),
        Cell::Num(b.gamma_hi),
        Cell::Num(b.gamma_star),
    ])
}

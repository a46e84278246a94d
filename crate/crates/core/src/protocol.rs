//! Two masses, each in its own Mach-Zehnder interferometer, coupled only by
//! the phase their mutual potential imprints on each joint path
//! configuration.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::entanglement::{concurrence, negativity, witness_expectation, BipartitionSpec};
use crate::error::{Error, Result};
use crate::qcore::linalg::{c, CMatrix, CVector};
use crate::qcore::{CompositeSpace, DensityMatrix, Operator, PureState};
use crate::Complex64;

/// Distance at which a non-Newtonian potential is matched to the Newtonian
/// phase, in metres.
pub const REFERENCE_DISTANCE: f64 = 1e-6;

/// Tabulated CODATA 2018 Planck mass, kg.
pub const CODATA_PLANCK_MASS: f64 = 2.176434e-8;

/// SI constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub g: f64,
    pub hbar: f64,
    pub c: f64,
    pub planck_mass: f64,
}

impl Default for PhysicalConstants {
    /// CODATA 2018 `G`, `hbar`, `c`, with the Planck mass derived as
    /// `sqrt(hbar c / G)` so that phase formulas written in either form agree
    /// to rounding. The derived value differs from [`CODATA_PLANCK_MASS`] by
    /// about 3e-7 relative.
    fn default() -> Self {
        let g = 6.67430e-11;
        let hbar = 1.054571817e-34;
        let c = 2.99792458e8;
        Self {
            g,
            hbar,
            c,
            planck_mass: (hbar * c / g).sqrt(),
        }
    }
}

impl PhysicalConstants {
    /// Defaults with the tabulated Planck mass instead of the derived one.
    pub fn with_tabulated_planck_mass() -> Self {
        Self {
            planck_mass: CODATA_PLANCK_MASS,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("G", self.g),
            ("hbar", self.hbar),
            ("c", self.c),
            ("planck_mass", self.planck_mass),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!(
                    "constant {name} = {v} must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// Masses, geometry and timing of one run, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub mass: f64,
    /// Separation of the two near arms.
    pub d1: f64,
    /// Separation of an inner arm from the other interferometer's outer arm.
    pub d2: f64,
    pub arm_length: f64,
    pub velocity: Option<f64>,
    pub interaction_time: Option<f64>,
    pub exponent: f64,
    pub constants: PhysicalConstants,
}

impl PhysicalParams {
    /// Parameters with an explicit interaction time and `1/r` potential.
    pub fn with_time(mass: f64, d1: f64, d2: f64, arm_length: f64, dt: f64) -> Self {
        Self {
            mass,
            d1,
            d2,
            arm_length,
            velocity: None,
            interaction_time: Some(dt),
            exponent: 1.0,
            constants: PhysicalConstants::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        for (name, v) in [
            ("mass", self.mass),
            ("d1", self.d1),
            ("d2", self.d2),
            ("arm_length", self.arm_length),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.exponent >= 1.0 && self.exponent.is_finite()) {
            return Err(Error::domain(format!(
                "potential exponent {} must be at least 1",
                self.exponent
            )));
        }
        self.interaction_time().map(|_| ())
    }

    /// `dt` if given, else `L / v`.
    pub fn interaction_time(&self) -> Result<f64> {
        match (self.velocity, self.interaction_time) {
            (Some(_), Some(_)) => Err(Error::domain(
                "both velocity and interaction time given; supply only one",
            )),
            (None, None) => Err(Error::domain(
                "either velocity or interaction time is required",
            )),
            (Some(v), None) => {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::domain(format!("velocity {v} must be positive")));
                }
                Ok(self.arm_length / v)
            }
            (None, Some(dt)) => {
                if !(dt >= 0.0 && dt.is_finite()) {
                    return Err(Error::domain(format!(
                        "interaction time {dt} must be nonnegative"
                    )));
                }
                Ok(dt)
            }
        }
    }
}

/// `phi = m^2 G dt / (hbar d)` for the `1/r` potential. For `n > 1` the
/// `1/r^n` phase is scaled to equal the Newtonian one at
/// [`REFERENCE_DISTANCE`].
pub fn gravitational_phase(
    m: f64,
    d: f64,
    dt: f64,
    consts: &PhysicalConstants,
    n: f64,
) -> Result<f64> {
    consts.validate()?;
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::domain(format!("mass {m} must be nonnegative")));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("distance {d} must be positive")));
    }
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::domain(format!(
            "interaction time {dt} must be nonnegative"
        )));
    }
    if !(n >= 1.0 && n.is_finite()) {
        return Err(Error::domain(format!(
            "potential exponent {n} must be at least 1"
        )));
    }
    let newton = |dist: f64| m * m * consts.g * dt / (consts.hbar * dist);
    if n == 1.0 {
        Ok(newton(d))
    } else {
        Ok(newton(REFERENCE_DISTANCE) * (REFERENCE_DISTANCE / d).powf(n))
    }
}

/// Relative phases of the two interferometer paths, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSet {
    pub phi1: f64,
    pub phi2: f64,
    pub delta_phi: f64,
}

impl PhaseSet {
    pub fn new(phi1: f64, phi2: f64) -> Self {
        Self {
            phi1,
            phi2,
            delta_phi: phi2 - phi1,
        }
    }

    /// From `phi1` and the difference `delta_phi`.
    pub fn from_delta(phi1: f64, delta_phi: f64) -> Self {
        Self {
            phi1,
            phi2: phi1 + delta_phi,
            delta_phi,
        }
    }

    /// Checks that the stored difference matches `phi2 - phi1`.
    pub fn validate(&self) -> Result<()> {
        let scale = 1f64.max(self.phi1.abs()).max(self.phi2.abs());
        let err = (self.phi2 - self.phi1 - self.delta_phi).abs();
        if err.is_nan() || err > 1e-15 * scale {
            return Err(Error::domain(format!(
                "delta_phi {} disagrees with phi2 - phi1 = {}",
                self.delta_phi,
                self.phi2 - self.phi1
            )));
        }
        Ok(())
    }
}

/// Phases from the geometry; the two far arms are taken not to interact.
pub fn phases_from_geometry(params: &PhysicalParams) -> Result<PhaseSet> {
    params.validate()?;
    let dt = params.interaction_time()?;
    let phase = |d| gravitational_phase(params.mass, d, dt, &params.constants, params.exponent);
    Ok(PhaseSet::new(phase(params.d1)?, phase(params.d2)?))
}

/// How the two phases are attached to the joint path configurations
/// `|00>, |01>, |10>, |11>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseAssignment {
    /// `(0, phi1, phi1, phi2)`, the pattern of the pre-beam-splitter state
    /// `(1, e^{i phi1}, e^{i phi1}, e^{i phi1} e^{i delta_phi}) / 2`.
    #[default]
    Standard,
    /// `(phi1, phi2, phi2, phi1)`: near-arm separation on `|00>` and `|11>`,
    /// the crossed separation on `|01>` and `|10>`.
    Geometric,
}

impl PhaseAssignment {
    pub fn branch_phases(self, phases: &PhaseSet) -> [f64; 4] {
        match self {
            PhaseAssignment::Standard => [0.0, phases.phi1, phases.phi1, phases.phi2],
            PhaseAssignment::Geometric => [phases.phi1, phases.phi2, phases.phi2, phases.phi1],
        }
    }

    /// Closed-form concurrence of the state carrying these phases.
    pub fn concurrence(self, phases: &PhaseSet) -> f64 {
        branch_phase_concurrence(self.branch_phases(phases))
    }

    /// Closed-form probability that either mass leaves through port 0.
    pub fn p0(self, phases: &PhaseSet) -> f64 {
        match self {
            PhaseAssignment::Standard => detector_probabilities(phases).0,
            PhaseAssignment::Geometric => (phases.delta_phi / 2.0).cos().powi(2),
        }
    }
}

/// Concurrence of `(e^{i p00}, e^{i p01}, e^{i p10}, e^{i p11}) / 2`.
pub fn branch_phase_concurrence(p: [f64; 4]) -> f64 {
    ((p[0] + p[3] - p[1] - p[2]) / 2.0).sin().abs()
}

/// Equal-weight superposition of the four path configurations with the
/// given branch phases.
pub fn branch_phase_state(p: [f64; 4]) -> PureState {
    let v = CVector::from_iterator(4, p.iter().map(|&x| Complex64::from_polar(0.5, x)));
    PureState::from_raw(two_qubits(), v)
}

/// The joint state just before the final beam splitters.
pub fn pre_beam_splitter_state(phases: &PhaseSet) -> PureState {
    branch_phase_state(PhaseAssignment::Standard.branch_phases(phases))
}

/// `(p0, p1)` for either mass, closed form.
pub fn detector_probabilities(phases: &PhaseSet) -> (f64, f64) {
    let a = (phases.phi1 / 2.0).cos().powi(2);
    let b = (phases.delta_phi / 2.0).cos().powi(2);
    let p0 = 0.5 * (a + b);
    let p1 = 0.5 * ((phases.phi1 / 2.0).sin().powi(2) + (phases.delta_phi / 2.0).sin().powi(2));
    (p0, p1)
}

fn two_qubits() -> CompositeSpace {
    CompositeSpace::qubits(2).expect("valid")
}

/// 50:50 beam splitter, `|0> -> (|0> + |1>)/√2`, `|1> -> (|0> - |1>)/√2`.
pub fn beam_splitter() -> CMatrix {
    let h = c(FRAC_1_SQRT_2);
    CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

/// `B (x) B` built from its entries `±1/2`, which are exact, unlike the
/// square of `1/√2`.
fn both_beam_splitters() -> CMatrix {
    CMatrix::from_fn(4, 4, |i, j| {
        c(if (i & j).count_ones() % 2 == 0 {
            0.5
        } else {
            -0.5
        })
    })
}

/// Target of the projective witness reported by [`simulate_run`]: the
/// pre-beam-splitter state of the maximally entangling phases.
pub fn witness_target() -> PureState {
    branch_phase_state([0.0, 0.0, 0.0, std::f64::consts::PI])
}

/// Outcome of one simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub phases: PhaseSet,
    pub assignment: PhaseAssignment,
    pub pre_bs_state: PureState,
    pub final_state: PureState,
    /// Probability that mass 1 exits at port 0.
    pub p0: f64,
    pub p1: f64,
    /// Same for mass 2.
    pub p0_second: f64,
    pub concurrence: f64,
    pub negativity: f64,
    /// `Tr(W rho)` for `W = I/2 - |T><T|` with `T` from [`witness_target`],
    /// on the pre-beam-splitter state.
    pub witness_value: f64,
}

/// Full pipeline with the standard phase assignment.
pub fn simulate_run(phases: &PhaseSet) -> Result<RunResult> {
    simulate_run_with(phases, PhaseAssignment::Standard)
}

/// `|00>`, both first beam splitters, the phase unitary, both final beam
/// splitters.
pub fn simulate_run_with(phases: &PhaseSet, assignment: PhaseAssignment) -> Result<RunResult> {
    let space = two_qubits();
    let both = Operator::from_raw(space.clone(), both_beam_splitters());
    let p = assignment.branch_phases(phases);
    let phase_gate = Operator::from_raw(
        space.clone(),
        CMatrix::from_diagonal(&CVector::from_iterator(
            4,
            p.iter().map(|&x| Complex64::from_polar(1.0, x)),
        )),
    );
    let start = PureState::basis(space, 0)?;
    let pre_bs_state = phase_gate.apply(&both.apply(&start)?)?;
    let final_state = both.apply(&pre_bs_state)?;

    let prob = |k: usize| final_state.amplitudes()[k].norm_sqr();
    let p0 = prob(0) + prob(1);
    let p1 = prob(2) + prob(3);
    let p0_second = prob(0) + prob(2);

    let rho: DensityMatrix = final_state.density_matrix();
    Ok(RunResult {
        phases: *phases,
        assignment,
        concurrence: concurrence(&rho)?,
        negativity: negativity(&rho, &BipartitionSpec::two_qubits())?,
        witness_value: witness_expectation(&pre_bs_state.density_matrix(), &witness_target())?,
        pre_bs_state,
        final_state,
        p0,
        p1,
        p0_second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::kron;
    use std::f64::consts::PI;

    #[test]
    fn exact_pair_beam_splitter() {
        let bs = beam_splitter();
        let diff = kron(&bs, &bs) - both_beam_splitters();
        assert!(diff.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn feasibility_phase() {
        let phi =
            gravitational_phase(1e-12, 1e-6, 1e-6, &PhysicalConstants::default(), 1.0).unwrap();
        assert!((phi - 0.6329).abs() < 1e-4);
    }

    #[test]
    fn power_law_matches_newton_at_reference() {
        let k = PhysicalConstants::default();
        let newton = gravitational_phase(1e-12, REFERENCE_DISTANCE, 1e-6, &k, 1.0).unwrap();
        let six = gravitational_phase(1e-12, REFERENCE_DISTANCE, 1e-6, &k, 6.0).unwrap();
        assert!((newton - six).abs() < 1e-15);
        let far = gravitational_phase(1e-12, 2.0 * REFERENCE_DISTANCE, 1e-6, &k, 6.0).unwrap();
        assert!((far * 64.0 - six).abs() < 1e-14);
    }

    #[test]
    fn over_specified_timing_is_rejected() {
        let mut p = PhysicalParams::with_time(1e-12, 1e-6, 2e-6, 1e-3, 1e-6);
        p.velocity = Some(1.0);
        assert!(phases_from_geometry(&p).is_err());
        p.interaction_time = None;
        let ph = phases_from_geometry(&p).unwrap();
        let want = gravitational_phase(1e-12, 1e-6, 1e-3, &p.constants, 1.0).unwrap();
        assert_eq!(ph.phi1, want);
    }

    #[test]
    fn maximal_run() {
        let r = simulate_run(&PhaseSet::from_delta(0.0, PI)).unwrap();
        assert!((r.concurrence - 1.0).abs() < 1e-12);
        assert!((r.p0 - 0.5).abs() < 1e-12);
        assert!((r.witness_value + 0.5).abs() < 1e-12);
    }

    #[test]
    fn geometric_assignment_closed_forms() {
        let ph = PhaseSet::new(0.3, 1.4);
        let r = simulate_run_with(&ph, PhaseAssignment::Geometric).unwrap();
        assert!((r.concurrence - ph.delta_phi.sin().abs()).abs() < 1e-12);
        assert!((r.p0 - PhaseAssignment::Geometric.p0(&ph)).abs() < 1e-12);
    }
}

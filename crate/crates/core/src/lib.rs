//! Numerical model of entanglement mediated between two masses, each sent
//! through its own Mach-Zehnder interferometer.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`] holds the dense linear algebra: composite spaces, pure and
//!   mixed states, partial traces and transposes, the matrix exponential and
//!   truncated Fock-space operators.
//! * [`entanglement`] provides concurrence, negativity, the PPT test, linear
//!   entropy and a projective witness.
//! * [`protocol`] computes the interferometer phases from the geometry, the
//!   joint state before the final beam splitters and the detector statistics.
//! * [`fieldmodel`] simulates a single bosonic mediator mode that entangles
//!   with the masses, imprints the phases and returns to its initial state,
//!   optionally under number-basis dephasing.
//! * [`nogo`] brute-forces the statement that a mediator with a single
//!   observable cannot entangle the masses, and builds the quantum
//!   counterexample.

pub mod entanglement;
pub mod error;
pub mod fieldmodel;
pub mod nogo;
pub mod protocol;
pub mod qcore;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use entanglement::{
    bell_states, concurrence, is_ppt, linear_entropy, negativity, normalized_linear_entropy,
    pure_concurrence, witness_expectation, BipartitionSpec, PPT_TOLERANCE,
};
pub use fieldmodel::{
    dephase_field, dephase_subsystem, entanglement_breaking_threshold, field_cycle,
    field_cycle_auto, field_cycle_with_dephasing, field_cycle_with_route, mass_field_entanglement,
    planck_ratio_phase, required_amplitude, xi_from_phase, CouplingMatrix, CycleRoute,
    DephasedCycle, DephasedOutcome, DephasingSpec, MediatorRun, PlanckPhase, ThresholdBracket,
    XiEstimate,
};
pub use nogo::{
    apply_classical_circuit, counterexample_control, quantum_mediator_counterexample,
    random_classical_circuit, replay_trial, verify_no_go, verify_no_go_with_threads,
    ClassicalCircuit, ClassicalOp, ClassicalOpKind, Counterexample, NoGoReport, TrialRecord,
};
pub use protocol::{
    branch_phase_concurrence, detector_probabilities, gravitational_phase, phases_from_geometry,
    pre_beam_splitter_state, simulate_run, simulate_run_with, PhaseAssignment, PhaseSet,
    PhysicalConstants, PhysicalParams, RunResult,
};
pub use qcore::{
    coherent_state, displacement_operator, number_phase_operator, partial_trace, partial_transpose,
    partial_transpose_set, CompositeSpace, DensityMatrix, FockSpace, Operator, PureState, Tensor,
};

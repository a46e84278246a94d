//! Randomized check that a mediator with a single observable cannot
//! entangle two probes it couples to separately, and the counterexample
//! once the mediator gains a complementary observable.
//!
//! Subsystem order is `Q1 (x) Q2 (x) C`, with `C` the mediator of dimension
//! 2 to 4. "Classical" is made operational: every allowed operation is a
//! channel that commutes with complete dephasing of `C` in its basis.

mod circuit;
mod counterexample;
mod ops;
mod verify;

pub use circuit::{apply_classical_circuit, random_classical_circuit, ClassicalCircuit};
pub use counterexample::{
    counterexample_control, quantum_mediator_counterexample, Counterexample, CounterexampleStep,
};
pub use ops::{commutes_with_dephasing, ClassicalOp, ClassicalOpKind, COVARIANCE_TOLERANCE};
pub use verify::{
    replay_trial, verify_no_go, verify_no_go_with_threads, NoGoReport, TrialFailure, TrialRecord,
};

/// Largest mediator dimension.
pub const MAX_MEDIATOR_DIM: usize = 4;

use super::circuit::apply_kraus;
use super::ops::{commutes_with_dephasing, ClassicalOp};
use crate::entanglement::{concurrence, negativity, BipartitionSpec};
use crate::error::Result;
use crate::qcore::linalg::{c, identity, kron, CMatrix};
use crate::qcore::{partial_trace, CompositeSpace, DensityMatrix, PureState};

/// One step of the counterexample circuit on `Q1 (x) Q2 (x) C`.
#[derive(Debug, Clone)]
pub struct CounterexampleStep {
    pub description: &'static str,
    pub kraus: Vec<CMatrix>,
    /// Whether the step commutes with complete dephasing of `C`.
    pub covariant: bool,
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub steps: Vec<CounterexampleStep>,
    pub final_state: DensityMatrix,
    pub negativity: f64,
    pub concurrence: f64,
}

fn hadamard() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)])
}

fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

fn three(a: &CMatrix, b: &CMatrix, m: &CMatrix) -> CMatrix {
    kron(&kron(a, b), m)
}

/// Mediator-controlled `X` on probe `target`, checked as a classical
/// operation and lifted to the full space.
fn controlled_x(target: usize) -> Result<CMatrix> {
    let op = ClassicalOp::controlled_unitary(target, vec![identity(2), pauli_x()])?;
    let k = &op.kraus()[0];
    let (p0, p1) = (
        CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]),
        CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)]),
    );
    debug_assert_eq!(k, &(kron(&identity(2), &p0) + kron(&pauli_x(), &p1)));
    let i = identity(2);
    Ok(if target == 0 {
        three(&i, &i, &p0) + three(&pauli_x(), &i, &p1)
    } else {
        three(&i, &i, &p0) + three(&i, &pauli_x(), &p1)
    })
}

fn build(with_superposition: bool) -> Result<Counterexample> {
    let space = CompositeSpace::qubits(3)?;
    let i = identity(2);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let ket0_bra_plus = CMatrix::from_row_slice(2, 2, &[c(s), c(s), c(0.0), c(0.0)]);
    let ket0_bra_minus = CMatrix::from_row_slice(2, 2, &[c(s), c(-s), c(0.0), c(0.0)]);

    let mut raw: Vec<(&'static str, Vec<CMatrix>)> = Vec::new();
    if with_superposition {
        raw.push((
            "Hadamard on the mediator (superposition of its classical states)",
            vec![three(&i, &i, &hadamard())],
        ));
    }
    raw.push(("mediator-controlled X on Q1", vec![controlled_x(0)?]));
    raw.push(("mediator-controlled X on Q2", vec![controlled_x(1)?]));
    raw.push((
        "measure the mediator in the complementary basis, reset it, Z on Q2 after outcome -",
        vec![
            three(&i, &i, &ket0_bra_plus),
            three(&i, &pauli_z(), &ket0_bra_minus),
        ],
    ));

    let mut rho = PureState::basis(space.clone(), 0)?
        .density_matrix()
        .into_matrix();
    let mut steps = Vec::with_capacity(raw.len());
    for (description, kraus) in raw {
        rho = apply_kraus(&kraus, &rho);
        let covariant = commutes_with_dephasing(&kraus, &space, 2)?;
        steps.push(CounterexampleStep {
            description,
            kraus,
            covariant,
        });
    }
    let final_state = partial_trace(&DensityMatrix::from_raw(space, rho), &[0, 1])?;
    Ok(Counterexample {
        negativity: negativity(&final_state, &BipartitionSpec::two_qubits())?,
        concurrence: concurrence(&final_state)?,
        steps,
        final_state,
    })
}

/// Mediator put in a superposition of its classical states, coupled to each
/// probe separately, then measured in the complementary basis with a
/// correction on `Q2`: the probes end in `(|00> + |11>)/√2`.
pub fn quantum_mediator_counterexample() -> Result<Counterexample> {
    build(true)
}

/// The same circuit without the superposition step.
pub fn counterexample_control() -> Result<Counterexample> {
    build(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reaches_a_bell_state() {
        let ce = quantum_mediator_counterexample().unwrap();
        assert!((ce.negativity - 0.5).abs() < 1e-12);
        let covariant: Vec<bool> = ce.steps.iter().map(|s| s.covariant).collect();
        assert_eq!(covariant, vec![false, true, true, false]);
    }
}

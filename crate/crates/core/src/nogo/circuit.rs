use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ops::ClassicalOp;
use crate::error::{Error, Result};
use crate::qcore::linalg::{max_abs_diff, CMatrix};
use crate::qcore::random::haar_unitary;
use crate::qcore::{partial_trace, CompositeSpace, DensityMatrix, Tensor};

/// Ordered operations on `Q1 (x) Q2 (x) C`; each touches at most one probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalCircuit {
    d_c: usize,
    ops: Vec<ClassicalOp>,
    seed: u64,
}

impl ClassicalCircuit {
    pub fn new(d_c: usize, ops: Vec<ClassicalOp>, seed: u64) -> Result<Self> {
        if !(2..=super::MAX_MEDIATOR_DIM).contains(&d_c) {
            return Err(Error::domain(format!(
                "mediator dimension {d_c} outside 2..=4"
            )));
        }
        if let Some(op) = ops.iter().find(|op| op.mediator_dim() != d_c) {
            return Err(Error::dimension(format!(
                "operation on a mediator of dimension {} in a circuit with {d_c}",
                op.mediator_dim()
            )));
        }
        Ok(Self { d_c, ops, seed })
    }

    pub fn mediator_dim(&self) -> usize {
        self.d_c
    }

    pub fn ops(&self) -> &[ClassicalOp] {
        &self.ops
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn depth(&self) -> usize {
        self.ops.len()
    }

    pub fn space(&self) -> CompositeSpace {
        CompositeSpace::new(vec![2, 2, self.d_c]).expect("valid dims")
    }
}

fn random_op<R: Rng>(kind: usize, target: usize, d_c: usize, rng: &mut R) -> Result<ClassicalOp> {
    match kind {
        0 => ClassicalOp::controlled_unitary(
            target,
            (0..d_c).map(|_| haar_unitary(2, rng)).collect(),
        ),
        1 => {
            let basis = haar_unitary(2, rng);
            let perms = (0..2)
                .map(|_| {
                    let mut p: Vec<usize> = (0..d_c).collect();
                    p.shuffle(rng);
                    p
                })
                .collect();
            ClassicalOp::measure_permute(target, basis, perms)
        }
        2 => ClassicalOp::local_unitary(target, haar_unitary(2, rng), d_c),
        _ => {
            let matrix = (0..d_c)
                .map(|_| {
                    let row: Vec<f64> = (0..d_c)
                        .map(|_| {
                            if rng.random_bool(0.25) {
                                0.0
                            } else {
                                rng.random::<f64>()
                            }
                        })
                        .collect();
                    let total: f64 = row.iter().sum();
                    if total > 0.0 {
                        row.iter().map(|x| x / total).collect()
                    } else {
                        let mut row = vec![0.0; d_c];
                        row[rng.random_range(0..d_c)] = 1.0;
                        row
                    }
                })
                .collect();
            ClassicalOp::stochastic_map(matrix)
        }
    }
}

/// Random circuit of `depth` operations. The first two operations couple
/// `Q1` then `Q2` to the mediator; the remaining kinds are uniform, with
/// targets alternating between the probes.
pub fn random_classical_circuit(seed: u64, depth: usize, d_c: usize) -> Result<ClassicalCircuit> {
    if depth == 0 {
        return Err(Error::domain("circuit depth must be at least 1"));
    }
    if !(2..=super::MAX_MEDIATOR_DIM).contains(&d_c) {
        return Err(Error::domain(format!(
            "mediator dimension {d_c} outside 2..=4"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ops = Vec::with_capacity(depth);
    for k in 0..depth {
        let kind = if k < 2 {
            rng.random_range(0..2)
        } else {
            rng.random_range(0..4)
        };
        ops.push(random_op(kind, k % 2, d_c, &mut rng)?);
    }
    ClassicalCircuit::new(d_c, ops, seed)
}

/// Lifts a Kraus operator on `Q_target (x) C` to `Q1 (x) Q2 (x) C`.
fn embed(k: &CMatrix, target: usize, d_c: usize) -> CMatrix {
    let d = 4 * d_c;
    let mut out = CMatrix::zeros(d, d);
    for q1 in 0..2 {
        for q2 in 0..2 {
            for cl in 0..d_c {
                let row = (q1 * 2 + q2) * d_c + cl;
                let (tq, other) = if target == 0 { (q1, q2) } else { (q2, q1) };
                for tq2 in 0..2 {
                    for cl2 in 0..d_c {
                        let (c1, c2) = if target == 0 {
                            (tq2, other)
                        } else {
                            (other, tq2)
                        };
                        let col = (c1 * 2 + c2) * d_c + cl2;
                        out[(row, col)] = k[(tq * d_c + cl, tq2 * d_c + cl2)];
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn apply_kraus(kraus: &[CMatrix], rho: &CMatrix) -> CMatrix {
    kraus
        .iter()
        .fold(CMatrix::zeros(rho.nrows(), rho.ncols()), |acc, k| {
            acc + k * rho * k.adjoint()
        })
}

/// Product of the three single-system marginals, if `rho` equals it.
fn check_product(rho: &DensityMatrix) -> Result<()> {
    let parts: Vec<DensityMatrix> = (0..3)
        .map(|i| partial_trace(rho, &[i]))
        .collect::<Result<_>>()?;
    let product = parts[0].tensor(&parts[1]).tensor(&parts[2]);
    let defect = max_abs_diff(product.matrix(), rho.matrix());
    if defect > 1e-10 {
        return Err(Error::precondition(format!(
            "initial state is not a product of single-system states (defect {defect:e})"
        )));
    }
    Ok(())
}

/// Runs the circuit on a product initial state.
pub fn apply_classical_circuit(
    circuit: &ClassicalCircuit,
    initial: &DensityMatrix,
) -> Result<DensityMatrix> {
    let space = circuit.space();
    if initial.space() != &space {
        return Err(Error::dimension(format!(
            "initial state on {} but the circuit acts on {space}",
            initial.space()
        )));
    }
    check_product(initial)?;
    let mut rho = initial.matrix().clone();
    for op in circuit.ops() {
        let target = op.target().unwrap_or(0);
        let kraus: Vec<CMatrix> = op
            .kraus()
            .iter()
            .map(|k| embed(k, target, circuit.mediator_dim()))
            .collect();
        rho = apply_kraus(&kraus, &rho);
    }
    Ok(DensityMatrix::from_raw(space, rho))
}

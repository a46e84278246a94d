use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qcore::linalg::{c, identity, kron, max_abs_diff, unitarity_defect, CMatrix};
use crate::qcore::random::haar_unitary;
use crate::qcore::CompositeSpace;

/// Tolerance of the channel-level dephasing covariance check.
pub const COVARIANCE_TOLERANCE: f64 = 1e-10;
const UNITARY_TOLERANCE: f64 = 1e-12;
const STOCHASTIC_TOLERANCE: f64 = 1e-12;

/// What an operation does.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassicalOpKind {
    /// `sum_c U_c (x) |c><c|` on `Q_target (x) C`.
    ControlledUnitary {
        target: usize,
        unitaries: Vec<CMatrix>,
    },
    /// Projective measurement of `Q_target` in the orthonormal basis given by
    /// the columns of `basis`; outcome `m` permutes the classical states by
    /// `permutations[m]`.
    MeasurePermute {
        target: usize,
        basis: CMatrix,
        permutations: Vec<Vec<usize>>,
    },
    /// `U` on `Q_target` alone.
    LocalUnitary { target: usize, unitary: CMatrix },
    /// `c -> c'` with probability `matrix[c][c']`.
    StochasticMap { matrix: Vec<Vec<f64>> },
}

/// One validated operation; its Kraus operators act on `Q_target (x) C`
/// (on `Q1 (x) C` for a stochastic map, which leaves the probe alone).
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalOp {
    kind: ClassicalOpKind,
    d_c: usize,
    kraus: Vec<CMatrix>,
}

fn check_target(target: usize) -> Result<()> {
    if target > 1 {
        return Err(Error::domain(format!(
            "probe index {target} must be 0 or 1"
        )));
    }
    Ok(())
}

fn check_dim(d_c: usize) -> Result<()> {
    if !(2..=super::MAX_MEDIATOR_DIM).contains(&d_c) {
        return Err(Error::domain(format!(
            "mediator dimension {d_c} outside 2..={}",
            super::MAX_MEDIATOR_DIM
        )));
    }
    Ok(())
}

fn check_qubit_unitary(u: &CMatrix) -> Result<()> {
    if u.shape() != (2, 2) {
        return Err(Error::dimension(format!(
            "probe unitary has shape {:?}",
            u.shape()
        )));
    }
    let defect = unitarity_defect(u);
    if defect > UNITARY_TOLERANCE {
        return Err(Error::domain(format!(
            "matrix is not unitary (defect {defect:e})"
        )));
    }
    Ok(())
}

fn projector(k: usize, d: usize) -> CMatrix {
    let mut p = CMatrix::zeros(d, d);
    p[(k, k)] = c(1.0);
    p
}

fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let d = perm.len();
    let mut m = CMatrix::zeros(d, d);
    for (from, &to) in perm.iter().enumerate() {
        m[(to, from)] = c(1.0);
    }
    m
}

impl ClassicalOp {
    pub fn controlled_unitary(target: usize, unitaries: Vec<CMatrix>) -> Result<Self> {
        check_target(target)?;
        let d_c = unitaries.len();
        check_dim(d_c)?;
        let mut k = CMatrix::zeros(2 * d_c, 2 * d_c);
        for (cl, u) in unitaries.iter().enumerate() {
            check_qubit_unitary(u)?;
            k += kron(u, &projector(cl, d_c));
        }
        Self::build(
            ClassicalOpKind::ControlledUnitary { target, unitaries },
            d_c,
            vec![k],
        )
    }

    pub fn measure_permute(
        target: usize,
        basis: CMatrix,
        permutations: Vec<Vec<usize>>,
    ) -> Result<Self> {
        check_target(target)?;
        check_qubit_unitary(&basis)?;
        if permutations.len() != 2 {
            return Err(Error::domain(
                "one classical permutation per measurement outcome is required",
            ));
        }
        let d_c = permutations[0].len();
        check_dim(d_c)?;
        let mut kraus = Vec::with_capacity(2);
        for (m, perm) in permutations.iter().enumerate() {
            let mut seen = vec![false; d_c];
            if perm.len() != d_c
                || perm
                    .iter()
                    .any(|&x| x >= d_c || std::mem::replace(&mut seen[x], true))
            {
                return Err(Error::domain(format!(
                    "{perm:?} is not a permutation of 0..{d_c}"
                )));
            }
            let b = basis.column(m).into_owned();
            let proj = &b * b.adjoint();
            kraus.push(kron(&proj, &permutation_matrix(perm)));
        }
        Self::build(
            ClassicalOpKind::MeasurePermute {
                target,
                basis,
                permutations,
            },
            d_c,
            kraus,
        )
    }

    pub fn local_unitary(target: usize, unitary: CMatrix, d_c: usize) -> Result<Self> {
        check_target(target)?;
        check_dim(d_c)?;
        check_qubit_unitary(&unitary)?;
        let k = kron(&unitary, &identity(d_c));
        Self::build(
            ClassicalOpKind::LocalUnitary { target, unitary },
            d_c,
            vec![k],
        )
    }

    pub fn stochastic_map(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let d_c = matrix.len();
        check_dim(d_c)?;
        let mut kraus = Vec::new();
        for (from, row) in matrix.iter().enumerate() {
            if row.len() != d_c {
                return Err(Error::dimension("stochastic matrix must be square"));
            }
            if row.iter().any(|&p| p.is_nan() || p < 0.0) {
                return Err(Error::domain(
                    "stochastic matrix entries must be nonnegative",
                ));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > STOCHASTIC_TOLERANCE {
                return Err(Error::domain(format!("row {from} sums to {total}, not 1")));
            }
            for (to, &p) in row.iter().enumerate() {
                if p > 0.0 {
                    let mut jump = CMatrix::zeros(d_c, d_c);
                    jump[(to, from)] = c(p.sqrt());
                    kraus.push(kron(&identity(2), &jump));
                }
            }
        }
        Self::build(ClassicalOpKind::StochasticMap { matrix }, d_c, kraus)
    }

    fn build(kind: ClassicalOpKind, d_c: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        let space = CompositeSpace::new(vec![2, d_c])?;
        let completeness = kraus
            .iter()
            .fold(CMatrix::zeros(2 * d_c, 2 * d_c), |acc, k| {
                acc + k.adjoint() * k
            });
        let defect = max_abs_diff(&completeness, &identity(2 * d_c));
        if defect > 1e-10 {
            return Err(Error::domain(format!(
                "operation is not trace preserving (defect {defect:e})"
            )));
        }
        if !commutes_with_dephasing(&kraus, &space, 1)? {
            return Err(Error::domain(
                "operation does not commute with complete dephasing of the mediator",
            ));
        }
        Ok(Self { kind, d_c, kraus })
    }

    pub fn kind(&self) -> &ClassicalOpKind {
        &self.kind
    }

    pub fn mediator_dim(&self) -> usize {
        self.d_c
    }

    /// Probe the operation touches, if any.
    pub fn target(&self) -> Option<usize> {
        match &self.kind {
            ClassicalOpKind::ControlledUnitary { target, .. }
            | ClassicalOpKind::MeasurePermute { target, .. }
            | ClassicalOpKind::LocalUnitary { target, .. } => Some(*target),
            ClassicalOpKind::StochasticMap { .. } => None,
        }
    }

    /// Kraus operators on `Q_target (x) C`.
    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ClassicalOpKind::ControlledUnitary { .. } => "controlled_unitary",
            ClassicalOpKind::MeasurePermute { .. } => "measure_permute",
            ClassicalOpKind::LocalUnitary { .. } => "local_unitary",
            ClassicalOpKind::StochasticMap { .. } => "stochastic_map",
        }
    }
}

fn dephase(m: &CMatrix, space: &CompositeSpace, index: usize) -> CMatrix {
    let d = space.total_dim();
    let level: Vec<usize> = (0..d).map(|x| space.digits(x)[index]).collect();
    CMatrix::from_fn(d, d, |i, j| {
        if level[i] == level[j] {
            m[(i, j)]
        } else {
            c(0.0)
        }
    })
}

fn apply(kraus: &[CMatrix], x: &CMatrix) -> CMatrix {
    kraus
        .iter()
        .fold(CMatrix::zeros(x.nrows(), x.ncols()), |acc, k| {
            acc + k * x * k.adjoint()
        })
}

/// Whether the channel with these Kraus operators commutes with complete
/// dephasing of subsystem `index`, checked on fixed random probe matrices.
pub fn commutes_with_dephasing(
    kraus: &[CMatrix],
    space: &CompositeSpace,
    index: usize,
) -> Result<bool> {
    space.check_index(index)?;
    let d = space.total_dim();
    if kraus.iter().any(|k| k.shape() != (d, d)) {
        return Err(Error::dimension(format!(
            "Kraus operators do not act on {space}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    for _ in 0..2 {
        // A Haar unitary times a scale is a generic non-Hermitian probe.
        let probe = haar_unitary(d, &mut rng) * c(0.5) + haar_unitary(d, &mut rng);
        let lhs = apply(kraus, &dephase(&probe, space, index));
        let rhs = dephase(&apply(kraus, &probe), space, index);
        if max_abs_diff(&lhs, &rhs) > COVARIANCE_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
    }

    #[test]
    fn validation() {
        assert!(ClassicalOp::controlled_unitary(2, vec![identity(2), x()]).is_err());
        assert!(ClassicalOp::controlled_unitary(0, vec![identity(2)]).is_err());
        assert!(ClassicalOp::controlled_unitary(0, vec![identity(2), x() * c(2.0)]).is_err());
        assert!(
            ClassicalOp::measure_permute(0, identity(2), vec![vec![0, 0], vec![0, 1]]).is_err()
        );
        assert!(ClassicalOp::stochastic_map(vec![vec![0.5, 0.6], vec![1.0, 0.0]]).is_err());
        let op = ClassicalOp::stochastic_map(vec![vec![0.25, 0.75], vec![1.0, 0.0]]).unwrap();
        assert_eq!(op.kraus().len(), 3);
    }

    #[test]
    fn hadamard_on_mediator_is_not_covariant() {
        let s = 0.5f64.sqrt();
        let h = CMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]);
        let space = CompositeSpace::new(vec![2, 2]).unwrap();
        let k = kron(&identity(2), &h);
        assert!(!commutes_with_dephasing(&[k], &space, 1).unwrap());
        let cx = kron(&identity(2), &projector(0, 2)) + kron(&x(), &projector(1, 2));
        assert!(commutes_with_dephasing(&[cx], &space, 1).unwrap());
    }
}

use num_complex::Complex64;

use super::linalg::{self, c, CMatrix, CVector};
use super::space::{CompositeSpace, IndexSplit};
use crate::error::{Error, Result};

/// Norm slack for pure states.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Hermiticity and trace slack for density matrices.
pub const TRACE_TOLERANCE: f64 = 1e-12;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;

/// Unit vector on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    space: CompositeSpace,
    amplitudes: CVector,
}

impl PureState {
    /// Checks length and unit norm.
    pub fn new(space: CompositeSpace, amplitudes: CVector) -> Result<Self> {
        check_len(&space, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::invalid_state(format!(
                "state norm {norm} differs from 1 by more than {NORM_TOLERANCE:e}"
            )));
        }
        Ok(Self { space, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(space: CompositeSpace, amplitudes: CVector) -> Result<Self> {
        check_len(&space, amplitudes.len())?;
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::invalid_state(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        Ok(Self {
            space,
            amplitudes: amplitudes / c(norm),
        })
    }

    pub fn from_slice(space: CompositeSpace, amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(space, CVector::from_column_slice(amplitudes))
    }

    pub fn basis(space: CompositeSpace, index: usize) -> Result<Self> {
        if index >= space.total_dim() {
            return Err(Error::domain(format!(
                "basis index {index} out of range for dimension {}",
                space.total_dim()
            )));
        }
        let mut amplitudes = CVector::zeros(space.total_dim());
        amplitudes[index] = c(1.0);
        Ok(Self { space, amplitudes })
    }

    pub(crate) fn from_raw(space: CompositeSpace, amplitudes: CVector) -> Self {
        debug_assert_eq!(space.total_dim(), amplitudes.len());
        Self { space, amplitudes }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        same_space(&self.space, &other.space)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::from_raw(
            self.space.clone(),
            &self.amplitudes * self.amplitudes.adjoint(),
        )
    }

    /// Reduced state on `keep` without forming the full projector.
    ///
    /// Costs `O(d_keep^2 * d_rest)`, which is what makes marginals of
    /// large mass-field states affordable.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = nonempty_keep(&self.space, keep)?;
        let split = IndexSplit::new(&self.space, &keep);
        let table = split.join_table();
        let mut out = CMatrix::zeros(split.keep_dim, split.keep_dim);
        for i in 0..split.keep_dim {
            for j in i..split.keep_dim {
                let acc: Complex64 = table[i]
                    .iter()
                    .zip(&table[j])
                    .map(|(&a, &b)| self.amplitudes[a] * self.amplitudes[b].conj())
                    .sum();
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        Ok(DensityMatrix::from_raw(self.space.select(&keep), out))
    }
}

/// Positive semidefinite, unit-trace Hermitian matrix on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: CompositeSpace,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(space: CompositeSpace, matrix: CMatrix) -> Result<Self> {
        let rho = Self::from_raw_checked_shape(space, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    fn from_raw_checked_shape(space: CompositeSpace, matrix: CMatrix) -> Result<Self> {
        check_square(&space, &matrix)?;
        Ok(Self { space, matrix })
    }

    pub(crate) fn from_raw(space: CompositeSpace, matrix: CMatrix) -> Self {
        debug_assert_eq!(space.total_dim(), matrix.nrows());
        Self { space, matrix }
    }

    pub fn maximally_mixed(space: CompositeSpace) -> Self {
        let d = space.total_dim();
        Self {
            matrix: linalg::identity(d) * c(1.0 / d as f64),
            space,
        }
    }

    /// Convex combination `sum_k w_k rho_k`; weights must be a probability vector.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::domain(
                "mixture needs one weight per state and at least one state",
            ));
        }
        if weights.iter().any(|&w| w.is_nan() || w < 0.0) {
            return Err(Error::domain("mixture weights must be nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::domain(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        let space = states[0].space.clone();
        let mut matrix = CMatrix::zeros(space.total_dim(), space.total_dim());
        for (w, s) in weights.iter().zip(states) {
            same_space(&space, &s.space)?;
            matrix += &s.matrix * c(*w);
        }
        Ok(Self { space, matrix })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// `<psi|rho|psi>`.
    pub fn expectation_projector(&self, psi: &PureState) -> Result<f64> {
        same_space(&self.space, psi.space())?;
        let v = psi.amplitudes();
        Ok((v.adjoint() * &self.matrix * v)[(0, 0)].re)
    }

    /// Re-checks the density-matrix invariants.
    pub fn validate(&self) -> Result<()> {
        let herm = linalg::hermiticity_defect(&self.matrix);
        if herm > TRACE_TOLERANCE {
            return Err(Error::invalid_state(format!(
                "matrix is not Hermitian (defect {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(Error::invalid_state(format!("trace {tr} differs from 1")));
        }
        let min = self.eigenvalues()[0];
        if min < -POSITIVITY_TOLERANCE {
            return Err(Error::invalid_state(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Square matrix acting on a composite space (unitaries, observables,
/// partial transposes).
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: CompositeSpace,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: CompositeSpace, matrix: CMatrix) -> Result<Self> {
        check_square(&space, &matrix)?;
        Ok(Self { space, matrix })
    }

    pub(crate) fn from_raw(space: CompositeSpace, matrix: CMatrix) -> Self {
        debug_assert_eq!(space.total_dim(), matrix.nrows());
        Self { space, matrix }
    }

    pub fn identity(space: CompositeSpace) -> Self {
        let d = space.total_dim();
        Self {
            space,
            matrix: linalg::identity(d),
        }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dagger(&self) -> Operator {
        Operator {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        same_space(&self.space, &other.space)?;
        Ok(Operator {
            space: self.space.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `max |U^† U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.matrix)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// `U|psi>`; fails if the result leaves the unit sphere, i.e. the
    /// operator is not norm-preserving on this state.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        same_space(&self.space, psi.space())?;
        let out = &self.matrix * psi.amplitudes();
        let norm = out.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE * 100.0 {
            return Err(Error::invalid_state(format!(
                "operator changed the state norm to {norm}"
            )));
        }
        Ok(PureState::from_raw(self.space.clone(), out))
    }

    /// `U rho U^†`.
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        same_space(&self.space, rho.space())?;
        Ok(DensityMatrix::from_raw(
            self.space.clone(),
            &self.matrix * rho.matrix() * self.matrix.adjoint(),
        ))
    }
}

/// Kronecker product of like objects; the left factor becomes the lower
/// subsystem indices. Mixing states and operators does not type-check.
pub trait Tensor<Rhs = Self> {
    type Output;
    fn tensor(&self, rhs: &Rhs) -> Self::Output;
}

impl Tensor for PureState {
    type Output = PureState;
    fn tensor(&self, rhs: &PureState) -> PureState {
        PureState::from_raw(
            self.space.concat(&rhs.space),
            linalg::kron_vec(&self.amplitudes, &rhs.amplitudes),
        )
    }
}

impl Tensor for DensityMatrix {
    type Output = DensityMatrix;
    fn tensor(&self, rhs: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_raw(
            self.space.concat(&rhs.space),
            linalg::kron(&self.matrix, &rhs.matrix),
        )
    }
}

impl Tensor for Operator {
    type Output = Operator;
    fn tensor(&self, rhs: &Operator) -> Operator {
        Operator::from_raw(
            self.space.concat(&rhs.space),
            linalg::kron(&self.matrix, &rhs.matrix),
        )
    }
}

pub(crate) fn same_space(a: &CompositeSpace, b: &CompositeSpace) -> Result<()> {
    if a != b {
        return Err(Error::dimension(format!("space {a} does not match {b}")));
    }
    Ok(())
}

fn check_len(space: &CompositeSpace, len: usize) -> Result<()> {
    if len != space.total_dim() {
        return Err(Error::dimension(format!(
            "vector of length {len} on space {space} of dimension {}",
            space.total_dim()
        )));
    }
    Ok(())
}

fn check_square(space: &CompositeSpace, m: &CMatrix) -> Result<()> {
    let d = space.total_dim();
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::dimension(format!(
            "{}x{} matrix on space {space} of dimension {d}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

pub(crate) fn nonempty_keep(space: &CompositeSpace, keep: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::domain("the kept subsystem set must be nonempty"));
    }
    space.normalize_indices(keep)
}

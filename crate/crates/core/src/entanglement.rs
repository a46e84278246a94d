//! Entanglement monotones and witnesses.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::linalg::{c, hermitian_eigen, CMatrix};
use crate::qcore::{partial_transpose_set, CompositeSpace, DensityMatrix, PureState};
use crate::Complex64;

/// Smallest partial-transpose eigenvalue still counted as positive.
pub const PPT_TOLERANCE: f64 = 1e-10;

/// Eigenvalues of `rho` below this are dropped before the spin-flip product.
const RANK_CUTOFF: f64 = 1e-14;

/// Maximal-entanglement check on witness targets.
const TARGET_TOLERANCE: f64 = 1e-10;

/// Split of a composite space into two complementary groups of subsystems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitionSpec {
    space: CompositeSpace,
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl BipartitionSpec {
    /// `side_a` against everything else.
    pub fn new(space: CompositeSpace, side_a: &[usize]) -> Result<Self> {
        let side_a = space.normalize_indices(side_a)?;
        let side_b: Vec<usize> = (0..space.len()).filter(|i| !side_a.contains(i)).collect();
        Self::from_sides(space, side_a, side_b)
    }

    /// Both sides given; they must partition the subsystems.
    pub fn with_sides(space: CompositeSpace, side_a: &[usize], side_b: &[usize]) -> Result<Self> {
        let a = space.normalize_indices(side_a)?;
        let b = space.normalize_indices(side_b)?;
        if a.iter().any(|i| b.contains(i)) {
            return Err(Error::domain(format!("sides {a:?} and {b:?} overlap")));
        }
        if a.len() + b.len() != space.len() {
            return Err(Error::domain(format!(
                "sides {a:?} and {b:?} do not cover all {} subsystems",
                space.len()
            )));
        }
        Self::from_sides(space, a, b)
    }

    fn from_sides(space: CompositeSpace, side_a: Vec<usize>, side_b: Vec<usize>) -> Result<Self> {
        if side_a.is_empty() || side_b.is_empty() {
            return Err(Error::domain(
                "both sides of a bipartition must be nonempty",
            ));
        }
        Ok(Self {
            space,
            side_a,
            side_b,
        })
    }

    /// Qubit 0 against qubit 1.
    pub fn two_qubits() -> Self {
        Self {
            space: CompositeSpace::qubits(2).expect("valid"),
            side_a: vec![0],
            side_b: vec![1],
        }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }
}

fn require_two_qubits(space: &CompositeSpace, what: &str) -> Result<()> {
    if space.dims() != [2, 2] {
        return Err(Error::domain(format!(
            "{what} needs a two-qubit space, got {space}"
        )));
    }
    Ok(())
}

fn spin_flip() -> CMatrix {
    // sigma_y (x) sigma_y, which is real.
    let mut y = CMatrix::zeros(4, 4);
    y[(0, 3)] = c(-1.0);
    y[(1, 2)] = c(1.0);
    y[(2, 1)] = c(1.0);
    y[(3, 0)] = c(-1.0);
    y
}

/// Wootters concurrence of a two-qubit state.
///
/// With `rho = W W^†` the square roots of the eigenvalues of
/// `rho (Y rho^* Y)` are the singular values of `W^T Y W`; working with `W`
/// avoids square roots of tiny, noisy eigenvalues.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho.space(), "concurrence")?;
    let eig = hermitian_eigen(rho.matrix());
    let cols: Vec<usize> = (0..4)
        .filter(|&k| eig.eigenvalues[k] > RANK_CUTOFF)
        .collect();
    if cols.is_empty() {
        return Ok(0.0);
    }
    let w = DMatrix::from_fn(4, cols.len(), |i, j| {
        let k = cols[j];
        eig.eigenvectors[(i, k)] * c(eig.eigenvalues[k].sqrt())
    });
    let tau = w.transpose() * spin_flip() * &w;
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.resize(4, 0.0);
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// `2 |ad - bc|` for a two-qubit pure state.
pub fn pure_concurrence(psi: &PureState) -> Result<f64> {
    require_two_qubits(psi.space(), "concurrence")?;
    let v = psi.amplitudes();
    Ok((2.0 * (v[0] * v[3] - v[1] * v[2]).norm()).min(1.0))
}

fn check_split(rho: &DensityMatrix, split: &BipartitionSpec) -> Result<()> {
    if rho.space() != split.space() {
        return Err(Error::domain(format!(
            "bipartition of {} applied to a state on {}",
            split.space(),
            rho.space()
        )));
    }
    Ok(())
}

fn partial_transpose_spectrum(rho: &DensityMatrix, split: &BipartitionSpec) -> Result<Vec<f64>> {
    check_split(rho, split)?;
    Ok(partial_transpose_set(rho, split.side_b())?.hermitian_eigenvalues())
}

/// Sum of the magnitudes of the negative partial-transpose eigenvalues.
pub fn negativity(rho: &DensityMatrix, split: &BipartitionSpec) -> Result<f64> {
    Ok(partial_transpose_spectrum(rho, split)?
        .iter()
        .filter(|&&e| e < 0.0)
        .fold(0.0, |acc, e| acc - e))
}

/// Positive partial transpose across `split`, up to [`PPT_TOLERANCE`].
pub fn is_ppt(rho: &DensityMatrix, split: &BipartitionSpec) -> Result<bool> {
    Ok(partial_transpose_spectrum(rho, split)?[0] >= -PPT_TOLERANCE)
}

/// `1 - Tr(rho^2)`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    1.0 - rho.purity()
}

/// Linear entropy rescaled to `[0, 1]` by `d / (d - 1)`.
pub fn normalized_linear_entropy(rho: &DensityMatrix) -> f64 {
    let d = rho.space().total_dim() as f64;
    d / (d - 1.0) * linear_entropy(rho)
}

/// `Tr(W rho)` for the projective witness `W = I/2 - |target><target|`.
///
/// The target must be maximally entangled so that every separable state
/// gives a nonnegative value.
pub fn witness_expectation(rho: &DensityMatrix, target: &PureState) -> Result<f64> {
    require_two_qubits(rho.space(), "witness")?;
    require_two_qubits(target.space(), "witness target")?;
    for side in [0, 1] {
        let m = target.reduced(&[side])?;
        let dev = (m.matrix() - CMatrix::identity(2, 2) * c(0.5))
            .iter()
            .fold(0.0f64, |acc, z| acc.max(z.norm()));
        if dev > TARGET_TOLERANCE {
            return Err(Error::precondition(format!(
                "witness target is not maximally entangled (marginal deviates by {dev:e})"
            )));
        }
    }
    Ok(0.5 - rho.expectation_projector(target)?)
}

/// `(|00> + |11>)/√2, (|00> - |11>)/√2, (|01> + |10>)/√2, (|01> - |10>)/√2`.
pub fn bell_states() -> [PureState; 4] {
    let s = 0.5f64.sqrt();
    let z = Complex64::ZERO;
    let space = CompositeSpace::qubits(2).expect("valid");
    let mk = |v: [Complex64; 4]| PureState::from_slice(space.clone(), &v).expect("unit norm");
    [
        mk([c(s), z, z, c(s)]),
        mk([c(s), z, z, c(-s)]),
        mk([z, c(s), c(s), z]),
        mk([z, c(s), c(-s), z]),
    ]
}

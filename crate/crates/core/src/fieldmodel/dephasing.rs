use num_complex::Complex64;

use super::cycle::required_amplitude;
use super::CouplingMatrix;
use crate::entanglement::{concurrence, negativity, BipartitionSpec};
use crate::error::{Error, Result};
use crate::qcore::fock::{coherent_vector, shift_matrix};
use crate::qcore::linalg::{c, CMatrix, CVector};
use crate::qcore::{CompositeSpace, DensityMatrix, FockSpace};

/// Largest truncation the dense dephased cycle accepts.
pub const DEPHASED_TRUNCATION_LIMIT: usize = 400;

/// Number-basis dephasing strength per application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingSpec {
    gamma: f64,
}

impl DephasingSpec {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::domain(format!(
                "dephasing strength {gamma} must be finite and nonnegative"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Multiplies the element between levels `n` and `m` of `subsystem` by
/// `exp(-gamma (n - m)^2 / 2)`: the average of `exp(i theta n)` rotations
/// over a centred Gaussian `theta` of variance `gamma`.
pub fn dephase_subsystem(
    rho: &DensityMatrix,
    subsystem: usize,
    spec: DephasingSpec,
) -> Result<DensityMatrix> {
    let space = rho.space();
    space.check_index(subsystem)?;
    let d = space.total_dim();
    let level: Vec<usize> = (0..d).map(|x| space.digits(x)[subsystem]).collect();
    let g = spec.gamma();
    let mut m = rho.matrix().clone();
    for i in 0..d {
        for j in 0..d {
            let k = level[i] as f64 - level[j] as f64;
            if k != 0.0 {
                m[(i, j)] *= c((-g * k * k / 2.0).exp());
            }
        }
    }
    Ok(DensityMatrix::from_raw(space.clone(), m))
}

/// [`dephase_subsystem`] on the last subsystem, which holds the field.
pub fn dephase_field(rho: &DensityMatrix, spec: DephasingSpec) -> Result<DensityMatrix> {
    dephase_subsystem(rho, rho.space().len() - 1, spec)
}

/// Two-mass entanglement after a dephased cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasedOutcome {
    pub gamma: f64,
    pub mass_state: DensityMatrix,
    pub negativity: f64,
    pub concurrence: f64,
    /// Negativity of the same cycle with `w = 0`: what dephasing leaves
    /// behind from the displacements alone, without any transferred phase.
    pub record_negativity: f64,
    /// `negativity - record_negativity`, the part carried by the field
    /// coherences through the phase step.
    pub coherence_negativity: f64,
}

/// The cycle as a density matrix, dephasing the field before and after the
/// phase rotation. Displacements are built once; each strength then costs
/// `O(N^2)`.
#[derive(Debug, Clone)]
pub struct DephasedCycle {
    xis: CouplingMatrix,
    w: f64,
    fock: FockSpace,
    /// `D_ab |alpha0> / 2`.
    branches: Vec<CVector>,
    /// `D_j D_i^†` for `i <= j`, indexed `i * 4 + j`.
    transfer: Vec<Option<CMatrix>>,
}

impl DephasedCycle {
    pub fn new(xis: &CouplingMatrix, w: f64, fock: &FockSpace, alpha0: f64) -> Result<Self> {
        if !w.is_finite() || !alpha0.is_finite() {
            return Err(Error::domain("w and alpha0 must be finite"));
        }
        fock.check_amplitude(required_amplitude(xis, w, alpha0))?;
        let n = fock.truncation();
        if n > DEPHASED_TRUNCATION_LIMIT {
            return Err(Error::precondition(format!(
                "dephased cycle needs a truncation of {n} levels, above the dense limit {DEPHASED_TRUNCATION_LIMIT}"
            )));
        }
        let shifts = xis.flat().map(f64::sqrt);
        let mut distinct: Vec<(f64, CMatrix)> = Vec::new();
        for &s in &shifts {
            if !distinct.iter().any(|(t, _)| *t == s) {
                distinct.push((s, shift_matrix(s, n)?));
            }
        }
        let disp = |s: f64| &distinct.iter().find(|(t, _)| *t == s).expect("cached").1;
        let start = coherent_vector(alpha0, n);
        let branches = shifts.iter().map(|&s| disp(s) * &start * c(0.5)).collect();
        let mut transfer = vec![None; 16];
        for i in 0..4 {
            for j in i..4 {
                if shifts[i] != shifts[j] {
                    transfer[i * 4 + j] = Some(disp(shifts[j]) * disp(shifts[i]).adjoint());
                }
            }
        }
        Ok(Self {
            xis: *xis,
            w,
            fock: *fock,
            branches,
            transfer,
        })
    }

    pub fn xis(&self) -> &CouplingMatrix {
        &self.xis
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn fock(&self) -> &FockSpace {
        &self.fock
    }

    /// Final two-mass state for total kernel `exp(-gamma k^2 + i w k)` over
    /// level differences `k`.
    fn mass_state(&self, gamma: f64, w: f64) -> DensityMatrix {
        let n = self.fock.truncation();
        let kernel: Vec<Complex64> = (0..2 * n - 1)
            .map(|idx| {
                let k = idx as f64 - (n as f64 - 1.0);
                Complex64::from_polar((-gamma * k * k).exp(), w * k)
            })
            .collect();
        let mut m = CMatrix::zeros(4, 4);
        for a in 0..4 {
            for b in a..4 {
                let (fa, fb) = (&self.branches[a], &self.branches[b]);
                let mut acc = Complex64::ZERO;
                match &self.transfer[a * 4 + b] {
                    Some(t) => {
                        for j in 0..n {
                            let fbj = fb[j].conj();
                            for i in 0..n {
                                acc += fa[i] * fbj * kernel[i + n - 1 - j] * t[(j, i)];
                            }
                        }
                    }
                    None => {
                        for i in 0..n {
                            acc += fa[i] * fb[i].conj();
                        }
                    }
                }
                m[(a, b)] = acc;
                m[(b, a)] = acc.conj();
            }
        }
        DensityMatrix::from_raw(CompositeSpace::qubits(2).expect("valid"), m)
    }

    pub fn outcome(&self, spec: DephasingSpec) -> Result<DephasedOutcome> {
        let split = BipartitionSpec::two_qubits();
        let mass_state = self.mass_state(spec.gamma(), self.w);
        let record = self.mass_state(spec.gamma(), 0.0);
        let neg = negativity(&mass_state, &split)?;
        let record_negativity = negativity(&record, &split)?;
        Ok(DephasedOutcome {
            gamma: spec.gamma(),
            concurrence: concurrence(&mass_state)?,
            negativity: neg,
            record_negativity,
            coherence_negativity: neg - record_negativity,
            mass_state,
        })
    }

    fn coherence_negativity(&self, gamma: f64) -> Result<f64> {
        Ok(self
            .outcome(DephasingSpec::new(gamma)?)?
            .coherence_negativity)
    }

    /// Bisection for the dephasing strength at which the coherence-carried
    /// negativity drops to `tol`.
    pub fn threshold(&self, tol: f64) -> Result<ThresholdBracket> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::domain(format!("tolerance {tol} must be positive")));
        }
        let base = self.coherence_negativity(0.0)?;
        if base <= tol {
            return Err(Error::precondition(format!(
                "negativity without dephasing is {base:e}, not above the tolerance {tol:e}"
            )));
        }
        let (mut lo, mut neg_lo) = (0.0, base);
        let mut hi = 1e-6;
        let mut neg_hi = self.coherence_negativity(hi)?;
        while neg_hi > tol {
            (lo, neg_lo) = (hi, neg_hi);
            hi *= 10.0;
            if hi > 1e12 {
                return Err(Error::precondition(
                    "negativity stays above the tolerance for every dephasing strength tried",
                ));
            }
            neg_hi = self.coherence_negativity(hi)?;
        }
        let mut iterations = 0;
        while hi - lo > 1e-10 * hi && iterations < 200 {
            let mid = if lo > 0.0 { (lo * hi).sqrt() } else { 0.5 * hi };
            let v = self.coherence_negativity(mid)?;
            if v > tol {
                (lo, neg_lo) = (mid, v);
            } else {
                (hi, neg_hi) = (mid, v);
            }
            iterations += 1;
        }
        Ok(ThresholdBracket {
            gamma_lo: lo,
            gamma_hi: hi,
            gamma_star: 0.5 * (lo + hi),
            negativity_lo: neg_lo,
            negativity_hi: neg_hi,
            tol,
        })
    }
}

/// `negativity(gamma_lo) > tol >= negativity(gamma_hi)` for the
/// coherence-carried negativity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdBracket {
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    pub gamma_star: f64,
    pub negativity_lo: f64,
    pub negativity_hi: f64,
    pub tol: f64,
}

pub fn field_cycle_with_dephasing(
    xis: &CouplingMatrix,
    w: f64,
    fock: &FockSpace,
    alpha0: f64,
    gamma: f64,
) -> Result<DephasedOutcome> {
    let spec = DephasingSpec::new(gamma)?;
    DephasedCycle::new(xis, w, fock, alpha0)?.outcome(spec)
}

pub fn entanglement_breaking_threshold(
    xis: &CouplingMatrix,
    w: f64,
    fock: &FockSpace,
    tol: f64,
) -> Result<ThresholdBracket> {
    DephasedCycle::new(xis, w, fock, 0.0)?.threshold(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::PureState;

    #[test]
    fn zero_strength_is_identity() {
        let space = CompositeSpace::new(vec![2, 5]).unwrap();
        let v: Vec<Complex64> = (0..10).map(|k| Complex64::new(k as f64, 1.0)).collect();
        let rho = PureState::normalized(space, CVector::from_vec(v))
            .unwrap()
            .density_matrix();
        let out = dephase_field(&rho, DephasingSpec::new(0.0).unwrap()).unwrap();
        assert_eq!(out.matrix(), rho.matrix());
    }

    #[test]
    fn negative_strength_rejected() {
        assert!(DephasingSpec::new(-1.0).is_err());
        assert!(DephasingSpec::new(f64::NAN).is_err());
    }

    #[test]
    fn threshold_needs_entangled_baseline() {
        let fock = FockSpace::new(16).unwrap();
        let r = entanglement_breaking_threshold(&CouplingMatrix::zero(), 0.5, &fock, 1e-6);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}

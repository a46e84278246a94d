//! A single bosonic mode mediating the phase between the two masses.
//!
//! Each path configuration `|ab>` displaces the mode by `sqrt(xi_ab)`, a
//! global number-phase rotation `exp(i w n)` then writes a branch-dependent
//! phase, and the inverse conditional displacement returns the mode to its
//! initial coherent state. Dephasing in the number basis can be inserted
//! around the phase step.

mod cycle;
mod dephasing;

pub use cycle::{
    field_cycle, field_cycle_auto, field_cycle_with_route, required_amplitude, CycleRoute,
    MediatorRun,
};
pub use dephasing::{
    dephase_field, dephase_subsystem, entanglement_breaking_threshold, field_cycle_with_dephasing,
    DephasedCycle, DephasedOutcome, DephasingSpec, ThresholdBracket,
};

use crate::error::{Error, Result};
use crate::protocol::PhysicalConstants;

/// Nonnegative coupling `xi_ab` for each path configuration `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingMatrix {
    xi: [[f64; 2]; 2],
}

impl CouplingMatrix {
    pub fn new(xi: [[f64; 2]; 2]) -> Result<Self> {
        for (a, row) in xi.iter().enumerate() {
            for (b, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::domain(format!("xi_{a}{b} = {x} is not finite")));
                }
                if x < 0.0 {
                    return Err(Error::domain(format!(
                        "xi_{a}{b} = {x} is negative; flip the sign of w instead so that all couplings are nonnegative"
                    )));
                }
            }
        }
        Ok(Self { xi })
    }

    /// Entries in the order `00, 01, 10, 11`.
    pub fn from_flat(xi: [f64; 4]) -> Result<Self> {
        Self::new([[xi[0], xi[1]], [xi[2], xi[3]]])
    }

    pub fn zero() -> Self {
        Self { xi: [[0.0; 2]; 2] }
    }

    /// Couplings `phi_ab / w` that transfer the branch phases `phi_ab`.
    pub fn from_phases(phases: [f64; 4], w: f64) -> Result<Self> {
        let mut xi = [0.0; 4];
        for (slot, &phi) in xi.iter_mut().zip(&phases) {
            let est = xi_from_phase(phi, w)?;
            if est.sign_mismatch {
                return Err(Error::domain(format!(
                    "phase {phi} and w = {w} give a negative coupling; flip the sign of w"
                )));
            }
            *slot = est.xi;
        }
        Self::from_flat(xi)
    }

    /// Couplings carrying the maximally entangling phases `(0, 0, 0, pi)`.
    pub fn maximal(w: f64) -> Result<Self> {
        Self::from_phases([0.0, 0.0, 0.0, std::f64::consts::PI], w)
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.xi[a][b]
    }

    pub fn flat(&self) -> [f64; 4] {
        [self.xi[0][0], self.xi[0][1], self.xi[1][0], self.xi[1][1]]
    }

    pub fn max(&self) -> f64 {
        self.flat().into_iter().fold(0.0, f64::max)
    }

    /// Every entry multiplied by `k >= 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::from_flat(self.flat().map(|x| x * k))
    }

    /// Branch phases `w xi_ab` the cycle aims to imprint.
    pub fn target_phases(&self, w: f64) -> [f64; 4] {
        self.flat().map(|x| w * x)
    }
}

/// Result of inverting `w xi = phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiEstimate {
    pub xi: f64,
    /// `phi / w` came out negative, which no displacement can realize.
    pub sign_mismatch: bool,
}

/// `xi = phi / w`.
pub fn xi_from_phase(phi: f64, w: f64) -> Result<XiEstimate> {
    if w == 0.0 || !w.is_finite() {
        return Err(Error::domain(format!("w = {w} must be finite and nonzero")));
    }
    if !phi.is_finite() {
        return Err(Error::domain(format!("phase {phi} is not finite")));
    }
    let xi = phi / w;
    Ok(XiEstimate {
        xi,
        sign_mismatch: xi < 0.0,
    })
}

/// Linear entropy `1 - e^{-xi}` of either mass-field branch pair, i.e. one
/// minus the squared overlap of `|0>` and `|sqrt(xi)>`.
pub fn mass_field_entanglement(xi: f64) -> Result<f64> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::domain(format!(
            "xi = {xi} must be finite and nonnegative"
        )));
    }
    Ok(-(-xi).exp_m1())
}

/// Phase of the Newtonian coupling written two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanckPhase {
    /// `m^2 G dt / (hbar d)`.
    pub phi: f64,
    /// `(m / m_P)^2 (c / d) dt`.
    pub phi_planck: f64,
    /// `(m / m_P)^2`.
    pub ratio: f64,
}

pub fn planck_ratio_phase(
    m: f64,
    d: f64,
    dt: f64,
    consts: &PhysicalConstants,
) -> Result<PlanckPhase> {
    consts.validate()?;
    for (name, v) in [("mass", m), ("distance", d), ("interaction time", dt)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("{name} = {v} must be positive")));
        }
    }
    let ratio = (m / consts.planck_mass).powi(2);
    Ok(PlanckPhase {
        phi: m * m * consts.g * dt / (consts.hbar * d),
        phi_planck: ratio * consts.c / d * dt,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_coupling_is_rejected_with_guidance() {
        let err = CouplingMatrix::from_flat([0.0, -1.0, 0.0, 0.0]).unwrap_err();
        assert!(err.to_string().contains("flip the sign of w"));
        assert!(CouplingMatrix::from_phases([0.0, 0.0, 0.0, 1.0], -0.1).is_err());
        assert!(CouplingMatrix::from_phases([0.0, 0.0, 0.0, -1.0], -0.1).is_ok());
    }

    #[test]
    fn xi_from_phase_flags_sign() {
        assert!(xi_from_phase(1.0, 0.0).is_err());
        let e = xi_from_phase(-0.5, 0.25).unwrap();
        assert!(e.sign_mismatch);
        assert_eq!(e.xi, -2.0);
    }

    #[test]
    fn planck_identity_at_unit_ratio() {
        let k = PhysicalConstants::default();
        let p = planck_ratio_phase(k.planck_mass, 1e-6, 1e-6, &k).unwrap();
        assert!((p.ratio - 1.0).abs() < 1e-15);
        assert!((p.phi / p.phi_planck - 1.0).abs() < 1e-12);
    }
}

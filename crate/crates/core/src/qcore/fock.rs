//! Truncated single-mode Fock space.

use nalgebra::DVector;
use num_complex::Complex64;

use super::expm::expm;
use super::linalg::{c, CMatrix, CVector};
use super::space::CompositeSpace;
use super::state::{Operator, PureState};
use crate::error::{Error, Result};

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;
/// Smallest truncation the adaptive policy returns.
pub const MIN_TRUNCATION: usize = 16;

/// Levels `|0>, ..., |N-1>` of one bosonic mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockSpace {
    truncation: usize,
    tail_tolerance: f64,
}

impl FockSpace {
    pub fn new(truncation: usize) -> Result<Self> {
        Self::with_tolerance(truncation, DEFAULT_TAIL_TOLERANCE)
    }

    pub fn with_tolerance(truncation: usize, tail_tolerance: f64) -> Result<Self> {
        if truncation < 2 {
            return Err(Error::domain(format!(
                "Fock truncation {truncation} is below 2"
            )));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(Error::domain(format!(
                "tail tolerance {tail_tolerance} must lie in (0, 1)"
            )));
        }
        Ok(Self {
            truncation,
            tail_tolerance,
        })
    }

    /// Smallest `N >= 16` holding a coherent state of amplitude
    /// `max_amplitude`: tail weight below the tolerance and the renormalized
    /// mean photon number within ten tolerances of `alpha^2`.
    pub fn adaptive(max_amplitude: f64) -> Result<Self> {
        Self::adaptive_with_tolerance(max_amplitude, DEFAULT_TAIL_TOLERANCE)
    }

    pub fn adaptive_with_tolerance(max_amplitude: f64, tail_tolerance: f64) -> Result<Self> {
        if !max_amplitude.is_finite() {
            return Err(Error::domain("coherent amplitude must be finite"));
        }
        // Validates the tolerance.
        Self::with_tolerance(MIN_TRUNCATION, tail_tolerance)?;
        let n = minimal_truncation(max_amplitude * max_amplitude, tail_tolerance);
        Self::with_tolerance(n.max(MIN_TRUNCATION), tail_tolerance)
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// The same tolerance with `extra` more levels.
    pub fn enlarged(&self, extra: usize) -> Self {
        Self {
            truncation: self.truncation + extra,
            tail_tolerance: self.tail_tolerance,
        }
    }

    pub fn space(&self) -> CompositeSpace {
        CompositeSpace::new(vec![self.truncation]).expect("truncation is at least 2")
    }

    /// Weight of a coherent state of amplitude `alpha` on levels `>= N`.
    pub fn coherent_tail(&self, alpha: f64) -> f64 {
        poisson_tail(alpha * alpha, self.truncation)
    }

    /// Fails with [`Error::Truncation`] if `alpha` does not fit.
    pub fn check_amplitude(&self, alpha: f64) -> Result<()> {
        if !alpha.is_finite() {
            return Err(Error::domain("coherent amplitude must be finite"));
        }
        let tail = self.coherent_tail(alpha);
        if tail >= self.tail_tolerance {
            return Err(Error::Truncation {
                amplitude: alpha,
                truncation: self.truncation,
                tail,
                tolerance: self.tail_tolerance,
            });
        }
        Ok(())
    }

    /// Annihilation operator `a` on the truncated space.
    pub fn annihilation(&self) -> CMatrix {
        annihilation(self.truncation)
    }

    /// Number operator `a^† a`.
    pub fn number(&self) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_fn(self.truncation, |n, _| c(n as f64)))
    }
}

pub(crate) fn annihilation(n: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = c((k as f64).sqrt());
    }
    a
}

/// `ln p_k - ln p_peak` for Poisson(`lambda`), `k = 0..len`, accumulated
/// outward from the peak so that no large logarithms enter.
fn relative_log_weights(lambda: f64, len: usize) -> Vec<f64> {
    let peak = lambda.floor() as usize;
    let top = len.max(peak + 1);
    let mut l = vec![0.0; top];
    for k in peak + 1..top {
        l[k] = l[k - 1] + (lambda / k as f64).ln();
    }
    for k in (0..peak).rev() {
        l[k] = l[k + 1] - (lambda / (k + 1) as f64).ln();
    }
    l.truncate(len);
    l
}

/// Level beyond which Poisson(`lambda`) weights are negligible against any
/// tolerance we use.
fn poisson_cap(lambda: f64) -> usize {
    (lambda + 40.0 * lambda.sqrt() + 100.0).ceil() as usize
}

/// Poisson weights `p_k` for `k = 0..=cap`, normalized over that range
/// (the mass beyond `cap` is far below double precision).
fn poisson_weights(lambda: f64, cap: usize) -> Vec<f64> {
    if lambda == 0.0 {
        let mut p = vec![0.0; cap + 1];
        p[0] = 1.0;
        return p;
    }
    let cap = cap.max(poisson_cap(lambda));
    let mut p: Vec<f64> = relative_log_weights(lambda, cap + 1)
        .iter()
        .map(|l| l.exp())
        .collect();
    let total: f64 = p.iter().rev().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

/// `P(X >= n)` for `X ~ Poisson(lambda)`.
pub(crate) fn poisson_tail(lambda: f64, n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let cap = poisson_cap(lambda).max(n + 1);
    let p = poisson_weights(lambda, cap);
    if (n as f64) > lambda {
        p[n..].iter().rev().sum()
    } else {
        (1.0 - p[..n].iter().sum::<f64>()).max(0.0)
    }
}

fn minimal_truncation(lambda: f64, tol: f64) -> usize {
    let cap = poisson_cap(lambda);
    let p = poisson_weights(lambda, cap);
    // Suffix sums, smallest terms first.
    let mut tail = vec![0.0; cap + 2];
    let mut excess = vec![0.0; cap + 2];
    for k in (0..=cap).rev() {
        tail[k] = tail[k + 1] + p[k];
        excess[k] = excess[k + 1] + (k as f64 - lambda) * p[k];
    }
    (1..=cap + 1)
        .find(|&n| tail[n] < tol && excess[n] / (1.0 - tail[n]) < 10.0 * tol)
        .unwrap_or(cap + 1)
}

/// Normalized coherent amplitudes on `n` levels, no tail check.
pub(crate) fn coherent_vector(alpha: f64, n: usize) -> CVector {
    let mut v = CVector::zeros(n);
    if alpha == 0.0 {
        v[0] = c(1.0);
        return v;
    }
    let logs = relative_log_weights(alpha * alpha, n);
    for (k, l) in logs.iter().enumerate() {
        let mag = (0.5 * l).exp();
        v[k] = c(if alpha < 0.0 && k % 2 == 1 { -mag } else { mag });
    }
    let norm = v.norm();
    v / c(norm)
}

/// Coherent state `|alpha>` for real `alpha`, renormalized on the truncated
/// space.
pub fn coherent_state(alpha: f64, fock: &FockSpace) -> Result<PureState> {
    fock.check_amplitude(alpha)?;
    Ok(PureState::from_raw(
        fock.space(),
        coherent_vector(alpha, fock.truncation),
    ))
}

/// `exp(s (a^† - a))` on `n` levels for a real shift `s`.
pub(crate) fn shift_matrix(shift: f64, n: usize) -> Result<CMatrix> {
    let a = annihilation(n);
    expm(&((a.adjoint() - a) * c(shift)))
}

/// `D(xi) = exp(sqrt(xi) (a^† - a))`.
pub fn displacement_operator(xi: f64, fock: &FockSpace) -> Result<Operator> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::domain(format!(
            "displacement parameter {xi} must be finite and nonnegative"
        )));
    }
    let s = xi.sqrt();
    fock.check_amplitude(s)?;
    Ok(Operator::from_raw(
        fock.space(),
        shift_matrix(s, fock.truncation)?,
    ))
}

/// `exp(i w n)`, diagonal in the number basis.
pub fn number_phase_operator(w: f64, fock: &FockSpace) -> Operator {
    let diag = DVector::from_fn(fock.truncation, |n, _| {
        Complex64::from_polar(1.0, w * n as f64)
    });
    Operator::from_raw(fock.space(), CMatrix::from_diagonal(&diag))
}

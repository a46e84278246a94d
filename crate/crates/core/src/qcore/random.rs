//! Seeded random states and unitaries for tests and the no-go search.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::linalg::{c, CMatrix, CVector};
use super::space::CompositeSpace;
use super::state::{DensityMatrix, PureState, Tensor};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed `d x d` unitary (QR of a Ginibre matrix with the
/// diagonal phases of R divided out).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(d, d, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 {
            z / c(z.norm())
        } else {
            c(1.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(space: &CompositeSpace, rng: &mut R) -> PureState {
    let v = CVector::from_fn(space.total_dim(), |_, _| gaussian(rng));
    let norm = v.norm();
    PureState::from_raw(space.clone(), v / c(norm))
}

/// Full-rank mixed state from the Ginibre ensemble.
pub fn random_density_matrix<R: Rng + ?Sized>(
    space: &CompositeSpace,
    rng: &mut R,
) -> DensityMatrix {
    let d = space.total_dim();
    let g = ginibre(d, d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let mut m = m / c(tr);
    // Exact Hermiticity.
    let herm = (&m + m.adjoint()) * c(0.5);
    m = herm;
    DensityMatrix::from_raw(space.clone(), m)
}

/// Tensor product of independent random mixed states, one per subsystem.
pub fn random_product_state<R: Rng + ?Sized>(space: &CompositeSpace, rng: &mut R) -> DensityMatrix {
    let mut factors = space
        .dims()
        .iter()
        .map(|&d| random_density_matrix(&CompositeSpace::new(vec![d]).expect("dim >= 2"), rng));
    let first = factors.next().expect("space is nonempty");
    factors.fold(first, |acc, f| acc.tensor(&f))
}

/// Tensor product of independent random pure states.
pub fn random_product_pure_state<R: Rng + ?Sized>(
    space: &CompositeSpace,
    rng: &mut R,
) -> PureState {
    let mut factors = space
        .dims()
        .iter()
        .map(|&d| random_pure_state(&CompositeSpace::new(vec![d]).expect("dim >= 2"), rng));
    let first = factors.next().expect("space is nonempty");
    factors.fold(first, |acc, f| acc.tensor(&f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::unitarity_defect;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [2, 3, 4, 8] {
            assert!(unitarity_defect(&haar_unitary(d, &mut rng)) < 1e-13);
        }
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = CompositeSpace::new(vec![2, 3]).unwrap();
        random_density_matrix(&s, &mut rng).validate().unwrap();
        random_product_state(&s, &mut rng).validate().unwrap();
        assert!((random_pure_state(&s, &mut rng).norm() - 1.0).abs() < 1e-14);
    }
}

//! Small dense helpers over `DMatrix<Complex64>`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, ai) in a.iter().enumerate() {
        for (k, bk) in b.iter().enumerate() {
            out[i * b.len() + k] = ai * bk;
        }
    }
    out
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Deviation from Hermiticity, `max |A - A^†|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Eigen-decomposition of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> SymmetricEigen<Complex64, nalgebra::Dyn> {
    SymmetricEigen::new(hermitian_part(m))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `max |U^† U - I|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &identity(n))
}

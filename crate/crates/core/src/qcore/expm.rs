//! Matrix exponential by Padé scaling and squaring (Higham 2005).

use super::linalg::{c, identity, CMatrix};
use crate::error::{Error, Result};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` for a square complex matrix.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::dimension(format!(
            "expm needs a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::domain("expm argument has non-finite entries"));
    }
    let norm = one_norm(a);
    if norm == 0.0 {
        return Ok(identity(n));
    }
    for &(m, theta) in &THETA {
        if norm <= theta {
            let (u, v) = low_order(a, m);
            return pade_solve(&u, &v);
        }
    }
    let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a * c(0.5f64.powi(s));
    let (u, v) = order13(&scaled);
    let mut r = pade_solve(&u, &v)?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

fn low_order(a: &CMatrix, m: usize) -> (CMatrix, CMatrix) {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        _ => &B9,
    };
    let n = a.nrows();
    let a2 = a * a;
    let mut powers = vec![identity(n), a2.clone()];
    for _ in 2..=m / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut odd = CMatrix::zeros(n, n);
    let mut even = CMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        odd += p * c(b[2 * k + 1]);
        even += p * c(b[2 * k]);
    }
    (a * odd, even)
}

fn order13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let b = &B13;
    let n = a.nrows();
    let id = identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * c(b[13]) + &a4 * c(b[11]) + &a2 * c(b[9]));
    let u = a * (inner_u + &a6 * c(b[7]) + &a4 * c(b[5]) + &a2 * c(b[3]) + &id * c(b[1]));
    let inner_v = &a6 * (&a6 * c(b[12]) + &a4 * c(b[10]) + &a2 * c(b[8]));
    let v = inner_v + &a6 * c(b[6]) + &a4 * c(b[4]) + &a2 * c(b[2]) + &id * c(b[0]);
    (u, v)
}

fn pade_solve(u: &CMatrix, v: &CMatrix) -> Result<CMatrix> {
    let p = v + u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .ok_or_else(|| Error::precondition("Padé denominator is singular"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{max_abs_diff, unitarity_defect};
    use num_complex::Complex64;

    #[test]
    fn zero_gives_identity() {
        let z = CMatrix::zeros(5, 5);
        assert_eq!(expm(&z).unwrap(), identity(5));
    }

    #[test]
    fn diagonal_matches_scalar_exp() {
        for scale in [1e-3, 0.1, 1.0, 3.0, 40.0] {
            let d: Vec<Complex64> = (0..6)
                .map(|k| Complex64::new(-scale * k as f64 / 3.0, scale * (k as f64 - 2.0)))
                .collect();
            let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone()));
            let e = expm(&a).unwrap();
            for (k, z) in d.iter().enumerate() {
                let want = z.exp();
                assert!(
                    (e[(k, k)] - want).norm() <= 1e-13 * want.norm().max(1.0),
                    "scale {scale}"
                );
            }
        }
    }

    #[test]
    fn rotation_generator() {
        // exp(t [[0,-1],[1,0]]) is the rotation by t
        for t in [0.01, 0.7, 2.0, 25.0] {
            let a = CMatrix::from_row_slice(2, 2, &[c(0.0), c(-t), c(t), c(0.0)]);
            let e = expm(&a).unwrap();
            let want =
                CMatrix::from_row_slice(2, 2, &[c(t.cos()), c(-t.sin()), c(t.sin()), c(t.cos())]);
            assert!(max_abs_diff(&e, &want) < 1e-13, "t {t}");
        }
    }

    #[test]
    fn nilpotent_is_exact_polynomial() {
        let a = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.0),
                c(2.0),
                c(1.0),
                c(0.0),
                c(0.0),
                c(3.0),
                c(0.0),
                c(0.0),
                c(0.0),
            ],
        );
        let want = identity(3) + &a + (&a * &a) * c(0.5);
        assert!(max_abs_diff(&expm(&a).unwrap(), &want) < 1e-13);
    }

    #[test]
    fn anti_hermitian_gives_unitary() {
        let n = 12;
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let x = ((i * 7 + j * 3) % 11) as f64 - 5.0;
                let y = ((i * 5 + j * 13) % 7) as f64 - 3.0;
                h[(i, j)] += Complex64::new(x, y);
                h[(j, i)] += Complex64::new(x, -y);
            }
        }
        let e = expm(&(h * Complex64::new(0.0, 0.3))).unwrap();
        assert!(unitarity_defect(&e) < 1e-11);
    }
}

//! Shared helpers for the integration suites: seeded random operators and an
//! independent complex LU determinant (oracle for the characteristic
//! polynomial of the Floquet matrix).

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jacobi_bands::jacobi::{FloquetMatrixL, PeriodicJacobi};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random operator with `a` in [0.4, 2] and `b` in [-1.5, 1.5].
pub fn rand_jacobi(rng: &mut ChaCha8Rng, q: usize) -> PeriodicJacobi {
    let a = (0..q).map(|_| rng.gen_range(0.4..2.0)).collect();
    let b = (0..q).map(|_| rng.gen_range(-1.5..1.5)).collect();
    PeriodicJacobi::new(q, a, b).unwrap()
}

/// Determinant of a dense complex matrix by LU with partial pivoting.
/// Written independently of the library's recurrences so it can serve as an
/// oracle for `det(lambda - L)`.
pub fn lu_det(mut m: Vec<Complex64>, n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if m[row * n + col].norm() > m[pivot * n + col].norm() {
                pivot = row;
            }
        }
        if m[pivot * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let d = m[col * n + col];
        det *= d;
        for row in col + 1..n {
            let factor = m[row * n + col] / d;
            for k in col..n {
                let sub = factor * m[col * n + k];
                m[row * n + k] -= sub;
            }
        }
    }
    det
}

/// `det(lambda - L)` through the LU oracle.
pub fn det_lambda_minus_l(j: &PeriodicJacobi, lambda: f64) -> Complex64 {
    let l = FloquetMatrixL::build(j);
    let q = l.dim();
    let mut m = vec![Complex64::new(0.0, 0.0); q * q];
    for r in 0..q {
        for c in 0..q {
            m[r * q + c] = -l.entry(r, c);
        }
        m[r * q + r] += lambda;
    }
    lu_det(m, q)
}

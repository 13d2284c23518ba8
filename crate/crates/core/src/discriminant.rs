//! The discriminant `D(lambda)`, fundamental solutions, and the inverse
//! reconstruction of an operator from a monic polynomial pair.
//!
//! `D` is evaluated two independent ways: by the three-term recurrence for
//! the fundamental solutions (`discriminant_value`), and as an explicit
//! polynomial built from the determinant recurrences of `det(lambda - L)`
//! divided by `A^q` (`discriminant_poly`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jacobi::PeriodicJacobi;
use crate::poly;

/// Terminal values of the fundamental solutions:
/// `phi_q, phi_{q+1}, theta_q, theta_{q+1}` at a fixed real `lambda`.
///
/// They satisfy the Wronskian identity
/// `phi_{q+1} theta_q - phi_q theta_{q+1} = 1`.
#[derive(Debug, Clone, Copy)]
pub struct FundamentalPair {
    pub phi_q: f64,
    pub phi_q1: f64,
    pub theta_q: f64,
    pub theta_q1: f64,
}

impl FundamentalPair {
    pub fn wronskian(&self) -> f64 {
        self.phi_q1 * self.theta_q - self.phi_q * self.theta_q1
    }
}

fn run_recurrence<T>(j: &PeriodicJacobi, lambda: T) -> [T; 4]
where
    T: Copy
        + std::ops::Mul<f64, Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::Mul<Output = T>
        + std::ops::Div<f64, Output = T>
        + From<f64>,
{
    let q = j.q();
    // (phi_{n-1}, phi_n), (theta_{n-1}, theta_n)
    let mut phi = (T::from(0.0), T::from(1.0));
    let mut theta = (T::from(1.0), T::from(0.0));
    for n in 1..=q {
        let an = j.a_wrap(n as isize);
        let an1 = j.a_wrap(n as isize - 1);
        let bn = j.b()[n - 1];
        let step = |pair: (T, T)| -> (T, T) {
            let next = ((lambda - T::from(bn)) * pair.1 - pair.0 * an1) / an;
            (pair.1, next)
        };
        phi = step(phi);
        theta = step(theta);
    }
    // After the loop: phi = (phi_q, phi_{q+1}), theta = (theta_q, theta_{q+1}).
    [phi.0, phi.1, theta.0, theta.1]
}

/// Forward recurrence `a_n psi_{n+1} = (lambda - b_n) psi_n - a_{n-1} psi_{n-1}`
/// from n = 1 to q with wrap-around `a_0 = a_q`.
pub fn fundamental_pair(j: &PeriodicJacobi, lambda: f64) -> FundamentalPair {
    let [phi_q, phi_q1, theta_q, theta_q1] = run_recurrence(j, lambda);
    FundamentalPair {
        phi_q,
        phi_q1,
        theta_q,
        theta_q1,
    }
}

/// Same recurrence over complex `lambda`; returns
/// `[phi_q, phi_{q+1}, theta_q, theta_{q+1}]`.
pub fn fundamental_pair_complex(j: &PeriodicJacobi, lambda: Complex64) -> [Complex64; 4] {
    run_recurrence(j, lambda)
}

/// `D(lambda) = phi_{q+1}(lambda) + theta_q(lambda)`.
pub fn discriminant_value(j: &PeriodicJacobi, lambda: f64) -> f64 {
    let p = fundamental_pair(j, lambda);
    p.phi_q1 + p.theta_q
}

pub fn discriminant_value_complex(j: &PeriodicJacobi, lambda: Complex64) -> Complex64 {
    let [_, phi_q1, theta_q, _] = fundamental_pair_complex(j, lambda);
    phi_q1 + theta_q
}

/// The discriminant as an explicit polynomial together with its derivative
/// and the `q - 1` critical points (all real and simple).
#[derive(Debug, Clone)]
pub struct DiscriminantRep {
    /// Coefficients of `D`, ascending; length `q + 1`, leading entry `A^{-q}`.
    pub coeffs: Vec<f64>,
    /// Coefficients of `D'`, ascending.
    pub deriv_coeffs: Vec<f64>,
    /// The `q - 1` roots of `D'`, strictly increasing.
    pub critical_points: Vec<f64>,
}

impl DiscriminantRep {
    pub fn eval(&self, lambda: f64) -> f64 {
        poly::eval(&self.coeffs, lambda)
    }

    pub fn eval_c(&self, lambda: Complex64) -> Complex64 {
        poly::eval_c(&self.coeffs, lambda)
    }

    pub fn eval_deriv(&self, lambda: f64) -> f64 {
        poly::eval(&self.deriv_coeffs, lambda)
    }

    pub fn eval_deriv_c(&self, lambda: Complex64) -> Complex64 {
        poly::eval_c(&self.deriv_coeffs, lambda)
    }
}

/// Builds `D` from the determinant recurrences
/// `D_{1j} = (lambda - b_j) D_{1,j-1} - a_{j-1}^2 D_{1,j-2}` (and the shifted
/// analogue for `D_{2j}`), via `det(lambda - L) = D_{1q} - a_q^2 D_{2,q-1}`,
/// then divides by `A^q`. Critical points are isolated by sign changes of
/// `D'` on a grid spanning the Gershgorin interval, refined by bisection.
pub fn discriminant_poly(j: &PeriodicJacobi) -> Result<DiscriminantRep> {
    let q = j.q();
    let a = j.a();
    let b = j.b();

    // D_{1j} recurrence: D_{1,-1} = 0, D_{1,0} = 1.
    let mut d1_prev: Vec<f64> = vec![0.0];
    let mut d1_cur: Vec<f64> = vec![1.0];
    for jj in 1..=q {
        let term = poly::mul_linear(&d1_cur, b[jj - 1]);
        let next = if jj >= 2 {
            poly::add_scaled(&term, &d1_prev, -a[jj - 2] * a[jj - 2])
        } else {
            term
        };
        d1_prev = d1_cur;
        d1_cur = next;
    }

    // D_{2j} recurrence over rows 2..j: D_{2,1} = 1 (empty block), D_{2,0} = 0.
    let mut d2_prev: Vec<f64> = vec![0.0];
    let mut d2_cur: Vec<f64> = vec![1.0];
    for jj in 2..=q.saturating_sub(1) {
        let term = poly::mul_linear(&d2_cur, b[jj - 1]);
        let next = if jj >= 3 {
            poly::add_scaled(&term, &d2_prev, -a[jj - 2] * a[jj - 2])
        } else {
            term
        };
        d2_prev = d2_cur;
        d2_cur = next;
    }

    let aq = a[q - 1];
    let det = poly::add_scaled(&d1_cur, &d2_cur, -aq * aq);
    let cap = j.capacity();
    let coeffs = poly::scale(&det, cap.powi(-(q as i32)));
    let deriv_coeffs = poly::deriv(&coeffs);

    let (glo, ghi) = j.gershgorin_interval();
    let critical_points =
        isolate_real_roots(&deriv_coeffs, glo - 1.0, ghi + 1.0, q - 1).map_err(|e| {
            Error::Numerical(format!("critical-point isolation failed: {e}"))
        })?;

    // Floquet theory: |D| >= 2 at every critical point, with alternating sign.
    let mut prev_sign = 0.0;
    for &cp in &critical_points {
        let d = poly::eval(&coeffs, cp);
        if d.abs() < 2.0 - 1e-9 {
            return Err(Error::Numerical(format!(
                "critical value |D({cp})| = {} < 2",
                d.abs()
            )));
        }
        if prev_sign != 0.0 && d.signum() == prev_sign {
            return Err(Error::Numerical(
                "critical values of D do not alternate in sign".into(),
            ));
        }
        prev_sign = d.signum();
    }

    Ok(DiscriminantRep {
        coeffs,
        deriv_coeffs,
        critical_points,
    })
}

/// Sign-grid root isolation with bisection refinement. Expects exactly
/// `expected` simple real roots in `(lo, hi)`; anything else is an error.
fn isolate_real_roots(
    coeffs: &[f64],
    lo: f64,
    hi: f64,
    expected: usize,
) -> Result<Vec<f64>> {
    if expected == 0 {
        return Ok(vec![]);
    }
    let mut n = 32 * (expected + 1);
    loop {
        let mut brackets = Vec::new();
        let mut x_prev = lo;
        let mut f_prev = poly::eval(coeffs, lo);
        for i in 1..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let f = poly::eval(coeffs, x);
            if f_prev == 0.0 {
                brackets.push((x_prev, x_prev));
            } else if f_prev * f < 0.0 {
                brackets.push((x_prev, x));
            }
            x_prev = x;
            f_prev = f;
        }
        if brackets.len() == expected {
            let roots = brackets
                .into_iter()
                .map(|(l, r)| bisect_poly(coeffs, l, r))
                .collect();
            return Ok(roots);
        }
        if brackets.len() > expected || n > 4096 * (expected + 1) {
            return Err(Error::Numerical(format!(
                "found {} sign changes, expected {expected}",
                brackets.len()
            )));
        }
        n *= 2;
    }
}

fn bisect_poly(coeffs: &[f64], mut l: f64, mut r: f64) -> f64 {
    if l == r {
        return l;
    }
    let mut fl = poly::eval(coeffs, l);
    for _ in 0..200 {
        let m = 0.5 * (l + r);
        if r - l < 1e-13 * (1.0 + m.abs()) {
            break;
        }
        let fm = poly::eval(coeffs, m);
        if fm == 0.0 {
            return m;
        }
        if fl * fm < 0.0 {
            r = m;
        } else {
            l = m;
            fl = fm;
        }
    }
    0.5 * (l + r)
}

/// Monic fundamental polynomials `(phi_hat_q, phi_hat_{q+1})` together with
/// the leading coefficient `1/(a_1 ... a_q)` of the non-monic `phi_{q+1}`.
pub fn fundamental_monic_pair(j: &PeriodicJacobi) -> (Vec<f64>, Vec<f64>, f64) {
    let q = j.q();
    // Polynomial version of the forward recurrence.
    let mut prev: Vec<f64> = vec![0.0]; // phi_0
    let mut cur: Vec<f64> = vec![1.0]; // phi_1
    for n in 1..=q {
        let an = j.a_wrap(n as isize);
        let an1 = j.a_wrap(n as isize - 1);
        let bn = j.b()[n - 1];
        let term = poly::mul_linear(&cur, bn);
        let next = poly::scale(&poly::add_scaled(&term, &prev, -an1), 1.0 / an);
        prev = cur;
        cur = next;
    }
    let phi_q = prev;
    let phi_q1 = cur;
    let prod_q1: f64 = j.a().iter().take(q - 1).product();
    let prod_q: f64 = j.a().iter().product();
    let monic_q = poly::scale(&phi_q, prod_q1);
    let monic_q1 = poly::scale(&phi_q1, prod_q);
    (monic_q, monic_q1, 1.0 / prod_q)
}

fn coeff(p: &[f64], j: isize) -> f64 {
    if j < 0 {
        0.0
    } else {
        p.get(j as usize).copied().unwrap_or(0.0)
    }
}

/// Recovers the operator from the monic pair `(phi_hat_{q+1}, phi_hat_q)` by
/// the downward recursion
/// `phi_hat_{n-1} = ((lambda - b_n) phi_hat_n - phi_hat_{n+1}) / a_{n-1}^2`,
/// with `b_n` and `a_{n-1}` read off the top coefficients. `leading` is the
/// highest-degree coefficient of the non-monic `phi_{q+1}`, which fixes
/// `a_q = 1 / (leading * a_1 ... a_{q-1})`.
///
/// A negative radicand means the pair is not realisable by a Jacobi matrix
/// with positive off-diagonal; radicands in `[-1e-10, 0)` are treated as
/// closed-gap roundoff and clamped to zero (which still fails, since the
/// off-diagonal must be strictly positive).
pub fn reconstruct_from_monic_pair(
    phi_hat_q1: &[f64],
    phi_hat_q: &[f64],
    leading: f64,
) -> Result<PeriodicJacobi> {
    let q = phi_hat_q1.len().saturating_sub(1);
    if q < 2 {
        return Err(Error::InvalidArgument(
            "phi_hat_{q+1} must have degree q >= 2".into(),
        ));
    }
    if phi_hat_q.len() != q {
        return Err(Error::InvalidArgument(format!(
            "degree mismatch: expected deg(phi_hat_q) = {}, got {}",
            q - 1,
            phi_hat_q.len() - 1
        )));
    }
    for (name, p) in [("phi_hat_{q+1}", phi_hat_q1), ("phi_hat_q", phi_hat_q)] {
        let lead = *p.last().unwrap();
        if (lead - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "{name} is not monic (leading coefficient {lead})"
            )));
        }
    }
    if !(leading > 0.0) {
        return Err(Error::InconsistentPair(format!(
            "leading coefficient of phi_{{q+1}} must be positive, got {leading}"
        )));
    }

    let mut cur = phi_hat_q1.to_vec(); // phi_hat_{n+1}
    let mut prev = phi_hat_q.to_vec(); // phi_hat_n
    let mut b = vec![0.0; q];
    let mut a = vec![0.0; q];
    for n in (1..=q).rev() {
        let ni = n as isize;
        let bn = coeff(&prev, ni - 2) - coeff(&cur, ni - 1);
        b[n - 1] = bn;
        if n >= 2 {
            let mut rad =
                coeff(&prev, ni - 3) - coeff(&cur, ni - 2) - bn * coeff(&prev, ni - 2);
            if rad < 0.0 {
                if rad < -1e-10 {
                    return Err(Error::InconsistentPair(format!(
                        "negative radicand {rad:e} at n = {n}"
                    )));
                }
                rad = 0.0;
            }
            let an1 = rad.sqrt();
            if !(an1 > 0.0) {
                return Err(Error::InconsistentPair(format!(
                    "off-diagonal a_{} vanishes",
                    n - 1
                )));
            }
            a[n - 2] = an1;
            // phi_hat_{n-1} = ((lambda - b_n) phi_hat_n - phi_hat_{n+1}) / a_{n-1}^2
            let term = poly::mul_linear(&prev, bn);
            let mut next = poly::scale(&poly::add_scaled(&term, &cur, -1.0), 1.0 / rad);
            // The two top coefficients cancel by construction; drop them.
            next.truncate(n - 1);
            if next.is_empty() {
                next.push(0.0);
            }
            cur = std::mem::replace(&mut prev, next);
        }
    }
    let prod: f64 = a.iter().take(q - 1).product();
    a[q - 1] = 1.0 / (leading * prod);
    PeriodicJacobi::new(q, a, b)
        .map_err(|e| Error::InconsistentPair(format!("reconstructed operator invalid: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(q: usize, a: &[f64], b: &[f64]) -> PeriodicJacobi {
        PeriodicJacobi::new(q, a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn q2_discriminant_closed_form() {
        let j = op(2, &[1.0, 2.0], &[3.0, -1.0]);
        // D(lambda) = (lambda^2 - (b1+b2) lambda + b1 b2 - a1^2 - a2^2)/(a1 a2)
        assert!((discriminant_value(&j, 0.0) - -4.0).abs() < 1e-12);
        assert!((discriminant_value(&j, 1.0) - -4.5).abs() < 1e-12);
    }

    #[test]
    fn free_q2_by_hand() {
        let j = op(2, &[1.0, 1.0], &[0.0, 0.0]);
        let p = fundamental_pair(&j, 0.0);
        assert!((p.phi_q1 - -1.0).abs() < 1e-14);
        assert!((p.theta_q - -1.0).abs() < 1e-14);
        assert!((p.wronskian() - 1.0).abs() < 1e-14);
        assert!((discriminant_value(&j, 0.0) - -2.0).abs() < 1e-14);
    }

    #[test]
    fn poly_matches_value_evaluation() {
        let j = op(
            4,
            &[0.7, 1.3, 0.9, 1.8],
            &[0.2, -0.9, 0.5, 1.4],
        );
        let rep = discriminant_poly(&j).unwrap();
        for i in 0..30 {
            let lam = -4.0 + 8.0 * i as f64 / 29.0;
            let dv = discriminant_value(&j, lam);
            let dp = rep.eval(lam);
            assert!(
                (dv - dp).abs() < 1e-9 * (1.0 + dv.abs()),
                "lambda={lam}: {dv} vs {dp}"
            );
        }
    }

    #[test]
    fn poly_free_q2() {
        let j = op(2, &[1.0, 1.0], &[0.0, 0.0]);
        let rep = discriminant_poly(&j).unwrap();
        assert!((rep.coeffs[0] - -2.0).abs() < 1e-14);
        assert!(rep.coeffs[1].abs() < 1e-14);
        assert!((rep.coeffs[2] - 1.0).abs() < 1e-14);
        assert_eq!(rep.critical_points.len(), 1);
        assert!(rep.critical_points[0].abs() < 1e-12);
    }

    #[test]
    fn q2_critical_point_is_diagonal_mean() {
        let j = op(2, &[0.6, 1.7], &[1.2, -0.4]);
        let rep = discriminant_poly(&j).unwrap();
        assert!((rep.critical_points[0] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn leading_coefficient_is_capacity_power() {
        let j = op(3, &[0.5, 2.0, 1.5], &[0.1, -0.2, 0.3]);
        let rep = discriminant_poly(&j).unwrap();
        let expect = j.capacity().powi(-3);
        let lead = *rep.coeffs.last().unwrap();
        assert!((lead - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn asymptotic_growth() {
        let j = op(3, &[0.8, 1.1, 1.4], &[0.3, -0.6, 0.9]);
        let (_, ghi) = j.gershgorin_interval();
        let lam = 1e6 * ghi.abs().max(1.0);
        let ratio = discriminant_value(&j, lam) / lam.powi(3);
        let expect = j.capacity().powi(-3);
        assert!((ratio - expect).abs() < 1e-4 * expect.abs());
    }

    #[test]
    fn reconstruct_free_q2() {
        let j = op(2, &[1.0, 1.0], &[0.0, 0.0]);
        let (monic_q, monic_q1, lead) = fundamental_monic_pair(&j);
        let rec = reconstruct_from_monic_pair(&monic_q1, &monic_q, lead).unwrap();
        for (x, y) in rec.a().iter().zip(j.a()) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in rec.b().iter().zip(j.b()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruct_round_trip_q4() {
        let j = op(
            4,
            &[0.9, 1.4, 0.6, 1.1],
            &[0.4, -0.8, 1.2, -0.3],
        );
        let (monic_q, monic_q1, lead) = fundamental_monic_pair(&j);
        let rec = reconstruct_from_monic_pair(&monic_q1, &monic_q, lead).unwrap();
        for (x, y) in rec.a().iter().zip(j.a()) {
            assert!((x - y).abs() < 1e-8, "a: {x} vs {y}");
        }
        for (x, y) in rec.b().iter().zip(j.b()) {
            assert!((x - y).abs() < 1e-8, "b: {x} vs {y}");
        }
    }

    #[test]
    fn reconstruct_rejects_unrealisable_pair() {
        // phi_hat_q with a repeated root far outside the root span of
        // phi_hat_{q+1} forces a negative radicand.
        let phi_q1 = [0.0, -1.0, 0.0, 1.0]; // lambda^3 - lambda
        let phi_q = [100.0, -20.0, 1.0]; // (lambda - 10)^2
        let err = reconstruct_from_monic_pair(&phi_q1, &phi_q, 1.0);
        assert!(matches!(err, Err(Error::InconsistentPair(_))));
    }

    #[test]
    fn wronskian_residual_bound() {
        let j = op(3, &[1.3, 0.5, 2.1], &[-0.7, 0.2, 1.5]);
        for i in 0..50 {
            let lam = -6.0 + 12.0 * i as f64 / 49.0;
            let p = fundamental_pair(&j, lam);
            let bound = 1e-10 * (1.0 + lam.abs().powi(2 * 3));
            assert!((p.wronskian() - 1.0).abs() < bound);
        }
    }
}

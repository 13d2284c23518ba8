//! Minimal dense polynomial helpers in the monomial basis.
//! Coefficients are stored in ascending order of the power.

use num_complex::Complex64;

pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn eval_c(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

pub fn deriv(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| (i + 1) as f64 * c)
        .collect()
}

pub fn scale(coeffs: &[f64], s: f64) -> Vec<f64> {
    coeffs.iter().map(|c| c * s).collect()
}

/// `a + s * b`, padded to the longer length.
pub fn add_scaled(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) + s * b.get(i).copied().unwrap_or(0.0))
        .collect()
}

/// Multiply by the linear factor `(x - r)`.
pub fn mul_linear(coeffs: &[f64], r: f64) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() + 1];
    for (i, &c) in coeffs.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= r * c;
    }
    out
}

pub fn degree(coeffs: &[f64]) -> usize {
    coeffs
        .iter()
        .rposition(|&c| c != 0.0)
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_deriv() {
        // p(x) = 1 - 2x + 3x^2
        let p = [1.0, -2.0, 3.0];
        assert_eq!(eval(&p, 2.0), 9.0);
        let dp = deriv(&p);
        assert_eq!(dp, vec![-2.0, 6.0]);
    }

    #[test]
    fn linear_factor() {
        // (x - 1)(x + 2) = x^2 + x - 2
        let p = mul_linear(&[2.0, 1.0], 1.0);
        assert_eq!(p, vec![-2.0, 1.0, 1.0]);
    }
}

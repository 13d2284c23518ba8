//! Operator data and the Floquet matrix `L`.
//!
//! Coefficients follow the usual 1-based notation `a_1..a_q`, `b_1..b_q`
//! with periodic wrap-around `a_0 = a_q`; storage is 0-based, so `a_n`
//! lives at `a[n-1]`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A q-periodic Jacobi operator: period `q >= 2`, positive off-diagonal
/// sequence `a` and real diagonal sequence `b`, both of length `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicJacobi {
    q: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl PeriodicJacobi {
    /// Validates and builds the operator. Period 1 is rejected: it is
    /// analytically trivial (single band, no gaps).
    pub fn new(q: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidOperator(format!("period q={q} < 2")));
        }
        if a.len() != q || b.len() != q {
            return Err(Error::InvalidOperator(format!(
                "length mismatch: q={q}, |a|={}, |b|={}",
                a.len(),
                b.len()
            )));
        }
        for (i, &an) in a.iter().enumerate() {
            if !(an > 0.0) || !an.is_finite() {
                return Err(Error::InvalidOperator(format!(
                    "off-diagonal a_{} = {an} is not positive",
                    i + 1
                )));
            }
        }
        for (i, &bn) in b.iter().enumerate() {
            if !bn.is_finite() {
                return Err(Error::InvalidOperator(format!(
                    "diagonal b_{} = {bn} is not finite",
                    i + 1
                )));
            }
        }
        Ok(Self { q, a, b })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `a_n` for 1-based `n`, wrapping periodically so that `a_wrap(0) == a_q`.
    pub fn a_wrap(&self, n: isize) -> f64 {
        let q = self.q as isize;
        let idx = ((n - 1).rem_euclid(q)) as usize;
        self.a[idx]
    }

    /// Returns a copy with every diagonal entry shifted by `s`.
    pub fn shifted(&self, s: f64) -> Self {
        Self {
            q: self.q,
            a: self.a.clone(),
            b: self.b.iter().map(|bn| bn + s).collect(),
        }
    }

    /// Logarithmic capacity `A = (a_1 ... a_q)^{1/q}`.
    pub fn capacity(&self) -> f64 {
        let mean_ln = self.a.iter().map(|x| x.ln()).sum::<f64>() / self.q as f64;
        mean_ln.exp()
    }

    /// The Gershgorin enclosure
    /// `[min_j(b_j - a_j - a_{j-1}), max_j(b_j + a_j + a_{j-1})]`.
    pub fn gershgorin_interval(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 1..=self.q {
            let radius = self.a_wrap(j as isize) + self.a_wrap(j as isize - 1);
            lo = lo.min(self.b[j - 1] - radius);
            hi = hi.max(self.b[j - 1] + radius);
        }
        (lo, hi)
    }
}

/// Harper operator: `a_j = 1`, `b_j = 2 cos(2 pi p j / q + theta)`.
pub fn harper(p: i64, q: usize, theta: f64) -> Result<PeriodicJacobi> {
    if q < 2 {
        return Err(Error::InvalidOperator(format!("period q={q} < 2")));
    }
    let alpha = p as f64 / q as f64;
    let b = (1..=q)
        .map(|j| 2.0 * (2.0 * std::f64::consts::PI * alpha * j as f64 + theta).cos())
        .collect();
    PeriodicJacobi::new(q, vec![1.0; q], b)
}

/// The q x q Hermitian Floquet matrix. With phase `theta` the corner pair is
/// `a_q e^{i theta}` / `a_q e^{-i theta}` (for q = 2 the single off-diagonal
/// pair is `a_1 + a_2 e^{i theta}`); the plain `build` uses `theta = pi/2`,
/// whose characteristic polynomial equals `A^q D(lambda)`.
#[derive(Debug, Clone)]
pub struct FloquetMatrixL {
    dim: usize,
    entries: Vec<Complex64>,
}

impl FloquetMatrixL {
    pub fn build(j: &PeriodicJacobi) -> Self {
        Self::with_phase(j, std::f64::consts::FRAC_PI_2)
    }

    pub fn with_phase(j: &PeriodicJacobi, theta: f64) -> Self {
        let q = j.q();
        let a = j.a();
        let b = j.b();
        let phase = Complex64::from_polar(1.0, theta);
        let mut m = vec![Complex64::new(0.0, 0.0); q * q];
        for r in 0..q {
            m[r * q + r] = Complex64::new(b[r], 0.0);
        }
        if q == 2 {
            let off = Complex64::new(a[0], 0.0) + a[1] * phase;
            m[1] = off;
            m[2] = off.conj();
        } else {
            for r in 0..q - 1 {
                m[r * q + r + 1] = Complex64::new(a[r], 0.0);
                m[(r + 1) * q + r] = Complex64::new(a[r], 0.0);
            }
            let corner = a[q - 1] * phase;
            m[q - 1] = corner;
            m[(q - 1) * q] = corner.conj();
        }
        Self { dim: q, entries: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `Tr L^j` for `j = 1..=jmax`, by repeated dense multiplication.
    /// Each trace must be real up to a 1e-12 relative imaginary residue,
    /// which is then discarded.
    pub fn trace_powers(&self, jmax: usize) -> Result<Vec<f64>> {
        if jmax < 1 {
            return Err(Error::InvalidArgument("jmax must be >= 1".into()));
        }
        let n = self.dim;
        let mut power = self.entries.clone();
        let mut traces = Vec::with_capacity(jmax);
        for j in 1..=jmax {
            let tr: Complex64 = (0..n).map(|i| power[i * n + i]).sum();
            let scale = tr.norm().max(1.0);
            if tr.im.abs() > 1e-12 * scale {
                return Err(Error::Numerical(format!(
                    "trace of L^{j} has imaginary residue {:e}",
                    tr.im
                )));
            }
            traces.push(tr.re);
            if j < jmax {
                power = matmul(&power, &self.entries, n);
            }
        }
        Ok(traces)
    }
}

fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// Scalars derived directly from the matrix elements: capacity `A`,
/// the traces `Tr L^j` for `j = 1..2q-1`, and the Gershgorin interval.
#[derive(Debug, Clone)]
pub struct DerivedScalars {
    pub capacity: f64,
    pub trace_sums: Vec<f64>,
    pub gershgorin: (f64, f64),
}

pub fn derived_scalars(j: &PeriodicJacobi) -> Result<DerivedScalars> {
    let l = FloquetMatrixL::build(j);
    Ok(DerivedScalars {
        capacity: j.capacity(),
        trace_sums: l.trace_powers(2 * j.q() - 1)?,
        gershgorin: j.gershgorin_interval(),
    })
}

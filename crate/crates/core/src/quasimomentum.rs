//! The conformal map `k(z) = u + iv` on the half-strip `[0, pi] x [0, inf)`,
//! its boundary values (integrated density of states `u`, Lyapunov exponent
//! `v`), slit heights, asymptotic coefficients `Q_j`, and the numerical
//! verifiers: trace formulas, Dirichlet integrals, the vertical boundary
//! identity, and the periodic Herglotz representation.
//!
//! All multivaluedness is localised in `m(lambda) = D/2 - sqrt((D/2)^2 - 1)`
//! with the branch fixed pointwise by `|m| <= 1`; the remaining 2 pi / q
//! ambiguity of `Re k` is resolved by analytic continuation down vertical
//! lines from the asymptotic regime, where `k(z) = z + iQ_0 + sum iQ_j/cos^j z`.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::discriminant::{discriminant_poly, DiscriminantRep};
use crate::error::{Error, Result};
use crate::jacobi::{FloquetMatrixL, PeriodicJacobi};
use crate::spectrum::{self, BandStructure, ZGapSet};

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Height above which the asymptotic expansion is used directly.
const Y_ASYMP: f64 = 30.0;

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Asymptotic coefficients of `k(z) = z + iQ_0 + sum_{j>=1} iQ_j / cos^j z`:
/// `Q_0 = ln(c/2A)`; for `1 <= j < 2q` odd `Q_j = Tr L^j / (j c^j q)` and even
/// `Q_j = binom(j, j/2)/(j 2^j) - Tr L^j / (j c^j q)`.
pub fn q_coefficients(j_norm: &PeriodicJacobi, band: &BandStructure) -> Result<Vec<f64>> {
    let q = j_norm.q();
    let c = band.c;
    let traces = FloquetMatrixL::build(j_norm).trace_powers(2 * q - 1)?;
    let mut out = Vec::with_capacity(2 * q);
    out.push((c / (2.0 * band.capacity)).ln());
    for j in 1..2 * q {
        let tr_term = traces[j - 1] / (j as f64 * c.powi(j as i32) * q as f64);
        if j % 2 == 1 {
            out.push(tr_term);
        } else {
            out.push(binom(j, j / 2) / (j as f64 * 2f64.powi(j as i32)) - tr_term);
        }
    }
    Ok(out)
}

/// One row of a boundary sample table: the point `x`, its spectral parameter
/// `lambda = -c cos x`, and the boundary values of the map.
#[derive(Debug, Clone, Copy)]
pub struct BoundarySample {
    pub x: f64,
    pub lambda: f64,
    pub d: f64,
    pub u: f64,
    pub v: f64,
    /// Band index (1-based) when on a band, otherwise gap index (1-based).
    pub location: Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Band(usize),
    Gap(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct MomentCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct DirichletCheck {
    pub integral: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct VerticalCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct GapShapeReport {
    pub samples: usize,
    pub semicircle_violations: usize,
    pub concavity_violations: usize,
    /// Largest amount by which v dropped below the semicircle (negative slack).
    pub worst_semicircle_deficit: f64,
    /// Largest positive second difference of v on the sample grid.
    pub worst_convexity: f64,
    /// Max of v over the samples (approximates the slit height).
    pub sampled_max: f64,
}

/// Evaluators for the quasimomentum of a (normalised) operator.
#[derive(Debug, Clone)]
pub struct QuasimomentumModel {
    op: PeriodicJacobi,
    band: BandStructure,
    disc: DiscriminantRep,
    zgaps: ZGapSet,
    slit_heights: Vec<f64>,
    h_plus: f64,
    q_coeffs: Vec<f64>,
}

impl QuasimomentumModel {
    /// Normalises the operator and assembles the model.
    pub fn build(j: &PeriodicJacobi) -> Result<Self> {
        let (jn, band) = spectrum::normalize(j)?;
        let disc = discriminant_poly(&jn)?;
        let zgaps = spectrum::z_coordinates(&band)?;
        let q = jn.q();
        // Slit height h_n = (1/q) arccosh(|D| / 2) at the critical point
        // inside gap n; zero for closed gaps.
        let mut slit_heights = Vec::with_capacity(q - 1);
        for (i, &cp) in disc.critical_points.iter().enumerate() {
            if band.closed_gap_flags[i] {
                slit_heights.push(0.0);
            } else {
                let d = disc.eval(cp).abs() / 2.0;
                slit_heights.push(d.max(1.0).acosh() / q as f64);
            }
        }
        let h_plus = slit_heights.iter().cloned().fold(0.0, f64::max);
        let q_coeffs = q_coefficients(&jn, &band)?;
        Ok(Self {
            op: jn,
            band,
            disc,
            zgaps,
            slit_heights,
            h_plus,
            q_coeffs,
        })
    }

    pub fn operator(&self) -> &PeriodicJacobi {
        &self.op
    }

    pub fn band_structure(&self) -> &BandStructure {
        &self.band
    }

    pub fn discriminant(&self) -> &DiscriminantRep {
        &self.disc
    }

    pub fn z_gaps(&self) -> &ZGapSet {
        &self.zgaps
    }

    pub fn slit_heights(&self) -> &[f64] {
        &self.slit_heights
    }

    pub fn h_plus(&self) -> f64 {
        self.h_plus
    }

    /// `Q_0 .. Q_{2q-1}`.
    pub fn q_coeffs(&self) -> &[f64] {
        &self.q_coeffs
    }

    pub fn c(&self) -> f64 {
        self.band.c
    }

    fn qf(&self) -> f64 {
        self.op.q() as f64
    }

    pub fn lambda_of_x(&self, x: f64) -> f64 {
        -self.band.c * x.cos()
    }

    fn locate(&self, lambda: f64) -> Location {
        let edges = &self.band.edges;
        let lam = lambda.clamp(edges[0], *edges.last().unwrap());
        let i = edges.partition_point(|&e| e < lam);
        if i == 0 {
            Location::Band(1)
        } else if i == edges.len() {
            Location::Band(self.op.q())
        } else if i % 2 == 1 {
            Location::Band((i + 1) / 2)
        } else {
            Location::Gap(i / 2)
        }
    }

    /// Lyapunov exponent on the boundary:
    /// `v(x) = (1/q) arccosh(|D(-c cos x)| / 2)` where `|D| > 2`, else 0.
    pub fn v_of_x(&self, x: f64) -> f64 {
        let d = self.disc.eval(self.lambda_of_x(x)).abs() / 2.0;
        // the dead zone absorbs roundoff of the polynomial evaluation, which
        // acosh would otherwise amplify to ~1e-7 inside bands
        if d <= 1.0 + 1e-12 {
            0.0
        } else {
            d.acosh() / self.qf()
        }
    }

    /// Integrated density of states (rescaled) on the boundary: continuous,
    /// non-decreasing, `u(0) = 0`, `u(pi) = pi`; constant `n pi / q` on gap n.
    pub fn u_of_x(&self, x: f64) -> f64 {
        let q = self.op.q();
        let lambda = self.lambda_of_x(x);
        match self.locate(lambda) {
            Location::Gap(n) => n as f64 * std::f64::consts::PI / q as f64,
            Location::Band(n) => {
                let eps = if (q - n + 1) % 2 == 0 { 1.0 } else { -1.0 };
                let arg = (eps * self.disc.eval(lambda) / 2.0).clamp(-1.0, 1.0);
                ((n - 1) as f64 * std::f64::consts::PI + arg.acos()) / q as f64
            }
        }
    }

    pub fn boundary_sample(&self, x: f64) -> BoundarySample {
        let lambda = self.lambda_of_x(x);
        BoundarySample {
            x,
            lambda,
            d: self.disc.eval(lambda),
            u: self.u_of_x(x),
            v: self.v_of_x(x),
            location: self.locate(lambda),
        }
    }

    fn lambda_of_z(&self, z: Complex64) -> Complex64 {
        -self.band.c * z.cos()
    }

    /// `m = D/2 - s` with the square-root branch `s` chosen so `|m| <= 1`.
    /// The small root is computed as the reciprocal of the large one
    /// (their product is 1), which avoids the catastrophic cancellation of
    /// `D/2 - sqrt((D/2)^2 - 1)` for large `|D|`.
    fn m_and_s(&self, lambda: Complex64) -> (Complex64, Complex64) {
        let h = self.disc.eval_c(lambda) / 2.0;
        let s = (h * h - 1.0).sqrt();
        let big = if (h + s).norm() >= (h - s).norm() {
            h + s
        } else {
            h - s
        };
        let m = 1.0 / big;
        (m, h - m)
    }

    /// Principal value of `q (k - pi) = -i Log m`; defined up to 2 pi in the
    /// real part.
    fn w_principal(&self, z: Complex64) -> Complex64 {
        let (m, _) = self.m_and_s(self.lambda_of_z(z));
        -I * m.ln()
    }

    /// Asymptotic expansion, accurate for `Im z` large.
    pub fn k_asymptotic(&self, z: Complex64) -> Complex64 {
        let cosz = z.cos();
        let mut k = z + I * self.q_coeffs[0];
        let mut p = Complex64::new(1.0, 0.0);
        for &qj in &self.q_coeffs[1..] {
            p /= cosz;
            k += I * qj * p;
        }
        k
    }

    /// Continues `W = q (k - pi)` along the vertical segment from
    /// `(x, y_from)` (value `w_from`) to `(x, y_to)`, unwrapping the 2 pi
    /// ambiguity step by step.
    fn continue_w(&self, x: f64, y_from: f64, w_from: Complex64, y_to: f64) -> Result<Complex64> {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut y = y_from;
        let mut w = w_from;
        let dir = if y_to >= y_from { 1.0 } else { -1.0 };
        let mut step = 0.25f64;
        while (y - y_to).abs() > 1e-15 {
            let h = step.min((y - y_to).abs());
            let yn = y + dir * h;
            let p = self.w_principal(Complex64::new(x, yn));
            let wn = p + two_pi * ((w.re - p.re) / two_pi).round();
            if (wn - w).norm() > 1.0 {
                step *= 0.5;
                if step < 1e-11 {
                    return Err(Error::Numerical(format!(
                        "branch continuation stalled at x={x}, y={yn}"
                    )));
                }
                continue;
            }
            if (wn - w).norm() < 0.2 {
                step = (step * 2.0).min(0.25);
            }
            w = wn;
            y = yn;
        }
        Ok(w)
    }

    fn seed_w(&self, x: f64) -> Complex64 {
        let z = Complex64::new(x, Y_ASYMP);
        self.qf() * (self.k_asymptotic(z) - std::f64::consts::PI)
    }

    /// The quasimomentum at an interior (or boundary) point of the
    /// half-strip, `0 <= Re z <= pi`, `Im z >= 0`.
    pub fn k_complex(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re >= -1e-12 && z.re <= std::f64::consts::PI + 1e-12) || z.im < -1e-12 {
            return Err(Error::InvalidArgument(format!(
                "z = {z} outside the closed half-strip"
            )));
        }
        if z.im >= Y_ASYMP {
            return Ok(self.k_asymptotic(z));
        }
        if z.im.abs() < 1e-12 {
            let lambda = self.lambda_of_x(z.re);
            let near = self
                .band
                .edges
                .iter()
                .map(|e| (lambda - e).abs())
                .fold(f64::INFINITY, f64::min);
            if near < 1e-12 * (1.0 + self.band.c) {
                return Err(Error::EdgeSingularity);
            }
        }
        let w0 = self.seed_w(z.re);
        let w = self.continue_w(z.re, Y_ASYMP, w0, z.im.max(0.0))?;
        Ok(std::f64::consts::PI + w / self.qf())
    }

    /// `k'(z) = i c sin z D'(lambda) / (2 q s(lambda))`, `lambda = -c cos z`.
    /// Branch-unambiguous (only `s` appears), so usable pointwise.
    pub fn k_prime(&self, z: Complex64) -> Complex64 {
        let lambda = self.lambda_of_z(z);
        let (_, s) = self.m_and_s(lambda);
        let dp = self.disc.eval_deriv_c(lambda);
        I * self.band.c * z.sin() * dp / (2.0 * self.qf() * s)
    }

    /// Open-gap intervals in x together with their 1-based gap indices.
    fn open_z_gaps(&self) -> Vec<(usize, f64, f64)> {
        self.zgaps
            .gaps
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.band.closed_gap_flags[*i])
            .map(|(i, &(l, r))| (i + 1, l, r))
            .collect()
    }

    /// Integrates `f(x)` against `v(x)` over one open gap with the
    /// substitution `x = mid + r cos(phi)`, which absorbs the square-root
    /// vanishing of `v` at the gap ends.
    fn gap_integral<F: Fn(f64) -> f64>(&self, l: f64, r: f64, f: F, tol: f64) -> f64 {
        let mid = 0.5 * (l + r);
        let rad = 0.5 * (r - l);
        let mut g = |phi: f64| {
            let x = mid + rad * phi.cos();
            self.v_of_x(x) * f(x) * rad * phi.sin()
        };
        crate::quad::adaptive(&mut g, 0.0, std::f64::consts::PI, tol).0
    }

    /// Lemma of trace formulas: compares `(1/pi) int_0^pi v(x) cos^n x dx`
    /// against the binomial combination of the `Q_j`.
    pub fn trace_moment_check(&self, n: usize) -> Result<MomentCheck> {
        let q = self.op.q();
        if n > 2 * q - 1 {
            return Err(Error::InvalidArgument(format!(
                "moment order n={n} exceeds 2q-1 = {}; Q_j is only defined below 2q",
                2 * q - 1
            )));
        }
        let mut lhs = 0.0;
        for (_, l, r) in self.open_z_gaps() {
            lhs += self.gap_integral(l, r, |x| x.cos().powi(n as i32), 1e-12);
        }
        lhs /= std::f64::consts::PI;

        let qs = &self.q_coeffs;
        let mut rhs = 0.0;
        if n % 2 == 1 {
            for i in 0..=(n - 1) / 2 {
                rhs += qs[2 * i + 1] * binom(n - 1 - 2 * i, (n - 1) / 2 - i)
                    / 2f64.powi((n - 1 - 2 * i) as i32);
            }
        } else {
            for i in 0..=n / 2 {
                rhs += qs[2 * i] * binom(n - 2 * i, n / 2 - i) / 2f64.powi((n - 2 * i) as i32);
            }
        }
        Ok(MomentCheck {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
        })
    }

    fn x_breaks(&self) -> Vec<f64> {
        let mut xb: Vec<f64> = vec![0.0, std::f64::consts::PI];
        for &e in &self.band.edges {
            xb.push(((-e / self.band.c).clamp(-1.0, 1.0)).acos());
        }
        xb.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xb.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        xb
    }

    fn y_breaks(&self, ymax: f64) -> Vec<f64> {
        let mut yb = vec![0.0, 1e-3, 1e-2, 0.1, 0.4, 1.5, 5.0, ymax];
        yb.retain(|&y| y <= ymax);
        if *yb.last().unwrap() < ymax {
            yb.push(ymax);
        }
        yb
    }

    /// Bound on the neglected part of a Dirichlet integral above `ymax`,
    /// from the asymptotic expansion of `k`.
    fn dirichlet_tail(&self, ymax: f64) -> f64 {
        // |k'(z) - 1| <= sum_j j |Q_j| / sinh(y)^j for y >= ymax (crude).
        let mut tail = 0.0;
        let steps = 400;
        let ytop = ymax + 40.0;
        let dy = (ytop - ymax) / steps as f64;
        for i in 0..steps {
            let y = ymax + (i as f64 + 0.5) * dy;
            let sh = y.sinh();
            let mut bound = 0.0;
            for (j, &qj) in self.q_coeffs.iter().enumerate().skip(1) {
                bound += j as f64 * qj.abs() / sh.powi(j as i32);
            }
            tail += bound * bound * dy;
        }
        tail // (1/pi) * pi * integral over x in [0, pi]
    }

    /// Dirichlet integral `I(k(z) - z)`, compared against `Q_0 = ln(c/2A)`.
    pub fn dirichlet_integral_1(&self, ymax: f64) -> Result<DirichletCheck> {
        let rhs = self.q_coeffs[0];
        let tail_bound = self.dirichlet_tail(ymax);
        let tol_target = 1e-3 * rhs.abs().max(1e-3);
        // the GL5/GL3 error estimate is optimistic near the corner
        // singularities, so aim an order of magnitude below the target
        let tol_quad = 0.1 * tol_target;
        if tail_bound > tol_target {
            return Err(Error::IncreaseYmax {
                tail: tail_bound,
                tol: tol_target,
            });
        }
        let mut f = |x: f64, y: f64| {
            let kp = self.k_prime(Complex64::new(x, y));
            (kp - 1.0).norm_sqr()
        };
        let (raw, _err) = crate::quad::adaptive_2d(
            &mut f,
            &self.x_breaks(),
            &self.y_breaks(ymax),
            std::f64::consts::PI * tol_quad,
            300_000,
        );
        let integral = raw / std::f64::consts::PI;
        Ok(DirichletCheck {
            integral,
            rhs,
            residual: (integral - rhs).abs(),
            tail_bound,
        })
    }

    /// Dirichlet integral `I([k(z) - z - iQ_0] cos z)`, compared against
    /// `Q_0/2 + Q_2 - 2 Q_0 Q_2 - Q_1^2 / 2`.
    pub fn dirichlet_integral_2(&self, ymax: f64) -> Result<DirichletCheck> {
        let q0 = self.q_coeffs[0];
        let q1 = self.q_coeffs[1];
        let q2 = if self.q_coeffs.len() > 2 {
            self.q_coeffs[2]
        } else {
            0.0
        };
        let rhs = q0 / 2.0 + q2 - 2.0 * q0 * q2 - q1 * q1 / 2.0;
        let tail_bound = self.dirichlet_tail(ymax);
        let tol_target = 1e-3 * rhs.abs().max(1e-3);
        // the GL5/GL3 error estimate is optimistic near the corner
        // singularities, so aim an order of magnitude below the target
        let tol_quad = 0.1 * tol_target;
        if tail_bound > tol_target {
            return Err(Error::IncreaseYmax {
                tail: tail_bound,
                tol: tol_target,
            });
        }
        let mut cache = KCache::new(self);
        let mut failed: Option<Error> = None;
        let mut f = |x: f64, y: f64| {
            let z = Complex64::new(x, y);
            match cache.k_at(x, y) {
                Ok(k) => {
                    let kp = self.k_prime(z);
                    let fp = (kp - 1.0) * z.cos() - (k - z - I * q0) * z.sin();
                    fp.norm_sqr()
                }
                Err(e) => {
                    if failed.is_none() {
                        failed = Some(e);
                    }
                    0.0
                }
            }
        };
        let (raw, _err) = crate::quad::adaptive_2d(
            &mut f,
            &self.x_breaks(),
            &self.y_breaks(ymax),
            std::f64::consts::PI * tol_quad,
            300_000,
        );
        if let Some(e) = failed {
            return Err(e);
        }
        let integral = raw / std::f64::consts::PI;
        Ok(DirichletCheck {
            integral,
            rhs,
            residual: (integral - rhs).abs(),
            tail_bound,
        })
    }

    /// Boundary identity
    /// `int_0^pi u dx = pi^2/2 + int_0^inf (v(pi, y) - v(0, y)) dy`.
    pub fn vertical_identity_check(&self) -> Result<VerticalCheck> {
        let q = self.qf();
        let c = self.band.c;
        // Left side: u integrated over bands (adaptive) and gaps (constant).
        let mut lhs = 0.0;
        let mut x_lo = 0.0;
        let mut gap_walls: Vec<(f64, f64, usize)> = Vec::new();
        for (n, l, r) in self.open_z_gaps() {
            gap_walls.push((l, r, n));
        }
        for &(l, r, n) in &gap_walls {
            let (band_part, _) =
                crate::quad::adaptive(&mut |x: f64| self.u_of_x(x), x_lo, l, 1e-11);
            lhs += band_part;
            lhs += n as f64 * std::f64::consts::PI / q * (r - l);
            x_lo = r;
        }
        let (last_part, _) = crate::quad::adaptive(
            &mut |x: f64| self.u_of_x(x),
            x_lo,
            std::f64::consts::PI,
            1e-11,
        );
        lhs += last_part;

        // Right side: v along the two vertical boundary rays.
        let edge_v = |y: f64| {
            let right = (self.disc.eval(c * y.cosh()).abs() / 2.0).max(1.0).acosh();
            let left = (self.disc.eval(-c * y.cosh()).abs() / 2.0).max(1.0).acosh();
            (right - left) / q
        };
        let mut ytop = 5.0;
        while edge_v(ytop).abs() > 1e-12 && ytop < 60.0 {
            ytop += 5.0;
        }
        let (tail_int, _) = crate::quad::adaptive(&mut |y: f64| edge_v(y), 0.0, ytop, 1e-11);
        let rhs = std::f64::consts::PI * std::f64::consts::PI / 2.0 + tail_int;
        Ok(VerticalCheck {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
        })
    }

    /// Periodic Herglotz representation
    /// `k(z) = z + C + (1/2pi) int_{-pi}^{pi} v(t) cot((t - z)/2) dt` with `v`
    /// extended evenly; by that symmetry `C = 0` and the principal value at
    /// `t = 0` cancels. Quadrature runs over the open gaps only.
    pub fn herglotz_k(&self, z: Complex64, n_grid: usize) -> Result<Complex64> {
        if z.im <= 0.0 {
            return Err(Error::InvalidArgument(
                "herglotz_k requires Im z > 0".into(),
            ));
        }
        let cot = |w: Complex64| w.cos() / w.sin();
        let total: f64 = self.zgaps.total_width();
        let mut acc = Complex64::new(0.0, 0.0);
        for (_, l, r) in self.open_z_gaps() {
            let mid = 0.5 * (l + r);
            let rad = 0.5 * (r - l);
            let share = if total > 0.0 {
                ((r - l) / total * n_grid as f64).ceil() as usize
            } else {
                0
            };
            let nodes = share.max(64);
            // substitution t = mid + rad cos(phi); trapezoid in phi is
            // spectrally accurate for this smooth periodic-type integrand
            for i in 0..nodes {
                let phi = std::f64::consts::PI * (i as f64 + 0.5) / nodes as f64;
                let t = mid + rad * phi.cos();
                let w = self.v_of_x(t) * rad * phi.sin();
                let kernel = cot((t - z) / 2.0) - cot((t + z) / 2.0);
                acc += w * kernel * (std::f64::consts::PI / nodes as f64);
            }
        }
        Ok(z + acc / (2.0 * std::f64::consts::PI))
    }

    /// Samples `v` across one open gap and checks the semicircle lower bound
    /// and concavity.
    pub fn gap_shape_checks(&self, gap_index: usize, n_points: usize) -> Result<GapShapeReport> {
        let q = self.op.q();
        if gap_index == 0 || gap_index > q - 1 {
            return Err(Error::InvalidArgument(format!(
                "gap index {gap_index} out of range 1..={}",
                q - 1
            )));
        }
        if self.band.closed_gap_flags[gap_index - 1] {
            return Err(Error::InvalidArgument(format!(
                "gap {gap_index} is closed"
            )));
        }
        if n_points < 3 {
            return Err(Error::InvalidArgument("n_points must be >= 3".into()));
        }
        let (l, r) = self.zgaps.gaps[gap_index - 1];
        let mut vs = Vec::with_capacity(n_points);
        let mut semicircle_violations = 0;
        let mut worst_semicircle_deficit = 0.0f64;
        let mut sampled_max = 0.0f64;
        for i in 0..n_points {
            let x = l + (r - l) * (i as f64 + 1.0) / (n_points as f64 + 1.0);
            let v = self.v_of_x(x);
            vs.push(v);
            sampled_max = sampled_max.max(v);
            let semi = ((x - l) * (r - x)).max(0.0).sqrt();
            let slack = v - semi;
            if slack < -1e-9 {
                semicircle_violations += 1;
            }
            worst_semicircle_deficit = worst_semicircle_deficit.min(slack);
        }
        let mut concavity_violations = 0;
        let mut worst_convexity = f64::NEG_INFINITY;
        for w in vs.windows(3) {
            let second = w[0] - 2.0 * w[1] + w[2];
            if second > 1e-9 {
                concavity_violations += 1;
            }
            worst_convexity = worst_convexity.max(second);
        }
        Ok(GapShapeReport {
            samples: n_points,
            semicircle_violations,
            concavity_violations,
            worst_semicircle_deficit,
            worst_convexity,
            sampled_max,
        })
    }
}

/// Caches branch-continued values of `W = q(k - pi)` per vertical line, so
/// repeated evaluations (2D quadrature) reuse earlier continuation work.
struct KCache<'m> {
    model: &'m QuasimomentumModel,
    lines: HashMap<u64, Vec<(f64, Complex64)>>,
}

impl<'m> KCache<'m> {
    fn new(model: &'m QuasimomentumModel) -> Self {
        Self {
            model,
            lines: HashMap::new(),
        }
    }

    fn k_at(&mut self, x: f64, y: f64) -> Result<Complex64> {
        if y >= Y_ASYMP {
            return Ok(self.model.k_asymptotic(Complex64::new(x, y)));
        }
        let line = self.lines.entry(x.to_bits()).or_insert_with(|| {
            let w = self.model.seed_w(x);
            vec![(Y_ASYMP, w)]
        });
        // nearest stored height
        let (y0, w0) = *line
            .iter()
            .min_by(|a, b| {
                (a.0 - y)
                    .abs()
                    .partial_cmp(&(b.0 - y).abs())
                    .unwrap()
            })
            .unwrap();
        let w = if (y0 - y).abs() < 1e-15 {
            w0
        } else {
            let w = self.model.continue_w(x, y0, w0, y)?;
            line.push((y, w));
            if line.len() > 64 {
                // keep the seed plus the most recent points
                let seed = line[0];
                let tail: Vec<_> = line[line.len() - 32..].to_vec();
                line.clear();
                line.push(seed);
                line.extend(tail);
            }
            w
        };
        Ok(std::f64::consts::PI + w / self.model.qf())
    }
}

//! Band edges, gaps, normalisation, z-coordinates, and the independent
//! Bloch theta-sweep oracle.

use crate::discriminant::{discriminant_poly, DiscriminantRep};
use crate::error::{Error, Result};
use crate::jacobi::{FloquetMatrixL, PeriodicJacobi};
use crate::poly;

/// Relative width below which a gap is flagged closed.
pub const CLOSED_GAP_TOL: f64 = 1e-10;

/// Band edges and gaps of the operator. Edges are the 2q solutions of
/// `D = +-2`, sorted ascending:
/// `lambda_0^+, lambda_1^-, lambda_1^+, ..., lambda_q^-`.
#[derive(Debug, Clone)]
pub struct BandStructure {
    pub edges: Vec<f64>,
    /// The q bands `[lambda_{m-1}^+, lambda_m^-]`.
    pub bands: Vec<(f64, f64)>,
    /// The q-1 gaps `(lambda_m^-, lambda_m^+)`; may have zero width.
    pub gaps: Vec<(f64, f64)>,
    /// Half the distance between the spectrum's ends.
    pub c: f64,
    /// Logarithmic capacity `A`.
    pub capacity: f64,
    /// Diagonal shift applied to reach this structure (0 when un-normalised).
    pub shift: f64,
    pub closed_gap_flags: Vec<bool>,
}

impl BandStructure {
    pub fn is_normalised(&self) -> bool {
        let lo = self.edges[0];
        let hi = *self.edges.last().unwrap();
        (lo + hi).abs() <= 1e-9 * (1.0 + self.c)
    }

    pub fn total_band_width(&self) -> f64 {
        self.bands.iter().map(|(l, r)| r - l).sum()
    }

    pub fn total_gap_width(&self) -> f64 {
        self.gaps.iter().map(|(l, r)| r - l).sum()
    }
}

/// Gaps transplanted to the variable `x = arccos(-lambda/c)` in `[0, pi]`.
#[derive(Debug, Clone)]
pub struct ZGapSet {
    pub gaps: Vec<(f64, f64)>,
    pub widths: Vec<f64>,
}

impl ZGapSet {
    pub fn total_width(&self) -> f64 {
        self.widths.iter().sum()
    }
}

fn bisect_to<F: Fn(f64) -> f64>(f: &F, mut l: f64, mut r: f64, tol: f64) -> f64 {
    let mut fl = f(l);
    if fl == 0.0 {
        return l;
    }
    for _ in 0..200 {
        let m = 0.5 * (l + r);
        if r - l < tol {
            break;
        }
        let fm = f(m);
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

/// Computes the un-normalised band structure by bisecting `D = +2` and
/// `D = -2` on each monotone piece of `D` delimited by the critical points
/// and the (extended) Gershgorin bounds.
pub fn band_edges(j: &PeriodicJacobi) -> Result<BandStructure> {
    let disc = discriminant_poly(j)?;
    band_edges_from(j, &disc)
}

pub(crate) fn band_edges_from(
    j: &PeriodicJacobi,
    disc: &DiscriminantRep,
) -> Result<BandStructure> {
    let q = j.q();
    let (glo, ghi) = j.gershgorin_interval();
    let lo = glo - 1.0;
    let hi = ghi + 1.0;
    let scale = lo.abs().max(hi.abs());
    let tol = 1e-13 * (1.0 + scale);
    // Snap-to-critical-point tolerance for closed gaps, where the double
    // root of D -+ 2 defeats sign bracketing.
    let eps_closed = 1e-11;

    let mut pieces = Vec::with_capacity(q + 1);
    pieces.push(lo);
    pieces.extend_from_slice(&disc.critical_points);
    pieces.push(hi);

    let d = |x: f64| poly::eval(&disc.coeffs, x);
    let mut edges: Vec<f64> = Vec::with_capacity(2 * q);
    for w in pieces.windows(2) {
        let (l, r) = (w[0], w[1]);
        for target in [-2.0f64, 2.0] {
            let fl = d(l) - target;
            let fr = d(r) - target;
            if fl.abs() <= eps_closed {
                edges.push(l);
            } else if fr.abs() <= eps_closed {
                edges.push(r);
            } else if fl * fr < 0.0 {
                edges.push(bisect_to(&|x| d(x) - target, l, r, tol));
            }
        }
    }
    if edges.len() != 2 * q {
        return Err(Error::Numerical(format!(
            "found {} band edges, expected {}",
            edges.len(),
            2 * q
        )));
    }
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let c = 0.5 * (edges[2 * q - 1] - edges[0]);
    let bands = (0..q).map(|m| (edges[2 * m], edges[2 * m + 1])).collect();
    let gaps: Vec<(f64, f64)> = (0..q - 1)
        .map(|m| (edges[2 * m + 1], edges[2 * m + 2]))
        .collect();
    let closed_gap_flags = gaps
        .iter()
        .map(|(l, r)| r - l < CLOSED_GAP_TOL * c)
        .collect();
    Ok(BandStructure {
        edges,
        bands,
        gaps,
        c,
        capacity: j.capacity(),
        shift: 0.0,
        closed_gap_flags,
    })
}

/// Shifts the diagonal so that the spectrum ends at `+-c`, and returns the
/// shifted operator with its (symmetric) band structure.
pub fn normalize(j: &PeriodicJacobi) -> Result<(PeriodicJacobi, BandStructure)> {
    let b0 = band_edges(j)?;
    let s = -0.5 * (b0.edges[0] + b0.edges.last().unwrap());
    let jn = j.shifted(s);
    let mut bn = band_edges(&jn)?;
    bn.shift = s;
    Ok((jn, bn))
}

/// Transplants the gaps to `x = arccos(-lambda/c)`, which maps
/// `-c -> 0` and `c -> pi` and is strictly increasing.
pub fn z_coordinates(b: &BandStructure) -> Result<ZGapSet> {
    if !b.is_normalised() {
        return Err(Error::InvalidArgument(
            "z_coordinates requires a normalised band structure".into(),
        ));
    }
    let x_of = |lambda: f64| ((-lambda / b.c).clamp(-1.0, 1.0)).acos();
    let mut gaps = Vec::with_capacity(b.gaps.len());
    let mut widths = Vec::with_capacity(b.gaps.len());
    for (i, &(l, r)) in b.gaps.iter().enumerate() {
        if b.closed_gap_flags[i] {
            let x = x_of(0.5 * (l + r));
            gaps.push((x, x));
            widths.push(0.0);
        } else {
            let g = (x_of(l), x_of(r));
            gaps.push(g);
            widths.push(g.1 - g.0);
        }
    }
    Ok(ZGapSet { gaps, widths })
}

/// Eigenvalues of the phase-`theta` Floquet matrix `L(theta)`, computed by
/// cyclic Jacobi rotations on the real-symmetric 2q x 2q embedding
/// `[[Re, -Im], [Im, Re]]`. Independent of the discriminant path.
pub fn floquet_eigenvalues(j: &PeriodicJacobi, theta: f64) -> Result<Vec<f64>> {
    let l = FloquetMatrixL::with_phase(j, theta);
    let q = l.dim();
    let n = 2 * q;
    let mut m = vec![0.0f64; n * n];
    for r in 0..q {
        for c in 0..q {
            let e = l.entry(r, c);
            m[r * n + c] = e.re;
            m[r * n + (c + q)] = -e.im;
            m[(r + q) * n + c] = e.im;
            m[(r + q) * n + (c + q)] = e.re;
        }
    }
    let mut eig = symmetric_eigenvalues(m, n)?;
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // Eigenvalues come in duplicate pairs; collapse them.
    let collapsed = (0..q)
        .map(|i| 0.5 * (eig[2 * i] + eig[2 * i + 1]))
        .collect();
    Ok(collapsed)
}

fn symmetric_eigenvalues(mut m: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    let fro: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    if fro == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let max_sweeps = 100;
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if (2.0 * off).sqrt() <= 1e-13 * fro {
            return Ok((0..n).map(|i| m[i * n + i]).collect());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = t * cos;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = cos * mkp - sin * mkq;
                    m[k * n + q] = sin * mkp + cos * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = cos * mpk - sin * mqk;
                    m[q * n + k] = sin * mpk + cos * mqk;
                }
            }
        }
    }
    Err(Error::Numerical(
        "Jacobi eigensolver did not converge".into(),
    ))
}

/// Sweeps the Floquet phase over a uniform grid on `[0, pi]` and returns the
/// q band intervals `[min_theta lambda_m(theta), max_theta lambda_m(theta)]`.
pub fn bloch_oracle(j: &PeriodicJacobi, n_theta: usize) -> Result<Vec<(f64, f64)>> {
    if n_theta < 3 {
        return Err(Error::InvalidArgument("nTheta must be >= 3".into()));
    }
    let q = j.q();
    let mut bands = vec![(f64::INFINITY, f64::NEG_INFINITY); q];
    for i in 0..n_theta {
        let theta = std::f64::consts::PI * i as f64 / (n_theta - 1) as f64;
        let eig = floquet_eigenvalues(j, theta)?;
        for (m, &lam) in eig.iter().enumerate() {
            bands[m].0 = bands[m].0.min(lam);
            bands[m].1 = bands[m].1.max(lam);
        }
    }
    Ok(bands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminant::discriminant_value;
    use crate::jacobi::harper;

    fn op(q: usize, a: &[f64], b: &[f64]) -> PeriodicJacobi {
        PeriodicJacobi::new(q, a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn free_q2_edges_and_closed_gap() {
        let j = op(2, &[1.0, 1.0], &[0.0, 0.0]);
        let b = band_edges(&j).unwrap();
        let expect = [-2.0, 0.0, 0.0, 2.0];
        for (e, x) in b.edges.iter().zip(expect) {
            assert!((e - x).abs() < 1e-10, "{e} vs {x}");
        }
        assert!(b.closed_gap_flags[0]);
    }

    #[test]
    fn constant_operator_single_band() {
        // a = alpha, b = beta entered with artificial period 3:
        // one band [beta - 2 alpha, beta + 2 alpha], all gaps closed.
        let j = op(3, &[0.7, 0.7, 0.7], &[1.1, 1.1, 1.1]);
        let b = band_edges(&j).unwrap();
        assert!((b.edges[0] - (1.1 - 1.4)).abs() < 1e-9);
        assert!((b.edges.last().unwrap() - (1.1 + 1.4)).abs() < 1e-9);
        assert!(b.closed_gap_flags.iter().all(|&f| f));
    }

    #[test]
    fn edges_have_discriminant_two() {
        let j = harper(1, 3, 0.0).unwrap();
        let b = band_edges(&j).unwrap();
        for &e in &b.edges {
            assert!((discriminant_value(&j, e).abs() - 2.0).abs() < 1e-9);
        }
        let (glo, ghi) = j.gershgorin_interval();
        assert!(b.edges[0] >= glo - 1e-9 && *b.edges.last().unwrap() <= ghi + 1e-9);
    }

    #[test]
    fn harper_normalisation_beats_2_41() {
        let j = harper(1, 3, 0.0).unwrap();
        let (_, b) = normalize(&j).unwrap();
        assert!(b.is_normalised());
        assert!(b.c > 2.41, "c = {}", b.c);
        let lo = b.edges[0];
        let hi = *b.edges.last().unwrap();
        assert!((lo + hi).abs() < 1e-12 * (1.0 + b.c));
    }

    #[test]
    fn normalisation_idempotent_and_constant_case() {
        let j = op(2, &[0.9, 0.9], &[2.5, 2.5]);
        let (jn, b) = normalize(&j).unwrap();
        assert!((b.shift + 2.5).abs() < 1e-9);
        assert!((b.c - 1.8).abs() < 1e-9);
        let (_, b2) = normalize(&jn).unwrap();
        assert!(b2.shift.abs() < 1e-12);
    }

    #[test]
    fn telescoping_bands_plus_gaps() {
        let j = harper(2, 5, 0.4).unwrap();
        let b = band_edges(&j).unwrap();
        let sum = b.total_band_width() + b.total_gap_width();
        assert!((sum - 2.0 * b.c).abs() < 1e-10 * b.c);
    }

    #[test]
    fn z_coordinates_midpoint_and_closed() {
        let j = op(2, &[1.0, 1.0], &[1.0, -1.0]);
        let (_, b) = normalize(&j).unwrap();
        let z = z_coordinates(&b).unwrap();
        // gap is symmetric around lambda = 0 -> x midpoint pi/2
        let mid = 0.5 * (z.gaps[0].0 + z.gaps[0].1);
        assert!((mid - std::f64::consts::FRAC_PI_2).abs() < 1e-9);

        let jc = op(2, &[1.0, 1.0], &[0.0, 0.0]);
        let (_, bc) = normalize(&jc).unwrap();
        let zc = z_coordinates(&bc).unwrap();
        assert_eq!(zc.widths[0], 0.0);
    }

    #[test]
    fn bloch_at_half_pi_gives_discriminant_roots() {
        let j = harper(1, 3, 0.0).unwrap();
        let eig = floquet_eigenvalues(&j, std::f64::consts::FRAC_PI_2).unwrap();
        for &lam in &eig {
            assert!(
                discriminant_value(&j, lam).abs() < 1e-9,
                "D({lam}) = {}",
                discriminant_value(&j, lam)
            );
        }
    }

    #[test]
    fn bloch_union_constant_case() {
        let j = op(3, &[1.0, 1.0, 1.0], &[0.0, 0.0, 0.0]);
        let bands = bloch_oracle(&j, 301).unwrap();
        assert!((bands[0].0 + 2.0).abs() < 1e-9);
        assert!((bands[2].1 - 2.0).abs() < 1e-9);
        // adjacent bands touch (closed gaps)
        for m in 0..2 {
            assert!((bands[m].1 - bands[m + 1].0).abs() < 1e-6);
        }
    }

    #[test]
    fn bloch_matches_band_edges() {
        let j = harper(1, 3, 0.0).unwrap();
        let b = band_edges(&j).unwrap();
        let oracle = bloch_oracle(&j, 721).unwrap();
        for (m, &(lo, hi)) in oracle.iter().enumerate() {
            let (bl, bh) = b.bands[m];
            assert!((lo - bl).abs() < 1e-9, "band {m} lo: {lo} vs {bl}");
            assert!((hi - bh).abs() < 1e-9, "band {m} hi: {hi} vs {bh}");
        }
    }
}

//! Adaptive quadrature: Gauss-Kronrod 7-15 in 1D and a tensor-Gauss cell
//! refinement scheme in 2D. Both tolerate the square-root edge behaviour of
//! the quasimomentum boundary values when the singular abscissas are supplied
//! as break points.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// G7-K15 nodes and weights on [-1, 1] (positive half; nodes symmetric).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Single G7-K15 panel; returns (kronrod value, error estimate).
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut res_k = 0.0;
    let mut res_g = 0.0;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (fl, fr) = if x == 0.0 {
            let v = f(center);
            (v, 0.0)
        } else {
            (f(center - half * x), f(center + half * x))
        };
        let s = fl + fr;
        res_k += wk * s;
        // Gauss nodes are the odd-index Kronrod nodes (the centre included once).
        if i % 2 == 1 {
            res_g += WG[i / 2] * s;
        }
    }
    let value = res_k * half;
    let err = ((res_k - res_g) * half).abs();
    (value, err)
}

/// Globally adaptive integration of `f` over `[a, b]` to absolute
/// tolerance `tol`. Returns (value, error estimate).
pub fn adaptive<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    adaptive_with_breaks(f, &[a, b], tol)
}

/// As `adaptive`, but starts from the given partition (sorted break points,
/// at least two entries). Useful when the integrand has known kinks.
pub fn adaptive_with_breaks<F: FnMut(f64) -> f64>(
    f: &mut F,
    breaks: &[f64],
    tol: f64,
) -> (f64, f64) {
    #[derive(PartialEq)]
    struct Seg {
        err: f64,
        a: f64,
        b: f64,
        val: f64,
    }
    impl Eq for Seg {}
    impl PartialOrd for Seg {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Seg {
        fn cmp(&self, other: &Self) -> Ordering {
            self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
        }
    }

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e) = gk15(f, w[0], w[1]);
        total += v;
        total_err += e;
        heap.push(Seg {
            err: e,
            a: w[0],
            b: w[1],
            val: v,
        });
    }
    let max_splits = 4000;
    let mut splits = 0;
    while total_err > tol && splits < max_splits {
        let Some(worst) = heap.pop() else { break };
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // interval at floating-point resolution; keep its estimate
            total_err -= worst.err;
            total_err += worst.err.min(tol * 1e-3);
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, m);
        let (v2, e2) = gk15(f, m, worst.b);
        total += v1 + v2 - worst.val;
        total_err += e1 + e2 - worst.err;
        heap.push(Seg {
            err: e1,
            a: worst.a,
            b: m,
            val: v1,
        });
        heap.push(Seg {
            err: e2,
            a: m,
            b: worst.b,
            val: v2,
        });
        splits += 1;
    }
    (total, total_err)
}

// Gauss-Legendre nodes/weights on [-1, 1].
const GL5_X: [f64; 5] = [
    -0.906179845938664,
    -0.5384693101056831,
    0.0,
    0.5384693101056831,
    0.906179845938664,
];
const GL5_W: [f64; 5] = [
    0.23692688505618908,
    0.47862867049936647,
    0.5688888888888889,
    0.47862867049936647,
    0.23692688505618908,
];
const GL3_X: [f64; 3] = [-0.7745966692414834, 0.0, 0.7745966692414834];
const GL3_W: [f64; 3] = [0.5555555555555556, 0.8888888888888888, 0.5555555555555556];

fn cell_gl<F: FnMut(f64, f64) -> f64>(
    f: &mut F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    coarse: bool,
) -> f64 {
    let (xs, ws): (&[f64], &[f64]) = if coarse {
        (&GL3_X, &GL3_W)
    } else {
        (&GL5_X, &GL5_W)
    };
    let cx = 0.5 * (x0 + x1);
    let hx = 0.5 * (x1 - x0);
    let cy = 0.5 * (y0 + y1);
    let hy = 0.5 * (y1 - y0);
    let mut acc = 0.0;
    for (i, &xi) in xs.iter().enumerate() {
        let x = cx + hx * xi;
        let mut row = 0.0;
        for (j, &yj) in xs.iter().enumerate() {
            row += ws[j] * f(x, cy + hy * yj);
        }
        acc += ws[i] * row;
    }
    acc * hx * hy
}

/// Adaptive 2D integration over the tensor region spanned by the sorted
/// break lists `xb` and `yb`. Cells are refined worst-error-first (split
/// along the longer side) until the total error estimate drops below `tol`
/// or the cell budget runs out. Returns (value, error estimate).
pub fn adaptive_2d<F: FnMut(f64, f64) -> f64>(
    f: &mut F,
    xb: &[f64],
    yb: &[f64],
    tol: f64,
    max_cells: usize,
) -> (f64, f64) {
    #[derive(PartialEq)]
    struct Cell {
        err: f64,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        val: f64,
    }
    impl Eq for Cell {}
    impl PartialOrd for Cell {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Cell {
        fn cmp(&self, other: &Self) -> Ordering {
            self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
        }
    }

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let eval_cell = |f: &mut F, x0: f64, x1: f64, y0: f64, y1: f64| -> Cell {
        let v5 = cell_gl(f, x0, x1, y0, y1, false);
        let v3 = cell_gl(f, x0, x1, y0, y1, true);
        Cell {
            err: (v5 - v3).abs(),
            x0,
            x1,
            y0,
            y1,
            val: v5,
        }
    };
    for wx in xb.windows(2) {
        for wy in yb.windows(2) {
            if wx[1] <= wx[0] || wy[1] <= wy[0] {
                continue;
            }
            let c = eval_cell(f, wx[0], wx[1], wy[0], wy[1]);
            total += c.val;
            total_err += c.err;
            heap.push(c);
        }
    }
    let mut cells = heap.len();
    while total_err > tol && cells < max_cells {
        let Some(worst) = heap.pop() else { break };
        let dx = worst.x1 - worst.x0;
        let dy = worst.y1 - worst.y0;
        if dx < 1e-13 && dy < 1e-13 {
            total_err -= worst.err * 0.5;
            continue;
        }
        let children = if dx >= dy {
            let m = 0.5 * (worst.x0 + worst.x1);
            [
                (worst.x0, m, worst.y0, worst.y1),
                (m, worst.x1, worst.y0, worst.y1),
            ]
        } else {
            let m = 0.5 * (worst.y0 + worst.y1);
            [
                (worst.x0, worst.x1, worst.y0, m),
                (worst.x0, worst.x1, m, worst.y1),
            ]
        };
        total -= worst.val;
        total_err -= worst.err;
        for (x0, x1, y0, y1) in children {
            let c = eval_cell(f, x0, x1, y0, y1);
            total += c.val;
            total_err += c.err;
            heap.push(c);
        }
        cells += 1;
    }
    (total, total_err)
}

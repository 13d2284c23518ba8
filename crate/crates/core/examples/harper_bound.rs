//! The Harper-family lower bound on the spectral half-width.
//!
//! For `a_j = 1`, `b_j = 2 cos(2 pi p j / q + theta)` with `q` not dividing
//! `2p`, the trace identity `Tr L^2 = 4q` turns the width inequality into
//! `c^2 (1/2 + ln(c/2)) > 4`, whose root 2.41... bounds `c` below for every
//! admissible `p`, `q`, `theta`.
//!
//! Run with: cargo run --example harper_bound

use jacobi_bands::bounds::harper_bound_demo;
use jacobi_bands::{certify, harper};

fn main() {
    println!("{:>3} {:>3} {:>10} {:>14} {:>14}", "p", "q", "Tr L^2", "lower bound", "c");
    for (p, q) in [(1i64, 3usize), (1, 4), (1, 5), (2, 5), (1, 7), (3, 8)] {
        let demo = harper_bound_demo(p, q).unwrap();
        let rep = certify(&harper(p, q, 0.0).unwrap()).unwrap();
        println!(
            "{p:>3} {q:>3} {:>10.4} {:>14.10} {:>14.10}",
            rep.trace_l2, demo.lower_bound, demo.c
        );
        assert!(demo.c > demo.lower_bound);
    }

    println!("\nphase sweep for (p, q) = (2, 5):");
    for i in 0..5 {
        let theta = std::f64::consts::PI * i as f64 / 8.0;
        let rep = certify(&harper(2, 5, theta).unwrap()).unwrap();
        println!("  theta = {theta:.4}: c = {:.10}, all records satisfied: {}", rep.c, rep.all_satisfied());
    }
}

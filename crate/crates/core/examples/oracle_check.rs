//! Cross-check the bisection band edges against an independent oracle: the
//! eigenvalues of the phase-theta Floquet matrix swept over theta in [0, pi].
//!
//! Run with: cargo run --release --example oracle_check

use jacobi_bands::{band_edges, bloch_oracle, harper};

fn main() {
    let j = harper(2, 5, 0.3).unwrap();
    let band = band_edges(&j).unwrap();
    let oracle = bloch_oracle(&j, 721).unwrap();

    println!("{:>4} {:>16} {:>16} {:>12}", "band", "bisection", "theta sweep", "distance");
    let mut max_d = 0.0f64;
    for (m, (&(bl, bh), &(ol, oh))) in band.bands.iter().zip(&oracle).enumerate() {
        let d = (bl - ol).abs().max((bh - oh).abs());
        max_d = max_d.max(d);
        println!(
            "{:>4} [{bl:+.8}, {bh:+.8}] [{ol:+.8}, {oh:+.8}] {d:>12.3e}",
            m + 1
        );
    }
    println!("\nmax Hausdorff distance: {max_d:.3e} (threshold {:.3e})", 1e-3 * band.c);
    assert!(max_d < 1e-3 * band.c);
}

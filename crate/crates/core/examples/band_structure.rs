//! Compute and print the band structure of a periodic Jacobi operator.
//!
//! Run with: cargo run --example band_structure

use jacobi_bands::{harper, normalize, z_coordinates};

fn main() {
    let j = harper(1, 3, 0.0).unwrap();
    println!("operator: q = {}, a = {:?}, b = {:?}", j.q(), j.a(), j.b());

    let (jn, band) = normalize(&j).unwrap();
    println!("normalising shift: {:+.6}", band.shift);
    println!("half-width c = {:.12}, capacity A = {:.12}", band.c, band.capacity);

    println!("\nbands:");
    for (m, &(l, r)) in band.bands.iter().enumerate() {
        println!("  sigma_{}: [{:+.10}, {:+.10}]  width {:.10}", m + 1, l, r, r - l);
    }
    println!("gaps:");
    for (n, &(l, r)) in band.gaps.iter().enumerate() {
        let state = if band.closed_gap_flags[n] { "closed" } else { "open" };
        println!("  gamma_{}: ({:+.10}, {:+.10})  width {:.10}  [{state}]", n + 1, l, r, r - l);
    }

    let zg = z_coordinates(&band).unwrap();
    println!("\ngaps in x = arccos(-lambda/c):");
    for (n, &(l, r)) in zg.gaps.iter().enumerate() {
        println!("  g_{}: ({:.10}, {:.10})  |g| = {:.10}", n + 1, l, r, r - l);
    }
    println!(
        "\ntotal band width {:.10} + total gap width {:.10} = 2c = {:.10}",
        band.total_band_width(),
        band.total_gap_width(),
        2.0 * band.c
    );
    let _ = jn;
}

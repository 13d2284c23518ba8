//! Inverse problem round trip: extract the monic fundamental-polynomial pair
//! of an operator and reconstruct `(a, b)` from it by downward recursion.
//!
//! Run with: cargo run --example reconstruction_roundtrip

use jacobi_bands::{fundamental_monic_pair, reconstruct_from_monic_pair, PeriodicJacobi};

fn main() {
    let j = PeriodicJacobi::new(
        4,
        vec![0.9, 1.4, 0.6, 1.1],
        vec![0.4, -0.8, 1.2, -0.3],
    )
    .unwrap();

    let (monic_q, monic_q1, leading) = fundamental_monic_pair(&j);
    println!("monic phi_q coefficients (ascending):   {monic_q:.6?}");
    println!("monic phi_q+1 coefficients (ascending): {monic_q1:.6?}");
    println!("leading coefficient of phi_q+1: {leading:.12}");

    let rec = reconstruct_from_monic_pair(&monic_q1, &monic_q, leading).unwrap();
    println!("\nreconstructed a: {:?}", rec.a());
    println!("original      a: {:?}", j.a());
    println!("reconstructed b: {:?}", rec.b());
    println!("original      b: {:?}", j.b());

    let max_err = rec
        .a()
        .iter()
        .zip(j.a())
        .chain(rec.b().iter().zip(j.b()))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    println!("\nmax coefficient error: {max_err:.3e}");

    // a pair that no Jacobi matrix with positive off-diagonals realises
    let bad_q1 = [0.0, -1.0, 0.0, 1.0];
    let bad_q = [100.0, -20.0, 1.0];
    match reconstruct_from_monic_pair(&bad_q1, &bad_q, 1.0) {
        Err(e) => println!("unrealisable pair correctly rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}

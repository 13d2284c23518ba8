//! Reproduce the two Dirichlet-integral identities for the quasimomentum by
//! adaptive 2D quadrature over the half-strip:
//!
//!   (1/pi) int int |k'(z) - 1|^2 dx dy               = Q_0
//!   (1/pi) int int |d/dz[(k - z - iQ_0) cos z]|^2    = Q_0/2 + Q_2 - 2 Q_0 Q_2 - Q_1^2/2
//!
//! Run with: cargo run --release --example dirichlet_integrals

use jacobi_bands::{PeriodicJacobi, QuasimomentumModel};

fn main() {
    let j = PeriodicJacobi::new(2, vec![1.0, 1.0], vec![1.0, -1.0]).unwrap();
    let model = QuasimomentumModel::build(&j).unwrap();
    println!(
        "operator: q = 2, a = {:?}, b = {:?} (normalised c = {:.10})",
        j.a(),
        j.b(),
        model.c()
    );

    let d1 = model.dirichlet_integral_1(12.0).unwrap();
    println!("\nfirst identity:");
    println!("  quadrature  = {:.10e}", d1.integral);
    println!("  Q_0         = {:.10e}", d1.rhs);
    println!("  residual    = {:.3e} (tail above ymax bounded by {:.3e})", d1.residual, d1.tail_bound);

    let d2 = model.dirichlet_integral_2(12.0).unwrap();
    println!("\nsecond identity:");
    println!("  quadrature  = {:.10e}", d2.integral);
    println!("  Q combination = {:.10e}", d2.rhs);
    println!("  residual    = {:.3e}", d2.residual);
}

//! Verify the trace formulas: the moments `(1/pi) int_0^pi v(x) cos^n x dx`
//! of the Lyapunov exponent against binomial combinations of the asymptotic
//! coefficients `Q_j` of the quasimomentum.
//!
//! Run with: cargo run --example trace_formulas

use jacobi_bands::{harper, QuasimomentumModel};

fn main() {
    let j = harper(1, 3, 0.0).unwrap();
    let model = QuasimomentumModel::build(&j).unwrap();

    println!("Q coefficients (Q_0 .. Q_{}):", 2 * j.q() - 1);
    for (i, q) in model.q_coeffs().iter().enumerate() {
        println!("  Q_{i} = {q:+.12e}");
    }

    println!("\n{:>3} {:>22} {:>22} {:>12}", "n", "moment of v", "Q combination", "residual");
    for n in 0..=2 * j.q() - 1 {
        let chk = model.trace_moment_check(n).unwrap();
        println!("{n:>3} {:>22.15e} {:>22.15e} {:>12.3e}", chk.lhs, chk.rhs, chk.residual);
    }

    let vert = model.vertical_identity_check().unwrap();
    println!(
        "\nvertical boundary identity: int u dx = {:.12}, pi^2/2 + side terms = {:.12} (residual {:.3e})",
        vert.lhs, vert.rhs, vert.residual
    );
}

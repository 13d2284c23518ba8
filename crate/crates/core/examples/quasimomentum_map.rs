//! Evaluate the quasimomentum k(z) on the half-strip: boundary values
//! (density of states u, Lyapunov exponent v), slit heights, interior values
//! by analytic continuation, and the Herglotz-representation cross-check.
//!
//! Run with: cargo run --example quasimomentum_map

use num_complex::Complex64;

use jacobi_bands::{harper, QuasimomentumModel};

fn main() {
    let j = harper(1, 3, 0.0).unwrap();
    let model = QuasimomentumModel::build(&j).unwrap();

    println!("slit heights h_n (maxima of v per gap):");
    for (n, h) in model.slit_heights().iter().enumerate() {
        println!("  h_{} = {h:.12}", n + 1);
    }

    println!("\nboundary samples:");
    println!("{:>8} {:>12} {:>12} {:>12}", "x", "lambda", "u(x)", "v(x)");
    for i in 0..=12 {
        let x = std::f64::consts::PI * i as f64 / 12.0;
        let s = model.boundary_sample(x);
        println!("{x:>8.4} {:>12.6} {:>12.8} {:>12.8}", s.lambda, s.u, s.v);
    }

    println!("\ninterior values and Herglotz cross-check:");
    for &(x, y) in &[(0.8, 0.5), (1.6, 1.0), (2.4, 0.25)] {
        let z = Complex64::new(x, y);
        let k = model.k_complex(z).unwrap();
        let kh = model.herglotz_k(z, 4096).unwrap();
        println!(
            "  k({x:.2} + {y:.2}i) = {:.8} + {:.8}i   (herglotz diff {:.2e})",
            k.re,
            k.im,
            (k - kh).norm()
        );
    }
}

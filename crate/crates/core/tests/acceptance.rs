//! End-to-end acceptance suite. Each test exercises one observable
//! guarantee of the crate and prints a single pass line (visible with
//! `cargo test -- --nocapture`).

mod common;

use num_complex::Complex64;
use rand::Rng;

use common::{det_lambda_minus_l, rand_jacobi, rng};
use jacobi_bands::bounds::{certify, harper_bound_demo};
use jacobi_bands::discriminant::{
    discriminant_value, fundamental_monic_pair, fundamental_pair, reconstruct_from_monic_pair,
};
use jacobi_bands::io::{analyze, sample_csv, AnalysisOptions, OperatorInputDocument};
use jacobi_bands::jacobi::harper;
use jacobi_bands::quasimomentum::QuasimomentumModel;
use jacobi_bands::spectrum::{band_edges, bloch_oracle, floquet_eigenvalues};

#[test]
fn acceptance_01_harper_headline_bound() {
    for q in [3usize, 5] {
        let j = harper(1, q, 0.0).unwrap();
        let rep = certify(&j).unwrap();
        assert_eq!(rep.trace_l2, 4.0 * q as f64, "Tr L^2 must be 4q exactly");
        let demo = harper_bound_demo(1, q).unwrap();
        assert!(
            demo.lower_bound > 2.41 && demo.lower_bound < 2.42,
            "lower bound {}",
            demo.lower_bound
        );
        assert!(rep.c > demo.lower_bound, "c = {} vs {}", rep.c, demo.lower_bound);
    }
    println!("acceptance 01 harper headline bound: pass");
}

#[test]
fn acceptance_02_q2_closed_form() {
    let mut r = rng(2);
    for _ in 0..50 {
        let j = rand_jacobi(&mut r, 2);
        let (a1, a2) = (j.a()[0], j.a()[1]);
        let (b1, b2) = (j.b()[0], j.b()[1]);
        for _ in 0..20 {
            let lam: f64 = r.gen_range(-6.0..6.0);
            let closed =
                (lam * lam - (b1 + b2) * lam + b1 * b2 - a1 * a1 - a2 * a2) / (a1 * a2);
            let dv = discriminant_value(&j, lam);
            assert!(
                (dv - closed).abs() <= 1e-12 * closed.abs().max(1.0),
                "D({lam}) = {dv} vs closed form {closed}"
            );
        }
    }
    println!("acceptance 02 q=2 closed form: pass");
}

#[test]
fn acceptance_03_floquet_determinant_equivalence() {
    let mut r = rng(3);
    for _ in 0..100 {
        let q = r.gen_range(2..=8);
        let j = rand_jacobi(&mut r, q);
        let (glo, ghi) = j.gershgorin_interval();
        let lam = r.gen_range(glo - 1.0..ghi + 1.0);
        let det = det_lambda_minus_l(&j, lam);
        assert!(det.im.abs() < 1e-9 * det.norm().max(1.0), "det not real: {det}");
        let via_det = det.re * j.capacity().powi(-(q as i32));
        let dv = discriminant_value(&j, lam);
        assert!(
            (dv - via_det).abs() <= 1e-9 * via_det.abs().max(1.0),
            "q={q}, lambda={lam}: {dv} vs {via_det}"
        );
    }
    println!("acceptance 03 discriminant vs Floquet determinant: pass");
}

#[test]
fn acceptance_04_wronskian_identity() {
    let mut r = rng(4);
    for _ in 0..100 {
        let q = r.gen_range(2..=8);
        let j = rand_jacobi(&mut r, q);
        let (glo, ghi) = j.gershgorin_interval();
        let lam = r.gen_range(glo - 1.0..ghi + 1.0);
        let p = fundamental_pair(&j, lam);
        let bound = 1e-10 * (1.0 + lam.abs().powi(2 * q as i32));
        assert!(
            (p.wronskian() - 1.0).abs() < bound,
            "q={q}, lambda={lam}: wronskian residual {}",
            (p.wronskian() - 1.0).abs()
        );
    }
    println!("acceptance 04 wronskian identity: pass");
}

#[test]
fn acceptance_05_bloch_oracle_equivalence() {
    let mut r = rng(5);
    for _ in 0..50 {
        let q = r.gen_range(2..=6);
        let j = rand_jacobi(&mut r, q);
        let band = band_edges(&j).unwrap();
        let oracle = bloch_oracle(&j, 721).unwrap();
        for (m, &(ol, oh)) in oracle.iter().enumerate() {
            let (bl, bh) = band.bands[m];
            let d = (ol - bl).abs().max((oh - bh).abs());
            assert!(d < 1e-4 * band.c, "band {m}: Hausdorff {d} vs c={}", band.c);
        }
        // theta = 0 and pi solve D = +-2 exactly: each eigenvalue is an edge
        for theta in [0.0, std::f64::consts::PI] {
            for lam in floquet_eigenvalues(&j, theta).unwrap() {
                let near = band
                    .edges
                    .iter()
                    .map(|e| (lam - e).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(near < 1e-9, "theta={theta}: eigenvalue {lam} off edges by {near}");
            }
        }
    }
    println!("acceptance 05 bloch oracle equivalence: pass");
}

#[test]
fn acceptance_06_trace_formulas() {
    let mut r = rng(6);
    for _ in 0..50 {
        let q = r.gen_range(2..=5);
        let j = rand_jacobi(&mut r, q);
        let model = QuasimomentumModel::build(&j).unwrap();
        for n in 0..=4usize.min(2 * q - 1) {
            let chk = model.trace_moment_check(n).unwrap();
            assert!(
                chk.residual < 1e-8,
                "q={q}, n={n}: {} vs {}",
                chk.lhs,
                chk.rhs
            );
        }
    }
    println!("acceptance 06 trace formulas: pass");
}

#[test]
fn acceptance_07_dirichlet_integrals() {
    let mut r = rng(7);
    for i in 0..10 {
        let q = 2 + (i % 2);
        let j = rand_jacobi(&mut r, q);
        let model = QuasimomentumModel::build(&j).unwrap();
        let d1 = model.dirichlet_integral_1(12.0).unwrap();
        assert!(
            d1.residual <= 1e-2 * d1.rhs.abs().max(1e-3),
            "q={q} dir1: {} vs {}",
            d1.integral,
            d1.rhs
        );
        let d2 = model.dirichlet_integral_2(12.0).unwrap();
        assert!(
            d2.residual <= 1e-2 * d2.rhs.abs().max(1e-3),
            "q={q} dir2: {} vs {}",
            d2.integral,
            d2.rhs
        );
    }
    let constant = jacobi_bands::PeriodicJacobi::new(2, vec![1.0, 1.0], vec![0.0, 0.0]).unwrap();
    let model = QuasimomentumModel::build(&constant).unwrap();
    let d1 = model.dirichlet_integral_1(12.0).unwrap();
    let d2 = model.dirichlet_integral_2(12.0).unwrap();
    assert!(d1.integral.abs() < 1e-12 && d1.rhs.abs() < 1e-12, "constant dir1 {}", d1.integral);
    assert!(d2.integral.abs() < 1e-12 && d2.rhs.abs() < 1e-12, "constant dir2 {}", d2.integral);
    println!("acceptance 07 dirichlet integrals: pass");
}

#[test]
fn acceptance_08_vertical_identity() {
    let mut r = rng(8);
    for _ in 0..20 {
        let q = r.gen_range(2..=4);
        let j = rand_jacobi(&mut r, q);
        let model = QuasimomentumModel::build(&j).unwrap();
        let chk = model.vertical_identity_check().unwrap();
        assert!(chk.residual < 1e-6, "q={q}: residual {}", chk.residual);
    }
    println!("acceptance 08 vertical boundary identity: pass");
}

#[test]
fn acceptance_09_herglotz_cross_check() {
    let mut r = rng(9);
    for _ in 0..10 {
        let q = r.gen_range(2..=4);
        let j = rand_jacobi(&mut r, q);
        let model = QuasimomentumModel::build(&j).unwrap();
        for i in 0..20 {
            let x = std::f64::consts::PI * (0.08 + 0.84 * i as f64 / 19.0);
            let y = 0.3 + 1.7 * ((i * 7 % 20) as f64 / 19.0);
            let z = Complex64::new(x, y);
            let kh = model.herglotz_k(z, 4096).unwrap();
            let kc = model.k_complex(z).unwrap();
            assert!(
                (kh - kc).norm() < 1e-5,
                "q={q}, z={z}: herglotz {kh} vs direct {kc}"
            );
        }
    }
    println!("acceptance 09 herglotz representation: pass");
}

#[test]
fn acceptance_10_inequality_suite() {
    let mut r = rng(10);
    let mut violations = 0usize;
    for _ in 0..200 {
        let q = r.gen_range(2..=6);
        let j = rand_jacobi(&mut r, q);
        let rep = certify(&j).unwrap();
        for rec in &rep.records {
            if !rec.degenerate && !rec.satisfied {
                eprintln!("violation: q={q}, {} margin {}", rec.name, rec.margin);
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);
    println!("acceptance 10 inequality certificates (200 operators): pass");
}

#[test]
fn acceptance_11_gap_shape_properties() {
    let mut r = rng(11);
    for _ in 0..20 {
        let q = r.gen_range(2..=5);
        let j = rand_jacobi(&mut r, q);
        let model = QuasimomentumModel::build(&j).unwrap();
        let band = model.band_structure();
        let c = band.c;
        for g in 1..q {
            if band.closed_gap_flags[g - 1] {
                continue;
            }
            let rep = model.gap_shape_checks(g, 1000).unwrap();
            assert_eq!(rep.semicircle_violations, 0, "gap {g}");
            assert_eq!(rep.concavity_violations, 0, "gap {g}");
            // slit height: v at the critical point's x-position equals h_n,
            // and the sampled grid never exceeds it
            let crit = model.discriminant().critical_points[g - 1];
            let x_crit = ((-crit / c).clamp(-1.0, 1.0)).acos();
            let h = model.slit_heights()[g - 1];
            assert!(
                (model.v_of_x(x_crit) - h).abs() < 1e-8,
                "gap {g}: v(x_crit) = {} vs h = {h}",
                model.v_of_x(x_crit)
            );
            assert!(rep.sampled_max <= h + 1e-8, "gap {g}: {} > {h}", rep.sampled_max);
        }
    }
    println!("acceptance 11 gap shape (semicircle, concavity, slit heights): pass");
}

#[test]
fn acceptance_12_reconstruction_round_trip() {
    let mut r = rng(12);
    for _ in 0..50 {
        let q = r.gen_range(2..=5);
        let j = rand_jacobi(&mut r, q);
        let (monic_q, monic_q1, lead) = fundamental_monic_pair(&j);
        let rec = reconstruct_from_monic_pair(&monic_q1, &monic_q, lead).unwrap();
        for (x, y) in rec.a().iter().zip(j.a()) {
            assert!((x - y).abs() < 1e-8, "a: {x} vs {y}");
        }
        for (x, y) in rec.b().iter().zip(j.b()) {
            assert!((x - y).abs() < 1e-8, "b: {x} vs {y}");
        }
    }
    println!("acceptance 12 reconstruction round trip: pass");
}

#[test]
fn acceptance_13_deterministic_output() {
    let j = harper(1, 3, 0.0).unwrap();
    let doc = OperatorInputDocument {
        q: 3,
        a: j.a().to_vec(),
        b: j.b().to_vec(),
        label: Some("harper(1,3,0)".into()),
    };
    let opts = AnalysisOptions::default();
    let run1 = analyze(&doc, &opts).unwrap().to_json();
    let run2 = analyze(&doc, &opts).unwrap().to_json();
    assert_eq!(run1, run2, "analysis output must be byte-identical");
    let csv1 = sample_csv(&doc, 101).unwrap();
    let csv2 = sample_csv(&doc, 101).unwrap();
    assert_eq!(csv1, csv2);
    println!("acceptance 13 deterministic output: pass");
}

//! Certify the full inequality suite over a seeded random ensemble and
//! report the smallest margins seen for each record.
//!
//! Run with: cargo run --release --example certify_ensemble

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jacobi_bands::{certify, PeriodicJacobi};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let draws = 200;
    let mut worst: BTreeMap<&'static str, f64> = BTreeMap::new();
    let mut degenerate = 0usize;
    let mut violations = 0usize;

    for _ in 0..draws {
        let q = rng.gen_range(2..=6);
        let a: Vec<f64> = (0..q).map(|_| rng.gen_range(0.4..2.0)).collect();
        let b: Vec<f64> = (0..q).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let j = PeriodicJacobi::new(q, a, b).unwrap();
        let rep = certify(&j).unwrap();
        for r in &rep.records {
            if r.degenerate {
                degenerate += 1;
                continue;
            }
            if !r.satisfied {
                violations += 1;
                eprintln!("violated: {} (q = {q}, margin {:.3e})", r.name, r.margin);
            }
            let w = worst.entry(r.name).or_insert(f64::INFINITY);
            *w = w.min(r.margin);
        }
    }

    println!("{draws} operators certified; {violations} violations, {degenerate} degenerate records\n");
    println!("{:<18} {:>14}", "record", "min margin");
    for (name, margin) in &worst {
        println!("{name:<18} {margin:>14.6e}");
    }
    assert_eq!(violations, 0);
}

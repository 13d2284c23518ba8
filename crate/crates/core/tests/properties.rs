//! Property-based invariants over random operators.

mod common;

use proptest::prelude::*;

use jacobi_bands::discriminant::{discriminant_poly, discriminant_value, fundamental_pair};
use jacobi_bands::jacobi::{FloquetMatrixL, PeriodicJacobi};
use jacobi_bands::spectrum::{band_edges, normalize};

fn operator_strategy() -> impl Strategy<Value = PeriodicJacobi> {
    (2usize..=6)
        .prop_flat_map(|q| {
            (
                prop::collection::vec(0.4f64..2.0, q),
                prop::collection::vec(-1.5f64..1.5, q),
            )
        })
        .prop_map(|(a, b)| {
            let q = a.len();
            PeriodicJacobi::new(q, a, b).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wronskian_is_one(j in operator_strategy(), lam in -8.0f64..8.0) {
        let p = fundamental_pair(&j, lam);
        let bound = 1e-10 * (1.0 + lam.abs().powi(2 * j.q() as i32));
        prop_assert!((p.wronskian() - 1.0).abs() < bound);
    }

    #[test]
    fn polynomial_matches_recurrence(j in operator_strategy(), lam in -8.0f64..8.0) {
        let rep = discriminant_poly(&j).unwrap();
        let dv = discriminant_value(&j, lam);
        prop_assert!((rep.eval(lam) - dv).abs() < 1e-8 * (1.0 + dv.abs()));
    }

    #[test]
    fn bands_and_gaps_telescope(j in operator_strategy()) {
        let b = band_edges(&j).unwrap();
        let sum = b.total_band_width() + b.total_gap_width();
        prop_assert!((sum - 2.0 * b.c).abs() < 1e-9 * b.c);
        // edges strictly ordered up to closed gaps
        for w in b.edges.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn normalisation_centres_the_spectrum(j in operator_strategy()) {
        let (jn, bn) = normalize(&j).unwrap();
        prop_assert!(bn.is_normalised());
        // shifting back reproduces the input diagonal
        for (x, y) in jn.shifted(-bn.shift).b().iter().zip(j.b()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        prop_assert!(bn.c > 2.0 * jn.capacity() - 1e-9);
    }

    #[test]
    fn floquet_trace_is_hermitian_consistent(j in operator_strategy()) {
        let l = FloquetMatrixL::build(&j);
        let q = l.dim();
        for r in 0..q {
            for c in 0..q {
                let d = (l.entry(r, c) - l.entry(c, r).conj()).norm();
                prop_assert!(d < 1e-14);
            }
        }
        let traces = l.trace_powers(2).unwrap();
        let sum_b: f64 = j.b().iter().sum();
        prop_assert!((traces[0] - sum_b).abs() < 1e-11 * (1.0 + sum_b.abs()));
    }
}

//! Spectral analysis of q-periodic Jacobi operators.
//!
//! The library computes, for a periodic Jacobi operator
//! `(H psi)_n = a_{n-1} psi_{n-1} + b_n psi_n + a_n psi_{n+1}`:
//!
//! * the discriminant `D(lambda)` (three-term recurrence and explicit
//!   polynomial forms, cross-checked against the Floquet matrix `L`),
//! * band edges, gaps, and the normalising diagonal shift,
//! * the quasimomentum `k(z)`: a conformal map of the half-strip
//!   `[0, pi] x [0, inf)` onto a comb domain, whose boundary values are the
//!   integrated density of states and the Lyapunov exponent,
//! * the asymptotic coefficients `Q_j` and the trace-formula, Dirichlet
//!   integral, vertical-boundary and Herglotz verifications of the map,
//! * a certificate report evaluating both sides of a family of spectral
//!   inequalities (width of the spectrum, total gap width, slit heights),
//! * the inverse problem: reconstruction of `(a, b)` from the monic
//!   fundamental-polynomial pair.
//!
//! See the `examples/` directory for end-to-end usage; the `jacobi-bands`
//! binary exposes the same functionality on the command line.

pub mod bounds;
pub mod discriminant;
pub mod error;
pub mod io;
pub mod jacobi;
pub mod poly;
pub mod quad;
pub mod quasimomentum;
pub mod spectrum;

pub use bounds::{certify, harper_bound_demo, BoundRecord, BoundsReport, HarperBoundDemo};
pub use discriminant::{
    discriminant_poly, discriminant_value, fundamental_monic_pair, fundamental_pair,
    reconstruct_from_monic_pair, DiscriminantRep, FundamentalPair,
};
pub use error::{Error, Result};
pub use jacobi::{derived_scalars, harper, DerivedScalars, FloquetMatrixL, PeriodicJacobi};
pub use quasimomentum::{q_coefficients, QuasimomentumModel};
pub use spectrum::{band_edges, bloch_oracle, normalize, z_coordinates, BandStructure, ZGapSet};

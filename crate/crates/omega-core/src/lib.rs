//! Numerical calculus of holomorphic functions on the complement of the
//! complexified unit circle, the open set `Omega` of all pairs `(z, w)` on
//! the Riemann sphere squared with `z * w != 1`.
//!
//! The crate provides
//!
//! - extended complex arithmetic and Möbius transformations ([`riemann`]),
//! - the three equivalent models of `Omega` and the exact transport maps
//!   between them ([`models`]),
//! - spectrally accurate differentiation by Cauchy-integral quadrature, the
//!   invariant Laplacian `4 (1 - zw)^2 d^2/dz dw`, the Schwarzian
//!   derivative, and the holomorphic metric pullback ([`calculus`]),
//! - the basis `f_{p,q} = z^p w^q / (1 - zw)^{max(p,q)}`, series evaluation,
//!   past/future projections and coefficient extraction by double contour
//!   integrals ([`schauder`]),
//! - the Möbius subgroup of automorphisms of `Omega` and residual checkers
//!   that decide numerically whether a map leaves the Laplacian invariant
//!   ([`invariance`]).
//!
//! Inner loops over sample grids run on rayon when the default `parallel`
//! feature is enabled and fall back to sequential iteration otherwise;
//! results are identical in both modes.

pub mod calculus;
pub mod error;
pub mod exec;
pub mod invariance;
pub mod models;
pub mod riemann;
pub mod sample;
pub mod schauder;

pub use error::{Error, Result};
pub use riemann::{ExtComplex, MobiusMap, OmegaPoint};

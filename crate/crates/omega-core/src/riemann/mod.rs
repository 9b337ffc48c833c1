//! Extended complex arithmetic on the Riemann sphere, Möbius
//! transformations, and membership tests for the domain
//! `Omega = {(z, w) : z * w != 1}` and its subdomains.

mod ext;
mod mobius;

pub use ext::{
    chordal_distance, ext_mul, in_omega, in_omega_minus, in_omega_plus, in_omega_with_tol,
    ExtComplex, OmegaPoint, DEFAULT_TOL,
};
pub use mobius::{MobiusMap, DET_FLOOR};

//! The Riemann sphere as `ExtComplex` and the membership tests for the
//! domain `Omega = {(z, w) : z * w != 1}`.
//!
//! Products involving the point at infinity follow the conventions
//! `z * inf = inf * z = inf` for `z != 0` and `0 * inf = inf * 0 = 1`.
//! The second rule exists purely so that the single inequality `z * w != 1`
//! carves out the intended domain; it is confined to [`ext_mul`] and is not
//! part of any general arithmetic on `ExtComplex`. Sums involving infinity
//! are deliberately not defined anywhere in this crate.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for comparisons between finite values.
/// Infinity comparisons are always exact tag comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A point of the Riemann sphere: a finite complex number or infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub const INFINITY: ExtComplex = ExtComplex::Infinity;

    /// Builds a finite value, rejecting NaN components.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::finite(Complex64::new(re, im))
    }

    /// Wraps a finite complex number, rejecting NaN components.
    pub fn finite(value: Complex64) -> Result<Self> {
        if value.re.is_nan() || value.im.is_nan() {
            return Err(Error::NotANumber);
        }
        Ok(ExtComplex::Finite(value))
    }

    pub fn zero() -> Self {
        ExtComplex::Finite(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        ExtComplex::Finite(Complex64::new(1.0, 0.0))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn is_finite(self) -> bool {
        !self.is_infinite()
    }

    pub fn as_finite(self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(v) => Some(v),
            ExtComplex::Infinity => None,
        }
    }

    /// Exact test against zero; the infinity conventions branch on it.
    pub fn is_zero(self) -> bool {
        matches!(self, ExtComplex::Finite(v) if v.re == 0.0 && v.im == 0.0)
    }

    /// Reciprocal on the sphere: `1/0 = inf` and `1/inf = 0`.
    pub fn recip(self) -> Self {
        match self {
            ExtComplex::Infinity => ExtComplex::zero(),
            ExtComplex::Finite(v) if v.re == 0.0 && v.im == 0.0 => ExtComplex::Infinity,
            ExtComplex::Finite(v) => ExtComplex::Finite(v.inv()),
        }
    }

    /// Tolerance comparison: exact on the infinity tag, absolute on finite values.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        match (self, other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => true,
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }
}

impl From<f64> for ExtComplex {
    /// Convenience for literals in tests and builders; NaN panics.
    fn from(re: f64) -> Self {
        ExtComplex::new(re, 0.0).expect("NaN literal")
    }
}

impl TryFrom<Complex64> for ExtComplex {
    type Error = Error;

    fn try_from(value: Complex64) -> Result<Self> {
        ExtComplex::finite(value)
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Infinity => write!(f, "inf"),
            ExtComplex::Finite(v) => write!(f, "{}", v),
        }
    }
}

// JSON encoding: {"re": x, "im": y} for finite values, the string "inf"
// for the point at infinity.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtComplexRepr {
    Infinity(String),
    Finite { re: f64, im: f64 },
}

impl Serialize for ExtComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtComplex::Infinity => serializer.serialize_str("inf"),
            ExtComplex::Finite(v) => ExtComplexRepr::Finite { re: v.re, im: v.im }.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for ExtComplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match ExtComplexRepr::deserialize(deserializer)? {
            ExtComplexRepr::Infinity(s) if s == "inf" => Ok(ExtComplex::Infinity),
            ExtComplexRepr::Infinity(s) => Err(D::Error::custom(format!(
                "expected \"inf\" or an object with re/im, got \"{s}\""
            ))),
            ExtComplexRepr::Finite { re, im } => {
                ExtComplex::new(re, im).map_err(|e| D::Error::custom(e.to_string()))
            }
        }
    }
}

/// Product on the sphere with the membership conventions:
/// `0 * inf = inf * 0 = 1`, `z * inf = inf` otherwise. Total on all pairs.
/// Used only to decide membership in `Omega`.
pub fn ext_mul(z: ExtComplex, w: ExtComplex) -> ExtComplex {
    match (z, w) {
        (ExtComplex::Finite(a), ExtComplex::Finite(b)) => ExtComplex::Finite(a * b),
        (ExtComplex::Infinity, ExtComplex::Infinity) => ExtComplex::Infinity,
        (ExtComplex::Infinity, other) | (other, ExtComplex::Infinity) => {
            if other.is_zero() {
                ExtComplex::one()
            } else {
                ExtComplex::Infinity
            }
        }
    }
}

/// Membership in `Omega`: `ext_mul(z, w) != 1` within `tol`.
pub fn in_omega_with_tol(z: ExtComplex, w: ExtComplex, tol: f64) -> bool {
    match ext_mul(z, w) {
        ExtComplex::Infinity => true,
        ExtComplex::Finite(v) => (v - Complex64::new(1.0, 0.0)).norm() > tol,
    }
}

pub fn in_omega(z: ExtComplex, w: ExtComplex) -> bool {
    in_omega_with_tol(z, w, DEFAULT_TOL)
}

/// Membership in `Omega_+`, the domain with the horizontal line at infinity
/// removed: in `Omega` and `w != inf`.
pub fn in_omega_plus(z: ExtComplex, w: ExtComplex) -> bool {
    in_omega(z, w) && w.is_finite()
}

/// Membership in `Omega_-`: in `Omega` and `z != inf`.
pub fn in_omega_minus(z: ExtComplex, w: ExtComplex) -> bool {
    in_omega(z, w) && z.is_finite()
}

/// Chordal distance on the Riemann sphere, range `[0, 2]`.
pub fn chordal_distance(a: ExtComplex, b: ExtComplex) -> f64 {
    match (a, b) {
        (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
        (ExtComplex::Finite(v), ExtComplex::Infinity) | (ExtComplex::Infinity, ExtComplex::Finite(v)) => {
            2.0 / (1.0 + v.norm_sqr()).sqrt()
        }
        (ExtComplex::Finite(u), ExtComplex::Finite(v)) => {
            2.0 * (u - v).norm() / ((1.0 + u.norm_sqr()) * (1.0 + v.norm_sqr())).sqrt()
        }
    }
}

/// A point of `Omega`, validated on construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaPoint {
    z: ExtComplex,
    w: ExtComplex,
}

impl OmegaPoint {
    pub fn new(z: ExtComplex, w: ExtComplex) -> Result<Self> {
        if !in_omega(z, w) {
            return Err(Error::outside(z, w, "Omega"));
        }
        Ok(OmegaPoint { z, w })
    }

    /// Finite coordinates, checked against both NaN and the boundary.
    pub fn from_complex(z: Complex64, w: Complex64) -> Result<Self> {
        Self::new(ExtComplex::finite(z)?, ExtComplex::finite(w)?)
    }

    // Membership is preserved by group actions on Omega; used where that
    // invariant holds by construction.
    pub(crate) fn new_unchecked(z: ExtComplex, w: ExtComplex) -> Self {
        OmegaPoint { z, w }
    }

    pub fn z(&self) -> ExtComplex {
        self.z
    }

    pub fn w(&self) -> ExtComplex {
        self.w
    }

    pub fn coords(&self) -> (ExtComplex, ExtComplex) {
        (self.z, self.w)
    }

    pub fn in_plus(&self) -> bool {
        self.w.is_finite()
    }

    pub fn in_minus(&self) -> bool {
        self.z.is_finite()
    }
}

impl fmt::Display for OmegaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.z, self.w)
    }
}

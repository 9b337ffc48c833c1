//! Möbius transformations of the Riemann sphere, stored as un-normalized
//! 2x2 coefficient matrices. All exposed semantics are projective, so no
//! normalization is ever required; a determinant-one helper exists for
//! callers that want a canonical representative.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::riemann::ext::ExtComplex;

/// Default magnitude floor for the determinant on construction.
pub const DET_FLOOR: f64 = 1e-12;

/// The map `z -> (a z + b) / (c z + d)` with `a d - b c != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    a: Coeff,
    b: Coeff,
    c: Coeff,
    d: Coeff,
}

// Matrix entries are finite complex numbers; the wrapper pins the JSON
// encoding to {"re": .., "im": ..}, the finite ExtComplex form.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Coeff(Complex64);

impl Serialize for Coeff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            re: f64,
            im: f64,
        }
        Repr { re: self.0.re, im: self.0.im }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            re: f64,
            im: f64,
        }
        let r = Repr::deserialize(d)?;
        Ok(Coeff(Complex64::new(r.re, r.im)))
    }
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        Self::with_det_floor(a, b, c, d, DET_FLOOR)
    }

    /// Construction with a caller-chosen determinant floor.
    pub fn with_det_floor(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        floor: f64,
    ) -> Result<Self> {
        for v in [a, b, c, d] {
            if v.re.is_nan() || v.im.is_nan() || v.re.is_infinite() || v.im.is_infinite() {
                return Err(Error::NotANumber);
            }
        }
        let det = a * d - b * c;
        if det.norm() < floor {
            return Err(Error::DegenerateMobius { det: det.norm(), floor });
        }
        Ok(MobiusMap {
            a: Coeff(a),
            b: Coeff(b),
            c: Coeff(c),
            d: Coeff(d),
        })
    }

    pub fn identity() -> Self {
        Self::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
        .expect("identity is never degenerate")
    }

    /// The involution `z -> 1/z`.
    pub fn inversion() -> Self {
        Self::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
        .expect("inversion is never degenerate")
    }

    pub fn entries(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        (self.a.0, self.b.0, self.c.0, self.d.0)
    }

    pub fn det(&self) -> Complex64 {
        self.a.0 * self.d.0 - self.b.0 * self.c.0
    }

    /// Scales the matrix so that the determinant is 1.
    pub fn normalized(&self) -> Self {
        let k = self.det().sqrt().inv();
        MobiusMap {
            a: Coeff(self.a.0 * k),
            b: Coeff(self.b.0 * k),
            c: Coeff(self.c.0 * k),
            d: Coeff(self.d.0 * k),
        }
    }

    /// Evaluation on the sphere, total: `inf -> a/c` (or `inf` when `c = 0`)
    /// and poles of the denominator go to `inf`.
    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        let (a, b, c, d) = self.entries();
        match z {
            ExtComplex::Infinity => {
                if c.norm() == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(a / c)
                }
            }
            ExtComplex::Finite(v) => {
                let den = c * v + d;
                if den.norm() == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite((a * v + b) / den)
                }
            }
        }
    }

    /// Matrix product; `apply(compose(f, g), z) = apply(f, apply(g, z))`.
    pub fn compose(&self, other: &MobiusMap) -> Result<Self> {
        let (a1, b1, c1, d1) = self.entries();
        let (a2, b2, c2, d2) = other.entries();
        Self::new(
            a1 * a2 + b1 * c2,
            a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2,
            c1 * b2 + d1 * d2,
        )
    }

    /// Adjugate matrix; acts as the inverse map.
    pub fn inverse(&self) -> Self {
        let (a, b, c, d) = self.entries();
        MobiusMap {
            a: Coeff(d),
            b: Coeff(-b),
            c: Coeff(-c),
            d: Coeff(a),
        }
    }

    /// The companion map `w -> 1 / psi(1/w)`; entries `(d, c; b, a)`.
    /// Together with `psi` it forms the automorphism
    /// `(z, w) -> (psi(z), tilde(psi)(w))` of `Omega`.
    pub fn tilde(&self) -> Self {
        let (a, b, c, d) = self.entries();
        MobiusMap {
            a: Coeff(d),
            b: Coeff(c),
            c: Coeff(b),
            d: Coeff(a),
        }
    }

    /// Derivative at a finite point away from the pole.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let (_, _, c, d) = self.entries();
        let den = c * z + d;
        self.det() / (den * den)
    }

    /// Pole of the map (`-d/c`), if any.
    pub fn pole(&self) -> Option<Complex64> {
        let (_, _, c, d) = self.entries();
        if c.norm() == 0.0 {
            None
        } else {
            Some(-d / c)
        }
    }

    /// The unique Möbius map sending `source_i -> target_i` for three
    /// pairwise distinct sources and three pairwise distinct targets,
    /// built from the two cross-ratio maps onto `(0, 1, inf)`.
    pub fn fit_three_points(pairs: &[(ExtComplex, ExtComplex); 3]) -> Result<Self> {
        let sources = [pairs[0].0, pairs[1].0, pairs[2].0];
        let targets = [pairs[0].1, pairs[1].1, pairs[2].1];
        check_distinct(&sources, "source")?;
        check_distinct(&targets, "target")?;
        let to_std_src = map_to_zero_one_inf(&sources)?;
        let to_std_tgt = map_to_zero_one_inf(&targets)?;
        to_std_tgt.inverse().compose(&to_std_src)
    }
}

fn check_distinct(points: &[ExtComplex; 3], which: &'static str) -> Result<()> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            if points[i].approx_eq(points[j], 1e-14) {
                return Err(Error::CoincidentPoints { which });
            }
        }
    }
    Ok(())
}

/// Map sending `(z1, z2, z3) -> (0, 1, inf)`, with the usual limits when one
/// of the three points is infinity.
fn map_to_zero_one_inf(p: &[ExtComplex; 3]) -> Result<MobiusMap> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match (p[0], p[1], p[2]) {
        (ExtComplex::Infinity, ExtComplex::Finite(z2), ExtComplex::Finite(z3)) => {
            // (z2 - z3) / (z - z3)
            MobiusMap::new(zero, z2 - z3, one, -z3)
        }
        (ExtComplex::Finite(z1), ExtComplex::Infinity, ExtComplex::Finite(z3)) => {
            // (z - z1) / (z - z3)
            MobiusMap::new(one, -z1, one, -z3)
        }
        (ExtComplex::Finite(z1), ExtComplex::Finite(z2), ExtComplex::Infinity) => {
            // (z - z1) / (z2 - z1)
            MobiusMap::new(one, -z1, zero, z2 - z1)
        }
        (ExtComplex::Finite(z1), ExtComplex::Finite(z2), ExtComplex::Finite(z3)) => {
            MobiusMap::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))
        }
        _ => Err(Error::CoincidentPoints { which: "source" }),
    }
}

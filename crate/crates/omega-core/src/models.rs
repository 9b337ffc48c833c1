//! The three equivalent models of `Omega` and the exact transport maps
//! between them: the elementary biholomorphisms `Psi+-` onto `C^2`, the
//! flip `(z, w) -> (z, 1/w)` onto the configuration space `G = {z != w}`,
//! and the complex stereographic pair `(S, pi)` onto the quadric
//! `z1^2 + z2^2 + z3^2 = 1`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariance::OmegaAutomorphism;
use crate::riemann::{ExtComplex, OmegaPoint};

/// Relative scale below which `1 + uv` is treated as an exact zero, sending
/// the inverse chart maps to the point at infinity. Large enough to absorb
/// round-off of exact round trips, far below anything a quadrature grid
/// produces.
const INFINITY_SNAP: f64 = 1e-12;

/// Threshold for rerouting near-singular inputs of the stereographic pair
/// to the stable branch.
const BRANCH_EPS: f64 = 1e-13;

const QUADRIC_TOL: f64 = 1e-10;
const ORTHOGONALITY_TOL: f64 = 1e-8;
const FIT_TOL: f64 = 1e-8;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `Psi+ : Omega+ -> C^2`, `(z, w) -> (z / (1 - zw), w)`; at `z = inf` the
/// first coordinate is the limit `-1/w`.
pub fn psi_plus(p: &OmegaPoint) -> Result<(Complex64, Complex64)> {
    if !p.in_plus() {
        return Err(Error::outside(p.z(), p.w(), "Omega+"));
    }
    let w = p.w().as_finite().expect("in_plus guarantees finite w");
    match p.z() {
        ExtComplex::Infinity => Ok((-w.inv(), w)),
        ExtComplex::Finite(z) => Ok((z / (one() - z * w), w)),
    }
}

/// Inverse of [`psi_plus`]: `(u, v) -> (u / (1 + uv), v)`, with
/// `1 + uv = 0` mapping to `(inf, v)`.
pub fn psi_plus_inv(u: Complex64, v: Complex64) -> Result<OmegaPoint> {
    let den = one() + u * v;
    if den.norm() <= INFINITY_SNAP * (u * v).norm().max(1.0) {
        OmegaPoint::new(ExtComplex::Infinity, ExtComplex::finite(v)?)
    } else {
        OmegaPoint::from_complex(u / den, v)
    }
}

/// `Psi- : Omega- -> C^2`, `(z, w) -> (z, w / (1 - zw))`; at `w = inf` the
/// second coordinate is the limit `-1/z`.
pub fn psi_minus(p: &OmegaPoint) -> Result<(Complex64, Complex64)> {
    if !p.in_minus() {
        return Err(Error::outside(p.z(), p.w(), "Omega-"));
    }
    let z = p.z().as_finite().expect("in_minus guarantees finite z");
    match p.w() {
        ExtComplex::Infinity => Ok((z, -z.inv())),
        ExtComplex::Finite(w) => Ok((z, w / (one() - z * w))),
    }
}

/// Inverse of [`psi_minus`]: `(u, v) -> (u, v / (1 + uv))`.
pub fn psi_minus_inv(u: Complex64, v: Complex64) -> Result<OmegaPoint> {
    let den = one() + u * v;
    if den.norm() <= INFINITY_SNAP * (u * v).norm().max(1.0) {
        OmegaPoint::new(ExtComplex::finite(u)?, ExtComplex::Infinity)
    } else {
        OmegaPoint::from_complex(u, v / den)
    }
}

/// The flip `(z, w) -> (z, 1/w)` from `Omega` onto the configuration space
/// `G = {z != w}`.
pub fn to_config(p: &OmegaPoint) -> (ExtComplex, ExtComplex) {
    (p.z(), p.w().recip())
}

/// Inverse of [`to_config`]; rejects points off `G`.
pub fn from_config(z: ExtComplex, w: ExtComplex) -> Result<OmegaPoint> {
    let distinct = match (z, w) {
        (ExtComplex::Infinity, ExtComplex::Infinity) => false,
        (ExtComplex::Finite(a), ExtComplex::Finite(b)) => (a - b).norm() > crate::riemann::DEFAULT_TOL,
        _ => true,
    };
    if !distinct {
        return Err(Error::outside(z, w, "G"));
    }
    OmegaPoint::new(z, w.recip())
}

/// A point of the complex two-sphere `z1^2 + z2^2 + z3^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    z1: SphereCoord,
    z2: SphereCoord,
    z3: SphereCoord,
}

// Finite complex coordinates with the {"re","im"} JSON encoding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
struct SphereCoord {
    re: f64,
    im: f64,
}

impl From<Complex64> for SphereCoord {
    fn from(v: Complex64) -> Self {
        SphereCoord { re: v.re, im: v.im }
    }
}

impl From<SphereCoord> for Complex64 {
    fn from(v: SphereCoord) -> Self {
        Complex64::new(v.re, v.im)
    }
}

impl SpherePoint {
    pub fn new(z1: Complex64, z2: Complex64, z3: Complex64) -> Result<Self> {
        for v in [z1, z2, z3] {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NotANumber);
            }
        }
        let residual = (z1 * z1 + z2 * z2 + z3 * z3 - one()).norm();
        if residual >= QUADRIC_TOL {
            return Err(Error::OffQuadric { residual });
        }
        Ok(SpherePoint {
            z1: z1.into(),
            z2: z2.into(),
            z3: z3.into(),
        })
    }

    // The stereographic image satisfies the quadric identically, so internal
    // construction skips the tolerance check.
    fn from_image(z1: Complex64, z2: Complex64, z3: Complex64) -> Self {
        SpherePoint {
            z1: z1.into(),
            z2: z2.into(),
            z3: z3.into(),
        }
    }

    pub fn coords(&self) -> (Complex64, Complex64, Complex64) {
        (self.z1.into(), self.z2.into(), self.z3.into())
    }

    pub fn quadric_residual(&self) -> f64 {
        let (z1, z2, z3) = self.coords();
        (z1 * z1 + z2 * z2 + z3 * z3 - one()).norm()
    }

    pub fn to_vector(&self) -> Vector3<Complex64> {
        let (z1, z2, z3) = self.coords();
        Vector3::new(z1, z2, z3)
    }
}

/// The stereographic biholomorphism `S : Omega -> S^2_C`:
///
/// - finite `(z, w)`: `((z - w)/(1 - zw), -i (z + w)/(1 - zw), -(1 + zw)/(1 - zw))`
/// - `w = inf`: `(1/z, i/z, 1)`
/// - `z = inf`: `(-1/w, i/w, 1)`
pub fn stereographic_s(p: &OmegaPoint) -> SpherePoint {
    let i = Complex64::new(0.0, 1.0);
    match (p.z(), p.w()) {
        (z, ExtComplex::Infinity) => {
            // includes (inf, inf) -> (0, 0, 1) via 1/inf = 0
            let zi = z.recip().as_finite().unwrap_or_default();
            SpherePoint::from_image(zi, i * zi, one())
        }
        (ExtComplex::Infinity, w) => {
            let wi = w.recip().as_finite().unwrap_or_default();
            SpherePoint::from_image(-wi, i * wi, one())
        }
        (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
            let den = one() - z * w;
            SpherePoint::from_image((z - w) / den, -i * (z + w) / den, -(one() + z * w) / den)
        }
    }
}

/// The complex stereographic projection `pi : S^2_C -> Omega`, inverse of
/// [`stereographic_s`]:
///
/// - `z3 != 1`: `((z1 + i z2)/(1 - z3), -(z1 - i z2)/(1 - z3))`
/// - `z3 = 1, z2 = i z1`: `(1/z1, inf)`
/// - `z3 = 1, z2 = -i z1`: `(inf, -1/z1)`
///
/// Inputs with `|1 - z3|` below the branch threshold are rerouted to the
/// appropriate pole branch, selected by which of the two quadric-forced
/// relations `z2 = +- i z1` holds.
pub fn stereographic_pi(s: &SpherePoint) -> Result<OmegaPoint> {
    let i = Complex64::new(0.0, 1.0);
    let (z1, z2, z3) = s.coords();
    if (one() - z3).norm() < BRANCH_EPS {
        // On z3 = 1 the quadric forces z2 = +- i z1.
        if (z2 - i * z1).norm() <= (z2 + i * z1).norm() {
            OmegaPoint::new(ExtComplex::finite(z1)?.recip(), ExtComplex::Infinity)
        } else {
            let neg = ExtComplex::finite(-z1)?;
            OmegaPoint::new(ExtComplex::Infinity, neg.recip())
        }
    } else {
        let den = one() - z3;
        OmegaPoint::from_complex((z1 + i * z2) / den, -(z1 - i * z2) / den)
    }
}

/// An element of the complex special orthogonal group `SO(3, C)`:
/// `R^T R = I` (plain transpose) and `det R = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexRotation {
    matrix: Matrix3<Complex64>,
}

impl ComplexRotation {
    pub fn new(matrix: Matrix3<Complex64>) -> Result<Self> {
        let defect = orthogonality_defect(&matrix);
        if defect >= ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { defect });
        }
        let det = matrix.determinant();
        if (det - one()).norm() >= ORTHOGONALITY_TOL {
            return Err(Error::ImproperRotation { det });
        }
        Ok(ComplexRotation { matrix })
    }

    pub fn identity() -> Self {
        ComplexRotation { matrix: Matrix3::identity() }
    }

    pub fn matrix(&self) -> &Matrix3<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector3<Complex64>) -> Vector3<Complex64> {
        self.matrix * v
    }

    pub fn compose(&self, other: &ComplexRotation) -> Result<Self> {
        ComplexRotation::new(self.matrix * other.matrix)
    }

    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.matrix)
    }
}

fn orthogonality_defect(m: &Matrix3<Complex64>) -> f64 {
    let gram = m.transpose() * m;
    let mut defect: f64 = 0.0;
    for r in 0..3 {
        for c in 0..3 {
            let expected = if r == c { one() } else { Complex64::default() };
            defect = defect.max((gram[(r, c)] - expected).norm());
        }
    }
    defect
}

// Fixed generic sample points for the linear fit and its held-out
// verification; chosen away from symmetry axes and the boundary.
const FIT_POINTS: [(f64, f64, f64, f64); 6] = [
    (0.31, 0.12, 0.05, -0.22),
    (-0.24, 0.31, 0.33, 0.08),
    (0.11, -0.41, -0.27, 0.19),
    (0.44, 0.05, 0.13, 0.31),
    (-0.37, -0.15, -0.08, -0.29),
    (0.07, 0.26, 0.41, -0.11),
];

const CHECK_POINTS: [(f64, f64, f64, f64); 6] = [
    (0.18, -0.09, 0.22, 0.14),
    (-0.12, 0.23, -0.31, -0.05),
    (0.35, 0.28, -0.14, 0.07),
    (-0.29, -0.33, 0.19, 0.24),
    (0.02, 0.17, 0.36, 0.21),
    (0.26, -0.21, -0.02, -0.35),
];

fn sample_point(spec: (f64, f64, f64, f64)) -> OmegaPoint {
    OmegaPoint::from_complex(Complex64::new(spec.0, spec.1), Complex64::new(spec.2, spec.3))
        .expect("fixed sample points lie in Omega")
}

/// Recovers the `SO(3, C)` matrix that realizes an automorphism on the
/// quadric model: solves `R S(p) = S(T p)` in least squares over six fixed
/// generic points, then verifies the fit on six held-out points and the
/// group invariants. Swap-type automorphisms act with determinant -1 on the
/// quadric and are rejected by the determinant check.
pub fn fit_so3(t: &OmegaAutomorphism) -> Result<ComplexRotation> {
    let mut lhs = Matrix3::<Complex64>::zeros();
    let mut rhs = Matrix3::<Complex64>::zeros();
    for spec in FIT_POINTS {
        let p = sample_point(spec);
        let x = stereographic_s(&p).to_vector();
        let y = stereographic_s(&t.apply(&p)).to_vector();
        lhs += x * x.adjoint();
        rhs += y * x.adjoint();
    }
    let inv = lhs.try_inverse().ok_or(Error::RotationFit {
        residual: f64::INFINITY,
        tolerance: FIT_TOL,
    })?;
    let matrix = rhs * inv;

    let mut residual: f64 = 0.0;
    for spec in CHECK_POINTS {
        let p = sample_point(spec);
        let x = stereographic_s(&p).to_vector();
        let y = stereographic_s(&t.apply(&p)).to_vector();
        let diff = matrix * x - y;
        let scale = y.norm().max(1.0);
        residual = residual.max(diff.norm() / scale);
    }
    if residual >= FIT_TOL {
        return Err(Error::RotationFit { residual, tolerance: FIT_TOL });
    }
    ComplexRotation::new(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::MobiusMap;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fc(re: f64, im: f64) -> ExtComplex {
        ExtComplex::new(re, im).unwrap()
    }

    const INF: ExtComplex = ExtComplex::Infinity;

    fn pt(z: ExtComplex, w: ExtComplex) -> OmegaPoint {
        OmegaPoint::new(z, w).unwrap()
    }

    #[test]
    fn psi_plus_examples() {
        let origin = pt(fc(0.0, 0.0), fc(0.0, 0.0));
        assert_eq!(psi_plus(&origin).unwrap(), (c(0.0, 0.0), c(0.0, 0.0)));

        let p = pt(fc(0.5, 0.0), fc(0.5, 0.0));
        let (u, v) = psi_plus(&p).unwrap();
        assert!((u - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((v - c(0.5, 0.0)).norm() < 1e-15);

        let back = psi_plus_inv(c(2.0 / 3.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!(back.z().approx_eq(fc(0.5, 0.0), 1e-15));
    }

    #[test]
    fn psi_minus_mirrors_psi_plus() {
        let p = pt(fc(0.5, 0.0), fc(0.5, 0.0));
        let (u, v) = psi_minus(&p).unwrap();
        assert!((u - c(0.5, 0.0)).norm() < 1e-15);
        assert!((v - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn psi_charts_reject_their_removed_lines() {
        let horizontal = pt(fc(0.3, 0.0), INF);
        assert!(psi_plus(&horizontal).is_err());
        let vertical = pt(INF, fc(0.3, 0.0));
        assert!(psi_minus(&vertical).is_err());
    }

    #[test]
    fn psi_round_trips_including_infinity() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let p = sample::random_bidisk_point(&mut rng, 0.9);
            let (u, v) = psi_plus(&p).unwrap();
            let back = psi_plus_inv(u, v).unwrap();
            assert!(back.z().approx_eq(p.z(), 1e-12));
            assert!(back.w().approx_eq(p.w(), 1e-12));
            let (u, v) = psi_minus(&p).unwrap();
            let back = psi_minus_inv(u, v).unwrap();
            assert!(back.z().approx_eq(p.z(), 1e-12));
            assert!(back.w().approx_eq(p.w(), 1e-12));
        }
        // vertical line at infinity belongs to Omega+
        let p = pt(INF, fc(0.4, -0.3));
        let (u, v) = psi_plus(&p).unwrap();
        let back = psi_plus_inv(u, v).unwrap();
        assert_eq!(back.z(), INF);
        assert!(back.w().approx_eq(p.w(), 1e-12));
        // horizontal line at infinity belongs to Omega-
        let p = pt(fc(-1.7, 0.2), INF);
        let (u, v) = psi_minus(&p).unwrap();
        let back = psi_minus_inv(u, v).unwrap();
        assert!(back.z().approx_eq(p.z(), 1e-12));
        assert_eq!(back.w(), INF);
    }

    #[test]
    fn config_flip_examples() {
        let p = pt(fc(0.0, 0.0), fc(0.0, 0.0));
        assert_eq!(to_config(&p), (fc(0.0, 0.0), INF));
        let p = pt(INF, INF);
        assert_eq!(to_config(&p), (INF, fc(0.0, 0.0)));
        // diagonal is not in G
        assert!(from_config(fc(0.5, 0.0), fc(0.5, 0.0)).is_err());
        assert!(from_config(INF, INF).is_err());
    }

    #[test]
    fn config_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let p = sample::random_omega_point(&mut rng, true);
            let (gz, gw) = to_config(&p);
            let back = from_config(gz, gw).unwrap();
            assert!(back.z().approx_eq(p.z(), 1e-12), "{p} vs {back}");
            assert!(back.w().approx_eq(p.w(), 1e-12), "{p} vs {back}");
        }
    }

    #[test]
    fn stereographic_examples() {
        let (z1, z2, z3) = stereographic_s(&pt(fc(0.0, 0.0), fc(0.0, 0.0))).coords();
        assert!((z1.norm(), z2.norm(), (z3 + c(1.0, 0.0)).norm()) < (1e-15, 1e-15, 1e-15));

        let (z1, z2, z3) = stereographic_s(&pt(INF, INF)).coords();
        assert!(z1.norm() < 1e-15 && z2.norm() < 1e-15 && (z3 - c(1.0, 0.0)).norm() < 1e-15);

        let (z1, z2, z3) = stereographic_s(&pt(fc(1.0, 0.0), INF)).coords();
        assert!((z1 - c(1.0, 0.0)).norm() < 1e-15);
        assert!((z2 - c(0.0, 1.0)).norm() < 1e-15);
        assert!((z3 - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn stereographic_pi_examples() {
        let p = stereographic_pi(&SpherePoint::new(c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)).unwrap()).unwrap();
        assert!(p.z().approx_eq(fc(0.0, 0.0), 1e-15));
        assert!(p.w().approx_eq(fc(0.0, 0.0), 1e-15));

        let p = stereographic_pi(&SpherePoint::new(c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)).unwrap()).unwrap();
        assert!(p.z().approx_eq(fc(1.0, 0.0), 1e-15));
        assert_eq!(p.w(), INF);

        // real sphere point lands on the rotated diagonal (z, -conj(z))
        let p = stereographic_pi(&SpherePoint::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap()).unwrap();
        assert!(p.z().approx_eq(fc(1.0, 0.0), 1e-15));
        assert!(p.w().approx_eq(fc(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn stereographic_round_trip_with_infinity_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..200 {
            let p = sample::random_omega_point(&mut rng, true);
            let s = stereographic_s(&p);
            assert!(s.quadric_residual() < 1e-10, "quadric residual {}", s.quadric_residual());
            let back = stereographic_pi(&s).unwrap();
            assert!(back.z().approx_eq(p.z(), 1e-12), "{p} vs {back}");
            assert!(back.w().approx_eq(p.w(), 1e-12), "{p} vs {back}");
        }
    }

    #[test]
    fn sphere_point_validates_quadric() {
        assert!(SpherePoint::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(SpherePoint::new(c(0.0, 0.0), c(0.6, 0.0), c(0.8, 0.0)).is_ok());
    }

    #[test]
    fn hyperboloid_restriction() {
        // For real z in (0,1), S(z, z) = (i x1, i x2, x3) with x real on the
        // lower sheet of the hyperbola -x1^2 - x2^2 + x3^2 = 1, x3 <= -1.
        for k in 1..=20 {
            let z = 0.045 * k as f64;
            let p = pt(fc(z, 0.0), fc(z, 0.0));
            let (s1, s2, s3) = stereographic_s(&p).coords();
            let x1 = s1 / c(0.0, 1.0);
            let x2 = s2 / c(0.0, 1.0);
            let x3 = s3;
            assert!(x1.im.abs() < 1e-13 && x2.im.abs() < 1e-13 && x3.im.abs() < 1e-13);
            let q = -x1.re * x1.re - x2.re * x2.re + x3.re * x3.re;
            assert!((q - 1.0).abs() < 1e-10, "hyperboloid residual {q}");
            assert!(x3.re <= -1.0);
        }
    }

    #[test]
    fn fit_so3_identity() {
        let r = fit_so3(&OmegaAutomorphism::identity()).unwrap();
        assert!(orthogonality_defect(r.matrix()) < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { one() } else { Complex64::default() };
                assert!((r.matrix()[(i, j)] - expected).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn fit_so3_rotation_about_axis() {
        let alpha = 0.9f64;
        let psi = MobiusMap::new(Complex64::from_polar(1.0, alpha), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let t = OmegaAutomorphism::new(psi, false).unwrap();
        let r = fit_so3(&t).unwrap();
        let m = r.matrix();
        let (ca, sa) = (alpha.cos(), alpha.sin());
        let expected = [
            [c(ca, 0.0), c(-sa, 0.0), c(0.0, 0.0)],
            [c(sa, 0.0), c(ca, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[(i, j)] - expected[i][j]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn fit_so3_random_elements_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..20 {
            let t = sample::random_automorphism(&mut rng, 0.4, false);
            let r = fit_so3(&t).unwrap();
            assert!(r.orthogonality_defect() < 1e-8);
        }
    }

    #[test]
    fn fit_so3_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..10 {
            let t1 = sample::random_automorphism(&mut rng, 0.3, false);
            let t2 = sample::random_automorphism(&mut rng, 0.3, false);
            let r12 = fit_so3(&t1.compose(&t2).unwrap()).unwrap();
            let product = fit_so3(&t1).unwrap().matrix() * fit_so3(&t2).unwrap().matrix();
            let diff = (r12.matrix() - product).norm();
            assert!(diff < 1e-7, "homomorphism defect {diff}");
        }
    }

    #[test]
    fn fit_so3_rejects_swap_as_improper() {
        // The plain coordinate swap acts as diag(-1, 1, 1) on the quadric,
        // an orthogonal matrix of determinant -1.
        let t = OmegaAutomorphism::new(MobiusMap::identity(), true).unwrap();
        assert!(matches!(fit_so3(&t), Err(Error::ImproperRotation { .. })));
    }

    #[test]
    fn rejects_non_linear_maps() {
        // A shear transported from G is an automorphism of Omega but not in
        // the Möbius subgroup; its action on the quadric is not linear.
        let shear = crate::invariance::shear_transport_omega(
            crate::calculus::UnivariateFunction::new("id", |z| z),
        );
        let mut lhs = Matrix3::<Complex64>::zeros();
        let mut rhs = Matrix3::<Complex64>::zeros();
        for spec in FIT_POINTS {
            let p = sample_point(spec);
            let x = stereographic_s(&p).to_vector();
            let (tz, tw) = shear.apply(p.z(), p.w());
            let q = OmegaPoint::new(tz, tw).unwrap();
            let y = stereographic_s(&q).to_vector();
            lhs += x * x.adjoint();
            rhs += y * x.adjoint();
        }
        let matrix = rhs * lhs.try_inverse().unwrap();
        let mut residual: f64 = 0.0;
        for spec in CHECK_POINTS {
            let p = sample_point(spec);
            let x = stereographic_s(&p).to_vector();
            let (tz, tw) = shear.apply(p.z(), p.w());
            let q = OmegaPoint::new(tz, tw).unwrap();
            let y = stereographic_s(&q).to_vector();
            residual = residual.max((matrix * x - y).norm());
        }
        assert!(residual > 1e-3, "shear looked linear: residual {residual}");
    }
}

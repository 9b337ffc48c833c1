//! Deterministic sample grids, probe sets, and seeded random generators
//! shared by the checkers, the test suites, and the benches. Grids are
//! golden-angle spirals: generic (no symmetry accidents), reproducible, and
//! cheap to extend.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use crate::calculus::{Domain, HoloMap2};
use crate::invariance::OmegaAutomorphism;
use crate::riemann::{in_omega, ExtComplex, MobiusMap, OmegaPoint};
use crate::schauder::{BasisTag, CoeffArray};

const GOLDEN_ANGLE: f64 = 2.399963229728653;

/// Center of the default checker patch in the `z` coordinate.
pub const OMEGA_PATCH_Z: Complex64 = Complex64::new(0.1, 0.0);
/// Center of the default checker patch in the `w` coordinate.
pub const OMEGA_PATCH_W: Complex64 = Complex64::new(0.2, 0.0);
/// Radius of the default checker patch (grids stay inside 0.35 so that
/// contours up to the default quadrature radius remain in the patch).
pub const OMEGA_PATCH_RADIUS: f64 = 0.5;

const OMEGA_GRID_RADIUS: f64 = 0.35;

/// Centers of the default configuration-space patch.
pub const CONFIG_PATCH_Z: Complex64 = Complex64::new(1.5, 0.0);
pub const CONFIG_PATCH_W: Complex64 = Complex64::new(-0.5, 0.0);
const CONFIG_GRID_RADIUS: f64 = 0.3;

/// `count` points spiralling out to `radius` around `center`.
pub fn spiral_disk(center: Complex64, radius: f64, count: usize, phase: f64) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let r = radius * (((k + 1) as f64) / count as f64).sqrt();
            center + Complex64::from_polar(r, GOLDEN_ANGLE * k as f64 + phase)
        })
        .collect()
}

fn paired_grid(
    cz: Complex64,
    cw: Complex64,
    radius: f64,
    count: usize,
) -> Vec<(Complex64, Complex64)> {
    let zs = spiral_disk(cz, radius, count, 0.0);
    let ws = spiral_disk(cw, radius, count, 1.0);
    (0..count).map(|k| (zs[k], ws[(7 * k + 3) % count])).collect()
}

/// Fixed generic grid in the default `Omega` patch, the bidisk of radius
/// 0.5 centered at `(0.1, 0.2)`.
pub fn omega_patch_grid(count: usize) -> Vec<(Complex64, Complex64)> {
    paired_grid(OMEGA_PATCH_Z, OMEGA_PATCH_W, OMEGA_GRID_RADIUS, count)
}

/// Fixed generic grid in the default `G` patch, a bidisk around
/// `(1.5, -0.5)` that stays away from the diagonal `z = w`.
pub fn config_patch_grid(count: usize) -> Vec<(Complex64, Complex64)> {
    paired_grid(CONFIG_PATCH_Z, CONFIG_PATCH_W, CONFIG_GRID_RADIUS, count)
}

/// Twenty fixed probe points of `Omega` including the lines at infinity;
/// used to validate group elements and to compare actions pointwise.
pub fn aut_probe_points() -> Vec<OmegaPoint> {
    let mut out: Vec<OmegaPoint> = paired_grid(Complex64::default(), Complex64::default(), 0.8, 16)
        .into_iter()
        .filter_map(|(z, w)| OmegaPoint::from_complex(z, w).ok())
        .collect();
    let inf = ExtComplex::Infinity;
    let f = |re: f64, im: f64| ExtComplex::new(re, im).unwrap();
    out.push(OmegaPoint::new(inf, f(0.4, 0.3)).unwrap());
    out.push(OmegaPoint::new(f(-0.6, 0.2), inf).unwrap());
    out.push(OmegaPoint::new(inf, inf).unwrap());
    out.push(OmegaPoint::new(f(0.0, 0.0), f(0.7, -0.1)).unwrap());
    out.truncate(20);
    out
}

/// Fixed finite probes for the Möbius detector: the first three fit the
/// candidate coefficient matrix, the remaining twenty verify its action.
pub fn detector_probes() -> Vec<OmegaPoint> {
    paired_grid(OMEGA_PATCH_Z, OMEGA_PATCH_W, 0.4, 23)
        .into_iter()
        .map(|(z, w)| OmegaPoint::from_complex(z, w).expect("detector probes lie in Omega"))
        .collect()
}

fn random_unit_disk(rng: &mut impl Rng) -> Complex64 {
    loop {
        let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

/// A random Möbius map within `spread` of the identity (entrywise).
pub fn random_mobius_near_identity(rng: &mut impl Rng, spread: f64) -> MobiusMap {
    loop {
        let one = Complex64::new(1.0, 0.0);
        let a = one + spread * random_unit_disk(rng);
        let b = spread * random_unit_disk(rng);
        let c = spread * random_unit_disk(rng);
        let d = one + spread * random_unit_disk(rng);
        if let Ok(m) = MobiusMap::new(a, b, c, d) {
            if m.det().norm() > 0.25 {
                return m;
            }
        }
    }
}

/// A random subgroup element near the identity; `allow_swap` mixes in the
/// coordinate-exchanging component with probability one half.
pub fn random_automorphism(rng: &mut impl Rng, spread: f64, allow_swap: bool) -> OmegaAutomorphism {
    loop {
        let psi = random_mobius_near_identity(rng, spread);
        let swap = allow_swap && rng.gen_bool(0.5);
        if let Ok(t) = OmegaAutomorphism::new(psi, swap) {
            return t;
        }
    }
}

// Safety margin checks for residual sweeps on the default Omega patch: the
// image of patch and contour ring must keep a workable distance from the
// boundary zw = 1 and from the lines at infinity, otherwise the quadrature
// accuracy cannot support the accept threshold.
fn patch_safe(t: &OmegaAutomorphism) -> bool {
    for m in [t.psi(), &t.tilde()] {
        if let Some(pole) = m.pole() {
            if pole.norm() < 1.5 {
                return false;
            }
        }
    }
    let mut points = omega_patch_grid(25);
    for j in 0..16 {
        let theta = std::f64::consts::TAU * j as f64 / 16.0;
        points.push((
            OMEGA_PATCH_Z + Complex64::from_polar(0.45, theta),
            OMEGA_PATCH_W + Complex64::from_polar(0.45, theta + 1.3),
        ));
    }
    for (z, w) in points {
        let (tz, tw) = t.apply_raw(ExtComplex::Finite(z), ExtComplex::Finite(w));
        let (Some(tz), Some(tw)) = (tz.as_finite(), tw.as_finite()) else {
            return false;
        };
        if tz.norm() > 2.5 || tw.norm() > 2.5 {
            return false;
        }
        let proxy = Domain::Omega.singular_proxy(tz, tw).unwrap();
        if proxy < 0.08 {
            return false;
        }
    }
    true
}

/// A random subgroup element whose action keeps the default checker patch
/// (and its contour ring) comfortably inside the finite part of `Omega`.
/// Rejection-sampled, deterministic for a fixed seed.
pub fn random_automorphism_patch_safe(rng: &mut impl Rng, allow_swap: bool) -> OmegaAutomorphism {
    loop {
        let t = random_automorphism(rng, 0.3, allow_swap);
        if patch_safe(&t) {
            return t;
        }
    }
}

/// A random Möbius map tame on the default `G` patch: small spread keeps
/// the pole an order of magnitude away from the patch disks.
pub fn random_mobius_config_safe(rng: &mut impl Rng) -> MobiusMap {
    loop {
        let m = random_mobius_near_identity(rng, 0.08);
        let pole_ok = m.pole().is_none_or(|p| p.norm() > 5.0);
        let tilde_pole_ok = m.tilde().pole().is_none_or(|p| p.norm() > 5.0);
        if pole_ok && tilde_pole_ok {
            return m;
        }
    }
}

/// The diagonal pair `(z, w) -> (psi(z), psi(w))` on `G`, or the swapped
/// variant `(psi(w), psi(z))`.
pub fn mobius_pair_map(psi: &MobiusMap, swap: bool) -> HoloMap2 {
    let m = *psi;
    let m2 = *psi;
    HoloMap2::new(
        format!("pair(swap={swap})"),
        Domain::ConfigG,
        move |z, w| m.apply(if swap { w } else { z }),
        move |z, w| m2.apply(if swap { z } else { w }),
    )
}

/// Uniform point of the bidisk of the given radius (always in `Omega`).
pub fn random_bidisk_point(rng: &mut impl Rng, radius: f64) -> OmegaPoint {
    loop {
        let z = radius * random_unit_disk(rng);
        let w = radius * random_unit_disk(rng);
        if let Ok(p) = OmegaPoint::from_complex(z, w) {
            return p;
        }
    }
}

/// Random point of `Omega`, optionally mixing in the infinity branches
/// (the removed lines `z = inf`, `w = inf` and the corner `(inf, inf)`).
pub fn random_omega_point(rng: &mut impl Rng, include_infinity: bool) -> OmegaPoint {
    let branch = if include_infinity { rng.gen_range(0..10) } else { 0 };
    match branch {
        8 => {
            let w = Complex64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
            OmegaPoint::new(ExtComplex::Infinity, ExtComplex::finite(w).unwrap()).unwrap()
        }
        9 => {
            if rng.gen_bool(0.2) {
                OmegaPoint::new(ExtComplex::Infinity, ExtComplex::Infinity).unwrap()
            } else {
                let z = Complex64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
                OmegaPoint::new(ExtComplex::finite(z).unwrap(), ExtComplex::Infinity).unwrap()
            }
        }
        _ => loop {
            let z = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let w = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            if !in_omega(ExtComplex::Finite(z), ExtComplex::Finite(w)) {
                continue;
            }
            // keep a workable distance from the boundary
            if (Complex64::new(1.0, 0.0) - z * w).norm() < 0.05 {
                continue;
            }
            return OmegaPoint::from_complex(z, w).unwrap();
        },
    }
}

/// Random point of the default `G` patch.
pub fn random_config_point(rng: &mut impl Rng) -> (Complex64, Complex64) {
    let z = CONFIG_PATCH_Z + CONFIG_GRID_RADIUS * random_unit_disk(rng);
    let w = CONFIG_PATCH_W + CONFIG_GRID_RADIUS * random_unit_disk(rng);
    (z, w)
}

/// Seeded random grid in the default `Omega` patch; used by command-line
/// checkers so that runs are reproducible given the seed.
pub fn seeded_omega_grid(seed: u64, count: usize) -> Vec<(Complex64, Complex64)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let z = OMEGA_PATCH_Z + OMEGA_GRID_RADIUS * random_unit_disk(&mut rng);
            let w = OMEGA_PATCH_W + OMEGA_GRID_RADIUS * random_unit_disk(&mut rng);
            (z, w)
        })
        .collect()
}

/// Seeded random grid in the default `G` patch.
pub fn seeded_config_grid(seed: u64, count: usize) -> Vec<(Complex64, Complex64)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_config_point(&mut rng)).collect()
}

/// Random coefficient table with entries uniform in the unit disk.
pub fn random_coeff_array(rng: &mut impl Rng, order: usize, basis: BasisTag) -> CoeffArray {
    let mut a = CoeffArray::zeros(order, basis);
    for p in 0..=order {
        for q in 0..=order {
            a.set(p, q, random_unit_disk(rng));
        }
    }
    a
}

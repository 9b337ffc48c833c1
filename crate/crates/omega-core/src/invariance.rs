//! The Möbius subgroup of automorphisms of `Omega`, counterexample
//! automorphisms from the configuration-space shear family, and numerical
//! residual checkers for the invariance dichotomy: a holomorphic map leaves
//! the Laplacian invariant exactly when it belongs to the Möbius subgroup.
//!
//! A reject verdict of a checker is a certificate (a concrete violated
//! instance); an accept verdict is sampled evidence on a finite grid, not a
//! proof.

use num_complex::Complex64;

use crate::calculus::{
    cauchy_partial, cauchy_partial_guarded, laplacian_omega, laplacian_omega_guarded,
    BivariateFunction, Domain, HoloMap2, QuadratureConfig, UnivariateFunction,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::riemann::{chordal_distance, in_omega, ExtComplex, MobiusMap, OmegaPoint};
use crate::schauder::{basis_eval, basis_function};

/// Acceptance threshold of [`detect_mobius`]'s verification stage.
const DETECT_TOL: f64 = 1e-8;

/// An element of the Möbius subgroup: the automorphism
/// `(z, w) -> (psi(z), tilde(psi)(w))`, or with `swap` set
/// `(z, w) -> (psi(w), tilde(psi)(z))`, where `tilde(psi)(w) = 1/psi(1/w)`.
#[derive(Clone, Copy, Debug)]
pub struct OmegaAutomorphism {
    psi: MobiusMap,
    swap: bool,
}

impl OmegaAutomorphism {
    /// Validates that the action keeps a fixed set of probe points inside
    /// `Omega` (always true mathematically; this guards against degenerate
    /// coefficient data).
    pub fn new(psi: MobiusMap, swap: bool) -> Result<Self> {
        let t = OmegaAutomorphism { psi, swap };
        for p in crate::sample::aut_probe_points() {
            let (z, w) = t.apply_raw(p.z(), p.w());
            if !in_omega(z, w) {
                return Err(Error::NotAnAutomorphism {
                    z: p.z().to_string(),
                    w: p.w().to_string(),
                });
            }
        }
        Ok(t)
    }

    pub fn identity() -> Self {
        OmegaAutomorphism {
            psi: MobiusMap::identity(),
            swap: false,
        }
    }

    pub fn psi(&self) -> &MobiusMap {
        &self.psi
    }

    pub fn swap(&self) -> bool {
        self.swap
    }

    /// The companion map acting on the second coordinate.
    pub fn tilde(&self) -> MobiusMap {
        self.psi.tilde()
    }

    pub fn apply_raw(&self, z: ExtComplex, w: ExtComplex) -> (ExtComplex, ExtComplex) {
        let tilde = self.psi.tilde();
        if self.swap {
            (self.psi.apply(w), tilde.apply(z))
        } else {
            (self.psi.apply(z), tilde.apply(w))
        }
    }

    pub fn apply(&self, p: &OmegaPoint) -> OmegaPoint {
        let (z, w) = self.apply_raw(p.z(), p.w());
        // membership is preserved by every group element
        OmegaPoint::new_unchecked(z, w)
    }

    /// Group law: `(self . other)(p) = self(other(p))`.
    pub fn compose(&self, other: &OmegaAutomorphism) -> Result<Self> {
        let psi = if self.swap {
            self.psi.compose(&other.psi.tilde())?
        } else {
            self.psi.compose(&other.psi)?
        };
        Ok(OmegaAutomorphism {
            psi,
            swap: self.swap ^ other.swap,
        })
    }

    pub fn inverse(&self) -> Self {
        if self.swap {
            OmegaAutomorphism {
                psi: self.psi.inverse().tilde(),
                swap: true,
            }
        } else {
            OmegaAutomorphism {
                psi: self.psi.inverse(),
                swap: false,
            }
        }
    }

    /// The automorphism as an evaluable map on `Omega`.
    pub fn to_map(&self) -> HoloMap2 {
        let t = *self;
        HoloMap2::new(
            format!("mobius(swap={})", t.swap),
            Domain::Omega,
            move |z, w| t.apply_raw(z, w).0,
            move |z, w| t.apply_raw(z, w).1,
        )
    }
}

/// A set of globally holomorphic test functions used by the residual
/// checkers.
#[derive(Clone, Debug)]
pub struct TestBattery {
    functions: Vec<BivariateFunction>,
}

impl TestBattery {
    pub fn new(functions: Vec<BivariateFunction>) -> Self {
        TestBattery { functions }
    }

    /// Basis elements `f_{p,q}` with `p, q <= max_index`.
    pub fn omega_with_max_index(max_index: usize) -> Self {
        let mut functions = Vec::new();
        for p in 0..=max_index {
            for q in 0..=max_index {
                functions.push(basis_function(p, q));
            }
        }
        TestBattery { functions }
    }

    /// Default battery on `Omega`: `f_{p,q}` for `p, q <= 4`.
    pub fn omega_default() -> Self {
        Self::omega_with_max_index(4)
    }

    /// Default battery on `G`: `1/(z-w)`, `1/(z-w)^2`, `z/(z-w)^2`,
    /// `z^2/(z-w)^2`. The first two force the separated-difference
    /// structure of an invariant map, the last two force separation of
    /// variables, so together they discriminate the Möbius pairs.
    pub fn config_default() -> Self {
        let inv_diff = BivariateFunction::from_finite_fn("1/(z-w)", Domain::ConfigG, |z, w| {
            (z - w).inv()
        });
        let inv_diff2 = BivariateFunction::from_finite_fn("1/(z-w)^2", Domain::ConfigG, |z, w| {
            ((z - w) * (z - w)).inv()
        });
        let z_diff2 = BivariateFunction::from_finite_fn("z/(z-w)^2", Domain::ConfigG, |z, w| {
            z / ((z - w) * (z - w))
        });
        let z2_diff2 = BivariateFunction::from_finite_fn("z^2/(z-w)^2", Domain::ConfigG, |z, w| {
            z * z / ((z - w) * (z - w))
        });
        TestBattery {
            functions: vec![inv_diff, inv_diff2, z_diff2, z2_diff2],
        }
    }

    pub fn functions(&self) -> &[BivariateFunction] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

/// Worst residual of one battery function over the grid.
#[derive(Clone, Debug)]
pub struct FunctionResidual {
    pub label: String,
    pub max_residual: f64,
    pub worst_point: (Complex64, Complex64),
}

/// Result of a residual sweep over battery times grid.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub per_function: Vec<FunctionResidual>,
}

impl ResidualReport {
    fn from_parts(per_function: Vec<FunctionResidual>) -> Self {
        let max_residual = per_function.iter().map(|f| f.max_residual).fold(0.0, f64::max);
        ResidualReport {
            max_residual,
            per_function,
        }
    }
}

fn finite_image(
    t: &HoloMap2,
    z0: Complex64,
    w0: Complex64,
) -> Result<(Complex64, Complex64)> {
    let (tz, tw) = t.apply_finite(z0, w0);
    match (tz, tw) {
        (ExtComplex::Finite(a), ExtComplex::Finite(b)) if a.is_finite() && b.is_finite() => {
            Ok((a, b))
        }
        _ => Err(Error::NonFiniteSample { z: z0, w: w0 }),
    }
}

fn sweep_battery(
    parallel: bool,
    battery: &TestBattery,
    grid: &[(Complex64, Complex64)],
    eval: impl Fn(&BivariateFunction, Complex64, Complex64) -> Result<f64> + Sync,
) -> Result<ResidualReport> {
    let results = exec::map_indexed_with(parallel, battery.len(), |i| {
        let f = &battery.functions()[i];
        let mut worst = FunctionResidual {
            label: f.label().to_string(),
            max_residual: 0.0,
            worst_point: (Complex64::default(), Complex64::default()),
        };
        for &(z0, w0) in grid {
            let r = eval(f, z0, w0)?;
            if r > worst.max_residual {
                worst.max_residual = r;
                worst.worst_point = (z0, w0);
            }
        }
        Ok(worst)
    });
    let per_function = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::from_parts(per_function))
}

fn laplace_invariance_impl(
    t: &HoloMap2,
    battery: &TestBattery,
    grid: &[(Complex64, Complex64)],
    cfg: &QuadratureConfig,
    parallel: bool,
) -> Result<ResidualReport> {
    sweep_battery(parallel, battery, grid, |f, z0, w0| {
        let (tz, tw) = finite_image(t, z0, w0)?;
        let image_proxy = Domain::Omega
            .singular_proxy(tz, tw)
            .expect("Omega has a singular proxy");
        let composed = f.compose_with(t);
        let lhs = laplacian_omega_guarded(&composed, z0, w0, cfg, &[image_proxy])?;
        let rhs = laplacian_omega(f, tz, tw, cfg)?;
        Ok((lhs - rhs).norm())
    })
}

/// Max over battery and grid of
/// `|Lap(F . T)(p) - (Lap F)(T p)|` for the invariant Laplacian on `Omega`.
/// Small for Möbius-subgroup elements, order-one for everything else.
pub fn laplace_invariance_residual(
    t: &HoloMap2,
    battery: &TestBattery,
    grid: &[(Complex64, Complex64)],
    cfg: &QuadratureConfig,
) -> Result<ResidualReport> {
    laplace_invariance_impl(t, battery, grid, cfg, true)
}

/// Sequential reference path of [`laplace_invariance_residual`].
pub fn laplace_invariance_residual_seq(
    t: &HoloMap2,
    battery: &TestBattery,
    grid: &[(Complex64, Complex64)],
    cfg: &QuadratureConfig,
) -> Result<ResidualReport> {
    laplace_invariance_impl(t, battery, grid, cfg, false)
}

fn config_invariance_impl(
    t: &HoloMap2,
    battery: &TestBattery,
    grid: &[(Complex64, Complex64)],
    cfg: &QuadratureConfig,
    parallel: bool,
) -> Result<ResidualReport> {
    sweep_battery(parallel, battery, grid, |f, z0, w0| {
        let (t1, t2) = finite_image(t, z0, w0)?;
        let image_proxy = Domain::ConfigG
            .singular_proxy(t1, t2)
            .expect("G has a singular proxy");
        let composed = f.compose_with(t);
        let mixed_lhs = cauchy_partial_guarded(&composed, z0, w0, 1, 1, cfg, &[image_proxy])?;
        let lhs = (z0 - w0) * (z0 - w0) * mixed_lhs;
        let mixed_rhs = cauchy_partial(f, t1, t2, 1, 1, cfg)?;
        let rhs = (t1 - t2) * (t1 - t2) * mixed_rhs;
        Ok((lhs - rhs).norm())
    })
}

/// Max over battery and grid of the two sides of the transported invariance
/// identity on `G`:
/// `(z-w)^2 d2(F . T) - (T1 - T2)^2 (d2 F)(T)` with `d2` the mixed partial.
pub fn config_invariance_residual(
    t: &HoloMap2,
    battery: &TestBattery,
    grid: &[(Complex64, Complex64)],
    cfg: &QuadratureConfig,
) -> Result<ResidualReport> {
    config_invariance_impl(t, battery, grid, cfg, true)
}

/// Sequential reference path of [`config_invariance_residual`].
pub fn config_invariance_residual_seq(
    t: &HoloMap2,
    battery: &TestBattery,
    grid: &[(Complex64, Complex64)],
    cfg: &QuadratureConfig,
) -> Result<ResidualReport> {
    config_invariance_impl(t, battery, grid, cfg, false)
}

/// The shear self-map of `G` induced by an entire function `g`:
/// `(z, w) -> (z + g(1/(z-w)), w + g(1/(z-w)))`. Preserves the difference
/// `z - w`, hence maps `G` into `G`; not Möbius unless `g` is constant.
pub fn shear_automorphism_g(g: UnivariateFunction) -> HoloMap2 {
    let g1 = g.clone();
    let label = format!("shear:g={}", g.label());
    let shear_arg = |z: ExtComplex, w: ExtComplex| -> Option<Complex64> {
        match (z, w) {
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => Some((a - b).inv()),
            (ExtComplex::Infinity, ExtComplex::Finite(_))
            | (ExtComplex::Finite(_), ExtComplex::Infinity) => Some(Complex64::default()),
            (ExtComplex::Infinity, ExtComplex::Infinity) => None,
        }
    };
    HoloMap2::new(
        label,
        Domain::ConfigG,
        move |z, w| match (shear_arg(z, w), z) {
            (Some(arg), ExtComplex::Finite(a)) => ExtComplex::Finite(a + g.eval(arg)),
            _ => ExtComplex::Infinity,
        },
        move |z, w| match (shear_arg(z, w), w) {
            (Some(arg), ExtComplex::Finite(b)) => ExtComplex::Finite(b + g1.eval(arg)),
            _ => ExtComplex::Infinity,
        },
    )
}

/// The shear transported to `Omega` through the flip `(z, w) -> (z, 1/w)`:
/// the standard example of an automorphism of `Omega` outside the Möbius
/// subgroup. In the finite chart,
/// `(z, w) -> (z + s, w / (1 + s w))` with `s = g(w / (zw - 1))`.
pub fn shear_transport_omega(g: UnivariateFunction) -> HoloMap2 {
    let g1 = g.clone();
    let label = format!("shear-omega:g={}", g.label());
    let one = Complex64::new(1.0, 0.0);
    let first = move |z: ExtComplex, w: ExtComplex| -> ExtComplex {
        match (z, w) {
            (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
                let s = g.eval(w / (z * w - one));
                ExtComplex::Finite(z + s)
            }
            (ExtComplex::Finite(z), ExtComplex::Infinity) => {
                // on Omega, w = inf forces z != 0
                ExtComplex::Finite(z + g.eval(z.inv()))
            }
            (ExtComplex::Infinity, _) => ExtComplex::Infinity,
        }
    };
    let second = move |z: ExtComplex, w: ExtComplex| -> ExtComplex {
        let recip_or_inf = |s: Complex64| {
            if s.norm() == 0.0 {
                ExtComplex::Infinity
            } else {
                ExtComplex::Finite(s.inv())
            }
        };
        match (z, w) {
            (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
                let s = g1.eval(w / (z * w - one));
                let den = one + s * w;
                if den.norm() == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(w / den)
                }
            }
            (ExtComplex::Infinity, ExtComplex::Finite(w)) => {
                let s = g1.eval(Complex64::default());
                let den = one + s * w;
                if den.norm() == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(w / den)
                }
            }
            (ExtComplex::Finite(z), ExtComplex::Infinity) => recip_or_inf(g1.eval(z.inv())),
            (ExtComplex::Infinity, ExtComplex::Infinity) => recip_or_inf(g1.eval(Complex64::default())),
        }
    };
    HoloMap2::new(label, Domain::Omega, first, second)
}

/// Tries to realize a map on `Omega` as a Möbius-subgroup element: fits the
/// Möbius coefficient from three probe actions under each swap hypothesis
/// and accepts a candidate only if its action matches `t` on 20 held-out
/// probes in the chordal metric. Returns `None` when no candidate survives;
/// for maps outside the subgroup that is the expected answer.
pub fn detect_mobius(t: &HoloMap2) -> Option<OmegaAutomorphism> {
    let probes = crate::sample::detector_probes();
    let (fit, verify) = probes.split_at(3);
    for swap in [false, true] {
        let mut pairs = Vec::with_capacity(3);
        for p in fit {
            let (y1, _) = t.apply(p.z(), p.w());
            let source = if swap { p.w() } else { p.z() };
            pairs.push((source, y1));
        }
        let pairs: [(ExtComplex, ExtComplex); 3] = [pairs[0], pairs[1], pairs[2]];
        let Ok(psi) = MobiusMap::fit_three_points(&pairs) else {
            continue;
        };
        let Ok(candidate) = OmegaAutomorphism::new(psi, swap) else {
            continue;
        };
        let mut ok = true;
        for p in verify {
            let (y1, y2) = t.apply(p.z(), p.w());
            let (c1, c2) = candidate.apply_raw(p.z(), p.w());
            if chordal_distance(y1, c1) >= DETECT_TOL || chordal_distance(y2, c2) >= DETECT_TOL {
                ok = false;
                break;
            }
        }
        if ok {
            return Some(candidate);
        }
    }
    None
}

/// One sample of a blow-up trace: the parameter `t` and `|f_{p,q}(t, t)|`.
#[derive(Clone, Copy, Debug)]
pub struct BlowupSample {
    pub k: u32,
    pub t: f64,
    pub magnitude: f64,
}

/// Growth table of a nonconstant basis function along the diagonal path
/// `(t, t)`, `t = 1 - 2^{-k}`, approaching the boundary `zw = 1`.
#[derive(Clone, Debug)]
pub struct BlowupReport {
    pub samples: Vec<BlowupSample>,
    /// Strictly increasing magnitudes for every step with `k >= 5`.
    pub strictly_growing_tail: bool,
    /// Final magnitude over the first one.
    pub growth_ratio: f64,
}

/// Evaluates `|f_{p,q}|` along `(t, t)` for `t = 1 - 2^{-k}`, `k = 1..=12`.
/// Nonconstant basis functions are unbounded near every boundary point, so
/// the trace must grow; the constant `f_{0,0}` is rejected.
pub fn blowup_probe(p: usize, q: usize) -> Result<BlowupReport> {
    if p == 0 && q == 0 {
        return Err(Error::InvalidArgument {
            reason: "the constant basis element f[0,0] cannot blow up".into(),
        });
    }
    let mut samples = Vec::with_capacity(12);
    for k in 1..=12u32 {
        let t = 1.0 - 2f64.powi(-(k as i32));
        let zt = ExtComplex::new(t, 0.0)?;
        let magnitude = basis_eval(p, q, zt, zt)?.norm();
        samples.push(BlowupSample { k, t, magnitude });
    }
    let strictly_growing_tail = samples
        .windows(2)
        .filter(|w| w[1].k >= 5)
        .all(|w| w[1].magnitude > w[0].magnitude);
    let growth_ratio = samples.last().unwrap().magnitude / samples[0].magnitude;
    Ok(BlowupReport {
        samples,
        strictly_growing_tail,
        growth_ratio,
    })
}

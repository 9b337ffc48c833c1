//! Spectrally accurate differentiation by Cauchy-integral quadrature, the
//! invariant Laplacian on `Omega` and its transport to the configuration
//! space `G = {z != w}`, the Schwarzian derivative, and the pullback of the
//! holomorphic metric `g = dz dw / (1 - zw)^2`.
//!
//! Derivatives are computed from function samples on circles: the trapezoid
//! rule on a circle integrates holomorphic integrands with spectral
//! accuracy, so there is no step-size tuning. Contour radii are capped at
//! `singular_margin` times a conservative proxy for the distance to the
//! singular set of the tagged domain (`zw = 1` for the `Omega` charts,
//! `z = w` for `G`), which keeps every contour inside the domain.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::riemann::{in_omega_with_tol, ExtComplex, DEFAULT_TOL};

/// Smallest contour radius considered numerically meaningful.
const MIN_CONTOUR_RADIUS: f64 = 1e-9;

/// Domain tag of an evaluable function or map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Omega,
    OmegaPlus,
    OmegaMinus,
    ConfigG,
    C2,
}

impl Domain {
    /// Conservative lower bound for the distance from a finite point to the
    /// singular set of the domain, or `None` when there is none.
    ///
    /// For the `Omega` charts the set is `zw = 1`: on a polydisc of radius
    /// `r <= 1` around `(z0, w0)` the product moves by at most
    /// `r (|z0| + |w0| + 1)`, so `|1 - z0 w0| / (|z0| + |w0| + 1)` is safe.
    /// For `G` the set is `z = w` and the difference moves by at most `2r`.
    pub fn singular_proxy(self, z0: Complex64, w0: Complex64) -> Option<f64> {
        match self {
            Domain::Omega | Domain::OmegaPlus | Domain::OmegaMinus => {
                Some((Complex64::new(1.0, 0.0) - z0 * w0).norm() / (z0.norm() + w0.norm() + 1.0))
            }
            Domain::ConfigG => Some((z0 - w0).norm() / 2.0),
            Domain::C2 => None,
        }
    }

    pub fn contains_finite(self, z0: Complex64, w0: Complex64) -> bool {
        match self {
            Domain::Omega | Domain::OmegaPlus | Domain::OmegaMinus => {
                (Complex64::new(1.0, 0.0) - z0 * w0).norm() > DEFAULT_TOL
            }
            Domain::ConfigG => (z0 - w0).norm() > DEFAULT_TOL,
            Domain::C2 => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Domain::Omega => "Omega",
            Domain::OmegaPlus => "Omega+",
            Domain::OmegaMinus => "Omega-",
            Domain::ConfigG => "G",
            Domain::C2 => "C^2",
        }
    }
}

/// Contour parameters for derivative circles.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureConfig {
    /// Requested contour radius; capped per point by the singular proxy.
    pub radius: f64,
    /// Samples per circle. 32 supports derivative orders up to 8 comfortably.
    pub samples: usize,
    /// Cap factor: the effective radius never exceeds
    /// `singular_margin * distance proxy`.
    pub singular_margin: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            radius: 0.25,
            samples: 32,
            singular_margin: 0.5,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 8 {
            return Err(Error::BadQuadratureConfig {
                reason: format!("samples = {} but at least 8 are required", self.samples),
            });
        }
        if !self.radius.is_finite() || self.radius <= 0.0 {
            return Err(Error::BadQuadratureConfig {
                reason: format!("radius = {} must be positive and finite", self.radius),
            });
        }
        if !(self.singular_margin > 0.0 && self.singular_margin < 1.0) {
            return Err(Error::BadQuadratureConfig {
                reason: format!("singular margin = {} must lie in (0, 1)", self.singular_margin),
            });
        }
        Ok(())
    }

    /// Effective radius at a point: the configured radius capped by the
    /// domain proxy and any extra distance bounds supplied by the caller
    /// (used when differentiating compositions, where the singular set is
    /// pulled back through the inner map).
    fn resolved_radius(
        &self,
        domain: Domain,
        z0: Complex64,
        w0: Complex64,
        extra: &[f64],
    ) -> Result<f64> {
        let mut r = self.radius;
        if let Some(proxy) = domain.singular_proxy(z0, w0) {
            r = r.min(1.0).min(self.singular_margin * proxy);
        }
        for &e in extra {
            r = r.min(self.singular_margin * e);
        }
        if r < MIN_CONTOUR_RADIUS {
            return Err(Error::ContourUnsafe { z: z0, w: w0, radius: r });
        }
        Ok(r)
    }
}

type BivariateEval = Arc<dyn Fn(ExtComplex, ExtComplex) -> Complex64 + Send + Sync>;
type ComponentEval = Arc<dyn Fn(ExtComplex, ExtComplex) -> ExtComplex + Send + Sync>;

/// An evaluable holomorphic function of two variables with a domain tag.
#[derive(Clone)]
pub struct BivariateFunction {
    label: String,
    domain: Domain,
    eval: BivariateEval,
}

impl BivariateFunction {
    pub fn new(
        label: impl Into<String>,
        domain: Domain,
        eval: impl Fn(ExtComplex, ExtComplex) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        BivariateFunction {
            label: label.into(),
            domain,
            eval: Arc::new(eval),
        }
    }

    /// Wraps a function of finite coordinates; at infinite arguments it
    /// evaluates to NaN, which the quadrature engine reports as an error.
    pub fn from_finite_fn(
        label: impl Into<String>,
        domain: Domain,
        eval: impl Fn(Complex64, Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        BivariateFunction::new(label, domain, move |z, w| match (z, w) {
            (ExtComplex::Finite(z), ExtComplex::Finite(w)) => eval(z, w),
            _ => Complex64::new(f64::NAN, f64::NAN),
        })
    }

    pub fn constant(value: Complex64, domain: Domain) -> Self {
        BivariateFunction::new(format!("const {value}"), domain, move |_, _| value)
    }

    pub fn eval(&self, z: ExtComplex, w: ExtComplex) -> Complex64 {
        (self.eval)(z, w)
    }

    pub fn eval_finite(&self, z: Complex64, w: Complex64) -> Complex64 {
        (self.eval)(ExtComplex::Finite(z), ExtComplex::Finite(w))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The composition `self . t`, tagged with the domain of `t`.
    pub fn compose_with(&self, t: &HoloMap2) -> Self {
        let f = self.eval.clone();
        let t1 = t.f1.clone();
        let t2 = t.f2.clone();
        BivariateFunction {
            label: format!("{} . {}", self.label, t.label),
            domain: t.domain,
            eval: Arc::new(move |z, w| f(t1(z, w), t2(z, w))),
        }
    }
}

impl fmt::Debug for BivariateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BivariateFunction")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish()
    }
}

/// An evaluable holomorphic function of one variable, with an optional list
/// of singular points that contour radii must respect.
#[derive(Clone)]
pub struct UnivariateFunction {
    label: String,
    eval: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    singularities: Vec<Complex64>,
}

impl UnivariateFunction {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        UnivariateFunction {
            label: label.into(),
            eval: Arc::new(eval),
            singularities: Vec::new(),
        }
    }

    pub fn with_singularities(mut self, singularities: Vec<Complex64>) -> Self {
        self.singularities = singularities;
        self
    }

    pub fn from_mobius(map: &crate::riemann::MobiusMap) -> Self {
        let m = *map;
        let mut f = UnivariateFunction::new("mobius", move |z| {
            match m.apply(ExtComplex::Finite(z)) {
                ExtComplex::Finite(v) => v,
                ExtComplex::Infinity => Complex64::new(f64::INFINITY, f64::INFINITY),
            }
        });
        if let Some(pole) = map.pole() {
            f.singularities.push(pole);
        }
        f
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn resolved_radius(&self, cfg: &QuadratureConfig, z0: Complex64) -> Result<f64> {
        let mut r = cfg.radius;
        for s in &self.singularities {
            r = r.min(cfg.singular_margin * (z0 - s).norm());
        }
        if r < MIN_CONTOUR_RADIUS {
            return Err(Error::ContourUnsafe { z: z0, w: Complex64::default(), radius: r });
        }
        Ok(r)
    }
}

impl fmt::Debug for UnivariateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnivariateFunction").field("label", &self.label).finish()
    }
}

/// An evaluable holomorphic map from a patch of its tagged domain into the
/// sphere squared, given by two coordinate functions.
#[derive(Clone)]
pub struct HoloMap2 {
    label: String,
    domain: Domain,
    f1: ComponentEval,
    f2: ComponentEval,
}

impl HoloMap2 {
    pub fn new(
        label: impl Into<String>,
        domain: Domain,
        f1: impl Fn(ExtComplex, ExtComplex) -> ExtComplex + Send + Sync + 'static,
        f2: impl Fn(ExtComplex, ExtComplex) -> ExtComplex + Send + Sync + 'static,
    ) -> Self {
        HoloMap2 {
            label: label.into(),
            domain,
            f1: Arc::new(f1),
            f2: Arc::new(f2),
        }
    }

    pub fn identity(domain: Domain) -> Self {
        HoloMap2::new("identity", domain, |z, _| z, |_, w| w)
    }

    pub fn apply(&self, z: ExtComplex, w: ExtComplex) -> (ExtComplex, ExtComplex) {
        ((self.f1)(z, w), (self.f2)(z, w))
    }

    pub fn apply_finite(&self, z: Complex64, w: Complex64) -> (ExtComplex, ExtComplex) {
        self.apply(ExtComplex::Finite(z), ExtComplex::Finite(w))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &HoloMap2) -> Self {
        let (f1, f2) = (self.f1.clone(), self.f2.clone());
        let (g1a, g2a) = (other.f1.clone(), other.f2.clone());
        let (g1b, g2b) = (other.f1.clone(), other.f2.clone());
        HoloMap2 {
            label: format!("{} . {}", self.label, other.label),
            domain: other.domain,
            f1: Arc::new(move |z, w| f1(g1a(z, w), g2a(z, w))),
            f2: Arc::new(move |z, w| f2(g1b(z, w), g2b(z, w))),
        }
    }

    /// Coordinate functions as scalar bivariate functions (infinite values
    /// surface as non-finite samples in the quadrature engine).
    pub fn component(&self, index: usize) -> BivariateFunction {
        let f = if index == 0 { self.f1.clone() } else { self.f2.clone() };
        BivariateFunction {
            label: format!("{}[{}]", self.label, index + 1),
            domain: self.domain,
            eval: Arc::new(move |z, w| match f(z, w) {
                ExtComplex::Finite(v) => v,
                ExtComplex::Infinity => Complex64::new(f64::INFINITY, f64::INFINITY),
            }),
        }
    }
}

impl fmt::Debug for HoloMap2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HoloMap2")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish()
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Mixed Wirtinger derivative of order `(order_z, order_w)` at a finite
/// point, by the double Cauchy integral over a product of circles.
pub fn cauchy_partial(
    f: &BivariateFunction,
    z0: Complex64,
    w0: Complex64,
    order_z: usize,
    order_w: usize,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    cauchy_partial_guarded(f, z0, w0, order_z, order_w, cfg, &[])
}

/// Like [`cauchy_partial`] with extra distance bounds mixed into the radius
/// cap. Callers differentiating a composition `F . T` pass a proxy for the
/// distance of `T`'s image to the singular set of `F`.
pub fn cauchy_partial_guarded(
    f: &BivariateFunction,
    z0: Complex64,
    w0: Complex64,
    order_z: usize,
    order_w: usize,
    cfg: &QuadratureConfig,
    extra: &[f64],
) -> Result<Complex64> {
    cfg.validate()?;
    let m = cfg.samples;
    if m < 2 * order_z.max(order_w) + 2 {
        return Err(Error::BadQuadratureConfig {
            reason: format!(
                "samples = {m} too few for derivative order ({order_z}, {order_w})"
            ),
        });
    }
    if !f.domain().contains_finite(z0, w0) {
        return Err(Error::outside(z0, w0, f.domain().name()));
    }
    let r = cfg.resolved_radius(f.domain(), z0, w0, extra)?;

    let step = std::f64::consts::TAU / m as f64;
    let ring: Vec<Complex64> = (0..m).map(|j| Complex64::from_polar(r, step * j as f64)).collect();

    let mut sum = Complex64::default();
    for (j, dz) in ring.iter().enumerate() {
        let mut row = Complex64::default();
        for (k, dw) in ring.iter().enumerate() {
            let v = f.eval_finite(z0 + dz, w0 + dw);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteSample { z: z0 + dz, w: w0 + dw });
            }
            let phase = -step * (order_z * j + order_w * k) as f64;
            row += v * Complex64::from_polar(1.0, phase);
        }
        sum += row;
    }

    let scale = factorial(order_z) * factorial(order_w)
        / ((m * m) as f64 * r.powi((order_z + order_w) as i32));
    Ok(sum * scale)
}

/// The invariant Laplacian `4 (1 - zw)^2 d^2/(dz dw)` at a finite point of
/// `Omega`.
pub fn laplacian_omega(
    f: &BivariateFunction,
    z0: Complex64,
    w0: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    laplacian_omega_guarded(f, z0, w0, cfg, &[])
}

pub(crate) fn laplacian_omega_guarded(
    f: &BivariateFunction,
    z0: Complex64,
    w0: Complex64,
    cfg: &QuadratureConfig,
    extra: &[f64],
) -> Result<Complex64> {
    if matches!(f.domain(), Domain::ConfigG) {
        return Err(Error::InvalidArgument {
            reason: "laplacian_omega expects an Omega-chart function, got a G function".into(),
        });
    }
    if !in_omega_with_tol(ExtComplex::Finite(z0), ExtComplex::Finite(w0), DEFAULT_TOL) {
        return Err(Error::outside(z0, w0, "Omega"));
    }
    let mixed = cauchy_partial_guarded(f, z0, w0, 1, 1, cfg, extra)?;
    let weight = Complex64::new(1.0, 0.0) - z0 * w0;
    Ok(4.0 * weight * weight * mixed)
}

/// The Laplacian transported to the configuration space `G`:
/// `-4 (z - w)^2 d^2/(dz dw)`. The constant is fixed by conjugating the
/// `Omega` Laplacian through `(z, w) -> (z, 1/w)`, which the test suite
/// verifies pointwise.
pub fn laplacian_config(
    f: &BivariateFunction,
    z0: Complex64,
    w0: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    laplacian_config_guarded(f, z0, w0, cfg, &[])
}

pub(crate) fn laplacian_config_guarded(
    f: &BivariateFunction,
    z0: Complex64,
    w0: Complex64,
    cfg: &QuadratureConfig,
    extra: &[f64],
) -> Result<Complex64> {
    if f.domain() != Domain::ConfigG {
        return Err(Error::InvalidArgument {
            reason: "laplacian_config expects a G function".into(),
        });
    }
    if (z0 - w0).norm() <= DEFAULT_TOL {
        return Err(Error::outside(z0, w0, "G"));
    }
    let mixed = cauchy_partial_guarded(f, z0, w0, 1, 1, cfg, extra)?;
    let diff = z0 - w0;
    Ok(-4.0 * diff * diff * mixed)
}

/// Derivative of a univariate function by single-circle Cauchy quadrature.
pub fn univariate_derivative(
    h: &UnivariateFunction,
    z0: Complex64,
    order: usize,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    cfg.validate()?;
    let m = cfg.samples;
    if m < 2 * order + 2 {
        return Err(Error::BadQuadratureConfig {
            reason: format!("samples = {m} too few for derivative order {order}"),
        });
    }
    let r = h.resolved_radius(cfg, z0)?;
    let step = std::f64::consts::TAU / m as f64;
    let mut sum = Complex64::default();
    for j in 0..m {
        let dz = Complex64::from_polar(r, step * j as f64);
        let v = h.eval(z0 + dz);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFiniteSample { z: z0 + dz, w: Complex64::default() });
        }
        sum += v * Complex64::from_polar(1.0, -step * (order * j) as f64);
    }
    Ok(sum * factorial(order) / (m as f64 * r.powi(order as i32)))
}

/// Schwarzian derivative `H'''/H' - (3/2) (H''/H')^2`, undefined at
/// critical points of `H`.
pub fn schwarzian(h: &UnivariateFunction, z0: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let d1 = univariate_derivative(h, z0, 1, cfg)?;
    if d1.norm() < 1e-10 {
        return Err(Error::SchwarzianCriticalPoint { z: z0, deriv: d1.norm() });
    }
    let d2 = univariate_derivative(h, z0, 2, cfg)?;
    let d3 = univariate_derivative(h, z0, 3, cfg)?;
    let ratio = d2 / d1;
    Ok(d3 / d1 - 1.5 * ratio * ratio)
}

/// Residual of the separated-difference equation
/// `((H1(z) - H2(w)) / (z - w))^2 = H1'(z) H2'(w)`,
/// which characterizes pairs of Möbius maps with `H1 = H2`.
pub fn schwarzeq_residual(
    h1: &UnivariateFunction,
    h2: &UnivariateFunction,
    z0: Complex64,
    w0: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if (z0 - w0).norm() <= DEFAULT_TOL {
        return Err(Error::InvalidArgument {
            reason: "schwarzeq_residual requires z0 != w0".into(),
        });
    }
    let v1 = h1.eval(z0);
    let v2 = h2.eval(w0);
    if !v1.is_finite() || !v2.is_finite() {
        return Err(Error::NonFiniteSample { z: z0, w: w0 });
    }
    let d1 = univariate_derivative(h1, z0, 1, cfg)?;
    let d2 = univariate_derivative(h2, w0, 1, cfg)?;
    let quotient = (v1 - v2) / (z0 - w0);
    Ok(quotient * quotient - d1 * d2)
}

/// Coefficients of a symmetric two-form `c_zz dz^2 + c_zw dz dw + c_ww dw^2`
/// at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoFormCoefficients {
    pub c_zz: Complex64,
    pub c_zw: Complex64,
    pub c_ww: Complex64,
}

/// Pullback of the metric `dz dw / (1 - zw)^2` through `T` at a finite
/// point: with `J` the Jacobian of `T`,
/// `c_zz = T1_z T2_z / (1 - T1 T2)^2`, `c_ww = T1_w T2_w / (1 - T1 T2)^2`,
/// `c_zw = (T1_z T2_w + T1_w T2_z) / (1 - T1 T2)^2`.
pub fn metric_pullback(
    t: &HoloMap2,
    z0: Complex64,
    w0: Complex64,
    cfg: &QuadratureConfig,
) -> Result<TwoFormCoefficients> {
    let (t1, t2) = t.apply_finite(z0, w0);
    let (ExtComplex::Finite(t1), ExtComplex::Finite(t2)) = (t1, t2) else {
        return Err(Error::outside(z0, w0, "the finite part of Omega under T"));
    };
    let one = Complex64::new(1.0, 0.0);
    if (one - t1 * t2).norm() <= DEFAULT_TOL {
        return Err(Error::outside(z0, w0, "Omega under T (image touches zw = 1)"));
    }
    let c1 = t.component(0);
    let c2 = t.component(1);
    let t1_z = cauchy_partial(&c1, z0, w0, 1, 0, cfg)?;
    let t1_w = cauchy_partial(&c1, z0, w0, 0, 1, cfg)?;
    let t2_z = cauchy_partial(&c2, z0, w0, 1, 0, cfg)?;
    let t2_w = cauchy_partial(&c2, z0, w0, 0, 1, cfg)?;
    let den = (one - t1 * t2) * (one - t1 * t2);
    Ok(TwoFormCoefficients {
        c_zz: t1_z * t2_z / den,
        c_zw: (t1_z * t2_w + t1_w * t2_z) / den,
        c_ww: t1_w * t2_w / den,
    })
}

//! The basis `f_{p,q}(z, w) = z^p w^q / (1 - zw)^{max(p,q)}` of the space of
//! holomorphic functions on `Omega`, truncated series, the past/future
//! projections, the change of basis between monomial and basis coefficient
//! tables, and coefficient extraction by double contour integrals.
//!
//! Index-set convention: the *future* is spanned by indices with `p >= q`,
//! the *past* by `p < q`, matching the projections
//! `pi+ (sum a u^p v^q) = sum_{p >= q} a u^p v^q` and
//! `pi- (sum a u^p v^q) = sum_{p < q} a u^p v^q`
//! and the extraction formulas below. (Prose sometimes attaches the names
//! to the opposite sign; the operative formulas are what this module
//! follows.)

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::{BivariateFunction, Domain};
use crate::error::{Error, Result};
use crate::exec;
use crate::models::{psi_minus_inv, psi_plus_inv};
use crate::riemann::{in_omega, ExtComplex};

/// Basis tag of a coefficient table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisTag {
    /// Taylor coefficients of an entire function in `u^p v^q`.
    Monomial,
    /// Coefficients of an expansion in the `f_{p,q}`.
    Schauder,
}

impl BasisTag {
    pub fn name(self) -> &'static str {
        match self {
            BasisTag::Monomial => "monomial",
            BasisTag::Schauder => "schauder",
        }
    }
}

/// Dense truncated coefficient table `a_{p,q}`, `0 <= p, q <= N`,
/// stored row-major in `p`, then `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoeffArrayFile", into = "CoeffArrayFile")]
pub struct CoeffArray {
    order: usize,
    basis: BasisTag,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct CoeffArrayFile {
    #[serde(rename = "N")]
    n: usize,
    basis: String,
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<CoeffArrayFile> for CoeffArray {
    type Error = Error;

    fn try_from(file: CoeffArrayFile) -> Result<Self> {
        let basis = match file.basis.as_str() {
            "monomial" => BasisTag::Monomial,
            "schauder" => BasisTag::Schauder,
            other => {
                return Err(Error::BadCoefficients {
                    reason: format!("unknown basis tag {other:?}"),
                })
            }
        };
        let expected = (file.n + 1) * (file.n + 1);
        if file.coeffs.len() != expected {
            return Err(Error::BadCoefficients {
                reason: format!(
                    "N = {} needs {} coefficients, file has {}",
                    file.n,
                    expected,
                    file.coeffs.len()
                ),
            });
        }
        let mut coeffs = Vec::with_capacity(expected);
        for [re, im] in file.coeffs {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::BadCoefficients {
                    reason: "coefficients must be finite".into(),
                });
            }
            coeffs.push(Complex64::new(re, im));
        }
        Ok(CoeffArray {
            order: file.n,
            basis,
            coeffs,
        })
    }
}

impl From<CoeffArray> for CoeffArrayFile {
    fn from(a: CoeffArray) -> Self {
        CoeffArrayFile {
            n: a.order,
            basis: a.basis.name().to_string(),
            coeffs: a.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl CoeffArray {
    pub fn zeros(order: usize, basis: BasisTag) -> Self {
        CoeffArray {
            order,
            basis,
            coeffs: vec![Complex64::default(); (order + 1) * (order + 1)],
        }
    }

    /// Table with a single unit entry at `(p, q)`.
    pub fn unit(order: usize, p: usize, q: usize, basis: BasisTag) -> Result<Self> {
        let mut a = Self::zeros(order, basis);
        if p > order || q > order {
            return Err(Error::InvalidArgument {
                reason: format!("index ({p}, {q}) outside truncation order {order}"),
            });
        }
        a.set(p, q, Complex64::new(1.0, 0.0));
        Ok(a)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn get(&self, p: usize, q: usize) -> Complex64 {
        self.coeffs[p * (self.order + 1) + q]
    }

    pub fn set(&mut self, p: usize, q: usize, value: Complex64) {
        self.coeffs[p * (self.order + 1) + q] = value;
    }

    /// Keeps the future part `p >= q`, zeroing the rest.
    pub fn project_future(&self) -> Self {
        self.filtered(|p, q| p >= q)
    }

    /// Keeps the past part `p < q`, zeroing the rest.
    pub fn project_past(&self) -> Self {
        self.filtered(|p, q| p < q)
    }

    fn filtered(&self, keep: impl Fn(usize, usize) -> bool) -> Self {
        let mut out = self.clone();
        for p in 0..=self.order {
            for q in 0..=self.order {
                if !keep(p, q) {
                    out.set(p, q, Complex64::default());
                }
            }
        }
        out
    }

    /// The change of basis sending each monomial `u^p v^q` to `f_{p,q}`:
    /// coefficients are preserved entrywise, only the interpretation moves.
    pub fn phi_map(&self) -> Result<Self> {
        if self.basis != BasisTag::Monomial {
            return Err(Error::WrongBasis {
                expected: "monomial",
                found: self.basis.name(),
            });
        }
        let mut out = self.clone();
        out.basis = BasisTag::Schauder;
        Ok(out)
    }

    pub fn phi_inv_map(&self) -> Result<Self> {
        if self.basis != BasisTag::Schauder {
            return Err(Error::WrongBasis {
                expected: "schauder",
                found: self.basis.name(),
            });
        }
        let mut out = self.clone();
        out.basis = BasisTag::Monomial;
        Ok(out)
    }

    /// Restriction to a smaller truncation order.
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut out = CoeffArray::zeros(order, self.basis);
        for p in 0..=order {
            for q in 0..=order {
                out.set(p, q, self.get(p, q));
            }
        }
        out
    }

    /// Largest entrywise deviation; orders may differ, missing entries
    /// count as zero.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let order = self.order.max(other.order);
        let mut worst: f64 = 0.0;
        for p in 0..=order {
            for q in 0..=order {
                let a = if p <= self.order && q <= self.order {
                    self.get(p, q)
                } else {
                    Complex64::default()
                };
                let b = if p <= other.order && q <= other.order {
                    other.get(p, q)
                } else {
                    Complex64::default()
                };
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let n = self.order;
        (0..=n).flat_map(move |p| (0..=n).map(move |q| (p, q, self.get(p, q))))
    }
}

/// The three generating ratios `f_{1,0}`, `f_{0,1}`, `f_{1,1}` at a point of
/// `Omega`, with their finite limits on the lines at infinity. Every basis
/// element factors as `f_{1,0}^{p-q} f_{1,1}^q` (`p >= q`) or
/// `f_{0,1}^{q-p} f_{1,1}^p` (`p < q`).
fn basis_factors(z: ExtComplex, w: ExtComplex) -> Result<(Complex64, Complex64, Complex64)> {
    if !in_omega(z, w) {
        return Err(Error::outside(z, w, "Omega"));
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(match (z, w) {
        (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
            let den = one - z * w;
            (z / den, w / den, z * w / den)
        }
        (ExtComplex::Infinity, ExtComplex::Finite(w)) => (-w.inv(), Complex64::default(), -one),
        (ExtComplex::Finite(z), ExtComplex::Infinity) => (Complex64::default(), -z.inv(), -one),
        (ExtComplex::Infinity, ExtComplex::Infinity) => {
            (Complex64::default(), Complex64::default(), -one)
        }
    })
}

/// Evaluates `f_{p,q}` anywhere on `Omega`, including the lines at infinity.
pub fn basis_eval(p: usize, q: usize, z: ExtComplex, w: ExtComplex) -> Result<Complex64> {
    let (f10, f01, f11) = basis_factors(z, w)?;
    Ok(if p >= q {
        f10.powu((p - q) as u32) * f11.powu(q as u32)
    } else {
        f01.powu((q - p) as u32) * f11.powu(p as u32)
    })
}

/// Evaluates a truncated series `sum a_{p,q} f_{p,q}` in fixed p-major
/// order.
pub fn series_eval(s: &CoeffArray, z: ExtComplex, w: ExtComplex) -> Result<Complex64> {
    if s.basis() != BasisTag::Schauder {
        return Err(Error::WrongBasis {
            expected: "schauder",
            found: s.basis().name(),
        });
    }
    let (f10, f01, f11) = basis_factors(z, w)?;
    let n = s.order();
    let pow10 = powers(f10, n);
    let pow01 = powers(f01, n);
    let pow11 = powers(f11, n);
    let mut acc = Complex64::default();
    for p in 0..=n {
        for q in 0..=n {
            let basis = if p >= q {
                pow10[p - q] * pow11[q]
            } else {
                pow01[q - p] * pow11[p]
            };
            acc += s.get(p, q) * basis;
        }
    }
    Ok(acc)
}

/// Evaluates a monomial table as the entire function `sum a_{p,q} u^p v^q`.
pub fn monomial_eval(s: &CoeffArray, u: Complex64, v: Complex64) -> Result<Complex64> {
    if s.basis() != BasisTag::Monomial {
        return Err(Error::WrongBasis {
            expected: "monomial",
            found: s.basis().name(),
        });
    }
    let n = s.order();
    let pu = powers(u, n);
    let pv = powers(v, n);
    let mut acc = Complex64::default();
    for (p, &up) in pu.iter().enumerate() {
        for (q, &vq) in pv.iter().enumerate() {
            acc += s.get(p, q) * up * vq;
        }
    }
    Ok(acc)
}

fn powers(base: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        out.push(acc);
        acc *= base;
    }
    out
}

/// `f_{p,q}` as an evaluable function on `Omega`.
pub fn basis_function(p: usize, q: usize) -> BivariateFunction {
    BivariateFunction::new(format!("f[{p},{q}]"), Domain::Omega, move |z, w| {
        basis_eval(p, q, z, w).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
}

/// A truncated series as an evaluable function on `Omega`.
pub fn series_function(s: CoeffArray) -> BivariateFunction {
    BivariateFunction::new("series", Domain::Omega, move |z, w| {
        series_eval(&s, z, w).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
}

/// A monomial table as an evaluable entire function.
pub fn monomial_function(s: CoeffArray) -> BivariateFunction {
    BivariateFunction::new("polynomial", Domain::C2, move |z, w| {
        match (z.as_finite(), w.as_finite()) {
            (Some(u), Some(v)) => monomial_eval(&s, u, v).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    })
}

/// Taylor coefficient table of a sampled function on a product of circles
/// of radius `r`. The u-circle is sampled at half-offset angles
/// `2 pi (j + 1/2) / m`: for the pulled-back integrands below this keeps the
/// denominators `1 + uv` uniformly away from zero at `r = 1`, where an
/// aligned grid would step arbitrarily close to `uv = -1`.
fn coefficient_table(
    order: usize,
    m: usize,
    r: f64,
    parallel: bool,
    g: impl Fn(Complex64, Complex64) -> Complex64 + Sync,
) -> Result<Vec<Complex64>> {
    if m < 2 * order + 2 {
        return Err(Error::BadQuadratureConfig {
            reason: format!("m = {m} samples per circle cannot resolve order {order} (need m >= 2N + 2)"),
        });
    }
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::BadQuadratureConfig {
            reason: format!("contour radius {r} must be positive and finite"),
        });
    }
    let step = std::f64::consts::TAU / m as f64;
    let u_ring: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(r, step * (j as f64 + 0.5)))
        .collect();
    let v_ring: Vec<Complex64> = (0..m).map(|k| Complex64::from_polar(r, step * k as f64)).collect();

    // sampling is the expensive part; fan rows out to the worker pool
    let rows: Vec<Vec<Complex64>> = exec::map_indexed_with(parallel, m, |j| {
        v_ring.iter().map(|&v| g(u_ring[j], v)).collect()
    });
    for (j, row) in rows.iter().enumerate() {
        for (k, val) in row.iter().enumerate() {
            if !val.re.is_finite() || !val.im.is_finite() {
                return Err(Error::NonFiniteSample { z: u_ring[j], w: v_ring[k] });
            }
        }
    }

    // two-stage DFT restricted to the (order+1)^2 block, fixed index order
    let mut partial = vec![Complex64::default(); m * (order + 1)];
    for (j, row) in rows.iter().enumerate() {
        for q in 0..=order {
            let mut acc = Complex64::default();
            for (k, &val) in row.iter().enumerate() {
                acc += val * Complex64::from_polar(1.0, -step * (q * k) as f64);
            }
            partial[j * (order + 1) + q] = acc;
        }
    }
    let mut out = vec![Complex64::default(); (order + 1) * (order + 1)];
    let scale = 1.0 / (m * m) as f64;
    for p in 0..=order {
        for q in 0..=order {
            let mut acc = Complex64::default();
            for j in 0..m {
                let phase = -step * p as f64 * (j as f64 + 0.5);
                acc += partial[j * (order + 1) + q] * Complex64::from_polar(1.0, phase);
            }
            out[p * (order + 1) + q] = acc * scale / r.powi((p + q) as i32);
        }
    }
    Ok(out)
}

fn extract_coeffs_impl(
    f: &BivariateFunction,
    order: usize,
    m: usize,
    r: f64,
    parallel: bool,
) -> Result<CoeffArray> {
    if f.domain() != Domain::Omega {
        return Err(Error::InvalidArgument {
            reason: format!(
                "coefficient extraction needs a function on Omega, got one on {}",
                f.domain().name()
            ),
        });
    }
    let nan = Complex64::new(f64::NAN, f64::NAN);
    // future block p >= q from the Psi+ pullback f(u/(1+uv), v) ...
    let plus = coefficient_table(order, m, r, parallel, |u, v| {
        psi_plus_inv(u, v)
            .map(|p| f.eval(p.z(), p.w()))
            .unwrap_or(nan)
    })?;
    // ... past block p < q from the Psi- pullback f(u, v/(1+uv))
    let minus = coefficient_table(order, m, r, parallel, |u, v| {
        psi_minus_inv(u, v)
            .map(|p| f.eval(p.z(), p.w()))
            .unwrap_or(nan)
    })?;
    let mut out = CoeffArray::zeros(order, BasisTag::Schauder);
    for p in 0..=order {
        for q in 0..=order {
            let idx = p * (order + 1) + q;
            out.set(p, q, if p >= q { plus[idx] } else { minus[idx] });
        }
    }
    Ok(out)
}

/// Coefficients of `f` in the basis `f_{p,q}` by the double contour
/// integrals
///
/// ```text
/// a_{p,q} = -1/(4 pi^2) oint oint f(z/(1+zw), w) z^-(p+1) w^-(q+1) dz dw   (p >= q)
/// a_{p,q} = -1/(4 pi^2) oint oint f(z, w/(1+zw)) z^-(p+1) w^-(q+1) dz dw   (p < q)
/// ```
///
/// approximated by the m x m trapezoid rule on circles of radius `r`. The
/// integrands are entire, so any `r > 0` is valid; `r = 1` is the default.
/// Requires `m >= 2 * order + 2`.
pub fn extract_coeffs(f: &BivariateFunction, order: usize, m: usize, r: f64) -> Result<CoeffArray> {
    extract_coeffs_impl(f, order, m, r, true)
}

/// Sequential reference path of [`extract_coeffs`]; same results, used by
/// the comparison benches and the no-`parallel` build.
pub fn extract_coeffs_seq(f: &BivariateFunction, order: usize, m: usize, r: f64) -> Result<CoeffArray> {
    extract_coeffs_impl(f, order, m, r, false)
}

/// Taylor coefficients of an entire function by the double Cauchy integral
/// over circles of radius `r`.
pub fn taylor_coeffs_entire(
    f: &BivariateFunction,
    order: usize,
    m: usize,
    r: f64,
) -> Result<CoeffArray> {
    if f.domain() != Domain::C2 {
        return Err(Error::InvalidArgument {
            reason: format!(
                "Taylor extraction needs an entire function, got one on {}",
                f.domain().name()
            ),
        });
    }
    let table = coefficient_table(order, m, r, true, |u, v| f.eval_finite(u, v))?;
    Ok(CoeffArray {
        order,
        basis: BasisTag::Monomial,
        coeffs: table,
    })
}

/// Which diagonal circle a restriction runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagonalKind {
    /// `t -> f(r e^{it}, r e^{-it})`, the disk-algebra restriction; needs `r < 1`.
    Disk,
    /// `t -> f(r e^{it}, -r e^{-it})`, the sphere-algebra restriction; any `r > 0`.
    Sphere,
}

/// Fourier modes `c_n`, `|n| <= m/2`, of a diagonal restriction.
#[derive(Clone, Debug)]
pub struct FourierModes {
    n_max: usize,
    modes: Vec<Complex64>,
}

impl FourierModes {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn mode(&self, n: i64) -> Complex64 {
        let idx = n + self.n_max as i64;
        assert!(idx >= 0 && (idx as usize) < self.modes.len(), "mode index {n} out of range");
        self.modes[idx as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n_max = self.n_max as i64;
        self.modes.iter().enumerate().map(move |(i, &c)| (i as i64 - n_max, c))
    }
}

/// Uniform-sample discrete Fourier transform of the restriction of `f` to a
/// diagonal circle.
pub fn fourier_restrict(
    f: &BivariateFunction,
    kind: DiagonalKind,
    r: f64,
    m: usize,
) -> Result<FourierModes> {
    let radius_ok = match kind {
        DiagonalKind::Disk => r.is_finite() && r > 0.0 && r < 1.0,
        DiagonalKind::Sphere => r.is_finite() && r > 0.0,
    };
    if !radius_ok {
        let need = match kind {
            DiagonalKind::Disk => "in (0, 1)",
            DiagonalKind::Sphere => "positive",
        };
        return Err(Error::InvalidArgument {
            reason: format!("{kind:?} restriction needs a radius {need}, got {r}"),
        });
    }
    if m < 4 {
        return Err(Error::BadQuadratureConfig {
            reason: format!("m = {m} samples cannot resolve any mode"),
        });
    }
    let sign = match kind {
        DiagonalKind::Disk => 1.0,
        DiagonalKind::Sphere => -1.0,
    };
    let step = std::f64::consts::TAU / m as f64;
    let mut values = Vec::with_capacity(m);
    for j in 0..m {
        let t = step * j as f64;
        let z = Complex64::from_polar(r, t);
        let w = sign * Complex64::from_polar(r, -t);
        let v = f.eval_finite(z, w);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFiniteSample { z, w });
        }
        values.push(v);
    }
    let n_max = m / 2;
    let mut modes = Vec::with_capacity(2 * n_max + 1);
    for n in -(n_max as i64)..=(n_max as i64) {
        let mut acc = Complex64::default();
        for (j, &v) in values.iter().enumerate() {
            acc += v * Complex64::from_polar(1.0, -step * (n * j as i64) as f64);
        }
        modes.push(acc / m as f64);
    }
    Ok(FourierModes { n_max, modes })
}

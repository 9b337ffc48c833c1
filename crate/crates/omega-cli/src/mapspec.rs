//! Map specifications for the invariance and metric checkers. A spec is
//! JSON (or the shorthand strings `identity` / `shear:g=id`):
//!
//! ```text
//! {"type": "mobius", "a": C, "b": C, "c": C, "d": C, "swap": false}
//! {"type": "shear", "g": "id"}            the shear with g the identity
//! {"type": "shear", "g": [c0, c1, ...]}   g a polynomial in its argument
//! {"type": "compose", "maps": [spec, ...]}  applied right to left
//! "identity" | "shear:g=id"
//! ```
//!
//! with `C` the complex encoding `{"re": _, "im": _}`. Möbius specs realize
//! as subgroup elements of `Omega` or as diagonal pairs on `G`, depending
//! on the checker model; shears realize natively on `G` and transported
//! through the flip on `Omega`.

use num_complex::Complex64;
use omega_core::calculus::{Domain, HoloMap2, UnivariateFunction};
use omega_core::invariance::{shear_automorphism_g, shear_transport_omega, OmegaAutomorphism};
use omega_core::riemann::MobiusMap;
use omega_core::sample::mobius_pair_map;
use serde_json::Value;

use crate::CliError;

/// Checker model a map spec is realized on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Omega,
    Config,
}

impl Model {
    pub fn domain(self) -> Domain {
        match self {
            Model::Omega => Domain::Omega,
            Model::Config => Domain::ConfigG,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Omega => "omega",
            Model::Config => "config",
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn parse_complex_field(value: &Value, key: &str) -> Result<Complex64, CliError> {
    let field = value
        .get(key)
        .ok_or_else(|| usage(format!("map spec is missing the field {key:?}")))?;
    let re = field
        .get("re")
        .and_then(Value::as_f64)
        .ok_or_else(|| usage(format!("field {key:?} needs a numeric \"re\"")))?;
    let im = field
        .get("im")
        .and_then(Value::as_f64)
        .ok_or_else(|| usage(format!("field {key:?} needs a numeric \"im\"")))?;
    Ok(Complex64::new(re, im))
}

fn shear_generator(g: &Value) -> Result<UnivariateFunction, CliError> {
    match g {
        Value::String(s) if s == "id" => Ok(UnivariateFunction::new("id", |z| z)),
        Value::Array(coeffs) => {
            let mut values = Vec::with_capacity(coeffs.len());
            for c in coeffs {
                values.push(
                    c.as_f64()
                        .ok_or_else(|| usage("shear generator coefficients must be numbers"))?,
                );
            }
            let label = format!("poly{values:?}");
            Ok(UnivariateFunction::new(label, move |z: Complex64| {
                let mut acc = Complex64::default();
                for &c in values.iter().rev() {
                    acc = acc * z + Complex64::new(c, 0.0);
                }
                acc
            }))
        }
        _ => Err(usage("shear generator must be \"id\" or a coefficient array")),
    }
}

fn realize_mobius(psi: MobiusMap, swap: bool, model: Model) -> Result<HoloMap2, CliError> {
    match model {
        Model::Omega => {
            let t = OmegaAutomorphism::new(psi, swap).map_err(CliError::from)?;
            Ok(t.to_map())
        }
        Model::Config => Ok(mobius_pair_map(&psi, swap)),
    }
}

fn realize(value: &Value, model: Model) -> Result<HoloMap2, CliError> {
    if let Value::String(s) = value {
        return match s.as_str() {
            "identity" => Ok(HoloMap2::identity(model.domain())),
            "shear:g=id" => {
                let g = UnivariateFunction::new("id", |z| z);
                Ok(match model {
                    Model::Omega => shear_transport_omega(g),
                    Model::Config => shear_automorphism_g(g),
                })
            }
            other => Err(usage(format!("unknown named map {other:?}"))),
        };
    }
    let kind = value
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| usage("map spec needs a \"type\" field (mobius, shear, compose)"))?;
    match kind {
        "mobius" => {
            let a = parse_complex_field(value, "a")?;
            let b = parse_complex_field(value, "b")?;
            let c = parse_complex_field(value, "c")?;
            let d = parse_complex_field(value, "d")?;
            let swap = value.get("swap").and_then(Value::as_bool).unwrap_or(false);
            let psi = MobiusMap::new(a, b, c, d).map_err(CliError::from)?;
            realize_mobius(psi, swap, model)
        }
        "shear" => {
            let g = value
                .get("g")
                .ok_or_else(|| usage("shear spec needs a \"g\" field"))?;
            let g = shear_generator(g)?;
            Ok(match model {
                Model::Omega => shear_transport_omega(g),
                Model::Config => shear_automorphism_g(g),
            })
        }
        "compose" => {
            let maps = value
                .get("maps")
                .and_then(Value::as_array)
                .ok_or_else(|| usage("compose spec needs a \"maps\" array"))?;
            if maps.is_empty() {
                return Err(usage("compose spec needs at least one map"));
            }
            let mut realized = maps
                .iter()
                .map(|m| realize(m, model))
                .collect::<Result<Vec<_>, _>>()?;
            let mut acc = realized.pop().expect("nonempty");
            while let Some(outer) = realized.pop() {
                acc = outer.compose(&acc);
            }
            Ok(acc)
        }
        other => Err(usage(format!("unknown map type {other:?}"))),
    }
}

/// Parses a map spec (JSON text or shorthand string) for the given model.
pub fn parse_map_spec(text: &str, model: Model) -> Result<HoloMap2, CliError> {
    let trimmed = text.trim();
    let value = if trimmed.starts_with('{') || trimmed.starts_with('"') {
        serde_json::from_str::<Value>(trimmed)
            .map_err(|e| usage(format!("map spec is not valid JSON: {e}")))?
    } else {
        Value::String(trimmed.to_string())
    };
    realize(&value, model)
}

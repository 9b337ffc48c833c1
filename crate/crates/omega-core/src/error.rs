use num_complex::Complex64;
use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("complex component is NaN; finite values must be representable")]
    NotANumber,

    #[error("point ({z}, {w}) lies outside {domain}")]
    OutsideDomain {
        z: String,
        w: String,
        domain: &'static str,
    },

    #[error("Möbius map is degenerate: |det| = {det:.3e} is below the floor {floor:.3e}")]
    DegenerateMobius { det: f64, floor: f64 },

    #[error("three-point fit needs pairwise distinct {which} points")]
    CoincidentPoints { which: &'static str },

    #[error("quadrature contour around ({z}, {w}) would cross the singular set (resolved radius {radius:.3e})")]
    ContourUnsafe { z: Complex64, w: Complex64, radius: f64 },

    #[error("function value is not finite at contour sample ({z}, {w})")]
    NonFiniteSample { z: Complex64, w: Complex64 },

    #[error("Schwarzian undefined at critical point {z} (|H'| = {deriv:.3e})")]
    SchwarzianCriticalPoint { z: Complex64, deriv: f64 },

    #[error("quadrature configuration invalid: {reason}")]
    BadQuadratureConfig { reason: String },

    #[error("point does not satisfy the quadric z1^2 + z2^2 + z3^2 = 1 (residual {residual:.3e})")]
    OffQuadric { residual: f64 },

    #[error("matrix is not complex-orthogonal within tolerance (defect {defect:.3e})")]
    NotOrthogonal { defect: f64 },

    #[error("matrix determinant {det} is not 1 within tolerance")]
    ImproperRotation { det: Complex64 },

    #[error("linear fit residual {residual:.3e} exceeds tolerance {tolerance:.1e}; the map does not act linearly on the quadric")]
    RotationFit { residual: f64, tolerance: f64 },

    #[error("coefficient array has basis tag {found}, expected {expected}")]
    WrongBasis { expected: &'static str, found: &'static str },

    #[error("coefficient data invalid: {reason}")]
    BadCoefficients { reason: String },

    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },

    #[error("map sends probe point ({z}, {w}) out of the domain")]
    NotAnAutomorphism { z: String, w: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn outside(z: impl ToString, w: impl ToString, domain: &'static str) -> Self {
        Error::OutsideDomain {
            z: z.to_string(),
            w: w.to_string(),
            domain,
        }
    }

    /// Numerical failures (quadrature breakdown, degenerate fits) as opposed
    /// to invalid input. CLI front ends map the two classes to distinct exit
    /// codes.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ContourUnsafe { .. }
                | Error::NonFiniteSample { .. }
                | Error::DegenerateMobius { .. }
                | Error::SchwarzianCriticalPoint { .. }
                | Error::RotationFit { .. }
                | Error::NotOrthogonal { .. }
                | Error::ImproperRotation { .. }
        )
    }
}

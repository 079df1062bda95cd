use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Location and expectation set of a failed parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: unexpected {}, expected one of: {}",
            self.line,
            self.column,
            self.found,
            self.expected.join(", ")
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("evaluation at {z} hits declared singularity {singularity}")]
    SingularityHit { z: Complex64, singularity: Complex64 },

    #[error("expression evaluates to a non-finite value at {z}")]
    NonFinite { z: Complex64 },

    #[error("{what} did not converge: last estimate {estimate:e}, disagreement {residual:e}")]
    NonConvergence {
        what: &'static str,
        estimate: f64,
        residual: f64,
    },

    #[error("invalid bracket [{lo}, {hi}]")]
    BracketInvalid { lo: f64, hi: f64 },

    #[error("gradient {norm:e} is not zero; adapt coordinates to the tangent plane first")]
    GradientNotZero { norm: f64 },

    #[error("map is not immersed at ({u}, {v}): |F_u x F_v| = {area:e}")]
    NotImmersed { u: f64, v: f64, area: f64 },

    #[error("map is not conformal: violation {violation:e}")]
    NotConformal { violation: f64 },

    #[error("period obstruction on generator {generator}: |Re| = {re:e}, |Im| = {im:e}")]
    PeriodObstruction { generator: usize, re: f64, im: f64 },

    #[error("Weierstrass data has a common zero at {z}")]
    CommonZero { z: Complex64 },

    #[error("Gauss map denominator vanishes at {z}")]
    DegenerateDenominator { z: Complex64 },

    #[error("Gauss map is not rational: {reason}")]
    NotRational { reason: String },

    #[error("scale must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("interior of the mask is not 4-connected ({components} components)")]
    MaskNotConnected { components: usize },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

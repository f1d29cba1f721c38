use thiserror::Error;

use crate::expr::ExprError;
use crate::jets::JetError;
use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("conformal factor A+B = {value} is not positive at ({u}, {v})")]
    NonPositiveConformalFactor { u: f64, v: f64, value: f64 },
    #[error("jet order {available} is too low, need at least {needed}")]
    InsufficientOrder { needed: usize, available: usize },
    #[error("{what} fails the Killing equation (residual {residual:e})")]
    KillingViolation { what: String, residual: f64 },
    #[error("operator coefficient g has not been supplied or solved")]
    MissingG,
    #[error("integrability curl nonzero: max |d_u w_v - d_v w_u| = {max_curl:e} at ({}, {})", at.0, at.1)]
    CurlViolation { max_curl: f64, at: (f64, f64) },
    #[error("Killing tensor is proportional to the metric (trivial operator)")]
    TrivialKillingTensor,
    #[error("symmetry data is not first order (K or alpha nonzero)")]
    NotFirstOrder,
    #[error("profile `{0}` must depend only on {1}")]
    WrongCoordinate(String, &'static str),
    #[error("invalid separation scheme: {0}")]
    InvalidScheme(String),
    #[error("beta vanishes at v = {0}")]
    BetaZero(f64),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

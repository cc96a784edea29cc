//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the geometry pipeline and its front ends.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("degenerate Gram matrix (|det| = {0:e})")]
    DegenerateGram(f64),
    #[error("point ({0}, {1}) is outside the chart interior")]
    OutOfInterior(usize, usize),
    #[error("chart is not conformal (residual {0:e})")]
    NonConformalChart(f64),
    #[error("degenerate induced metric <F_z, F_zbar> = {0:e}")]
    DegenerateMetric(f64),
    #[error("frame degenerate: {0}")]
    FrameDegenerate(String),
    #[error("signature check failed: {0}")]
    SignatureFailure(String),
    #[error("section is not normal (residual {0:e})")]
    NotNormal(f64),
    #[error("coordinate change has a critical point (|w'| = {0:e})")]
    CriticalPoint(f64),
    #[error("operation requires codimension one (n = 3), got n = {0}")]
    WrongCodimension(usize),
    #[error("the two immersions coincide (|<Y, Yhat>| = {0:e})")]
    CoincidentPoints(f64),
    #[error("umbilic point (<kappa, kappa_bar> = {0:e})")]
    UmbilicPoint(f64),
    #[error("theta is not holomorphic (|theta_zbar| = {0:e})")]
    NonHolomorphicTheta(f64),
    #[error("theta vanishes on the chart (|theta| = {0:e})")]
    ZeroOfTheta(f64),
    #[error("surface is not S-Willmore ({0})")]
    NotSWillmore(String),
    #[error("chart is not an isothermic (real Hopf differential) chart (residual {0:e})")]
    NotIsothermicChart(f64),
    #[error("Riccati integration blew up (|mu| = {0:e})")]
    BlowUp(f64),
    #[error("integrability monitor exceeded tolerance ({0:e})")]
    ConsistencyFailure(f64),
    #[error("the second surface is not an envelope of the central spheres (|xi| = {0:e})")]
    NotSecondEnvelope(f64),
    #[error("pair matches neither the S-Willmore nor the Darboux branch ({0})")]
    AmbiguousBranch(String),
    #[error("contact elements are not based at the same point")]
    BasePointMismatch,
    #[error("unknown surface '{0}'")]
    UnknownSurface(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

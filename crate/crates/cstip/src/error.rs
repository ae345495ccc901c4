use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("eta = {eta} is outside the admissible range (-1, 1]")]
    EtaOutOfRange { eta: f64 },
    #[error("shear modulus must be positive, got {g}")]
    NonPositiveModulus { g: f64 },
    #[error("Poisson ratio {nu} is outside (-1, 1/2)")]
    PoissonOutOfRange { nu: f64 },
    #[error("characteristic length must be finite and non-negative, got {l}")]
    InvalidLength { l: f64 },
    #[error("problem kind mismatch: {0}")]
    ProblemKindMismatch(String),
    #[error("radius must be positive, got {r}")]
    RadiusNonPositive { r: f64 },
    #[error("kappa must be positive, got {kappa}")]
    KappaNonPositive { kappa: f64 },
    #[error("lambda = {lambda} is a special exponent (0, 1, 2); use special_mode")]
    SpecialLambda { lambda: f64 },
    #[error("eta = -1 on a couple-stress side makes the system degenerate")]
    EtaDegenerate,
    #[error("root refinement failed near lambda = {re} + {im}i (residual {residual:e})")]
    RootRefinementFailed { re: f64, im: f64, residual: f64 },
    #[error("matrix is numerically nonsingular (smallest relative singular value {sigma_ratio:e})")]
    EmptyNullspace { sigma_ratio: f64 },
    #[error("closed form requires eta+ = eta- = 1, got ({eta_plus}, {eta_minus})")]
    EtaNotOne { eta_plus: f64, eta_minus: f64 },
    #[error("line load Q = {q} cannot be balanced: G+ l+^2 = G- l-^2 leaves beta6 undetermined")]
    UnbalancedEdge { q: f64 },
    #[error("no closed-form rotation expansion for eta = {eta} (only 1 and 1/3)")]
    UnsupportedEtaClosedForm { eta: f64 },
    #[error("order {order} requested beyond the expansion truncation {truncation}")]
    OrderBeyondTruncation { order: f64, truncation: f64 },
    #[error("quadrature on [{a}, {b}] did not converge (error estimate {error:e})")]
    QuadratureNotConverged { a: f64, b: f64, error: f64 },
    #[error("J* differs across contour radii by {spread:e} (tolerance {tol:e})")]
    PathIndependenceViolated { spread: f64, tol: f64 },
    #[error("invalid root window ({lo}, {hi})")]
    InvalidWindow { lo: f64, hi: f64 },
    #[error("amplitude {name} is not used by this expansion family")]
    UnusedAmplitude { name: String },
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

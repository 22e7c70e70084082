use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("no neutral point for T in [0, {t_max}] (Re lambda0 at T_max = {re_at_max:.3e})")]
    NoNeutralPoint { t_max: f64, re_at_max: f64 },
    #[error("minimum of the neutral curve sits on the bracket boundary alpha = {alpha}")]
    BracketExhausted { alpha: f64 },
    #[error("empty unstable band: T = {taylor} does not exceed T_c = {t_c}")]
    EmptyBand { taylor: f64, t_c: f64 },
    #[error("degenerate expansion fit (h = {h_scale}, a5 term {quartic_term:.3e}, residual {residual:.3e})")]
    FitDegenerate { h_scale: f64, quartic_term: f64, residual: f64 },
    #[error("no sign change of {quantity} on [{lo}, {hi}] ({f_lo:.3e}, {f_hi:.3e})")]
    TransitionNotFound { quantity: &'static str, lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("null space is not one-dimensional (sigma_min/sigma_next = {ratio:.3e})")]
    DegenerateCriticality { ratio: f64 },
    #[error("the 2 alpha operator is singular (rcond estimate {rcond:.3e})")]
    ResonanceAt2Alpha { rcond: f64 },
    #[error("inner product of eigenvector and adjoint vanishes ({value:.3e})")]
    NormalizationDegenerate { value: f64 },
    #[error("amplitude reached zero with K != 0 at y = {y}")]
    PhaseSingularity { y: f64 },
    #[error("trajectory escaped |X| > 1e6 at y = {y}")]
    TrajectoryEscaped { y: f64 },
}

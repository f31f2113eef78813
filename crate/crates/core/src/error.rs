use thiserror::Error;

/// Errors produced by the exact and sampling routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("no closed form for p = {p} (only 0..=3 are available)")]
    NoClosedForm { p: u32 },

    #[error("monomial s^{s_deg} t^{t_deg} does not fit the {kind} pattern for n = {n}")]
    PatternViolation {
        kind: &'static str,
        n: u32,
        s_deg: u32,
        t_deg: u32,
    },

    #[error("operator is defined on 0 <= t <= s, got s = {s}, t = {t}")]
    RegionViolation { s: String, t: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid cdf: {0}")]
    InvalidCdf(String),

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("density unavailable for n>3 (requested n = {n})")]
    DensityUnavailable { n: u32 },

    #[error("t = {t} lies outside the support [0, {upper}]")]
    OutsideSupport { t: String, upper: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

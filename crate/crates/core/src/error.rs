use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree too large: {degree} exceeds cap {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },

    #[error("ordering pole: lambda*(t-s) = {value} (must differ from 2)")]
    OrderingPole { value: f64 },

    #[error("degenerate kappa: (s-1)/2 * lambda + 1 vanishes (s = {s})")]
    DegenerateKappa { s: f64 },

    #[error("antinormal pole: projector expansion undefined at t = -1")]
    AntinormalPole,

    #[error("coherent projector pole: expansion undefined at t = 1")]
    CoherentPole,

    #[error("expected an ordered exponential with n = m = 0, got n = {n}, m = {m}")]
    NotPureExponential { n: u32, m: u32 },

    #[error("Laguerre route is singular at tau = 0")]
    ZeroTau,

    #[error("index ({row}, {col}) out of range for dimension {dim}")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },

    #[error("dimension {dim} outside [{min}, {max}]")]
    BadDimension { dim: usize, min: usize, max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("truncation too coarse: dropped coherent tail {tail:e} at dimension {dim}")]
    TruncationTooCoarse { tail: f64, dim: usize },

    #[error("t = {t} outside the open interval (-1, 1) required here")]
    OutOfRange { t: f64 },

    #[error("invalid quadrature grid: {0}")]
    BadGrid(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A pivot in the LU solve of `zI - T` fell below the singularity
    /// tolerance: `z` is numerically in the spectrum.
    #[error("resolvent singular at z = {z}: pivot {pivot:.3e} below tolerance")]
    SingularResolvent { z: num_complex::Complex64, pivot: f64 },

    /// Power iteration for the operator 2-norm did not converge.
    #[error("operator norm power iteration failed to converge in {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// Spectral-radius precheck failed: the matrix is not a Tadmor--Ritt candidate.
    #[error("spectral radius bound {bound} exceeds 1 + tolerance")]
    SpectrumOutsideDisc { bound: f64 },

    /// Sector constant requested for an angle not exceeding the operator's type angle.
    #[error("eta = {eta} must exceed the type angle theta = {theta}")]
    EtaTooSmall { eta: f64, theta: f64 },

    /// Power scan exceeded the overflow guard: the operator is not
    /// power-bounded at working scale.
    #[error("norm of T^{n} exceeds overflow threshold ({norm:.3e})")]
    Overflow { n: usize, norm: f64 },

    /// Nikolski check requires all eigenvalues on the unit circle.
    #[error("eigenvalue {value} is off the unit circle by {deviation:.3e}")]
    SpectrumNotUnimodular { value: num_complex::Complex64, deviation: f64 },

    #[error("bad contour parameters: eta = {eta}, r = {r}")]
    BadParameters { eta: f64, r: f64 },

    /// Recursive panel halving hit the depth cap without meeting the tolerance.
    #[error("quadrature stalled at depth {depth}, last error estimate {error:.3e}")]
    QuadratureStall { depth: usize, error: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    /// A resolvent solve on a quadrature node failed: the contour grazes the spectrum.
    #[error("spectrum touches the contour near z = {z}")]
    SpectrumTouchesContour { z: num_complex::Complex64 },

    /// Square-function partial sums exceeded the divergence guard.
    #[error("square-function sum diverges (partial sum {partial:.3e})")]
    Divergence { partial: f64 },

    /// The lemma constant b = 1 + Pb^2/c1^2 is undefined for c1 = 0.
    #[error("c1 = 0: square-function lemma constant undefined, use the closed-form route")]
    DegenerateC1,

    /// Multiplier eigenvalues 1 - 2^-n round to 1 beyond N = 64.
    #[error("multiplier size {n} exceeds the binary64 precision cap of 64")]
    PrecisionLoss { n: usize },

    #[error("parse error at byte {offset}: {message}")]
    ParseError { offset: usize, message: String },

    #[error("non-square input: {rows} rows, {cols} cols")]
    ShapeError { rows: usize, cols: usize },

    #[error("config error: {0}")]
    ConfigError(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

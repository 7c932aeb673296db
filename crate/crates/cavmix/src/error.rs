//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cavity: {0}")]
    InvalidCavity(String),

    #[error("invalid mode index: {0}")]
    InvalidMode(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    /// The drive violates the rigidity bound |h| = |a| L < 2; the mode
    /// functions themselves are ill-defined and no perturbative statement
    /// survives.
    #[error("profile breaks the rigidity bound |a|L < 2 (max |h| = {max_h:.3e})")]
    RigidityViolated { max_h: f64 },

    #[error("invalid quadrature settings: {0}")]
    InvalidQuadrature(String),

    #[error(
        "oscillatory integral did not converge: error {achieved:.3e} after {panels} panels \
         (requested abs {abs_tol:.1e} / rel {rel_tol:.1e})"
    )]
    QuadratureNonConvergence {
        achieved: f64,
        panels: usize,
        abs_tol: f64,
        rel_tol: f64,
    },

    #[error("blocks are built over different mode bases")]
    BasisMismatch,

    #[error("windows are not ordered: first ends at {end_first}, second starts at {start_second}")]
    WindowsNotOrdered { end_first: f64, start_second: f64 },

    #[error("modes {0} and {1} do not couple: {2}")]
    NonCoupledPair(String, String, String),

    /// Particle creation in the selected pair is not negligible against the
    /// mixing, so the reduced two-mode map is not a passive (beamsplitter)
    /// transformation.
    #[error(
        "pair is not passive: |Bhat| = {bhat_norm:.3e} vs |Ahat| = {ahat_norm:.3e} \
         (require |Bhat| <= 1e-3 |Ahat|)"
    )]
    NotPassive { ahat_norm: f64, bhat_norm: f64 },

    #[error("mixing generator is not anti-Hermitian: {0}")]
    InvalidGenerator(String),

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

//! Linear-order Bogoliubov transformations for a scalar field in a rigid,
//! arbitrarily accelerated rectangular cavity, together with the resonance
//! predictions and Gaussian-state entanglement measures built on top of them.
//!
//! The central object is the pair of matrices (alpha, beta) relating mode
//! operators before and after an acceleration window. To first order in the
//! dimensionless perturbation h = L a,
//!
//! ```text
//! alpha = D (1 + Ahat),    beta = D Bhat,    D = diag(exp(i w_m (t1 - t0)))
//! ```
//!
//! with Ahat (mode mixing) anti-Hermitian and Bhat (particle creation)
//! symmetric. Everything internal runs in natural units (c = 1): frequencies
//! in 1/m, times and lengths in m. Conversions live in [`units`].

pub mod bogoliubov;
pub mod cavity;
pub mod entangle;
pub mod error;
pub mod profiles;
pub mod quadrature;
pub mod resonance;
pub mod units;

pub use bogoliubov::{
    ahat_element, bhat_element, bogoliubov_block_1d, bogoliubov_block_3d, compose, BogoliubovBlock,
    ModeBasis, TruncationDiagnostics,
};
pub use cavity::{
    frequency_gap_1d, mode_frequency_1d, mode_frequency_3d, paraxial_frequency, reduce_to_1d, Axis,
    CavitySpec1D, CavitySpec3D, ModeIndex1D, ModeIndex3D, ParaxialFrequency,
};
pub use entangle::{
    apply_gate, entanglement_after_mixing, gate_from_mixing, log_negativity, squeezed_vacuum,
    symplectic_form, GaussianState, SymplecticGate,
};
pub use error::{Error, Result};
pub use profiles::{
    circular_profile, validate_axis_profile, validate_vector_profile, AxisProfile, ProfileKind,
    ProfileWindow, ValidityClass, ValidityReport, VectorProfile,
};
pub use quadrature::{oscillatory_integral, QuadMethod, QuadratureSpec};
pub use resonance::{
    feasibility_report, growth_rate_3d, resonance_frequency_1d, resonance_frequency_3d,
    resonance_scan, scenario_growth_rate, scenario_resonance, DriveSpec, FeasibilityReport,
    ResonanceKind, ResonancePrediction,
};

/// Complex double, the scalar type of every Bogoliubov matrix here.
pub type C64 = num_complex::Complex64;

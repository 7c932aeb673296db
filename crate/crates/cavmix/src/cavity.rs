//! Cavity geometry and mode spectra.
//!
//! A rigid rectangular cavity of lengths (L_x, L_y, L_z) with Dirichlet walls
//! carries a discrete spectrum
//!
//! ```text
//! w_mnp = sqrt(mu^2 + (pi m / L_x)^2 + (pi n / L_y)^2 + (pi p / L_z)^2)
//! ```
//!
//! for quantum numbers m, n, p >= 1. Acceleration along one axis couples only
//! modes that differ in that axis' quantum number, so the 3D problem reduces
//! to a 1D cavity along the driven axis whose effective mass absorbs the two
//! frozen transverse momenta:
//!
//! ```text
//! mu_0 = sqrt(mu^2 + (pi q_t1 / L_t1)^2 + (pi q_t2 / L_t2)^2)
//! ```
//!
//! Frequencies are strictly increasing in each quantum number, so distinct
//! modes of a 1D spectrum never collide.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Transverse corrections above this fraction of the leading term put a
/// paraxial frequency outside the trustworthy regime.
pub const PARAXIAL_RATIO_LIMIT: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The two remaining axes, in X < Y < Z order.
    pub fn transverse(self) -> [Axis; 2] {
        match self {
            Axis::X => [Axis::Y, Axis::Z],
            Axis::Y => [Axis::X, Axis::Z],
            Axis::Z => [Axis::X, Axis::Y],
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// 1D mode label n >= 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct ModeIndex1D(u32);

impl ModeIndex1D {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMode("1D quantum number must be >= 1".into()));
        }
        Ok(ModeIndex1D(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for ModeIndex1D {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        ModeIndex1D::new(n)
    }
}

impl From<ModeIndex1D> for u32 {
    fn from(m: ModeIndex1D) -> u32 {
        m.0
    }
}

impl std::fmt::Display for ModeIndex1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// 3D mode label (m, n, p), all components >= 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u32; 3]", into = "[u32; 3]")]
pub struct ModeIndex3D {
    m: u32,
    n: u32,
    p: u32,
}

impl ModeIndex3D {
    pub fn new(m: u32, n: u32, p: u32) -> Result<Self> {
        if m == 0 || n == 0 || p == 0 {
            return Err(Error::InvalidMode(format!(
                "3D quantum numbers must all be >= 1, got ({m}, {n}, {p})"
            )));
        }
        Ok(ModeIndex3D { m, n, p })
    }

    pub fn component(self, axis: Axis) -> u32 {
        match axis {
            Axis::X => self.m,
            Axis::Y => self.n,
            Axis::Z => self.p,
        }
    }

    /// Quantum numbers on the two axes other than `axis`, in X < Y < Z order.
    pub fn transverse(self, axis: Axis) -> [u32; 2] {
        let [a, b] = axis.transverse();
        [self.component(a), self.component(b)]
    }

    pub fn as_array(self) -> [u32; 3] {
        [self.m, self.n, self.p]
    }
}

impl TryFrom<[u32; 3]> for ModeIndex3D {
    type Error = Error;
    fn try_from(v: [u32; 3]) -> Result<Self> {
        ModeIndex3D::new(v[0], v[1], v[2])
    }
}

impl From<ModeIndex3D> for [u32; 3] {
    fn from(m: ModeIndex3D) -> [u32; 3] {
        m.as_array()
    }
}

impl std::fmt::Display for ModeIndex3D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.m, self.n, self.p)
    }
}

/// 1D cavity: length L and effective mass mu_0 (both in natural units, m and
/// 1/m). The effective mass is either a genuine field mass or the frozen
/// transverse momentum of a reduced 3D problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavitySpec1D {
    length: f64,
    mu0: f64,
}

impl CavitySpec1D {
    pub fn new(length: f64, mu0: f64) -> Result<Self> {
        if !length.is_finite() || length <= 0.0 {
            return Err(Error::InvalidCavity(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        if !mu0.is_finite() || mu0 < 0.0 {
            return Err(Error::InvalidCavity(format!(
                "effective mass must be non-negative and finite, got {mu0}"
            )));
        }
        Ok(CavitySpec1D { length, mu0 })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }
}

/// 3D rectangular cavity: lengths (L_x, L_y, L_z) and field mass mu.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavitySpec3D {
    lengths: [f64; 3],
    mu: f64,
}

impl CavitySpec3D {
    pub fn new(lengths: [f64; 3], mu: f64) -> Result<Self> {
        for (i, &l) in lengths.iter().enumerate() {
            if !l.is_finite() || l <= 0.0 {
                return Err(Error::InvalidCavity(format!(
                    "length along {} must be positive and finite, got {l}",
                    Axis::ALL[i]
                )));
            }
        }
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::InvalidCavity(format!(
                "field mass must be non-negative and finite, got {mu}"
            )));
        }
        Ok(CavitySpec3D { lengths, mu })
    }

    pub fn length(&self, axis: Axis) -> f64 {
        self.lengths[axis.index()]
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.lengths
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// w_n = sqrt(mu_0^2 + (pi n / L)^2).
pub fn mode_frequency_1d(cavity: &CavitySpec1D, mode: ModeIndex1D) -> f64 {
    let k = std::f64::consts::PI * f64::from(mode.get()) / cavity.length();
    cavity.mu0().hypot(k)
}

/// w_mnp = sqrt(mu^2 + sum_axis (pi q_axis / L_axis)^2).
pub fn mode_frequency_3d(cavity: &CavitySpec3D, mode: ModeIndex3D) -> f64 {
    let mut sq = cavity.mu() * cavity.mu();
    for axis in Axis::ALL {
        let k = std::f64::consts::PI * f64::from(mode.component(axis)) / cavity.length(axis);
        sq += k * k;
    }
    sq.sqrt()
}

/// Freezes the two transverse quantum numbers of a 3D cavity into the
/// effective mass of a 1D cavity along `axis`. `transverse` is given in
/// X < Y < Z order of the remaining axes, matching
/// [`ModeIndex3D::transverse`].
///
/// The reduced spectrum reproduces the 3D one exactly:
/// `mode_frequency_1d(reduce_to_1d(c, axis, t), q) == mode_frequency_3d(c, mode)`
/// whenever `mode` has component q along `axis` and transverse numbers t.
pub fn reduce_to_1d(
    cavity: &CavitySpec3D,
    axis: Axis,
    transverse: [u32; 2],
) -> Result<CavitySpec1D> {
    let [a, b] = axis.transverse();
    if transverse[0] == 0 || transverse[1] == 0 {
        return Err(Error::InvalidMode(
            "transverse quantum numbers must be >= 1".into(),
        ));
    }
    let ka = std::f64::consts::PI * f64::from(transverse[0]) / cavity.length(a);
    let kb = std::f64::consts::PI * f64::from(transverse[1]) / cavity.length(b);
    let mu0 = (cavity.mu() * cavity.mu() + ka * ka + kb * kb).sqrt();
    CavitySpec1D::new(cavity.length(axis), mu0)
}

/// w_a - w_b evaluated as (k_a^2 - k_b^2) / (w_a + w_b), which survives the
/// near-degenerate regime where the two frequencies share many leading
/// digits (optical modes differing only in a transverse number). Signed:
/// positive when a is the higher mode.
pub fn frequency_gap_1d(cavity: &CavitySpec1D, a: ModeIndex1D, b: ModeIndex1D) -> f64 {
    let ka = std::f64::consts::PI * f64::from(a.get()) / cavity.length();
    let kb = std::f64::consts::PI * f64::from(b.get()) / cavity.length();
    let wa = mode_frequency_1d(cavity, a);
    let wb = mode_frequency_1d(cavity, b);
    (ka * ka - kb * kb) / (wa + wb)
}

/// Optical-regime frequency with its validity diagnostic, from
/// [`paraxial_frequency`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParaxialFrequency {
    /// w in 1/m.
    pub omega: f64,
    /// (transverse correction) / (2 pi / lambda).
    pub correction_ratio: f64,
}

impl ParaxialFrequency {
    pub fn beyond_paraxial(&self) -> bool {
        self.correction_ratio > PARAXIAL_RATIO_LIMIT
    }
}

/// Frequency of an optical cavity mode with a longitudinal wavelength lambda
/// much shorter than the transverse extents:
///
/// ```text
/// w ~ 2 pi / lambda + (pi lambda / 4) ((m / L_x)^2 + (n / L_y)^2)
/// ```
///
/// Massless field; m and n count the transverse half-wavelengths. The
/// returned ratio of correction to leading term should stay below
/// [`PARAXIAL_RATIO_LIMIT`] for the expansion to be trusted.
pub fn paraxial_frequency(
    lambda: f64,
    m: u32,
    n: u32,
    length_x: f64,
    length_y: f64,
) -> Result<ParaxialFrequency> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidCavity(format!(
            "wavelength must be positive and finite, got {lambda}"
        )));
    }
    if !(length_x.is_finite() && length_x > 0.0 && length_y.is_finite() && length_y > 0.0) {
        return Err(Error::InvalidCavity(
            "transverse lengths must be positive".into(),
        ));
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidMode(
            "transverse quantum numbers must be >= 1".into(),
        ));
    }
    let leading = std::f64::consts::TAU / lambda;
    let mx = f64::from(m) / length_x;
    let ny = f64::from(n) / length_y;
    let correction = 0.25 * std::f64::consts::PI * lambda * (mx * mx + ny * ny);
    Ok(ParaxialFrequency {
        omega: leading + correction,
        correction_ratio: correction / leading,
    })
}

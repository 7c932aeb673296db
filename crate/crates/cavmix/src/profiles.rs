//! Acceleration profiles of the cavity and their validity diagnostics.
//!
//! A profile is the proper acceleration a(tau) of the cavity centre along one
//! axis, supported on a finite window [tau0, tau1] and identically zero
//! outside it. The dimensionless expansion parameter of the whole linear
//! theory is h(tau) = L a(tau) with L the cavity length along the driven
//! axis; validation reports the peak of |h| and classifies it:
//!
//! * `Ok`           max |h| <= 0.1
//! * `PerturbativeSuspect`   0.1 < max |h| < 2, first order is dubious
//! * `HardInvalid`  max |h| >= 2, a wall would need to move faster than light
//!   relative to the instantaneous rest frame; the mode basis itself fails.

use serde::{Deserialize, Serialize};

use crate::cavity::{Axis, CavitySpec1D, CavitySpec3D};
use crate::error::{Error, Result};

/// Rigidity bound on |h| = |a| L.
pub const RIGIDITY_BOUND: f64 = 2.0;

/// Above this peak |h| the first-order transformation is no longer small.
pub const PERTURBATIVE_SUSPECT_LIMIT: f64 = 0.1;

/// Sample count used to bound the Euclidean norm of a vector profile.
const NORM_SAMPLES: usize = 2048;

/// Closed support [tau0, tau1] of a drive, in metres of proper time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileWindow {
    tau0: f64,
    tau1: f64,
}

impl ProfileWindow {
    pub fn new(tau0: f64, tau1: f64) -> Result<Self> {
        if !tau0.is_finite() || !tau1.is_finite() || tau1 <= tau0 {
            return Err(Error::InvalidProfile(format!(
                "window must satisfy tau0 < tau1 with both finite, got [{tau0}, {tau1}]"
            )));
        }
        Ok(ProfileWindow { tau0, tau1 })
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    pub fn duration(&self) -> f64 {
        self.tau1 - self.tau0
    }

    pub fn contains(&self, tau: f64) -> bool {
        tau >= self.tau0 && tau <= self.tau1
    }
}

/// Functional form of a single-axis acceleration inside its window.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileKind {
    /// Constant values on consecutive sub-intervals. Each entry is
    /// (end, value) with absolute segment ends strictly increasing and the
    /// last end equal to tau1; the first segment starts at tau0.
    PiecewiseConstant { segments: Vec<(f64, f64)> },
    /// a(tau) = amplitude * sin(omega (tau - tau0) + phase).
    Sinusoidal {
        amplitude: f64,
        omega: f64,
        phase: f64,
    },
    /// Uniform grid tau0 + k dtau with linear interpolation between samples.
    /// The grid must cover the window; a grid running past tau1 is fine, the
    /// overhang is simply never evaluated.
    Sampled { dtau: f64, values: Vec<f64> },
}

/// Acceleration along one axis over a window.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisProfile {
    window: ProfileWindow,
    kind: ProfileKind,
}

/// End-of-partition matches are accepted up to this fraction of the window.
const PARTITION_TOL: f64 = 1e-9;

impl AxisProfile {
    pub fn new(window: ProfileWindow, kind: ProfileKind) -> Result<Self> {
        match &kind {
            ProfileKind::PiecewiseConstant { segments } => {
                if segments.is_empty() {
                    return Err(Error::InvalidProfile(
                        "piecewise profile needs at least one segment".into(),
                    ));
                }
                let mut prev = window.tau0();
                for &(end, value) in segments {
                    if !end.is_finite() || !value.is_finite() {
                        return Err(Error::InvalidProfile(
                            "piecewise segment with non-finite entry".into(),
                        ));
                    }
                    if end <= prev {
                        return Err(Error::InvalidProfile(format!(
                            "piecewise segment ends must increase, got {end} after {prev}"
                        )));
                    }
                    prev = end;
                }
                let gap = (prev - window.tau1()).abs();
                if gap > PARTITION_TOL * window.duration() {
                    return Err(Error::InvalidProfile(format!(
                        "piecewise segments must partition the window: last end {prev} \
                         vs tau1 {}",
                        window.tau1()
                    )));
                }
            }
            ProfileKind::Sinusoidal {
                amplitude,
                omega,
                phase,
            } => {
                if !amplitude.is_finite() || !phase.is_finite() {
                    return Err(Error::InvalidProfile(
                        "sinusoid with non-finite amplitude or phase".into(),
                    ));
                }
                if !omega.is_finite() || *omega <= 0.0 {
                    return Err(Error::InvalidProfile(format!(
                        "sinusoid frequency must be positive and finite, got {omega}"
                    )));
                }
            }
            ProfileKind::Sampled { dtau, values } => {
                if !dtau.is_finite() || *dtau <= 0.0 {
                    return Err(Error::InvalidProfile(format!(
                        "sample spacing must be positive and finite, got {dtau}"
                    )));
                }
                if values.len() < 2 {
                    return Err(Error::InvalidProfile(
                        "sampled profile needs at least two samples".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidProfile("non-finite sample value".into()));
                }
                let span = dtau * (values.len() - 1) as f64;
                if span < window.duration() * (1.0 - PARTITION_TOL) {
                    return Err(Error::InvalidProfile(format!(
                        "sample grid spans {span} but the window lasts {}",
                        window.duration()
                    )));
                }
            }
        }
        Ok(AxisProfile { window, kind })
    }

    pub fn window(&self) -> ProfileWindow {
        self.window
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    /// a(tau); zero outside the window.
    pub fn evaluate(&self, tau: f64) -> f64 {
        if !self.window.contains(tau) {
            return 0.0;
        }
        match &self.kind {
            ProfileKind::PiecewiseConstant { segments } => {
                // Segment i covers [previous end, end_i); tau1 falls into the
                // last one.
                let i = segments.partition_point(|&(end, _)| end <= tau);
                segments[i.min(segments.len() - 1)].1
            }
            ProfileKind::Sinusoidal {
                amplitude,
                omega,
                phase,
            } => amplitude * (omega * (tau - self.window.tau0()) + phase).sin(),
            ProfileKind::Sampled { dtau, values } => {
                let u = tau - self.window.tau0();
                let j = ((u / dtau).floor() as usize).min(values.len() - 2);
                let frac = (u - j as f64 * dtau) / dtau;
                values[j] + (values[j + 1] - values[j]) * frac
            }
        }
    }

    /// Upper bound on |a| over the window, exact for piecewise and sampled
    /// kinds and equal to the amplitude for sinusoids.
    pub fn max_abs(&self) -> f64 {
        match &self.kind {
            ProfileKind::PiecewiseConstant { segments } => {
                segments.iter().map(|&(_, v)| v.abs()).fold(0.0, f64::max)
            }
            ProfileKind::Sinusoidal { amplitude, .. } => amplitude.abs(),
            ProfileKind::Sampled { values, .. } => {
                values.iter().map(|v| v.abs()).fold(0.0, f64::max)
            }
        }
    }
}

/// Up to three per-axis profiles sharing one window.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorProfile {
    window: ProfileWindow,
    components: [Option<AxisProfile>; 3],
}

impl VectorProfile {
    pub fn new(components: Vec<(Axis, AxisProfile)>) -> Result<Self> {
        let mut slots: [Option<AxisProfile>; 3] = [None, None, None];
        let mut window = None;
        for (axis, profile) in components {
            match window {
                None => window = Some(profile.window()),
                Some(w) if w == profile.window() => {}
                Some(w) => {
                    return Err(Error::InvalidProfile(format!(
                        "component windows differ: [{}, {}] vs [{}, {}]",
                        w.tau0(),
                        w.tau1(),
                        profile.window().tau0(),
                        profile.window().tau1()
                    )))
                }
            }
            let slot = &mut slots[axis.index()];
            if slot.is_some() {
                return Err(Error::InvalidProfile(format!(
                    "duplicate profile for axis {axis}"
                )));
            }
            *slot = Some(profile);
        }
        let window = window.ok_or_else(|| {
            Error::InvalidProfile("vector profile needs at least one component".into())
        })?;
        Ok(VectorProfile {
            window,
            components: slots,
        })
    }

    pub fn window(&self) -> ProfileWindow {
        self.window
    }

    pub fn component(&self, axis: Axis) -> Option<&AxisProfile> {
        self.components[axis.index()].as_ref()
    }

    /// Axes that actually carry a drive, in X < Y < Z order.
    pub fn axes(&self) -> Vec<Axis> {
        Axis::ALL
            .into_iter()
            .filter(|a| self.component(*a).is_some())
            .collect()
    }

    pub fn evaluate(&self, tau: f64) -> [f64; 3] {
        let mut a = [0.0; 3];
        for axis in Axis::ALL {
            if let Some(p) = self.component(axis) {
                a[axis.index()] = p.evaluate(tau);
            }
        }
        a
    }
}

/// Acceleration of uniform circular motion with radius r and angular
/// frequency omega in the x-y plane: amplitude omega^2 r on both axes, the
/// y component a quarter period ahead. r = 0 gives a legitimate zero drive.
pub fn circular_profile(radius: f64, omega: f64, window: ProfileWindow) -> Result<VectorProfile> {
    if !radius.is_finite() || radius < 0.0 {
        return Err(Error::InvalidProfile(format!(
            "orbit radius must be non-negative and finite, got {radius}"
        )));
    }
    let amplitude = omega * omega * radius;
    let x = AxisProfile::new(
        window,
        ProfileKind::Sinusoidal {
            amplitude,
            omega,
            phase: 0.0,
        },
    )?;
    let y = AxisProfile::new(
        window,
        ProfileKind::Sinusoidal {
            amplitude,
            omega,
            phase: std::f64::consts::FRAC_PI_2,
        },
    )?;
    VectorProfile::new(vec![(Axis::X, x), (Axis::Y, y)])
}

/// How far a drive is from the perturbative regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValidityClass {
    Ok,
    PerturbativeSuspect,
    HardInvalid,
}

impl std::fmt::Display for ValidityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ValidityClass::Ok => "OK",
            ValidityClass::PerturbativeSuspect => "PERTURBATIVE_SUSPECT",
            ValidityClass::HardInvalid => "HARD_INVALID",
        })
    }
}

/// Peak dimensionless acceleration and its classification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidityReport {
    /// Peak |h_axis| for each driven axis, X < Y < Z order.
    pub per_axis: Vec<(Axis, f64)>,
    /// Peak Euclidean norm of h over the window.
    pub max_h: f64,
    pub class: ValidityClass,
}

impl ValidityReport {
    fn classify(max_h: f64) -> ValidityClass {
        if max_h >= RIGIDITY_BOUND {
            ValidityClass::HardInvalid
        } else if max_h > PERTURBATIVE_SUSPECT_LIMIT {
            ValidityClass::PerturbativeSuspect
        } else {
            ValidityClass::Ok
        }
    }

    /// Pointwise maximum of two reports, used when transformations over the
    /// same cavity are composed.
    pub fn merge(&self, other: &ValidityReport) -> ValidityReport {
        let mut per_axis = self.per_axis.clone();
        for &(axis, h) in &other.per_axis {
            match per_axis.iter_mut().find(|(a, _)| *a == axis) {
                Some(entry) => entry.1 = entry.1.max(h),
                None => per_axis.push((axis, h)),
            }
        }
        per_axis.sort_by_key(|(a, _)| a.index());
        let max_h = self.max_h.max(other.max_h);
        ValidityReport {
            per_axis,
            max_h,
            class: Self::classify(max_h),
        }
    }
}

/// Validity of a single-axis drive in a 1D cavity: h = L a.
pub fn validate_axis_profile(profile: &AxisProfile, cavity: &CavitySpec1D) -> ValidityReport {
    let max_h = cavity.length() * profile.max_abs();
    ValidityReport {
        per_axis: Vec::new(),
        max_h,
        class: ValidityReport::classify(max_h),
    }
}

/// Validity of a vector drive in a 3D cavity. Each component is scaled by
/// its own cavity length; the overall figure is the peak of the Euclidean
/// norm |h(tau)|, bounded below by the per-axis peaks and sampled densely
/// on the window.
pub fn validate_vector_profile(profile: &VectorProfile, cavity: &CavitySpec3D) -> ValidityReport {
    let mut per_axis = Vec::new();
    let mut floor = 0.0_f64;
    for axis in profile.axes() {
        let p = profile.component(axis).unwrap();
        let h = cavity.length(axis) * p.max_abs();
        floor = floor.max(h);
        per_axis.push((axis, h));
    }
    let w = profile.window();
    let mut max_norm = 0.0_f64;
    for k in 0..=NORM_SAMPLES {
        let tau = w.tau0() + w.duration() * k as f64 / NORM_SAMPLES as f64;
        let a = profile.evaluate(tau);
        let mut sq = 0.0;
        for axis in Axis::ALL {
            let h = cavity.length(axis) * a[axis.index()];
            sq += h * h;
        }
        max_norm = max_norm.max(sq.sqrt());
    }
    let max_h = max_norm.max(floor);
    ValidityReport {
        per_axis,
        max_h,
        class: ValidityReport::classify(max_h),
    }
}

//! Where a shaken cavity responds, and how fast.
//!
//! A drive at angular frequency w_r pumps a pair of modes coherently when
//!
//! ```text
//! mode mixing:       w_r = |w_a - w_b|
//! particle creation: w_r =  w_a + w_b
//! ```
//!
//! subject to the parity selection rule: the quantum numbers along the
//! driven axis must differ by an odd number, and all other numbers must
//! match. At exact resonance the relevant element grows linearly,
//! |element| ~ P h0 tau / 2 with h0 = L w_r^2 r for an oscillation of
//! spatial amplitude r.
//!
//! For optical modes (wavelength lambda much shorter than the transverse
//! sides) the mixing resonance between transverse numbers m and m' sits at
//!
//! ```text
//! w_r ~ (pi lambda / 4) |m^2 - m'^2| / L_x^2
//! ```
//!
//! far below the optical frequency itself, with growth rate
//! (pi / 2) m m' r lambda / L_x^3. These closed forms are what makes the
//! rotating-cavity estimate a desktop number rather than an astrophysical
//! one.

use serde::{Deserialize, Serialize};

use crate::bogoliubov::first_order_prefactor;
use crate::cavity::CavitySpec1D;
use crate::cavity::{
    frequency_gap_1d, mode_frequency_1d, reduce_to_1d, Axis, CavitySpec3D, ModeIndex1D, ModeIndex3D,
};
use crate::error::{Error, Result};
use crate::units;

/// Reference angular velocity for feasibility comparisons: the ballpark of
/// the fastest man-made rotors.
pub const DEFAULT_REFERENCE_RPM: f64 = 1.5e5;

/// Extrapolating first-order growth to targets above this magnitude leaves
/// the linear theory's comfort zone.
pub const PERTURBATIVE_TARGET_LIMIT: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResonanceKind {
    ModeMixing,
    ParticleCreation,
}

impl std::fmt::Display for ResonanceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ResonanceKind::ModeMixing => "mode-mixing",
            ResonanceKind::ParticleCreation => "particle-creation",
        })
    }
}

/// Sinusoidal or circular drive of spatial amplitude `radius` aimed at a
/// dimensionless element magnitude `target`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveSpec {
    /// Oscillation or orbit radius in metres.
    pub radius: f64,
    /// |element| the experiment wants to reach; 1.0 is order unity.
    pub target: f64,
}

impl DriveSpec {
    pub fn new(radius: f64) -> Self {
        DriveSpec {
            radius,
            target: 1.0,
        }
    }

    fn check(&self) -> Result<()> {
        if !self.radius.is_finite() || self.radius < 0.0 {
            return Err(Error::InvalidProfile(format!(
                "drive radius must be non-negative and finite, got {}",
                self.radius
            )));
        }
        if !self.target.is_finite() || self.target <= 0.0 {
            return Err(Error::InvalidProfile(format!(
                "target magnitude must be positive and finite, got {}",
                self.target
            )));
        }
        Ok(())
    }
}

/// One entry of a resonance catalogue. Frequencies and rates in natural
/// units (1/m); conversions happen at the presentation layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonancePrediction {
    pub kind: ResonanceKind,
    pub mode_a: ModeIndex3D,
    pub mode_b: ModeIndex3D,
    /// Axis whose quantum numbers differ; the drive must act along it.
    pub axis: Axis,
    pub omega_r: f64,
    /// d|element|/dtau at exact resonance, present when a drive is given.
    pub growth_rate: Option<f64>,
    /// Proper time (m) to reach the drive's target magnitude.
    pub time_to_target: Option<f64>,
    /// The target asks for more than first order can promise.
    pub beyond_perturbative: bool,
}

/// Parity rule for a pair of 1D quantum numbers.
fn couples_1d(a: ModeIndex1D, b: ModeIndex1D) -> bool {
    !a.get().abs_diff(b.get()).is_multiple_of(2)
}

/// w_r for a 1D pair. Mixing uses the cancellation-free gap.
pub fn resonance_frequency_1d(
    cavity: &CavitySpec1D,
    a: ModeIndex1D,
    b: ModeIndex1D,
    kind: ResonanceKind,
) -> Result<f64> {
    if !couples_1d(a, b) {
        return Err(Error::NonCoupledPair(
            a.to_string(),
            b.to_string(),
            "quantum numbers must differ by an odd amount".into(),
        ));
    }
    Ok(match kind {
        ResonanceKind::ModeMixing => frequency_gap_1d(cavity, a, b).abs(),
        ResonanceKind::ParticleCreation => {
            mode_frequency_1d(cavity, a) + mode_frequency_1d(cavity, b)
        }
    })
}

/// The single axis along which a 3D pair couples.
fn coupling_axis_3d(a: ModeIndex3D, b: ModeIndex3D) -> Result<Axis> {
    let mut differing = Vec::new();
    for axis in Axis::ALL {
        if a.component(axis) != b.component(axis) {
            differing.push(axis);
        }
    }
    match differing.as_slice() {
        [] => Err(Error::NonCoupledPair(
            a.to_string(),
            b.to_string(),
            "modes are identical".into(),
        )),
        [axis] => {
            let delta = a.component(*axis).abs_diff(b.component(*axis));
            if delta.is_multiple_of(2) {
                Err(Error::NonCoupledPair(
                    a.to_string(),
                    b.to_string(),
                    format!("difference along {axis} is even"),
                ))
            } else {
                Ok(*axis)
            }
        }
        _ => Err(Error::NonCoupledPair(
            a.to_string(),
            b.to_string(),
            "modes differ along more than one axis".into(),
        )),
    }
}

/// w_r for a 3D pair, along with the axis the drive must act on.
pub fn resonance_frequency_3d(
    cavity: &CavitySpec3D,
    a: ModeIndex3D,
    b: ModeIndex3D,
    kind: ResonanceKind,
) -> Result<(Axis, f64)> {
    let axis = coupling_axis_3d(a, b)?;
    let reduced = reduce_to_1d(cavity, axis, a.transverse(axis))?;
    let qa = ModeIndex1D::new(a.component(axis))?;
    let qb = ModeIndex1D::new(b.component(axis))?;
    Ok((axis, resonance_frequency_1d(&reduced, qa, qb, kind)?))
}

/// d|element|/dtau for a resonant sinusoidal drive of spatial amplitude
/// `radius` along the pair's coupling axis: P(w_r) L w_r^2 r / 2.
pub fn growth_rate_3d(
    cavity: &CavitySpec3D,
    a: ModeIndex3D,
    b: ModeIndex3D,
    kind: ResonanceKind,
    radius: f64,
) -> Result<f64> {
    let (axis, omega_r) = resonance_frequency_3d(cavity, a, b, kind)?;
    let reduced = reduce_to_1d(cavity, axis, a.transverse(axis))?;
    let qa = ModeIndex1D::new(a.component(axis))?;
    let qb = ModeIndex1D::new(b.component(axis))?;
    let h0 = reduced.length() * omega_r * omega_r * radius;
    Ok(first_order_prefactor(&reduced, qa, qb, omega_r) * h0 / 2.0)
}

/// Optical mixing resonance between transverse numbers (m, m') at
/// wavelength lambda in a cavity of side L_x:
/// w_r = (pi lambda / 4) |m^2 - m'^2| / L_x^2.
pub fn scenario_resonance(lambda: f64, length_x: f64, m: u32, m_prime: u32) -> Result<f64> {
    if m == 0 || m_prime == 0 {
        return Err(Error::InvalidMode(
            "transverse quantum numbers must be >= 1".into(),
        ));
    }
    if m.abs_diff(m_prime).is_multiple_of(2) {
        return Err(Error::NonCoupledPair(
            m.to_string(),
            m_prime.to_string(),
            "transverse numbers must differ by an odd amount".into(),
        ));
    }
    if !(lambda.is_finite() && lambda > 0.0 && length_x.is_finite() && length_x > 0.0) {
        return Err(Error::InvalidCavity(
            "wavelength and transverse side must be positive".into(),
        ));
    }
    let msq = f64::from(m) * f64::from(m);
    let msq_p = f64::from(m_prime) * f64::from(m_prime);
    Ok(0.25 * std::f64::consts::PI * lambda * (msq - msq_p).abs() / (length_x * length_x))
}

/// Growth rate of the optical mixing element for a transverse oscillation
/// of amplitude r: (pi / 2) m m' r lambda / L_x^3.
pub fn scenario_growth_rate(
    lambda: f64,
    length_x: f64,
    m: u32,
    m_prime: u32,
    radius: f64,
) -> Result<f64> {
    // Shares the preconditions of the resonance formula.
    scenario_resonance(lambda, length_x, m, m_prime)?;
    if !radius.is_finite() || radius < 0.0 {
        return Err(Error::InvalidProfile(format!(
            "oscillation radius must be non-negative and finite, got {radius}"
        )));
    }
    Ok(
        0.5 * std::f64::consts::PI * f64::from(m) * f64::from(m_prime) * radius * lambda
            / length_x.powi(3),
    )
}

/// How a required drive frequency compares with what a laboratory rotor
/// reaches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FeasibilityReport {
    /// Required drive frequency, SI angular (rad/s).
    pub omega_r_per_s: f64,
    /// Same as revolutions per minute.
    pub required_rpm: f64,
    pub reference_rpm: f64,
    /// required / reference.
    pub gap_factor: f64,
    /// log10 of the factor: orders of magnitude still missing.
    pub gap_orders: f64,
}

pub fn feasibility_report(
    prediction: &ResonancePrediction,
    reference_rpm: f64,
) -> Result<FeasibilityReport> {
    if !reference_rpm.is_finite() || reference_rpm <= 0.0 {
        return Err(Error::InvalidProfile(format!(
            "reference angular velocity must be positive, got {reference_rpm} rpm"
        )));
    }
    let omega_r_per_s = units::frequency_to_si(prediction.omega_r);
    let required_rpm = units::angular_si_to_rpm(omega_r_per_s);
    let gap_factor = required_rpm / reference_rpm;
    Ok(FeasibilityReport {
        omega_r_per_s,
        required_rpm,
        reference_rpm,
        gap_factor,
        gap_orders: gap_factor.log10(),
    })
}

/// Every resonance of the listed modes inside [lo, hi] (1/m), for the
/// requested kinds. With a drive, each entry carries its growth rate and
/// time to target. Sorted by frequency, then kind, then mode labels.
pub fn resonance_scan(
    cavity: &CavitySpec3D,
    modes: &[ModeIndex3D],
    omega_range: (f64, f64),
    kinds: &[ResonanceKind],
    drive: Option<&DriveSpec>,
) -> Result<Vec<ResonancePrediction>> {
    let (lo, hi) = omega_range;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidProfile(format!(
            "frequency range must satisfy 0 <= lo < hi, got [{lo}, {hi}]"
        )));
    }
    if modes.len() < 2 {
        return Err(Error::InvalidMode(format!(
            "a scan needs at least 2 modes, got {}",
            modes.len()
        )));
    }
    for (i, m) in modes.iter().enumerate() {
        if modes[..i].contains(m) {
            return Err(Error::InvalidMode(format!("duplicate mode {m} in scan")));
        }
    }
    if let Some(d) = drive {
        d.check()?;
    }
    let mut out = Vec::new();
    for i in 0..modes.len() {
        for j in i + 1..modes.len() {
            let Ok(axis) = coupling_axis_3d(modes[i], modes[j]) else {
                continue;
            };
            for &kind in kinds {
                let (_, omega_r) = resonance_frequency_3d(cavity, modes[i], modes[j], kind)?;
                if omega_r < lo || omega_r > hi {
                    continue;
                }
                let growth_rate = match drive {
                    Some(d) => Some(growth_rate_3d(cavity, modes[i], modes[j], kind, d.radius)?),
                    None => None,
                };
                let time_to_target = match (drive, growth_rate) {
                    (Some(d), Some(rate)) if rate > 0.0 => Some(d.target / rate),
                    _ => None,
                };
                out.push(ResonancePrediction {
                    kind,
                    mode_a: modes[i],
                    mode_b: modes[j],
                    axis,
                    omega_r,
                    growth_rate,
                    time_to_target,
                    beyond_perturbative: drive
                        .map(|d| d.target > PERTURBATIVE_TARGET_LIMIT)
                        .unwrap_or(false),
                });
            }
        }
    }
    out.sort_by(|a, b| {
        a.omega_r
            .total_cmp(&b.omega_r)
            .then(a.kind.cmp(&b.kind))
            .then(a.mode_a.as_array().cmp(&b.mode_a.as_array()))
            .then(a.mode_b.as_array().cmp(&b.mode_b.as_array()))
    });
    out.dedup_by(|a, b| a.kind == b.kind && a.mode_a == b.mode_a && a.mode_b == b.mode_b);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::mode_frequency_3d;
    use approx::assert_relative_eq;

    fn m1(n: u32) -> ModeIndex1D {
        ModeIndex1D::new(n).unwrap()
    }

    fn m3(m: u32, n: u32, p: u32) -> ModeIndex3D {
        ModeIndex3D::new(m, n, p).unwrap()
    }

    #[test]
    fn one_d_frequencies_match_spectrum_arithmetic() {
        let c = CavitySpec1D::new(0.5, 2.0).unwrap();
        let w1 = mode_frequency_1d(&c, m1(1));
        let w2 = mode_frequency_1d(&c, m1(2));
        assert_relative_eq!(
            resonance_frequency_1d(&c, m1(1), m1(2), ResonanceKind::ModeMixing).unwrap(),
            w2 - w1,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            resonance_frequency_1d(&c, m1(1), m1(2), ResonanceKind::ParticleCreation).unwrap(),
            w1 + w2,
            max_relative = 1e-15
        );
        assert!(resonance_frequency_1d(&c, m1(1), m1(3), ResonanceKind::ModeMixing).is_err());
    }

    #[test]
    fn three_d_selection_rules() {
        let c = CavitySpec3D::new([0.01, 0.01, 0.01], 0.0).unwrap();
        let (axis, w) =
            resonance_frequency_3d(&c, m3(1, 1, 1), m3(2, 1, 1), ResonanceKind::ModeMixing)
                .unwrap();
        assert_eq!(axis, Axis::X);
        assert_relative_eq!(
            w,
            mode_frequency_3d(&c, m3(2, 1, 1)) - mode_frequency_3d(&c, m3(1, 1, 1)),
            max_relative = 1e-12
        );
        // Even difference, two differing axes, identical modes: all out.
        for (a, b) in [
            (m3(1, 1, 1), m3(3, 1, 1)),
            (m3(1, 1, 1), m3(2, 2, 1)),
            (m3(1, 1, 1), m3(1, 1, 1)),
        ] {
            assert!(resonance_frequency_3d(&c, a, b, ResonanceKind::ModeMixing).is_err());
        }
    }

    #[test]
    fn optical_scenario_closed_forms() {
        // 600 nm in a 1 cm cavity, fundamental transverse pair, 1 um orbit:
        // the numbers that put this experiment on a desk.
        let lambda = 600e-9;
        let lx = 0.01;
        let omega_r = scenario_resonance(lambda, lx, 1, 2).unwrap();
        assert_relative_eq!(
            omega_r,
            0.25 * std::f64::consts::PI * lambda * 3.0 / (lx * lx),
            max_relative = 1e-15
        );
        assert_relative_eq!(omega_r, 1.4137e-2, max_relative = 1e-4);
        let rate = scenario_growth_rate(lambda, lx, 1, 2, 1e-6).unwrap();
        assert_relative_eq!(rate, 1.885e-6, max_relative = 1e-3);
        // Parity rule applies to the transverse pair as well.
        assert!(scenario_resonance(lambda, lx, 1, 3).is_err());
        assert!(scenario_growth_rate(lambda, lx, 2, 2, 1e-6).is_err());
    }

    #[test]
    fn scenario_agrees_with_exact_spectrum() {
        // Same geometry with the wavelength realised as a longitudinal
        // quantum number: closed form within a percent of the exact gap.
        let lz = 0.01_f64;
        let p = 33333;
        let lambda = 2.0 * lz / f64::from(p);
        let c = CavitySpec3D::new([0.01, 0.01, lz], 0.0).unwrap();
        let (axis, exact) =
            resonance_frequency_3d(&c, m3(1, 1, p), m3(2, 1, p), ResonanceKind::ModeMixing)
                .unwrap();
        assert_eq!(axis, Axis::X);
        let approx_wr = scenario_resonance(lambda, 0.01, 1, 2).unwrap();
        assert_relative_eq!(approx_wr, exact, max_relative = 1e-2);
        let exact_rate = growth_rate_3d(
            &c,
            m3(1, 1, p),
            m3(2, 1, p),
            ResonanceKind::ModeMixing,
            1e-6,
        )
        .unwrap();
        let approx_rate = scenario_growth_rate(lambda, 0.01, 1, 2, 1e-6).unwrap();
        assert_relative_eq!(approx_rate, exact_rate, max_relative = 1e-2);
    }

    #[test]
    fn scan_collects_sorts_and_rates() {
        let c = CavitySpec3D::new([0.01, 0.011, 0.012], 0.0).unwrap();
        let modes = [m3(1, 1, 1), m3(2, 1, 1), m3(1, 2, 1), m3(2, 2, 1)];
        let kinds = [ResonanceKind::ModeMixing, ResonanceKind::ParticleCreation];
        let drive = DriveSpec {
            radius: 1e-6,
            target: 0.1,
        };
        let preds = resonance_scan(&c, &modes, (0.0, 1e5), &kinds, Some(&drive)).unwrap();
        // Four odd couplings, each in two kinds.
        assert_eq!(preds.len(), 8);
        for pair in preds.windows(2) {
            assert!(pair[0].omega_r <= pair[1].omega_r);
        }
        for p in &preds {
            let rate = p.growth_rate.unwrap();
            assert!(rate > 0.0);
            assert_relative_eq!(p.time_to_target.unwrap(), 0.1 / rate);
            assert!(!p.beyond_perturbative);
            // Creation sits at the sum frequency, way above every gap here.
            if p.kind == ResonanceKind::ParticleCreation {
                assert!(p.omega_r > 500.0);
            }
        }
        // Narrow window keeps only the mixing lines.
        let low = resonance_scan(&c, &modes, (0.0, 500.0), &kinds, None).unwrap();
        assert!(low.iter().all(|p| p.kind == ResonanceKind::ModeMixing));
        assert!(low.iter().all(|p| p.growth_rate.is_none()));
        // An ambitious target gets flagged.
        let ambitious =
            resonance_scan(&c, &modes, (0.0, 1e5), &kinds, Some(&DriveSpec::new(1e-6))).unwrap();
        assert!(ambitious.iter().all(|p| p.beyond_perturbative));
    }

    #[test]
    fn feasibility_gap_for_the_micron_orbit() {
        let pred = ResonancePrediction {
            kind: ResonanceKind::ModeMixing,
            mode_a: m3(1, 1, 33333),
            mode_b: m3(2, 1, 33333),
            axis: Axis::X,
            omega_r: 1.4137e-2,
            growth_rate: None,
            time_to_target: None,
            beyond_perturbative: false,
        };
        let report = feasibility_report(&pred, DEFAULT_REFERENCE_RPM).unwrap();
        assert_relative_eq!(report.omega_r_per_s, 4.238e6, max_relative = 1e-3);
        assert_relative_eq!(report.required_rpm, 4.047e7, max_relative = 1e-3);
        assert_relative_eq!(report.gap_factor, 269.8, max_relative = 1e-3);
        assert!(report.gap_orders > 2.0 && report.gap_orders < 3.0);
        assert!(feasibility_report(&pred, 0.0).is_err());
    }
}

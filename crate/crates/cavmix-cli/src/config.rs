//! JSON run configuration: schema, exhaustive validation, conversion into
//! core types.
//!
//! Every section of the document is optional; each subcommand declares which
//! sections it reads via [`Needs`]. Validation walks the whole document and
//! collects every problem as a `path.to.field: message` line instead of
//! stopping at the first.

use cavmix::{
    Axis, AxisProfile, CavitySpec3D, DriveSpec, GaussianState, ModeIndex3D, ProfileKind,
    ProfileWindow, QuadMethod, QuadratureSpec, ResonanceKind, Result, VectorProfile,
};
use serde::{Deserialize, Serialize};

/// Top-level configuration document.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub cavity: Option<CavityConfig>,
    /// Mode basis as (m, n, p) triples; order fixes matrix row order.
    pub modes: Option<Vec<[u32; 3]>>,
    pub profile: Option<ProfileConfig>,
    pub quadrature: Option<QuadratureConfig>,
    pub scan: Option<ScanConfig>,
    pub scenario: Option<ScenarioConfig>,
    pub entangle: Option<EntangleConfig>,
    pub timeseries: Option<TimeseriesConfig>,
}

/// Rectangular cavity. Mass may be given in natural units or in eV, not both.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    pub lengths_m: [f64; 3],
    pub mass_per_m: Option<f64>,
    pub mass_ev: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub tau0_m: f64,
    pub tau1_m: f64,
}

/// Acceleration drive: one shared window, one component per driven axis.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub window: WindowConfig,
    pub components: Vec<ComponentConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub axis: Axis,
    pub kind: KindConfig,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum KindConfig {
    Sinusoidal {
        amplitude_per_m: f64,
        omega_per_m: f64,
        #[serde(default)]
        phase_rad: f64,
    },
    PiecewiseConstant {
        segments: Vec<SegmentConfig>,
    },
    Sampled {
        dtau_m: f64,
        values_per_m: Vec<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentConfig {
    /// Absolute proper-time end of the segment; the last one must close the
    /// window.
    pub end_m: f64,
    pub accel_per_m: f64,
}

/// Integral evaluation settings; missing fields fall back to the library
/// defaults (closed form where available).
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub method: Option<MethodConfig>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodConfig {
    ClosedForm,
    Adaptive,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub omega_range_per_m: [f64; 2],
    /// Defaults to both kinds when omitted.
    pub kinds: Option<Vec<ResonanceKind>>,
    pub drive: Option<DriveConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    pub radius_m: f64,
    /// Element magnitude the drive aims for; 1.0 when omitted.
    pub target: Option<f64>,
}

/// Optical desktop setup: paraxial modes (m, n) at fixed wavelength,
/// transverse drive along x.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub lambda_m: f64,
    pub length_x_m: f64,
    pub m: u32,
    pub m_prime: u32,
    pub radius_m: Option<f64>,
    pub reference_rpm: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntangleConfig {
    /// Positions in the mode list whose mixing acts as the beamsplitter.
    pub pair: [usize; 2],
    /// Single-mode inputs riding the two positions, in pair order.
    pub inputs: [StateConfig; 2],
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum StateConfig {
    Vacuum,
    Coherent {
        alpha_re: f64,
        alpha_im: f64,
    },
    Thermal {
        nu: f64,
    },
    Squeezed {
        r: f64,
        #[serde(default)]
        phi_rad: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeseriesConfig {
    /// Window durations, one output row each; may be empty.
    pub durations_m: Vec<f64>,
    /// Tracked (row, column) positions in the mode list.
    pub pairs: Vec<[usize; 2]>,
}

/// Which sections a subcommand reads.
#[derive(Clone, Copy, Debug, Default)]
pub struct Needs {
    pub cavity: bool,
    pub modes: bool,
    pub profile: bool,
    pub scan: bool,
    pub scenario: bool,
    pub entangle: bool,
    pub timeseries: bool,
}

fn check_positive(errors: &mut Vec<String>, path: &str, v: f64) {
    if !v.is_finite() || v <= 0.0 {
        errors.push(format!("{path}: must be positive and finite, got {v}"));
    }
}

fn check_finite(errors: &mut Vec<String>, path: &str, v: f64) {
    if !v.is_finite() {
        errors.push(format!("{path}: must be finite, got {v}"));
    }
}

fn check_non_negative(errors: &mut Vec<String>, path: &str, v: f64) {
    if !v.is_finite() || v < 0.0 {
        errors.push(format!("{path}: must be non-negative and finite, got {v}"));
    }
}

impl RunConfig {
    /// Validates every present section plus the presence of the required
    /// ones, returning all problems at once.
    pub fn validate(&self, needs: &Needs) -> std::result::Result<(), Vec<String>> {
        let mut errors = Vec::new();
        let required: [(&str, bool, bool); 7] = [
            ("cavity", needs.cavity, self.cavity.is_some()),
            ("modes", needs.modes, self.modes.is_some()),
            ("profile", needs.profile, self.profile.is_some()),
            ("scan", needs.scan, self.scan.is_some()),
            ("scenario", needs.scenario, self.scenario.is_some()),
            ("entangle", needs.entangle, self.entangle.is_some()),
            ("timeseries", needs.timeseries, self.timeseries.is_some()),
        ];
        for (name, needed, present) in required {
            if needed && !present {
                errors.push(format!("{name}: section required by this subcommand"));
            }
        }

        if let Some(cavity) = &self.cavity {
            cavity.validate(&mut errors);
        }
        if let Some(modes) = &self.modes {
            validate_modes(modes, &mut errors);
        }
        if let Some(profile) = &self.profile {
            profile.validate(&mut errors);
        }
        if let Some(quad) = &self.quadrature {
            quad.validate(&mut errors);
        }
        if let Some(scan) = &self.scan {
            scan.validate(self.modes.as_deref(), &mut errors);
        }
        if let Some(scenario) = &self.scenario {
            scenario.validate(&mut errors);
        }
        if let Some(entangle) = &self.entangle {
            entangle.validate(self.modes.as_deref(), &mut errors);
        }
        if let Some(timeseries) = &self.timeseries {
            timeseries.validate(self.modes.as_deref(), &mut errors);
            if needs.timeseries {
                match &self.profile {
                    Some(p)
                        if p.components.len() == 1
                            && matches!(p.components[0].kind, KindConfig::Sinusoidal { .. }) => {}
                    Some(_) => errors.push(
                        "profile.components: timeseries needs exactly one sinusoidal component \
                         (the window is re-cut per duration)"
                            .into(),
                    ),
                    None => {}
                }
            }
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

impl CavityConfig {
    fn validate(&self, errors: &mut Vec<String>) {
        for (i, &l) in self.lengths_m.iter().enumerate() {
            check_positive(errors, &format!("cavity.lengths_m[{i}]"), l);
        }
        if self.mass_per_m.is_some() && self.mass_ev.is_some() {
            errors.push("cavity.mass_ev: give either mass_per_m or mass_ev, not both".into());
        }
        if let Some(mu) = self.mass_per_m {
            check_non_negative(errors, "cavity.mass_per_m", mu);
        }
        if let Some(ev) = self.mass_ev {
            check_non_negative(errors, "cavity.mass_ev", ev);
        }
    }

    pub fn build(&self) -> Result<CavitySpec3D> {
        let mu = match (self.mass_per_m, self.mass_ev) {
            (None, Some(ev)) => cavmix::units::mass_ev_to_per_m(ev),
            (mass, _) => mass.unwrap_or(0.0),
        };
        CavitySpec3D::new(self.lengths_m, mu)
    }
}

fn validate_modes(modes: &[[u32; 3]], errors: &mut Vec<String>) {
    if modes.is_empty() {
        errors.push("modes: list must not be empty".into());
    }
    for (i, mode) in modes.iter().enumerate() {
        for (k, &q) in mode.iter().enumerate() {
            if q == 0 {
                errors.push(format!("modes[{i}][{k}]: quantum number must be >= 1"));
            }
        }
        if modes[..i].contains(mode) {
            errors.push(format!("modes[{i}]: duplicate of an earlier mode"));
        }
    }
}

pub fn build_modes(modes: &[[u32; 3]]) -> Result<Vec<ModeIndex3D>> {
    modes
        .iter()
        .map(|&[m, n, p]| ModeIndex3D::new(m, n, p))
        .collect()
}

impl ProfileConfig {
    fn validate(&self, errors: &mut Vec<String>) {
        let tau0 = self.window.tau0_m;
        let tau1 = self.window.tau1_m;
        check_finite(errors, "profile.window.tau0_m", tau0);
        check_finite(errors, "profile.window.tau1_m", tau1);
        if tau0.is_finite() && tau1.is_finite() && tau1 <= tau0 {
            errors.push(format!(
                "profile.window.tau1_m: must exceed tau0_m, got {tau1} <= {tau0}"
            ));
        }
        if self.components.is_empty() {
            errors.push("profile.components: at least one driven axis required".into());
        }
        for (i, c) in self.components.iter().enumerate() {
            let path = format!("profile.components[{i}]");
            if self.components[..i].iter().any(|d| d.axis == c.axis) {
                errors.push(format!("{path}.axis: axis driven twice"));
            }
            c.kind.validate(&path, tau0, tau1, errors);
        }
    }

    /// Vector profile over the configured window.
    pub fn build(&self) -> Result<VectorProfile> {
        self.build_with_window(ProfileWindow::new(self.window.tau0_m, self.window.tau1_m)?)
    }

    /// Same drive re-cut to another window; used by the timeseries loop.
    pub fn build_with_window(&self, window: ProfileWindow) -> Result<VectorProfile> {
        let mut components = Vec::with_capacity(self.components.len());
        for c in &self.components {
            components.push((c.axis, AxisProfile::new(window, c.kind.to_kind())?));
        }
        VectorProfile::new(components)
    }
}

impl KindConfig {
    fn validate(&self, path: &str, tau0: f64, tau1: f64, errors: &mut Vec<String>) {
        match self {
            KindConfig::Sinusoidal {
                amplitude_per_m,
                omega_per_m,
                phase_rad,
            } => {
                check_finite(
                    errors,
                    &format!("{path}.kind.amplitude_per_m"),
                    *amplitude_per_m,
                );
                check_positive(errors, &format!("{path}.kind.omega_per_m"), *omega_per_m);
                check_finite(errors, &format!("{path}.kind.phase_rad"), *phase_rad);
            }
            KindConfig::PiecewiseConstant { segments } => {
                if segments.is_empty() {
                    errors.push(format!("{path}.kind.segments: must not be empty"));
                    return;
                }
                let mut prev = tau0;
                for (k, s) in segments.iter().enumerate() {
                    let spath = format!("{path}.kind.segments[{k}]");
                    check_finite(errors, &format!("{spath}.end_m"), s.end_m);
                    check_finite(errors, &format!("{spath}.accel_per_m"), s.accel_per_m);
                    if s.end_m.is_finite() && s.end_m <= prev {
                        errors.push(format!(
                            "{spath}.end_m: segment ends must increase, got {} after {prev}",
                            s.end_m
                        ));
                    }
                    prev = s.end_m;
                }
                if tau1.is_finite() && prev.is_finite() {
                    let tol = 1e-9 * (tau1 - tau0).abs().max(1.0);
                    if (prev - tau1).abs() > tol {
                        errors.push(format!(
                            "{path}.kind.segments: last end_m must close the window at {tau1}, \
                             got {prev}"
                        ));
                    }
                }
            }
            KindConfig::Sampled {
                dtau_m,
                values_per_m,
            } => {
                check_positive(errors, &format!("{path}.kind.dtau_m"), *dtau_m);
                if values_per_m.len() < 2 {
                    errors.push(format!("{path}.kind.values_per_m: need at least 2 samples"));
                }
                for (k, &v) in values_per_m.iter().enumerate() {
                    check_finite(errors, &format!("{path}.kind.values_per_m[{k}]"), v);
                }
                if *dtau_m > 0.0 && !values_per_m.is_empty() && tau1.is_finite() {
                    let grid_end = tau0 + dtau_m * (values_per_m.len() - 1) as f64;
                    if grid_end < tau1 - 1e-9 * (tau1 - tau0).abs().max(1.0) {
                        errors.push(format!(
                            "{path}.kind.values_per_m: grid ends at {grid_end}, before the \
                             window end {tau1}"
                        ));
                    }
                }
            }
        }
    }

    fn to_kind(&self) -> ProfileKind {
        match self {
            KindConfig::Sinusoidal {
                amplitude_per_m,
                omega_per_m,
                phase_rad,
            } => ProfileKind::Sinusoidal {
                amplitude: *amplitude_per_m,
                omega: *omega_per_m,
                phase: *phase_rad,
            },
            KindConfig::PiecewiseConstant { segments } => ProfileKind::PiecewiseConstant {
                segments: segments.iter().map(|s| (s.end_m, s.accel_per_m)).collect(),
            },
            KindConfig::Sampled {
                dtau_m,
                values_per_m,
            } => ProfileKind::Sampled {
                dtau: *dtau_m,
                values: values_per_m.clone(),
            },
        }
    }
}

impl QuadratureConfig {
    fn validate(&self, errors: &mut Vec<String>) {
        if let Some(t) = self.abs_tol {
            check_positive(errors, "quadrature.abs_tol", t);
        }
        if let Some(t) = self.rel_tol {
            check_positive(errors, "quadrature.rel_tol", t);
        }
        if let Some(n) = self.max_subdivisions {
            if n < 4 {
                errors.push(format!(
                    "quadrature.max_subdivisions: needs at least 4 panels, got {n}"
                ));
            }
        }
    }

    pub fn build(config: Option<&QuadratureConfig>) -> QuadratureSpec {
        let mut spec = QuadratureSpec::default();
        let Some(c) = config else { return spec };
        if let Some(m) = c.method {
            spec.method = match m {
                MethodConfig::ClosedForm => QuadMethod::ClosedForm,
                MethodConfig::Adaptive => QuadMethod::Adaptive,
            };
        }
        if let Some(t) = c.abs_tol {
            spec.abs_tol = t;
        }
        if let Some(t) = c.rel_tol {
            spec.rel_tol = t;
        }
        if let Some(n) = c.max_subdivisions {
            spec.max_subdivisions = n;
        }
        spec
    }
}

impl ScanConfig {
    fn validate(&self, modes: Option<&[[u32; 3]]>, errors: &mut Vec<String>) {
        let [lo, hi] = self.omega_range_per_m;
        check_non_negative(errors, "scan.omega_range_per_m[0]", lo);
        check_positive(errors, "scan.omega_range_per_m[1]", hi);
        if lo.is_finite() && hi.is_finite() && hi <= lo {
            errors.push(format!(
                "scan.omega_range_per_m[1]: must exceed the lower bound, got {hi} <= {lo}"
            ));
        }
        if let Some(kinds) = &self.kinds {
            if kinds.is_empty() {
                errors.push("scan.kinds: must not be empty when given".into());
            }
        }
        if let Some(drive) = &self.drive {
            check_non_negative(errors, "scan.drive.radius_m", drive.radius_m);
            if let Some(t) = drive.target {
                check_positive(errors, "scan.drive.target", t);
            }
        }
        if let Some(modes) = modes {
            if modes.len() < 2 {
                errors.push("modes: a scan needs at least 2 modes".into());
            }
        }
    }

    pub fn kinds(&self) -> Vec<ResonanceKind> {
        self.kinds
            .clone()
            .unwrap_or_else(|| vec![ResonanceKind::ModeMixing, ResonanceKind::ParticleCreation])
    }

    pub fn drive(&self) -> Option<DriveSpec> {
        self.drive.as_ref().map(|d| DriveSpec {
            radius: d.radius_m,
            target: d.target.unwrap_or(1.0),
        })
    }
}

impl ScenarioConfig {
    fn validate(&self, errors: &mut Vec<String>) {
        check_positive(errors, "scenario.lambda_m", self.lambda_m);
        check_positive(errors, "scenario.length_x_m", self.length_x_m);
        if self.m == 0 {
            errors.push("scenario.m: transverse quantum number must be >= 1".into());
        }
        if self.m_prime == 0 {
            errors.push("scenario.m_prime: transverse quantum number must be >= 1".into());
        }
        if self.m.abs_diff(self.m_prime).is_multiple_of(2) {
            errors.push(format!(
                "scenario.m_prime: must differ from m by an odd amount for mixing, \
                 got m = {} and m_prime = {}",
                self.m, self.m_prime
            ));
        }
        if let Some(r) = self.radius_m {
            check_non_negative(errors, "scenario.radius_m", r);
        }
        if let Some(rpm) = self.reference_rpm {
            check_positive(errors, "scenario.reference_rpm", rpm);
        }
    }
}

impl EntangleConfig {
    fn validate(&self, modes: Option<&[[u32; 3]]>, errors: &mut Vec<String>) {
        let [i, j] = self.pair;
        if i == j {
            errors.push(format!(
                "entangle.pair: positions must differ, got [{i}, {j}]"
            ));
        }
        if let Some(modes) = modes {
            for (k, &p) in self.pair.iter().enumerate() {
                if p >= modes.len() {
                    errors.push(format!(
                        "entangle.pair[{k}]: position {p} outside the {}-mode list",
                        modes.len()
                    ));
                }
            }
        }
        for (k, input) in self.inputs.iter().enumerate() {
            input.validate(&format!("entangle.inputs[{k}]"), errors);
        }
    }
}

impl StateConfig {
    fn validate(&self, path: &str, errors: &mut Vec<String>) {
        match self {
            StateConfig::Vacuum => {}
            StateConfig::Coherent { alpha_re, alpha_im } => {
                check_finite(errors, &format!("{path}.alpha_re"), *alpha_re);
                check_finite(errors, &format!("{path}.alpha_im"), *alpha_im);
            }
            StateConfig::Thermal { nu } => {
                if !nu.is_finite() || *nu < 1.0 {
                    errors.push(format!("{path}.nu: must be >= 1 (vacuum is 1), got {nu}"));
                }
            }
            StateConfig::Squeezed { r, phi_rad } => {
                check_finite(errors, &format!("{path}.r"), *r);
                check_finite(errors, &format!("{path}.phi_rad"), *phi_rad);
            }
        }
    }

    pub fn build(&self) -> Result<GaussianState> {
        match self {
            StateConfig::Vacuum => GaussianState::vacuum(1),
            StateConfig::Coherent { alpha_re, alpha_im } => {
                GaussianState::coherent(*alpha_re, *alpha_im)
            }
            StateConfig::Thermal { nu } => GaussianState::thermal(*nu),
            StateConfig::Squeezed { r, phi_rad } => cavmix::squeezed_vacuum(*r, *phi_rad),
        }
    }
}

impl TimeseriesConfig {
    fn validate(&self, modes: Option<&[[u32; 3]]>, errors: &mut Vec<String>) {
        for (k, &t) in self.durations_m.iter().enumerate() {
            check_positive(errors, &format!("timeseries.durations_m[{k}]"), t);
        }
        if self.pairs.is_empty() {
            errors.push("timeseries.pairs: at least one tracked pair required".into());
        }
        if let Some(modes) = modes {
            for (k, &[i, j]) in self.pairs.iter().enumerate() {
                for (c, p) in [(0, i), (1, j)] {
                    if p >= modes.len() {
                        errors.push(format!(
                            "timeseries.pairs[{k}][{c}]: position {p} outside the {}-mode list",
                            modes.len()
                        ));
                    }
                }
            }
        }
    }
}

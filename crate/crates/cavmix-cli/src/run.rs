//! Subcommand implementations and artifact writers.
//!
//! Everything numeric is computed in natural units and converted only while
//! formatting, so `--si` output equals `--natural` output times a power of
//! the speed of light. Writers iterate in config order and print floats with
//! the shortest round-trip representation; identical configs therefore give
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Serialize;

use cavmix::{
    bogoliubov_block_3d, entanglement_after_mixing, gate_from_mixing, resonance_scan,
    scenario_growth_rate, scenario_resonance, units, Axis, BogoliubovBlock, ModeBasis, ModeIndex3D,
    ProfileWindow, ResonanceKind, ResonancePrediction, TruncationDiagnostics, ValidityReport, C64,
};

use crate::config::{build_modes, QuadratureConfig, RunConfig, StateConfig};
use crate::CliError;

pub struct Options<'a> {
    pub out: &'a Path,
    pub si: bool,
}

impl Options<'_> {
    fn unit_system(&self) -> &'static str {
        if self.si {
            "si"
        } else {
            "natural"
        }
    }

    fn frequency(&self, omega_per_m: f64) -> f64 {
        if self.si {
            units::frequency_to_si(omega_per_m)
        } else {
            omega_per_m
        }
    }

    fn time(&self, tau_m: f64) -> f64 {
        if self.si {
            units::time_to_si(tau_m)
        } else {
            tau_m
        }
    }

    fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        fs::write(self.out.join(name), contents).map_err(CliError::Io)
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
        text.push('\n');
        self.write(name, &text)
    }
}

/// Sections already checked by `RunConfig::validate`; absence here is a bug,
/// not a user error, so unwrapping through this keeps the call sites honest.
fn section<'a, T>(section: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    section
        .as_ref()
        .ok_or_else(|| CliError::Config(vec![format!("{name}: section required")]))
}

// ---------------------------------------------------------------------------
// spectrum

#[derive(Serialize)]
struct SpectrumEntry {
    mode: [u32; 3],
    omega: f64,
}

#[derive(Serialize)]
struct SpectrumOut {
    unit_system: &'static str,
    entries: Vec<SpectrumEntry>,
}

pub fn spectrum(config: &RunConfig, opts: &Options) -> Result<(), CliError> {
    let cavity = section(&config.cavity, "cavity")?.build()?;
    let modes = build_modes(section(&config.modes, "modes")?)?;
    let entries = modes
        .iter()
        .map(|&mode| SpectrumEntry {
            mode: mode.as_array(),
            omega: opts.frequency(cavmix::mode_frequency_3d(&cavity, mode)),
        })
        .collect();
    opts.write_json(
        "spectrum.json",
        &SpectrumOut {
            unit_system: opts.unit_system(),
            entries,
        },
    )
}

// ---------------------------------------------------------------------------
// bogoliubov

type MatrixOut = Vec<Vec<[f64; 2]>>;

fn matrix_out(m: &DMatrix<C64>) -> MatrixOut {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct TruncationOut {
    ahat_norm: f64,
    bhat_norm: f64,
    ahat_edge_fraction: f64,
    bhat_edge_fraction: f64,
    suspect: bool,
}

impl From<&TruncationDiagnostics> for TruncationOut {
    fn from(t: &TruncationDiagnostics) -> Self {
        TruncationOut {
            ahat_norm: t.ahat_norm,
            bhat_norm: t.bhat_norm,
            ahat_edge_fraction: t.ahat_edge_fraction,
            bhat_edge_fraction: t.bhat_edge_fraction,
            suspect: t.suspect,
        }
    }
}

#[derive(Serialize)]
struct WindowOut {
    tau0: f64,
    tau1: f64,
}

#[derive(Serialize)]
struct BlockOut<'a> {
    unit_system: &'static str,
    basis: Vec<[u32; 3]>,
    window: WindowOut,
    /// Mode frequencies in the reporting unit, basis order.
    omegas: Vec<f64>,
    /// Complex matrices as row-major [re, im] pairs.
    alpha: MatrixOut,
    beta: MatrixOut,
    ahat: MatrixOut,
    bhat: MatrixOut,
    validity: &'a ValidityReport,
    truncation: TruncationOut,
    composition_residue: Option<f64>,
}

fn basis_triples(basis: &ModeBasis) -> Vec<[u32; 3]> {
    match basis {
        // The CLI only assembles 3D blocks; a 1D basis cannot reach here.
        ModeBasis::OneD(v) => v.iter().map(|n| [n.get(), 1, 1]).collect(),
        ModeBasis::ThreeD(v) => v.iter().map(|m| m.as_array()).collect(),
    }
}

fn build_block(config: &RunConfig) -> Result<BogoliubovBlock, CliError> {
    let cavity = section(&config.cavity, "cavity")?.build()?;
    let modes = build_modes(section(&config.modes, "modes")?)?;
    let profile = section(&config.profile, "profile")?.build()?;
    let quad = QuadratureConfig::build(config.quadrature.as_ref());
    Ok(bogoliubov_block_3d(&cavity, &profile, &modes, &quad)?)
}

fn block_out<'a>(block: &'a BogoliubovBlock, opts: &Options) -> BlockOut<'a> {
    let window = block.window();
    BlockOut {
        unit_system: opts.unit_system(),
        basis: basis_triples(block.basis()),
        window: WindowOut {
            tau0: opts.time(window.tau0()),
            tau1: opts.time(window.tau1()),
        },
        omegas: block.omegas().iter().map(|&w| opts.frequency(w)).collect(),
        alpha: matrix_out(block.alpha()),
        beta: matrix_out(block.beta()),
        ahat: matrix_out(block.ahat()),
        bhat: matrix_out(block.bhat()),
        validity: block.validity(),
        truncation: block.truncation().into(),
        composition_residue: block.composition_residue(),
    }
}

pub fn bogoliubov(config: &RunConfig, opts: &Options) -> Result<(), CliError> {
    let block = build_block(config)?;
    opts.write_json("block.json", &block_out(&block, opts))
}

// ---------------------------------------------------------------------------
// resonance-scan and scenario share the CSV schema

/// Fixed, versioned column set; frequencies and times are always SI here.
const SCAN_HEADER: &str = "kind,modeA,modeB,omega_r_per_s,rate_per_s,time_to_unity_s,flags";

fn mode_cell(mode: ModeIndex3D) -> String {
    let [m, n, p] = mode.as_array();
    format!("{m}-{n}-{p}")
}

fn option_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn scan_row(row: &mut String, prediction: &ResonancePrediction, flags: &str) {
    let rate = prediction.growth_rate.map(units::rate_to_si);
    let time = prediction.time_to_target.map(units::time_to_si);
    let _ = writeln!(
        row,
        "{},{},{},{},{},{},{}",
        prediction.kind,
        mode_cell(prediction.mode_a),
        mode_cell(prediction.mode_b),
        units::frequency_to_si(prediction.omega_r),
        option_cell(rate),
        option_cell(time),
        flags
    );
}

pub fn scan(config: &RunConfig, opts: &Options) -> Result<(), CliError> {
    let cavity = section(&config.cavity, "cavity")?.build()?;
    let modes = build_modes(section(&config.modes, "modes")?)?;
    let scan = section(&config.scan, "scan")?;
    let [lo, hi] = scan.omega_range_per_m;
    let drive = scan.drive();
    let predictions = resonance_scan(&cavity, &modes, (lo, hi), &scan.kinds(), drive.as_ref())?;
    let mut csv = String::from(SCAN_HEADER);
    csv.push('\n');
    for p in &predictions {
        let flags = if p.beyond_perturbative {
            "beyond-perturbative"
        } else {
            ""
        };
        scan_row(&mut csv, p, flags);
    }
    opts.write("scan.csv", &csv)
}

#[derive(Serialize)]
struct FeasibilityOut {
    omega_r_per_s: f64,
    required_rpm: f64,
    reference_rpm: f64,
    gap_factor: f64,
    gap_orders: f64,
}

#[derive(Serialize)]
struct ScenarioOut {
    m: u32,
    m_prime: u32,
    omega_r_per_m: f64,
    omega_r_per_s: f64,
    /// Laboratory oscillation frequency, cycles per second.
    oscillation_hz: f64,
    rate_per_m: Option<f64>,
    rate_per_s: Option<f64>,
    time_to_unity_s: Option<f64>,
    feasibility: FeasibilityOut,
}

pub fn scenario(config: &RunConfig, opts: &Options) -> Result<(), CliError> {
    let sc = section(&config.scenario, "scenario")?;
    let omega_r = scenario_resonance(sc.lambda_m, sc.length_x_m, sc.m, sc.m_prime)?;
    let rate = sc
        .radius_m
        .map(|r| scenario_growth_rate(sc.lambda_m, sc.length_x_m, sc.m, sc.m_prime, r))
        .transpose()?;
    let time_to_unity = rate.filter(|&r| r > 0.0).map(|r| 1.0 / r);

    // Transverse paraxial labels; the axial number is not part of the closed
    // form, so the prediction carries placeholder p = 1.
    let prediction = ResonancePrediction {
        kind: ResonanceKind::ModeMixing,
        mode_a: ModeIndex3D::new(sc.m, 1, 1)?,
        mode_b: ModeIndex3D::new(sc.m_prime, 1, 1)?,
        axis: Axis::X,
        omega_r,
        growth_rate: rate,
        time_to_target: time_to_unity,
        beyond_perturbative: true,
    };
    let reference = sc
        .reference_rpm
        .unwrap_or(cavmix::resonance::DEFAULT_REFERENCE_RPM);
    let feasibility = cavmix::feasibility_report(&prediction, reference)?;

    let mut csv = String::from(SCAN_HEADER);
    csv.push('\n');
    let _ = writeln!(
        csv,
        "{},{},{},{},{},{},paraxial;beyond-perturbative",
        ResonanceKind::ModeMixing,
        sc.m,
        sc.m_prime,
        feasibility.omega_r_per_s,
        option_cell(rate.map(units::rate_to_si)),
        option_cell(time_to_unity.map(units::time_to_si)),
    );
    opts.write("scenario.csv", &csv)?;

    opts.write_json(
        "scenario.json",
        &ScenarioOut {
            m: sc.m,
            m_prime: sc.m_prime,
            omega_r_per_m: omega_r,
            omega_r_per_s: feasibility.omega_r_per_s,
            oscillation_hz: units::angular_si_to_hz(feasibility.omega_r_per_s),
            rate_per_m: rate,
            rate_per_s: rate.map(units::rate_to_si),
            time_to_unity_s: time_to_unity.map(units::time_to_si),
            feasibility: FeasibilityOut {
                omega_r_per_s: feasibility.omega_r_per_s,
                required_rpm: feasibility.required_rpm,
                reference_rpm: feasibility.reference_rpm,
                gap_factor: feasibility.gap_factor,
                gap_orders: feasibility.gap_orders,
            },
        },
    )
}

// ---------------------------------------------------------------------------
// entangle

#[derive(Serialize)]
struct EntangleOut<'a> {
    pair: [usize; 2],
    inputs: &'a [StateConfig; 2],
    /// Logarithmic negativity of the input across the pair split.
    e_n_before: f64,
    /// Same after the block's two-mode mixing gate.
    e_n_after: f64,
    /// 4x4 symplectic gate in (x1, p1, x2, p2) quadrature order.
    gate: Vec<Vec<f64>>,
}

pub fn entangle(config: &RunConfig, opts: &Options) -> Result<(), CliError> {
    let block = build_block(config)?;
    let ent = section(&config.entangle, "entangle")?;
    let [i, j] = ent.pair;
    let gate = gate_from_mixing(&block, i, j)?;
    let state = ent.inputs[0].build()?.tensor(&ent.inputs[1].build()?);
    let (before, after) = entanglement_after_mixing(&state, &block, i, j)?;
    let g = gate.matrix();
    let gate_rows = (0..g.nrows())
        .map(|r| (0..g.ncols()).map(|c| g[(r, c)]).collect())
        .collect();
    opts.write_json(
        "entangle.json",
        &EntangleOut {
            pair: ent.pair,
            inputs: &ent.inputs,
            e_n_before: before,
            e_n_after: after,
            gate: gate_rows,
        },
    )
}

// ---------------------------------------------------------------------------
// timeseries

pub fn timeseries(config: &RunConfig, opts: &Options) -> Result<(), CliError> {
    let cavity = section(&config.cavity, "cavity")?.build()?;
    let modes = build_modes(section(&config.modes, "modes")?)?;
    let profile = section(&config.profile, "profile")?;
    let series = section(&config.timeseries, "timeseries")?;
    let quad = QuadratureConfig::build(config.quadrature.as_ref());
    let tau0 = profile.window.tau0_m;

    let mut csv = String::new();
    csv.push_str(if opts.si { "duration_s" } else { "duration_m" });
    for &[i, j] in &series.pairs {
        let _ = write!(csv, ",ahat_{i}_{j},bhat_{i}_{j}");
    }
    csv.push('\n');

    for &duration in &series.durations_m {
        let window = ProfileWindow::new(tau0, tau0 + duration)?;
        let block =
            bogoliubov_block_3d(&cavity, &profile.build_with_window(window)?, &modes, &quad)?;
        let _ = write!(csv, "{}", opts.time(duration));
        for &[i, j] in &series.pairs {
            let _ = write!(
                csv,
                ",{},{}",
                block.ahat()[(i, j)].norm(),
                block.bhat()[(i, j)].norm()
            );
        }
        csv.push('\n');
    }
    opts.write("timeseries.csv", &csv)
}

//! First-order Bogoliubov transformation of the cavity field.
//!
//! An acceleration window [tau0, tau1] maps mode operators linearly,
//! alpha collecting mode mixing and beta particle creation. With
//! h(tau) = L a(tau) and to first order in h,
//!
//! ```text
//! alpha = D (1 + Ahat),   beta = D Bhat,   D = diag(e^{i w_m (tau1 - tau0)})
//!
//! Ahat_mn = -i P_mn(w_m - w_n) I(w_m - w_n),   Ahat_nn = 0
//! Bhat_mn = +i P_mn(w_m + w_n) I(w_m + w_n)
//!
//! P_mn(Omega) = pi^2 m n (1 - (-1)^{m+n}) / (L^4 Omega^2 sqrt(w_m w_n))
//! I(Omega)    = integral e^{-i Omega (tau - tau0)} h(tau) dtau
//! ```
//!
//! The parity factor kills every pair with m + n even, so only modes whose
//! quantum numbers along the driven axis differ by an odd number talk to
//! each other. For a real drive these formulas make Ahat anti-Hermitian and
//! Bhat symmetric, which the tests check rather than impose.
//!
//! A 3D cavity driven along a wall axis separates: a pair of 3D modes
//! couples only if it differs along exactly one driven axis, and the element
//! is the 1D one after freezing the transverse numbers into the effective
//! mass ([`crate::cavity::reduce_to_1d`]).

use nalgebra::DMatrix;

use crate::cavity::{
    frequency_gap_1d, mode_frequency_1d, mode_frequency_3d, reduce_to_1d, Axis, CavitySpec1D,
    CavitySpec3D, ModeIndex1D, ModeIndex3D,
};
use crate::error::{Error, Result};
use crate::profiles::{
    validate_axis_profile, validate_vector_profile, AxisProfile, ProfileWindow, ValidityClass,
    ValidityReport, VectorProfile,
};
use crate::quadrature::{oscillatory_integral, QuadratureSpec};
use crate::C64;

/// Mode count used by convenience constructors when none is given.
pub const DEFAULT_MODE_COUNT: usize = 10;

/// Edge-of-basis fraction above which a block is flagged as truncated.
pub const EDGE_FRACTION_LIMIT: f64 = 0.5;

/// Which modes a block is expressed in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModeBasis {
    /// 1D modes 1..=N of a reduced cavity.
    OneD(Vec<ModeIndex1D>),
    /// Explicit list of 3D modes.
    ThreeD(Vec<ModeIndex3D>),
}

impl ModeBasis {
    pub fn len(&self) -> usize {
        match self {
            ModeBasis::OneD(v) => v.len(),
            ModeBasis::ThreeD(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, i: usize) -> String {
        match self {
            ModeBasis::OneD(v) => v[i].to_string(),
            ModeBasis::ThreeD(v) => v[i].to_string(),
        }
    }

    /// Positions of modes sitting on the boundary of the represented set:
    /// those carrying the maximal quantum number along some axis. Coupling
    /// mass concentrated here warns that the true dynamics continues into
    /// modes the block cannot see.
    pub fn edge_indices(&self) -> Vec<usize> {
        match self {
            ModeBasis::OneD(v) => {
                let max = v.iter().map(|m| m.get()).max().unwrap_or(0);
                v.iter()
                    .enumerate()
                    .filter(|(_, m)| m.get() == max)
                    .map(|(i, _)| i)
                    .collect()
            }
            ModeBasis::ThreeD(v) => {
                let mut maxima = [0u32; 3];
                for m in v {
                    for axis in Axis::ALL {
                        let q = m.component(axis);
                        maxima[axis.index()] = maxima[axis.index()].max(q);
                    }
                }
                v.iter()
                    .enumerate()
                    .filter(|(_, m)| {
                        Axis::ALL
                            .iter()
                            .any(|&a| m.component(a) == maxima[a.index()])
                    })
                    .map(|(i, _)| i)
                    .collect()
            }
        }
    }
}

/// How much of a block's coupling lives on the edge of its mode basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationDiagnostics {
    /// Frobenius norms of the two first-order matrices.
    pub ahat_norm: f64,
    pub bhat_norm: f64,
    /// Fraction of each norm in rows or columns of edge modes.
    pub ahat_edge_fraction: f64,
    pub bhat_edge_fraction: f64,
    /// Either fraction above [`EDGE_FRACTION_LIMIT`].
    pub suspect: bool,
}

fn edge_fraction(m: &DMatrix<C64>, edges: &[bool]) -> f64 {
    let mut total = 0.0;
    let mut edge = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let sq = m[(i, j)].norm_sqr();
            total += sq;
            if edges[i] || edges[j] {
                edge += sq;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        (edge / total).sqrt()
    }
}

fn truncation_diagnostics(
    basis: &ModeBasis,
    ahat: &DMatrix<C64>,
    bhat: &DMatrix<C64>,
) -> TruncationDiagnostics {
    let mut edges = vec![false; basis.len()];
    for i in basis.edge_indices() {
        edges[i] = true;
    }
    let ahat_edge_fraction = edge_fraction(ahat, &edges);
    let bhat_edge_fraction = edge_fraction(bhat, &edges);
    TruncationDiagnostics {
        ahat_norm: ahat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        bhat_norm: bhat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        ahat_edge_fraction,
        bhat_edge_fraction,
        suspect: ahat_edge_fraction > EDGE_FRACTION_LIMIT
            || bhat_edge_fraction > EDGE_FRACTION_LIMIT,
    }
}

/// Linear-order Bogoliubov transformation over one window, together with its
/// diagnostics. Obtained from [`bogoliubov_block_1d`], [`bogoliubov_block_3d`]
/// or [`compose`].
#[derive(Clone, Debug)]
pub struct BogoliubovBlock {
    basis: ModeBasis,
    omegas: Vec<f64>,
    window: ProfileWindow,
    alpha: DMatrix<C64>,
    beta: DMatrix<C64>,
    ahat: DMatrix<C64>,
    bhat: DMatrix<C64>,
    validity: ValidityReport,
    truncation: TruncationDiagnostics,
    composition_residue: Option<f64>,
}

impl BogoliubovBlock {
    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    /// Mode frequencies in basis order, 1/m.
    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn window(&self) -> ProfileWindow {
        self.window
    }

    pub fn alpha(&self) -> &DMatrix<C64> {
        &self.alpha
    }

    pub fn beta(&self) -> &DMatrix<C64> {
        &self.beta
    }

    pub fn ahat(&self) -> &DMatrix<C64> {
        &self.ahat
    }

    pub fn bhat(&self) -> &DMatrix<C64> {
        &self.bhat
    }

    pub fn validity(&self) -> &ValidityReport {
        &self.validity
    }

    pub fn truncation(&self) -> &TruncationDiagnostics {
        &self.truncation
    }

    /// For composed blocks, the max-norm gap between the exact composition
    /// and the additivity of first-order matrices; None for single windows.
    pub fn composition_residue(&self) -> Option<f64> {
        self.composition_residue
    }

    pub fn n_modes(&self) -> usize {
        self.basis.len()
    }

    /// Position of a 3D mode in the basis.
    pub fn position_3d(&self, mode: ModeIndex3D) -> Option<usize> {
        match &self.basis {
            ModeBasis::ThreeD(v) => v.iter().position(|m| *m == mode),
            ModeBasis::OneD(_) => None,
        }
    }

    /// Position of a 1D mode in the basis.
    pub fn position_1d(&self, mode: ModeIndex1D) -> Option<usize> {
        match &self.basis {
            ModeBasis::OneD(v) => v.iter().position(|m| *m == mode),
            ModeBasis::ThreeD(_) => None,
        }
    }
}

enum Channel {
    Mixing,
    Creation,
}

/// P_mn(Omega) for an odd pair. At exact resonance the element magnitude
/// grows as P h0 T / 2, which is also how predicted growth rates are built.
pub(crate) fn first_order_prefactor(
    cavity: &CavitySpec1D,
    m: ModeIndex1D,
    n: ModeIndex1D,
    omega: f64,
) -> f64 {
    let wm = mode_frequency_1d(cavity, m);
    let wn = mode_frequency_1d(cavity, n);
    let parity = 2.0; // 1 - (-1)^{m+n} for odd m + n
    parity * std::f64::consts::PI.powi(2) * f64::from(m.get()) * f64::from(n.get())
        / (cavity.length().powi(4) * omega * omega * (wm * wn).sqrt())
}

/// Common core of both element formulas. Kernel frequency and the leading
/// -i/+i differ per channel; everything else is shared.
fn element(
    cavity: &CavitySpec1D,
    m: ModeIndex1D,
    n: ModeIndex1D,
    profile: &AxisProfile,
    quad: &QuadratureSpec,
    channel: Channel,
) -> Result<C64> {
    if (m.get() + n.get()).is_multiple_of(2) {
        // Covers the diagonal too.
        return Ok(C64::new(0.0, 0.0));
    }
    let wm = mode_frequency_1d(cavity, m);
    let wn = mode_frequency_1d(cavity, n);
    let (omega, sign) = match channel {
        Channel::Mixing => (frequency_gap_1d(cavity, m, n), -1.0),
        Channel::Creation => (wm + wn, 1.0),
    };
    let prefactor = first_order_prefactor(cavity, m, n, omega);
    // I is over a(tau); the factor L turns it into the integral of h.
    let integral = oscillatory_integral(profile, omega, quad)?;
    Ok(C64::new(0.0, sign * prefactor * cavity.length()) * integral)
}

fn reject_hard_invalid(report: &ValidityReport) -> Result<()> {
    if report.class == ValidityClass::HardInvalid {
        return Err(Error::RigidityViolated {
            max_h: report.max_h,
        });
    }
    Ok(())
}

/// Single mixing element Ahat_mn. Zero on the diagonal and for even m + n.
pub fn ahat_element(
    cavity: &CavitySpec1D,
    m: ModeIndex1D,
    n: ModeIndex1D,
    profile: &AxisProfile,
    quad: &QuadratureSpec,
) -> Result<C64> {
    reject_hard_invalid(&validate_axis_profile(profile, cavity))?;
    element(cavity, m, n, profile, quad, Channel::Mixing)
}

/// Single creation element Bhat_mn. Zero for even m + n.
pub fn bhat_element(
    cavity: &CavitySpec1D,
    m: ModeIndex1D,
    n: ModeIndex1D,
    profile: &AxisProfile,
    quad: &QuadratureSpec,
) -> Result<C64> {
    reject_hard_invalid(&validate_axis_profile(profile, cavity))?;
    element(cavity, m, n, profile, quad, Channel::Creation)
}

/// diag(e^{i w T}) (1 + Ahat) and diag(e^{i w T}) Bhat.
fn assemble_alpha_beta(
    omegas: &[f64],
    duration: f64,
    ahat: &DMatrix<C64>,
    bhat: &DMatrix<C64>,
) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = omegas.len();
    let mut alpha = ahat.clone();
    for i in 0..n {
        alpha[(i, i)] += 1.0;
    }
    let mut beta = bhat.clone();
    for i in 0..n {
        let phase = C64::from_polar(1.0, omegas[i] * duration);
        for j in 0..n {
            alpha[(i, j)] *= phase;
            beta[(i, j)] *= phase;
        }
    }
    (alpha, beta)
}

/// Block over the first `n_modes` modes of a 1D cavity.
pub fn bogoliubov_block_1d(
    cavity: &CavitySpec1D,
    profile: &AxisProfile,
    n_modes: usize,
    quad: &QuadratureSpec,
) -> Result<BogoliubovBlock> {
    if n_modes < 2 {
        return Err(Error::InvalidMode(format!(
            "a block needs at least 2 modes, got {n_modes}"
        )));
    }
    let validity = validate_axis_profile(profile, cavity);
    reject_hard_invalid(&validity)?;
    let modes: Vec<ModeIndex1D> = (1..=n_modes as u32)
        .map(|n| ModeIndex1D::new(n).expect("n >= 1"))
        .collect();
    let omegas: Vec<f64> = modes
        .iter()
        .map(|&m| mode_frequency_1d(cavity, m))
        .collect();
    let n = modes.len();
    let mut ahat = DMatrix::zeros(n, n);
    let mut bhat = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            ahat[(i, j)] = element(cavity, modes[i], modes[j], profile, quad, Channel::Mixing)?;
            bhat[(i, j)] = element(cavity, modes[i], modes[j], profile, quad, Channel::Creation)?;
        }
    }
    let (alpha, beta) = assemble_alpha_beta(&omegas, profile.window().duration(), &ahat, &bhat);
    let basis = ModeBasis::OneD(modes);
    let truncation = truncation_diagnostics(&basis, &ahat, &bhat);
    Ok(BogoliubovBlock {
        basis,
        omegas,
        window: profile.window(),
        alpha,
        beta,
        ahat,
        bhat,
        validity,
        truncation,
        composition_residue: None,
    })
}

/// The driven axis along which two 3D modes couple: exactly one component
/// differs, by an odd amount, and that axis carries a profile. None means
/// the pair simply does not talk at first order.
fn coupling_axis(a: ModeIndex3D, b: ModeIndex3D, profile: &VectorProfile) -> Option<Axis> {
    let mut differing = None;
    for axis in Axis::ALL {
        if a.component(axis) != b.component(axis) {
            if differing.is_some() {
                return None;
            }
            differing = Some(axis);
        }
    }
    let axis = differing?;
    let delta = a.component(axis).abs_diff(b.component(axis));
    if delta.is_multiple_of(2) || profile.component(axis).is_none() {
        return None;
    }
    Some(axis)
}

/// Block over an explicit list of 3D modes under a vector drive.
pub fn bogoliubov_block_3d(
    cavity: &CavitySpec3D,
    profile: &VectorProfile,
    modes: &[ModeIndex3D],
    quad: &QuadratureSpec,
) -> Result<BogoliubovBlock> {
    if modes.len() < 2 {
        return Err(Error::InvalidMode(format!(
            "a block needs at least 2 modes, got {}",
            modes.len()
        )));
    }
    for (i, m) in modes.iter().enumerate() {
        if modes[..i].contains(m) {
            return Err(Error::InvalidMode(format!("duplicate mode {m} in basis")));
        }
    }
    let validity = validate_vector_profile(profile, cavity);
    reject_hard_invalid(&validity)?;
    let omegas: Vec<f64> = modes
        .iter()
        .map(|&m| mode_frequency_3d(cavity, m))
        .collect();
    let n = modes.len();
    let mut ahat = DMatrix::zeros(n, n);
    let mut bhat = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let Some(axis) = coupling_axis(modes[i], modes[j], profile) else {
                continue;
            };
            let reduced = reduce_to_1d(cavity, axis, modes[i].transverse(axis))?;
            let qi = ModeIndex1D::new(modes[i].component(axis))?;
            let qj = ModeIndex1D::new(modes[j].component(axis))?;
            let axis_profile = profile.component(axis).expect("coupling axis is driven");
            ahat[(i, j)] = element(&reduced, qi, qj, axis_profile, quad, Channel::Mixing)?;
            bhat[(i, j)] = element(&reduced, qi, qj, axis_profile, quad, Channel::Creation)?;
        }
    }
    let (alpha, beta) = assemble_alpha_beta(&omegas, profile.window().duration(), &ahat, &bhat);
    let basis = ModeBasis::ThreeD(modes.to_vec());
    let truncation = truncation_diagnostics(&basis, &ahat, &bhat);
    Ok(BogoliubovBlock {
        basis,
        omegas,
        window: profile.window(),
        alpha,
        beta,
        ahat,
        bhat,
        validity,
        truncation,
        composition_residue: None,
    })
}

fn scale_rows(phases: &[C64], m: &DMatrix<C64>) -> DMatrix<C64> {
    let mut out = m.clone();
    for i in 0..out.nrows() {
        for j in 0..out.ncols() {
            out[(i, j)] *= phases[i];
        }
    }
    out
}

/// Chains two windows over the same basis, with free evolution across any
/// gap between them:
///
/// ```text
/// alpha = alpha2 G alpha1 + beta2 (G beta1)*
/// beta  = alpha2 G beta1  + beta2 (G alpha1)*,   G = diag(e^{i w gap})
/// ```
///
/// The first-order matrices are re-extracted from the product, so the
/// composed block carries the exact second-order cross terms. Their distance
/// from plain first-order additivity (each window's matrices phase-referred
/// to the common start) is recorded as the composition residue; it shrinks
/// quadratically with the drive strength.
pub fn compose(first: &BogoliubovBlock, second: &BogoliubovBlock) -> Result<BogoliubovBlock> {
    if first.basis != second.basis {
        return Err(Error::BasisMismatch);
    }
    let gap = second.window.tau0() - first.window.tau1();
    if gap < 0.0 {
        return Err(Error::WindowsNotOrdered {
            end_first: first.window.tau1(),
            start_second: second.window.tau0(),
        });
    }
    let omegas = &first.omegas;
    let gap_phases: Vec<C64> = omegas
        .iter()
        .map(|w| C64::from_polar(1.0, w * gap))
        .collect();
    let a1 = scale_rows(&gap_phases, &first.alpha);
    let b1 = scale_rows(&gap_phases, &first.beta);
    let alpha = &second.alpha * &a1 + &second.beta * b1.conjugate();
    let beta = &second.alpha * b1 + &second.beta * a1.conjugate();

    let window = ProfileWindow::new(first.window.tau0(), second.window.tau1())?;
    let duration = window.duration();
    let n = first.n_modes();
    let mut ahat = DMatrix::zeros(n, n);
    let mut bhat = DMatrix::zeros(n, n);
    for i in 0..n {
        let undo = C64::from_polar(1.0, -omegas[i] * duration);
        for j in 0..n {
            ahat[(i, j)] = undo * alpha[(i, j)];
            bhat[(i, j)] = undo * beta[(i, j)];
        }
        ahat[(i, i)] -= 1.0;
    }

    // First-order additivity reference: each window's matrices referred to
    // tau0 of the combined window picks up e^{-i (w_m -+ w_n) dt}.
    let dt = second.window.tau0() - first.window.tau0();
    let mut residue = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let mix = C64::from_polar(1.0, -(omegas[i] - omegas[j]) * dt);
            let cre = C64::from_polar(1.0, -(omegas[i] + omegas[j]) * dt);
            let lin_a = first.ahat[(i, j)] + mix * second.ahat[(i, j)];
            let lin_b = first.bhat[(i, j)] + cre * second.bhat[(i, j)];
            residue = residue.max((ahat[(i, j)] - lin_a).norm());
            residue = residue.max((bhat[(i, j)] - lin_b).norm());
        }
    }

    let basis = first.basis.clone();
    let truncation = truncation_diagnostics(&basis, &ahat, &bhat);
    Ok(BogoliubovBlock {
        basis,
        omegas: omegas.clone(),
        window,
        alpha,
        beta,
        ahat,
        bhat,
        validity: first.validity.merge(&second.validity),
        truncation,
        composition_residue: Some(residue),
    })
}

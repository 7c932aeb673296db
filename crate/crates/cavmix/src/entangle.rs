//! Gaussian states through a mixing block, and how entangled they come out.
//!
//! Quadratures are ordered (x1, p1, x2, p2, ...) with vacuum covariance the
//! identity, so a symplectic matrix S obeys S Omega S^T = Omega for
//! Omega = blkdiag([[0, 1], [-1, 0]], ...). A resonant mixing element acts
//! on its mode pair as a beamsplitter: the two-mode restriction of
//! exp(Ahat) is unitary when particle creation is negligible, and its
//! quadrature representation is an orthogonal symplectic gate.
//!
//! Entanglement of a two-mode Gaussian state is measured by the logarithmic
//! negativity E_N = max(0, -ln nu~), where nu~ is the smaller symplectic
//! eigenvalue of the partial transpose. For covariance blocks A, B, C,
//!
//! ```text
//! Delta~ = det A + det B - 2 det C
//! nu~^2  = (Delta~ - sqrt(Delta~^2 - 4 det sigma)) / 2
//! ```
//!
//! Squeezed vacua fed into a 50:50 mixing gate with a quarter-period phase
//! offset between their squeezing axes combine into a two-mode squeezed
//! state with E_N = 2r; mixing manufactures entanglement out of separable
//! squeezed inputs but never out of vacuum or thermal ones.

use nalgebra::{DMatrix, DVector};

use crate::bogoliubov::BogoliubovBlock;
use crate::error::{Error, Result};
use crate::C64;

/// Physicality slack on the uncertainty bound nu >= 1.
const PHYSICALITY_TOL: f64 = 1e-8;

/// Creation-to-mixing norm ratio above which a pair is not a beamsplitter.
pub const PASSIVE_RATIO_LIMIT: f64 = 1e-3;

/// blkdiag of [[0, 1], [-1, 0]] per mode.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Mean vector and covariance matrix in (x1, p1, x2, p2, ...) order.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validates shape and symmetry; physicality is checked where it
    /// matters, so diagnosing an unphysical matrix stays possible.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::InvalidCovariance(format!(
                "need a positive even quadrature dimension, got {dim}"
            )));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "mean has {dim} entries but covariance is {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().any(|v| !v.is_finite()) || cov.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCovariance("non-finite entry".into()));
        }
        let scale = cov.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
        for i in 0..dim {
            for j in 0..i {
                if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-10 * scale {
                    return Err(Error::InvalidCovariance(format!(
                        "not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(GaussianState { mean, cov })
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidCovariance("need at least one mode".into()));
        }
        Ok(GaussianState {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes),
        })
    }

    /// Single-mode coherent state: vacuum noise displaced to
    /// (sqrt(2) Re alpha, sqrt(2) Im alpha).
    pub fn coherent(alpha_re: f64, alpha_im: f64) -> Result<Self> {
        if !alpha_re.is_finite() || !alpha_im.is_finite() {
            return Err(Error::InvalidCovariance("non-finite displacement".into()));
        }
        let s = 2.0_f64.sqrt();
        Ok(GaussianState {
            mean: DVector::from_vec(vec![s * alpha_re, s * alpha_im]),
            cov: DMatrix::identity(2, 2),
        })
    }

    /// Single-mode thermal state, nu = 2 n_th + 1 >= 1.
    pub fn thermal(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 1.0 {
            return Err(Error::InvalidCovariance(format!(
                "thermal parameter must be >= 1, got {nu}"
            )));
        }
        Ok(GaussianState {
            mean: DVector::zeros(2),
            cov: DMatrix::identity(2, 2) * nu,
        })
    }

    /// Tensor product, this state's modes first.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let n = self.mean.len() + other.mean.len();
        let mut mean = DVector::zeros(n);
        let mut cov = DMatrix::zeros(n, n);
        let k = self.mean.len();
        mean.rows_mut(0, k).copy_from(&self.mean);
        mean.rows_mut(k, other.mean.len()).copy_from(&other.mean);
        cov.view_mut((0, 0), (k, k)).copy_from(&self.cov);
        cov.view_mut((k, k), (other.mean.len(), other.mean.len()))
            .copy_from(&other.cov);
        GaussianState { mean, cov }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Symplectic spectrum: the k positive numbers nu with +-i nu the
    /// eigenvalues of Omega sigma, descending. All >= 1 for physical states,
    /// all = 1 exactly for pure ones.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_spectrum_of(&self.cov)
    }

    pub fn is_physical(&self) -> bool {
        self.symplectic_eigenvalues()
            .last()
            .map(|nu| *nu >= 1.0 - PHYSICALITY_TOL)
            .unwrap_or(false)
    }
}

fn symplectic_spectrum_of(cov: &DMatrix<f64>) -> Vec<f64> {
    let n_modes = cov.nrows() / 2;
    let m = symplectic_form(n_modes) * cov;
    let eig = m.complex_eigenvalues();
    let mut mags: Vec<f64> = eig.iter().map(|z| z.im.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    // Eigenvalues come in +-i nu pairs; keep one of each.
    mags.into_iter().step_by(2).collect()
}

/// Single-mode squeezed vacuum: variance e^{-2r} along the axis at angle
/// phi/2 in phase space (phi = 0 squeezes x).
pub fn squeezed_vacuum(r: f64, phi: f64) -> Result<GaussianState> {
    if !r.is_finite() || !phi.is_finite() {
        return Err(Error::InvalidCovariance(
            "squeezing parameters must be finite".into(),
        ));
    }
    let (s, c) = phi.sin_cos();
    let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    let core = DMatrix::from_diagonal(&DVector::from_vec(vec![(-2.0 * r).exp(), (2.0 * r).exp()]));
    let cov = &rot * core * rot.transpose();
    GaussianState::new(DVector::zeros(2), cov)
}

/// Quadrature representation of a mode-space unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticGate {
    matrix: DMatrix<f64>,
}

impl SymplecticGate {
    pub fn identity(n_modes: usize) -> Self {
        SymplecticGate {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Embeds a unitary U on annihilation operators as the orthogonal
    /// symplectic matrix with 2x2 blocks [[Re U, -Im U], [Im U, Re U]].
    pub fn from_mode_unitary(u: &DMatrix<C64>) -> Result<Self> {
        let k = u.nrows();
        if k == 0 || u.ncols() != k {
            return Err(Error::DimensionMismatch(format!(
                "mode unitary must be square and non-empty, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        let defect = (u * u.adjoint() - DMatrix::identity(k, k))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > 1e-8 {
            return Err(Error::InvalidGenerator(format!(
                "matrix is not unitary, |U U+ - 1| = {defect:.3e}"
            )));
        }
        let mut s = DMatrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            for j in 0..k {
                let c = u[(i, j)].re;
                let d = u[(i, j)].im;
                s[(2 * i, 2 * j)] = c;
                s[(2 * i, 2 * j + 1)] = -d;
                s[(2 * i + 1, 2 * j)] = d;
                s[(2 * i + 1, 2 * j + 1)] = c;
            }
        }
        Ok(SymplecticGate { matrix: s })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// Max-norm of S Omega S^T - Omega; zero for a true symplectic matrix.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        (&self.matrix * &omega * self.matrix.transpose() - omega)
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }

    /// Passive gates are orthogonal: they shuffle quanta without creating
    /// any.
    pub fn is_passive(&self) -> bool {
        let n = self.matrix.nrows();
        (self.matrix.transpose() * &self.matrix - DMatrix::identity(n, n))
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
            < 1e-10
    }
}

/// sigma -> S sigma S^T, mean -> S mean.
pub fn apply_gate(state: &GaussianState, gate: &SymplecticGate) -> Result<GaussianState> {
    if gate.matrix.nrows() != state.mean.len() {
        return Err(Error::DimensionMismatch(format!(
            "gate acts on {} quadratures, state has {}",
            gate.matrix.nrows(),
            state.mean.len()
        )));
    }
    GaussianState::new(
        &gate.matrix * &state.mean,
        &gate.matrix * &state.cov * gate.matrix.transpose(),
    )
}

/// The beamsplitter a mixing block applies to the mode pair at basis
/// positions (i, j): exp of the anti-Hermitian off-diagonal part of the
/// 2x2 restriction of Ahat.
///
/// Fails with [`Error::NotPassive`] when the pair's particle creation is
/// not negligible against its mixing, since the two-mode restriction then
/// is not a unitary on the pair at all.
pub fn gate_from_mixing(block: &BogoliubovBlock, i: usize, j: usize) -> Result<SymplecticGate> {
    let n = block.n_modes();
    if i >= n || j >= n {
        return Err(Error::DimensionMismatch(format!(
            "pair ({i}, {j}) out of range for a {n}-mode block"
        )));
    }
    if i == j {
        return Err(Error::DimensionMismatch(
            "pair must name two distinct modes".into(),
        ));
    }
    let ahat = block.ahat();
    let bhat = block.bhat();
    let pair_norm = |m: &DMatrix<C64>| -> f64 {
        (m[(i, j)].norm_sqr() + m[(j, i)].norm_sqr() + m[(i, i)].norm_sqr() + m[(j, j)].norm_sqr())
            .sqrt()
    };
    let ahat_norm = pair_norm(ahat);
    let bhat_norm = pair_norm(bhat);
    if bhat_norm > PASSIVE_RATIO_LIMIT * ahat_norm {
        return Err(Error::NotPassive {
            ahat_norm,
            bhat_norm,
        });
    }
    // The generator must be anti-Hermitian up to the same higher-order slack
    // tolerated for Bhat; beyond that the block is not a mixing gate.
    let herm_defect = (ahat[(i, j)] + ahat[(j, i)].conj())
        .norm()
        .max(ahat[(i, i)].norm().max(ahat[(j, j)].norm()));
    if herm_defect > PASSIVE_RATIO_LIMIT * ahat_norm.max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidGenerator(format!(
            "anti-Hermitian defect {herm_defect:.3e} vs pair norm {ahat_norm:.3e}"
        )));
    }
    let g = 0.5 * (ahat[(i, j)] - ahat[(j, i)].conj());
    let theta = g.norm();
    let (diag, off) = if theta == 0.0 {
        (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    } else {
        (C64::new(theta.cos(), 0.0), g * (theta.sin() / theta))
    };
    let mut u = DMatrix::zeros(2, 2);
    u[(0, 0)] = diag;
    u[(0, 1)] = off;
    u[(1, 0)] = -off.conj();
    u[(1, 1)] = diag;
    SymplecticGate::from_mode_unitary(&u)
}

/// E_N of a two-mode Gaussian state from the smallest symplectic
/// eigenvalue of the partially transposed covariance.
///
/// The spectrum is read from the eigenvalues of Omega sigma~ rather than
/// from the determinant invariants: the invariant route takes a square
/// root of a cancelling difference and loses half the digits exactly at
/// the separability boundary, where E_N = 0 must come out clean.
pub fn log_negativity(state: &GaussianState) -> Result<f64> {
    if state.n_modes() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "log negativity is defined here for 2 modes, got {}",
            state.n_modes()
        )));
    }
    let nus = state.symplectic_eigenvalues();
    if nus.last().copied().unwrap_or(0.0) < 1.0 - PHYSICALITY_TOL {
        return Err(Error::InvalidCovariance(format!(
            "state violates the uncertainty bound: min nu = {:.12}",
            nus.last().unwrap()
        )));
    }
    let nu_min = *symplectic_spectrum_of(&partial_transpose(state.cov()))
        .last()
        .expect("two-mode spectrum");
    if nu_min <= 0.0 {
        return Err(Error::InvalidCovariance(
            "partial-transpose spectrum degenerated to zero".into(),
        ));
    }
    Ok((-nu_min.ln()).max(0.0))
}

/// Mirrors the second mode's momentum: sigma~ = P sigma P, P = diag(1,1,1,-1).
fn partial_transpose(cov: &DMatrix<f64>) -> DMatrix<f64> {
    let mut pt = cov.clone();
    for k in 0..4 {
        pt[(3, k)] = -pt[(3, k)];
    }
    for k in 0..4 {
        pt[(k, 3)] = -pt[(k, 3)];
    }
    pt
}

/// Sends a two-mode Gaussian state through the mixing gate of the block
/// pair at basis positions (i, j); state mode 0 rides block mode i.
/// Returns the logarithmic negativity (before, after).
pub fn entanglement_after_mixing(
    state: &GaussianState,
    block: &BogoliubovBlock,
    i: usize,
    j: usize,
) -> Result<(f64, f64)> {
    if state.n_modes() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a 2-mode input, got {} modes",
            state.n_modes()
        )));
    }
    let gate = gate_from_mixing(block, i, j)?;
    let before = log_negativity(state)?;
    let after = log_negativity(&apply_gate(state, &gate)?)?;
    Ok((before, after))
}

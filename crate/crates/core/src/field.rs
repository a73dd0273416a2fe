//! Thermal scalar field on a periodic 1-D grid under Gaussian smoothing.
//!
//! Every momentum mode `k` is an independent oscillator with
//! `ω_k = sqrt(m² + k²)` and thermal covariance
//! `A_k = coth(βω_k/2)/2 · diag(1/ω_k, ω_k)`. The channel is translation
//! invariant: `X_k = e^{-σ²k²/2} 𝟙₂` and `Y_k = (y/2)(1 − x_k²) 𝟙₂`, so the
//! effect on first moments is a convolution with a Gaussian of width `σ`.
//! All kernels are diagonal per mode and are applied to sampled data as
//! momentum-space multipliers.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::dvector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rustfft::{num_complex::Complex64, FftPlanner};

use crate::adjoint::{transpose_kernel_with, KernelOptions, MetricKind, ReconstructionKernel};
use crate::gaussian::{GaussianChannel, GaussianState};
use crate::imtime::DEFAULT_EPSILON_PURITY;
use crate::recon::{from_kernel, ReconstructionMethod};
use crate::symplectic::standard_symplectic_form;
use crate::{Error, PhaseMatrix, Result};

/// Off-diagonal bound for a per-mode kernel block to count as diagonal.
pub const BLOCK_DIAGONAL_TOL: f64 = 1e-8;

/// Bound on the imaginary residue of an inverse FFT.
pub const FFT_REALNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldModel {
    pub n_sites: usize,
    pub lattice_spacing: f64,
    pub beta: f64,
    /// Infrared regulator; `0` leaves the zero mode excluded.
    pub mass: f64,
    pub sigma: f64,
    /// Noise floor, `y ≥ 1`.
    pub y: f64,
    pub metric: MetricKind,
    pub lambda: f64,
    pub epsilon_purity: f64,
}

impl Default for FieldModel {
    fn default() -> Self {
        Self {
            n_sites: 128,
            lattice_spacing: 1.0,
            beta: 0.01,
            mass: 1e-6,
            sigma: 2.0,
            y: 1.0,
            metric: MetricKind::SquareRoot,
            lambda: 0.0,
            epsilon_purity: DEFAULT_EPSILON_PURITY,
        }
    }
}

impl FieldModel {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n_sites < 2 || !self.n_sites.is_power_of_two() {
            return bad(format!(
                "n_sites must be a power of two >= 2, got {}",
                self.n_sites
            ));
        }
        if !(self.lattice_spacing > 0.0 && self.lattice_spacing.is_finite()) {
            return bad(format!(
                "lattice_spacing must be > 0, got {}",
                self.lattice_spacing
            ));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be > 0, got {}", self.beta));
        }
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return bad(format!("mass must be >= 0, got {}", self.mass));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma must be >= 0, got {}", self.sigma));
        }
        if !(self.y >= 1.0 && self.y.is_finite()) {
            return bad(format!(
                "y must be >= 1 for the channel to be completely positive, got {}",
                self.y
            ));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be >= 0, got {}", self.lambda));
        }
        if !(self.epsilon_purity > 0.0 && self.epsilon_purity < 0.5) {
            return bad(format!(
                "epsilon_purity must lie in (0, 1/2), got {}",
                self.epsilon_purity
            ));
        }
        Ok(())
    }

    pub fn kernel_options(&self) -> KernelOptions {
        KernelOptions {
            epsilon_purity: self.epsilon_purity,
            ..KernelOptions::default()
        }
    }

    /// Signed mode index `j ∈ [−N/2, N/2)` for FFT bin `b`.
    pub fn mode_index(&self, bin: usize) -> i64 {
        let n = self.n_sites as i64;
        let b = bin as i64;
        if b < n / 2 {
            b
        } else {
            b - n
        }
    }

    /// FFT bin holding mode index `j`.
    pub fn bin(&self, j: i64) -> usize {
        j.rem_euclid(self.n_sites as i64) as usize
    }

    pub fn momentum(&self, j: i64) -> f64 {
        2.0 * PI * j as f64 / (self.n_sites as f64 * self.lattice_spacing)
    }

    pub fn frequency(&self, k: f64) -> f64 {
        (self.mass * self.mass + k * k).sqrt()
    }

    /// First-moment transmission `e^{-σ²k²/2}`.
    pub fn transmission(&self, k: f64) -> f64 {
        (-0.5 * self.sigma * self.sigma * k * k).exp()
    }

    /// Mode indices in ascending order, `−N/2 … N/2 − 1`.
    pub fn mode_indices(&self) -> impl Iterator<Item = i64> {
        let half = (self.n_sites / 2) as i64;
        -half..half
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeStatus {
    Ok,
    /// The noisy mode is too close to pure for the square-root kernel.
    ExcludedPure,
    /// `ω = 0` without a mass regulator; passed through unchanged.
    ExcludedZeroMode,
}

impl ModeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeStatus::Ok => "ok",
            ModeStatus::ExcludedPure => "excluded-pure",
            ModeStatus::ExcludedZeroMode => "excluded-zero-mode",
        }
    }
}

impl fmt::Display for ModeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModeStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(ModeStatus::Ok),
            "excluded-pure" => Ok(ModeStatus::ExcludedPure),
            "excluded-zero-mode" => Ok(ModeStatus::ExcludedZeroMode),
            other => Err(Error::InvalidParameter(format!(
                "unknown mode status {other:?}"
            ))),
        }
    }
}

/// 2×2 prior, channel and noisy covariance of a single mode.
#[derive(Debug, Clone)]
pub struct ModeMatrices {
    pub prior: GaussianState,
    pub channel: GaussianChannel,
    pub noisy_cov: PhaseMatrix,
}

#[derive(Debug, Clone)]
pub struct ModeBlock {
    pub j: i64,
    pub k: f64,
    pub omega: f64,
    pub x: f64,
    /// `None` for an unregulated zero mode.
    pub matrices: Option<ModeMatrices>,
}

impl ModeBlock {
    pub fn status_hint(&self) -> ModeStatus {
        if self.matrices.is_none() {
            ModeStatus::ExcludedZeroMode
        } else {
            ModeStatus::Ok
        }
    }
}

pub fn build_mode_block(model: &FieldModel, j: i64) -> Result<ModeBlock> {
    let k = model.momentum(j);
    let omega = model.frequency(k);
    let x = model.transmission(k);
    if omega == 0.0 {
        return Ok(ModeBlock {
            j,
            k,
            omega,
            x,
            matrices: None,
        });
    }
    let form = standard_symplectic_form(1)?;
    let nu = 0.5 / (0.5 * model.beta * omega).tanh();
    let a = PhaseMatrix::from_diagonal(&dvector![nu / omega, nu * omega]);
    let eye = PhaseMatrix::identity(2, 2);
    let channel = GaussianChannel::new(
        eye.scale(x),
        eye.scale(0.5 * model.y * (1.0 - x * x)),
        form.clone(),
    )?;
    let noisy_cov = channel.map_covariance(&a);
    Ok(ModeBlock {
        j,
        k,
        omega,
        x,
        matrices: Some(ModeMatrices {
            prior: GaussianState::new(a, form)?,
            channel,
            noisy_cov,
        }),
    })
}

/// Per-mode blocks in ascending mode order.
pub fn build_mode_blocks(model: &FieldModel) -> Result<Vec<ModeBlock>> {
    model.validate()?;
    model
        .mode_indices()
        .map(|j| build_mode_block(model, j))
        .collect()
}

fn mode_kernel(
    model: &FieldModel,
    mats: &ModeMatrices,
    metric: MetricKind,
) -> Result<ReconstructionKernel> {
    transpose_kernel_with(metric, &mats.prior, &mats.channel, &model.kernel_options())
}

fn diagonal_entries(m: &PhaseMatrix) -> Option<(f64, f64)> {
    let off = m[(0, 1)].abs().max(m[(1, 0)].abs());
    if off < BLOCK_DIAGONAL_TOL && m[(0, 0)].is_finite() && m[(1, 1)].is_finite() {
        Some((m[(0, 0)], m[(1, 1)]))
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub j: i64,
    pub k: f64,
    pub omega: f64,
    pub x: f64,
    pub eig_q: f64,
    pub eig_p: f64,
    pub naive_inverse: f64,
    pub status: ModeStatus,
}

/// Diagonal entries of the per-mode `X_*` blocks for one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpectrum {
    pub metric: MetricKind,
    pub rows: Vec<SpectrumRow>,
}

impl KernelSpectrum {
    pub fn ok_rows(&self) -> impl Iterator<Item = &SpectrumRow> {
        self.rows.iter().filter(|r| r.status == ModeStatus::Ok)
    }
}

pub fn kernel_spectrum(model: &FieldModel) -> Result<KernelSpectrum> {
    kernel_spectrum_for(model, model.metric)
}

/// Spectrum for `metric`, ignoring `model.metric`. Modes whose kernel cannot
/// be computed (near-pure noisy state, or a residue that fails the realness
/// or diagonality checks) are kept with status `excluded-pure`.
pub fn kernel_spectrum_for(model: &FieldModel, metric: MetricKind) -> Result<KernelSpectrum> {
    let blocks = build_mode_blocks(model)?;
    let rows = blocks
        .iter()
        .map(|blk| {
            let naive_inverse = 1.0 / blk.x;
            let (eig_q, eig_p, status) = match &blk.matrices {
                None => (1.0, 1.0, ModeStatus::ExcludedZeroMode),
                Some(mats) => match mode_kernel(model, mats, metric)
                    .ok()
                    .and_then(|k| diagonal_entries(k.x_star()))
                {
                    Some((q, p)) => (q, p, ModeStatus::Ok),
                    None => (f64::NAN, f64::NAN, ModeStatus::ExcludedPure),
                },
            };
            SpectrumRow {
                j: blk.j,
                k: blk.k,
                omega: blk.omega,
                x: blk.x,
                eig_q,
                eig_p,
                naive_inverse,
                status,
            }
        })
        .collect();
    Ok(KernelSpectrum { metric, rows })
}

/// Momentum-space multipliers indexed by FFT bin, one set per quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMultipliers {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    /// Mode indices zeroed out because their kernel could not be formed.
    pub excluded: Vec<i64>,
}

impl ModeMultipliers {
    pub fn uniform(n: usize, value: f64) -> Self {
        Self {
            q: vec![value; n],
            p: vec![value; n],
            excluded: Vec::new(),
        }
    }
}

/// Forward channel on first moments: `x_k` on both quadratures.
pub fn forward_multipliers(model: &FieldModel) -> Result<ModeMultipliers> {
    model.validate()?;
    let mut out = ModeMultipliers::uniform(model.n_sites, 0.0);
    for j in model.mode_indices() {
        let b = model.bin(j);
        let x = model.transmission(model.momentum(j));
        out.q[b] = x;
        out.p[b] = x;
    }
    Ok(out)
}

/// Multipliers of `M_rec` for `method`, mode by mode.
///
/// The unregulated zero mode passes through (multiplier 1). For kernel-based
/// methods a mode whose kernel cannot be formed is zeroed and listed in
/// `excluded`; the naive inverse instead fails on a vanishing transmission.
pub fn reconstruction_multipliers(
    model: &FieldModel,
    method: ReconstructionMethod,
) -> Result<ModeMultipliers> {
    method.validate()?;
    let blocks = build_mode_blocks(model)?;
    let mut out = ModeMultipliers::uniform(model.n_sites, 0.0);
    for blk in &blocks {
        let b = model.bin(blk.j);
        let Some(mats) = &blk.matrices else {
            out.q[b] = 1.0;
            out.p[b] = 1.0;
            continue;
        };
        let (q, p) = match method.metric() {
            None => {
                let inv = 1.0 / blk.x;
                if !inv.is_finite() {
                    return Err(Error::SingularMatrix(format!(
                        "transmission underflows at k = {} (naive inverse)",
                        blk.k
                    )));
                }
                (inv, inv)
            }
            Some(metric) => {
                let m = mode_kernel(model, mats, metric)
                    .and_then(|kernel| from_kernel(method, &kernel))
                    .ok()
                    .and_then(|m| diagonal_entries(&m));
                match m {
                    Some(qp) => qp,
                    None => {
                        out.excluded.push(blk.j);
                        (0.0, 0.0)
                    }
                }
            }
        };
        out.q[b] = q;
        out.p[b] = p;
    }
    Ok(out)
}

/// Sampled first moments: field and conjugate quadratures per site.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldData {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub lattice_spacing: f64,
}

impl FieldData {
    pub fn zeros(n: usize, lattice_spacing: f64) -> Self {
        Self {
            q: vec![0.0; n],
            p: vec![0.0; n],
            lattice_spacing,
        }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Site positions `x_j = j·a`.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.len())
            .map(|j| j as f64 * self.lattice_spacing)
            .collect()
    }

    fn check(&self, model: &FieldModel) -> Result<()> {
        if self.q.len() != model.n_sites || self.p.len() != model.n_sites {
            return Err(Error::InvalidDimension(format!(
                "field data has {}/{} sites, model has {}",
                self.q.len(),
                self.p.len(),
                model.n_sites
            )));
        }
        Ok(())
    }
}

fn apply_multiplier(
    signal: &[f64],
    mult: &[f64],
    planner: &mut FftPlanner<f64>,
) -> Result<Vec<f64>> {
    let n = signal.len();
    let mut buf: Vec<Complex64> = signal.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    for (z, &m) in buf.iter_mut().zip(mult) {
        *z *= m;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    // roundoff in the imaginary part is set by the largest multiplier times the input
    let gain = mult.iter().fold(0.0_f64, |acc, m| acc.max(m.abs()));
    let input = signal.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let imag = buf.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    if imag * scale > FFT_REALNESS_TOL * (gain * input).max(1.0) {
        return Err(Error::NumericalFailure(format!(
            "inverse FFT left an imaginary residue of {:e}",
            imag * scale
        )));
    }
    Ok(buf.iter().map(|z| z.re * scale).collect())
}

/// Multiplies each quadrature by its momentum-space multipliers.
pub fn apply_kernel_fft(
    model: &FieldModel,
    multipliers: &ModeMultipliers,
    data: &FieldData,
) -> Result<FieldData> {
    data.check(model)?;
    if multipliers.q.len() != model.n_sites || multipliers.p.len() != model.n_sites {
        return Err(Error::InvalidDimension(format!(
            "{} multipliers for {} sites",
            multipliers.q.len(),
            model.n_sites
        )));
    }
    let mut planner = FftPlanner::new();
    Ok(FieldData {
        q: apply_multiplier(&data.q, &multipliers.q, &mut planner)?,
        p: apply_multiplier(&data.p, &multipliers.p, &mut planner)?,
        lattice_spacing: data.lattice_spacing,
    })
}

/// Smoothed `truth` plus i.i.d. Gaussian noise of standard deviation
/// `noise_std` on every site and quadrature, reproducible from `seed`.
pub fn simulate_measurement(
    model: &FieldModel,
    truth: &FieldData,
    noise_std: f64,
    seed: u64,
) -> Result<FieldData> {
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise_std must be >= 0, got {noise_std}"
        )));
    }
    let mut out = apply_kernel_fft(model, &forward_multipliers(model)?, truth)?;
    if noise_std > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal =
            Normal::new(0.0, noise_std).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        for v in out.q.iter_mut().chain(out.p.iter_mut()) {
            *v += normal.sample(&mut rng);
        }
    }
    Ok(out)
}

/// Test signal: Gaussian bumps of standard deviation `4a` at sites `N/4`
/// (amplitude 1) and `5N/8` (amplitude −0.6); `p` is zero.
pub fn bumps(model: &FieldModel) -> FieldData {
    let n = model.n_sites;
    let a = model.lattice_spacing;
    let width = 4.0 * a;
    let centers = [(n as f64 / 4.0 * a, 1.0), (5.0 * n as f64 / 8.0 * a, -0.6)];
    let q = (0..n)
        .map(|j| {
            let x = j as f64 * a;
            centers
                .iter()
                .map(|&(c, amp)| amp * (-(x - c).powi(2) / (2.0 * width * width)).exp())
                .sum()
        })
        .collect();
    FieldData {
        q,
        p: vec![0.0; n],
        lattice_spacing: a,
    }
}

/// Dense real-space circulant for bin multipliers, by direct DFT sums.
pub fn dense_circulant(mult: &[f64]) -> PhaseMatrix {
    let n = mult.len();
    let mut c = PhaseMatrix::zeros(n, n);
    for r in 0..n {
        for s in 0..n {
            let d = (r + n - s) % n;
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, &m) in mult.iter().enumerate() {
                let phase = 2.0 * PI * ((b * d) % n) as f64 / n as f64;
                acc += Complex64::from_polar(m, phase);
            }
            c[(r, s)] = acc.re / n as f64;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small(sigma: f64) -> FieldModel {
        FieldModel {
            n_sites: 32,
            sigma,
            ..FieldModel::default()
        }
    }

    #[test]
    fn default_model_is_valid() {
        FieldModel::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_parameters() {
        let cases = [
            FieldModel {
                n_sites: 100,
                ..FieldModel::default()
            },
            FieldModel {
                y: 0.5,
                ..FieldModel::default()
            },
            FieldModel {
                beta: 0.0,
                ..FieldModel::default()
            },
            FieldModel {
                lattice_spacing: -1.0,
                ..FieldModel::default()
            },
            FieldModel {
                lambda: -0.1,
                ..FieldModel::default()
            },
        ];
        for m in cases {
            assert!(m.validate().is_err(), "{m:?}");
        }
    }

    #[test]
    fn grid_layout() {
        let m = small(1.0);
        assert_eq!(m.mode_index(0), 0);
        assert_eq!(m.mode_index(15), 15);
        assert_eq!(m.mode_index(16), -16);
        assert_eq!(m.mode_index(31), -1);
        for j in m.mode_indices() {
            assert_eq!(m.mode_index(m.bin(j)), j);
        }
        assert_abs_diff_eq!(m.momentum(-16), -PI, epsilon = 1e-15);
    }

    #[test]
    fn regulated_zero_mode() {
        let m = FieldModel {
            mass: 0.3,
            ..small(1.0)
        };
        let blk = build_mode_block(&m, 0).unwrap();
        let mats = blk.matrices.unwrap();
        let nu = 0.5 / (0.5 * m.beta * 0.3_f64).tanh();
        assert_abs_diff_eq!(mats.prior.cov()[(0, 0)], nu / 0.3, epsilon = 1e-9);
        assert_abs_diff_eq!(mats.prior.cov()[(1, 1)], nu * 0.3, epsilon = 1e-12);
    }

    #[test]
    fn massless_zero_mode_is_excluded() {
        let m = FieldModel {
            mass: 0.0,
            ..small(2.0)
        };
        let s = kernel_spectrum(&m).unwrap();
        let zero = s.rows.iter().find(|r| r.j == 0).unwrap();
        assert_eq!(zero.status, ModeStatus::ExcludedZeroMode);
        let mult = reconstruction_multipliers(&m, ReconstructionMethod::Wiener).unwrap();
        assert_eq!(mult.q[0], 1.0);
    }

    #[test]
    fn high_momentum_noisy_modes_approach_vacuum() {
        let m = FieldModel::default();
        let blk = build_mode_block(&m, -64).unwrap();
        let b = blk.matrices.unwrap().noisy_cov;
        assert_abs_diff_eq!(b, PhaseMatrix::identity(2, 2).scale(0.5), epsilon = 1e-6);
    }

    #[test]
    fn unit_noise_floor_saturates_channels() {
        for blk in build_mode_blocks(&FieldModel::default()).unwrap() {
            let mats = blk.matrices.unwrap();
            let r = crate::gaussian::validate_channel(&mats.channel);
            assert!(r.ok, "k = {}: {}", blk.k, r.min_eig);
        }
    }

    #[test]
    fn no_smoothing_gives_identity_spectrum() {
        let m = small(0.0);
        for metric in MetricKind::ALL {
            let s = kernel_spectrum_for(&m, metric).unwrap();
            for r in &s.rows {
                assert_eq!(r.status, ModeStatus::Ok);
                assert_abs_diff_eq!(r.eig_q, 1.0, epsilon = 1e-9);
                assert_abs_diff_eq!(r.eig_p, 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn unit_multipliers_leave_data_alone() {
        let m = small(1.0);
        let data = bumps(&m);
        let out = apply_kernel_fft(&m, &ModeMultipliers::uniform(32, 1.0), &data).unwrap();
        for (x, y) in out.q.iter().zip(&data.q) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-14);
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let m = small(1.0);
        let data = FieldData::zeros(16, 1.0);
        assert!(apply_kernel_fft(&m, &ModeMultipliers::uniform(32, 1.0), &data).is_err());
    }

    #[test]
    fn simulation_is_deterministic() {
        let m = small(1.0);
        let truth = bumps(&m);
        let a = simulate_measurement(&m, &truth, 1e-3, 7).unwrap();
        let b = simulate_measurement(&m, &truth, 1e-3, 7).unwrap();
        let c = simulate_measurement(&m, &truth, 1e-3, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn noiseless_simulation_is_pure_convolution() {
        let m = small(1.0);
        let truth = bumps(&m);
        let sim = simulate_measurement(&m, &truth, 0.0, 3).unwrap();
        let conv = apply_kernel_fft(&m, &forward_multipliers(&m).unwrap(), &truth).unwrap();
        assert_eq!(sim, conv);
    }

    #[test]
    fn bumps_fixture_shape() {
        let m = FieldModel::default();
        let b = bumps(&m);
        assert_abs_diff_eq!(b.q[32], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.q[80], -0.6, epsilon = 1e-12);
        assert!(b.p.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn status_strings_round_trip() {
        for s in [
            ModeStatus::Ok,
            ModeStatus::ExcludedPure,
            ModeStatus::ExcludedZeroMode,
        ] {
            assert_eq!(s.as_str().parse::<ModeStatus>().unwrap(), s);
        }
    }
}

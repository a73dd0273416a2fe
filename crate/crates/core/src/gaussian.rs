//! Gaussian states and Gaussian channels on a finite phase space.

use crate::symplectic::{
    complexify, hermitian_min_eig, max_abs, phase_dim, with_half_i_form, SymplecticForm,
    POSITIVITY_SLACK,
};
use crate::{Error, PhaseMatrix, PhaseVector, Result};

/// Bound on `‖A − Aᵀ‖_max` for a covariance to count as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Gaussian state: covariance `A`, first moments and the symplectic form.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cov: PhaseMatrix,
    mean: PhaseVector,
    form: SymplecticForm,
}

impl GaussianState {
    /// Zero-mean state with covariance `cov`.
    pub fn new(cov: PhaseMatrix, form: SymplecticForm) -> Result<Self> {
        let dim = form.dim();
        Self::with_mean(cov, PhaseVector::zeros(dim), form)
    }

    pub fn with_mean(cov: PhaseMatrix, mean: PhaseVector, form: SymplecticForm) -> Result<Self> {
        let n = phase_dim(&cov)?;
        if n != form.modes() {
            return Err(Error::InvalidDimension(format!(
                "covariance has {n} modes, symplectic form has {}",
                form.modes()
            )));
        }
        if mean.len() != form.dim() {
            return Err(Error::InvalidDimension(format!(
                "mean has length {}, expected {}",
                mean.len(),
                form.dim()
            )));
        }
        Ok(Self { cov, mean, form })
    }

    pub fn cov(&self) -> &PhaseMatrix {
        &self.cov
    }

    pub fn mean(&self) -> &PhaseVector {
        &self.mean
    }

    pub fn form(&self) -> &SymplecticForm {
        &self.form
    }
}

/// Outcome of a validity check. `min_eig` is the smallest eigenvalue of the
/// Hermitian matrix whose positivity is being tested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub ok: bool,
    pub min_eig: f64,
    /// `‖M − Mᵀ‖_max` of the symmetric input (covariance or `Y`).
    pub asymmetry: f64,
}

pub fn validate_state(s: &GaussianState) -> ValidityReport {
    validate_state_with(s, POSITIVITY_SLACK)
}

pub fn validate_state_with(s: &GaussianState, slack: f64) -> ValidityReport {
    let asymmetry = max_abs(&(&s.cov - s.cov.transpose()));
    let min_eig = hermitian_min_eig(&with_half_i_form(&s.cov, &s.form)).unwrap_or(f64::NAN);
    ValidityReport {
        ok: asymmetry < SYMMETRY_TOL && min_eig >= -slack,
        min_eig,
        asymmetry,
    }
}

/// Form of the complete-positivity condition on `(X, Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelCondition {
    /// `Y + (i/2)Δ − (i/2)XᵀΔX ≥ 0`; accepts the identity channel.
    #[default]
    Standard,
    /// `Y + (i/2)XᵀΔX + (i/2)Δ ≥ 0`, kept for comparison only.
    PlusSign,
}

/// Gaussian channel acting as `A ↦ XᵀAX + Y` on covariances and
/// `F ↦ XᵀF` on first moments.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    x: PhaseMatrix,
    y: PhaseMatrix,
    form: SymplecticForm,
}

impl GaussianChannel {
    pub fn new(x: PhaseMatrix, y: PhaseMatrix, form: SymplecticForm) -> Result<Self> {
        let nx = phase_dim(&x)?;
        let ny = phase_dim(&y)?;
        if nx != form.modes() || ny != form.modes() {
            return Err(Error::InvalidDimension(format!(
                "channel matrices have {nx} and {ny} modes, symplectic form has {}",
                form.modes()
            )));
        }
        Ok(Self { x, y, form })
    }

    pub fn identity(form: SymplecticForm) -> Self {
        let d = form.dim();
        Self {
            x: PhaseMatrix::identity(d, d),
            y: PhaseMatrix::zeros(d, d),
            form,
        }
    }

    pub fn x(&self) -> &PhaseMatrix {
        &self.x
    }

    pub fn y(&self) -> &PhaseMatrix {
        &self.y
    }

    pub fn form(&self) -> &SymplecticForm {
        &self.form
    }

    /// Covariance map `A ↦ XᵀAX + Y`, symmetrized.
    pub fn map_covariance(&self, a: &PhaseMatrix) -> PhaseMatrix {
        let b = self.x.transpose() * a * &self.x + &self.y;
        (&b + b.transpose()).scale(0.5)
    }

    /// The channel obtained by applying `self` and then `next`:
    /// `(X₁X₂, X₂ᵀY₁X₂ + Y₂)`.
    pub fn then(&self, next: &GaussianChannel) -> Result<GaussianChannel> {
        if self.form != next.form {
            return Err(Error::InvalidDimension(
                "composed channels act on different phase spaces".into(),
            ));
        }
        let x = &self.x * &next.x;
        let y = next.x.transpose() * &self.y * &next.x + &next.y;
        GaussianChannel::new(x, y, self.form.clone())
    }
}

pub fn validate_channel(c: &GaussianChannel) -> ValidityReport {
    validate_channel_with(c, ChannelCondition::Standard, POSITIVITY_SLACK)
}

pub fn validate_channel_with(
    c: &GaussianChannel,
    condition: ChannelCondition,
    slack: f64,
) -> ValidityReport {
    let d = c.form.matrix();
    let twisted = c.x.transpose() * d * &c.x;
    let sign = match condition {
        ChannelCondition::Standard => -1.0,
        ChannelCondition::PlusSign => 1.0,
    };
    let m = complexify(&c.y)
        + c.form.half_i()
        + complexify(&twisted).scale(sign) * crate::C64::new(0.0, 0.5);
    let min_eig = hermitian_min_eig(&m).unwrap_or(f64::NAN);
    let asymmetry = max_abs(&(&c.y - c.y.transpose()));
    ValidityReport {
        ok: asymmetry < SYMMETRY_TOL && min_eig >= -slack,
        min_eig,
        asymmetry,
    }
}

/// Applies a valid channel to a valid state.
pub fn apply_channel(c: &GaussianChannel, s: &GaussianState) -> Result<GaussianState> {
    if c.form != s.form {
        return Err(Error::InvalidDimension(format!(
            "channel acts on {} modes, state has {}",
            c.form.modes(),
            s.form.modes()
        )));
    }
    let rc = validate_channel(c);
    if !rc.ok {
        return Err(Error::InvalidChannel(format!(
            "complete-positivity condition fails (min eigenvalue {:e})",
            rc.min_eig
        )));
    }
    let rs = validate_state(s);
    if !rs.ok {
        return Err(Error::InvalidState(format!(
            "uncertainty relation fails (min eigenvalue {:e})",
            rs.min_eig
        )));
    }
    let cov = c.map_covariance(&s.cov);
    let mean = c.x.transpose() * &s.mean;
    GaussianState::with_mean(cov, mean, s.form.clone())
}

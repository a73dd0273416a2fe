//! Metric adjoints of a Gaussian channel on the first-moment sector.
//!
//! Given a prior covariance `A` and a channel `(X, Y)` with `B = XᵀAX + Y`,
//! the adjoint kernel `X_*` is the phase-space matrix for which
//! `N_*†(φ_f) = φ_{X_* f}`:
//!
//! * square-root metric (Petz transpose channel):
//!   `X_* = R^B_{-1/2} (B + i/2 Δ)⁻¹ Xᵀ (A + i/2 Δ) R^A_{1/2}`;
//! * Bures metric, and the classical Fisher metric: `X_* = B⁻¹ Xᵀ A`.
//!
//! The square-root product is assembled in complex arithmetic and only
//! truncated to a real matrix after its imaginary part has been measured.

use std::fmt;
use std::str::FromStr;

use crate::gaussian::{GaussianChannel, GaussianState};
use crate::imtime::{propagator_from_williamson, DEFAULT_EPSILON_PURITY};
use crate::symplectic::{
    complexify, max_abs, max_abs_complex, williamson, with_half_i_form, SymplecticForm,
};
use crate::{ComplexPhaseMatrix, ComplexPhaseVector, Error, PhaseMatrix, Result, C64};

/// Relative bound on the imaginary part of a square-root kernel.
pub const REALNESS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    SquareRoot,
    Bures,
    ClassicalFisher,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [
        MetricKind::SquareRoot,
        MetricKind::Bures,
        MetricKind::ClassicalFisher,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::SquareRoot => "sqrt",
            MetricKind::Bures => "bures",
            MetricKind::ClassicalFisher => "classical",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sqrt" | "square-root" | "squareroot" | "petz" => Ok(MetricKind::SquareRoot),
            "bures" => Ok(MetricKind::Bures),
            "classical" | "fisher" | "classical-fisher" => Ok(MetricKind::ClassicalFisher),
            other => Err(Error::InvalidParameter(format!(
                "unknown metric {other:?} (expected sqrt, bures or classical)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub epsilon_purity: f64,
    pub realness_tol: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self {
            epsilon_purity: DEFAULT_EPSILON_PURITY,
            realness_tol: REALNESS_TOL,
        }
    }
}

/// An adjoint kernel `X_*` and everything it was computed from.
#[derive(Debug, Clone)]
pub struct ReconstructionKernel {
    x_star: PhaseMatrix,
    metric: MetricKind,
    prior_cov: PhaseMatrix,
    noisy_cov: PhaseMatrix,
    x: PhaseMatrix,
    y: PhaseMatrix,
    form: SymplecticForm,
    imag_max: f64,
    /// `(R^A_{1/2}, R^B_{1/2})`, square-root kernels only.
    half_propagators: Option<(ComplexPhaseMatrix, ComplexPhaseMatrix)>,
}

impl ReconstructionKernel {
    pub fn x_star(&self) -> &PhaseMatrix {
        &self.x_star
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn prior_cov(&self) -> &PhaseMatrix {
        &self.prior_cov
    }

    pub fn noisy_cov(&self) -> &PhaseMatrix {
        &self.noisy_cov
    }

    pub fn channel_x(&self) -> &PhaseMatrix {
        &self.x
    }

    pub fn channel_y(&self) -> &PhaseMatrix {
        &self.y
    }

    pub fn form(&self) -> &SymplecticForm {
        &self.form
    }

    /// Largest imaginary entry discarded when truncating to a real matrix.
    pub fn imag_max(&self) -> f64 {
        self.imag_max
    }

    /// Eigenvalues of `X·X_*`, i.e. of `N_*N` restricted to first moments.
    pub fn sector_eigenvalues(&self) -> Vec<C64> {
        (&self.x * &self.x_star)
            .complex_eigenvalues()
            .iter()
            .copied()
            .collect()
    }

    /// Whether every sector eigenvalue is real and in `[0, 1]` up to `tol`.
    pub fn is_contraction(&self, tol: f64) -> bool {
        self.sector_eigenvalues()
            .iter()
            .all(|l| l.im.abs() < tol && l.re >= -tol && l.re <= 1.0 + tol)
    }

    /// `max|R^A_{1/2}| · max|R^B_{1/2}|`, the factor by which the square-root
    /// assembly can amplify roundoff; 1 for the other metrics.
    pub fn propagator_scale(&self) -> f64 {
        match &self.half_propagators {
            Some((r_a, r_b)) => max_abs_complex(r_a) * max_abs_complex(r_b),
            None => 1.0,
        }
    }

    /// Gram matrix of the metric on prior first moments: `A` for Bures and
    /// classical, `(A + i/2 Δ) R^A_{1/2}` (real in exact arithmetic) for the
    /// square-root metric.
    pub fn prior_gram(&self) -> PhaseMatrix {
        match &self.half_propagators {
            Some((r_a, _)) => {
                let g = (with_half_i_form(&self.prior_cov, &self.form) * r_a).map(|z| z.re);
                (&g + g.transpose()).scale(0.5)
            }
            None => self.prior_cov.clone(),
        }
    }

    /// Operator norm of `X·X_*` in the prior metric, where it is self-adjoint.
    /// The plain Euclidean norm can exceed one for anisotropic priors.
    pub fn weighted_sector_norm(&self) -> Result<f64> {
        let eig = self.prior_gram().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::NumericalFailure(
                "metric Gram matrix is not positive definite".into(),
            ));
        }
        let v = &eig.eigenvectors;
        let half = v * PhaseMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * v.transpose();
        let inv_half = v
            * PhaseMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()))
            * v.transpose();
        let t = half * (&self.x * &self.x_star) * inv_half;
        Ok(t.singular_values().max())
    }
}

fn check_same_space(prior: &GaussianState, chan: &GaussianChannel) -> Result<()> {
    if prior.form() != chan.form() {
        return Err(Error::InvalidDimension(format!(
            "prior has {} modes, channel acts on {}",
            prior.form().modes(),
            chan.form().modes()
        )));
    }
    Ok(())
}

/// `R_b (B + i/2 Δ)⁻¹ Xᵀ (A + i/2 Δ) R_a` with the factors supplied.
///
/// `a_form`/`b_form` are `A + i/2 Δ` and `B + i/2 Δ`; the classical limit
/// passes the bare covariances and identity propagators.
pub fn assemble_sqrt_kernel(
    a_form: &ComplexPhaseMatrix,
    b_form: &ComplexPhaseMatrix,
    x: &PhaseMatrix,
    r_a_half: &ComplexPhaseMatrix,
    r_b_minus_half: &ComplexPhaseMatrix,
) -> Result<ComplexPhaseMatrix> {
    let rhs = complexify(&x.transpose()) * a_form * r_a_half;
    let inner = b_form
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularMatrix("B + (i/2)Δ is not invertible".into()))?;
    Ok(r_b_minus_half * inner)
}

fn truncate_real(k: &ComplexPhaseMatrix, tol: f64) -> Result<(PhaseMatrix, f64)> {
    let re = k.map(|z| z.re);
    let imag = k.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    let scale = max_abs(&re);
    if !(imag <= tol * scale) {
        return Err(Error::NotReal { imag, scale });
    }
    Ok((re, imag))
}

pub fn transpose_kernel_sqrt(
    prior: &GaussianState,
    chan: &GaussianChannel,
) -> Result<ReconstructionKernel> {
    transpose_kernel_sqrt_with(prior, chan, &KernelOptions::default())
}

/// Petz transpose kernel.
pub fn transpose_kernel_sqrt_with(
    prior: &GaussianState,
    chan: &GaussianChannel,
    opts: &KernelOptions,
) -> Result<ReconstructionKernel> {
    check_same_space(prior, chan)?;
    let form = chan.form();
    let a = prior.cov();
    let b = chan.map_covariance(a);

    let wa = williamson(a, form)?;
    let wb = williamson(&b, form).map_err(|e| match e {
        Error::InvalidState(msg) => Error::SingularMatrix(format!("noisy covariance: {msg}")),
        other => other,
    })?;
    let eps = opts.epsilon_purity;
    let r_a_half = propagator_from_williamson(a, &wa, form, 0.5, eps)?.matrix;
    let r_b_minus = propagator_from_williamson(&b, &wb, form, -0.5, eps)?.matrix;
    let r_b_half = propagator_from_williamson(&b, &wb, form, 0.5, eps)?.matrix;

    let a_form = with_half_i_form(a, form);
    let b_form = with_half_i_form(&b, form);
    let k = assemble_sqrt_kernel(&a_form, &b_form, chan.x(), &r_a_half, &r_b_minus).map_err(
        |e| match e {
            Error::SingularMatrix(_) => Error::SingularMatrix(format!(
                "B + (i/2)Δ is singular (smallest symplectic eigenvalue {})",
                wb.nu.last().copied().unwrap_or(f64::NAN)
            )),
            other => other,
        },
    )?;
    let (x_star, imag_max) = truncate_real(&k, opts.realness_tol)?;

    Ok(ReconstructionKernel {
        x_star,
        metric: MetricKind::SquareRoot,
        prior_cov: a.clone(),
        noisy_cov: b,
        x: chan.x().clone(),
        y: chan.y().clone(),
        form: form.clone(),
        imag_max,
        half_propagators: Some((r_a_half, r_b_half)),
    })
}

/// The square-root assembly with `Δ = 0` and `R ≡ 𝟙`, the classical limit.
/// Returned with the `ClassicalFisher` tag.
pub fn transpose_kernel_sqrt_classical_limit(
    prior: &GaussianState,
    chan: &GaussianChannel,
) -> Result<ReconstructionKernel> {
    check_same_space(prior, chan)?;
    let a = prior.cov();
    let b = chan.map_covariance(a);
    let id = ComplexPhaseMatrix::identity(a.nrows(), a.ncols());
    let k = assemble_sqrt_kernel(&complexify(a), &complexify(&b), chan.x(), &id, &id)?;
    let (x_star, imag_max) = truncate_real(&k, REALNESS_TOL)?;
    Ok(ReconstructionKernel {
        x_star,
        metric: MetricKind::ClassicalFisher,
        prior_cov: a.clone(),
        noisy_cov: b,
        x: chan.x().clone(),
        y: chan.y().clone(),
        form: chan.form().clone(),
        imag_max,
        half_propagators: None,
    })
}

/// `X_* = B⁻¹ Xᵀ A`.
pub fn transpose_kernel_bures(
    prior: &GaussianState,
    chan: &GaussianChannel,
) -> Result<ReconstructionKernel> {
    check_same_space(prior, chan)?;
    let a = prior.cov();
    let b = chan.map_covariance(a);
    let x_star = b
        .clone()
        .lu()
        .solve(&(chan.x().transpose() * a))
        .ok_or_else(|| Error::SingularMatrix("noisy covariance B is not invertible".into()))?;
    if x_star.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix(
            "noisy covariance B is numerically singular".into(),
        ));
    }
    Ok(ReconstructionKernel {
        x_star,
        metric: MetricKind::Bures,
        prior_cov: a.clone(),
        noisy_cov: b,
        x: chan.x().clone(),
        y: chan.y().clone(),
        form: chan.form().clone(),
        imag_max: 0.0,
        half_propagators: None,
    })
}

pub fn transpose_kernel(
    metric: MetricKind,
    prior: &GaussianState,
    chan: &GaussianChannel,
) -> Result<ReconstructionKernel> {
    transpose_kernel_with(metric, prior, chan, &KernelOptions::default())
}

pub fn transpose_kernel_with(
    metric: MetricKind,
    prior: &GaussianState,
    chan: &GaussianChannel,
    opts: &KernelOptions,
) -> Result<ReconstructionKernel> {
    match metric {
        MetricKind::SquareRoot => transpose_kernel_sqrt_with(prior, chan, opts),
        MetricKind::Bures => transpose_kernel_bures(prior, chan),
        MetricKind::ClassicalFisher => {
            let mut k = transpose_kernel_bures(prior, chan)?;
            k.metric = MetricKind::ClassicalFisher;
            Ok(k)
        }
    }
}

/// Relative defect of the adjointness relation on the probe pair `(f, g)`.
///
/// Square-root: `(f, (A + i/2Δ) R^A_{1/2} X g)` against
/// `(X_* f, (B + i/2Δ) R^B_{1/2} g)`; Bures and classical: `(f, A X g)`
/// against `(X_* f, B g)`. The scalar product is conjugate-linear in its
/// first argument.
pub fn adjointness_residual(
    kernel: &ReconstructionKernel,
    f: &ComplexPhaseVector,
    g: &ComplexPhaseVector,
) -> f64 {
    let dim = kernel.form.dim();
    if f.len() != dim || g.len() != dim {
        return f64::NAN;
    }
    let x = complexify(&kernel.x);
    let xs_f = complexify(&kernel.x_star) * f;
    let (lhs, rhs) = match (&kernel.half_propagators, kernel.metric) {
        (Some((r_a, r_b)), MetricKind::SquareRoot) => {
            let a_form = with_half_i_form(&kernel.prior_cov, &kernel.form);
            let b_form = with_half_i_form(&kernel.noisy_cov, &kernel.form);
            (
                f.dotc(&(a_form * r_a * (&x * g))),
                xs_f.dotc(&(b_form * r_b * g)),
            )
        }
        _ => (
            f.dotc(&(complexify(&kernel.prior_cov) * (&x * g))),
            xs_f.dotc(&(complexify(&kernel.noisy_cov) * g)),
        ),
    };
    (lhs - rhs).norm() / (lhs.norm().max(rhs.norm()) + 1e-300)
}

/// Covariance produced by the Petz recovery channel from a measured `B′`:
/// `X_*ᵀB′X_* + (A − X_*ᵀBX_*)`.
pub fn petz_covariance_recovery(
    kernel: &ReconstructionKernel,
    measured_cov: &PhaseMatrix,
) -> Result<PhaseMatrix> {
    if kernel.metric != MetricKind::SquareRoot {
        return Err(Error::WrongMetric {
            expected: MetricKind::SquareRoot.name(),
            found: kernel.metric.name(),
        });
    }
    if measured_cov.shape() != kernel.noisy_cov.shape() {
        return Err(Error::InvalidDimension(format!(
            "measured covariance is {:?}, kernel expects {:?}",
            measured_cov.shape(),
            kernel.noisy_cov.shape()
        )));
    }
    // grouped so that B′ = B returns A bit for bit
    let xs = &kernel.x_star;
    let delta = measured_cov - &kernel.noisy_cov;
    let out = &kernel.prior_cov + xs.transpose() * delta * xs;
    Ok((&out + out.transpose()).scale(0.5))
}

/// Max-entry distance from the identity, handy for fixed-point checks.
pub fn distance_from_identity(m: &PhaseMatrix) -> f64 {
    max_abs(&(m - PhaseMatrix::identity(m.nrows(), m.ncols())))
}

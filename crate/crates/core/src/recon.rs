//! Reconstruction maps acting on measured first moments.
//!
//! Every method collapses to one matrix `M_rec` with `F = M_rec · F′`:
//!
//! | method          | `M_rec`                         |
//! |-----------------|---------------------------------|
//! | adjoint only    | `X_*ᵀ`                          |
//! | Tikhonov        | `((X_*X + λ𝟙)⁻¹ X_*)ᵀ`          |
//! | pseudo-inverse  | `((X_*X)⁺ X_*)ᵀ`                |
//! | naive inverse   | `(X⁻¹)ᵀ`                        |
//! | Wiener          | `(B⁻¹XᵀA)ᵀ`, the Bures kernel    |

use std::fmt;

use crate::adjoint::{transpose_kernel_with, KernelOptions, MetricKind, ReconstructionKernel};
use crate::gaussian::{GaussianChannel, GaussianState};
use crate::{Error, PhaseMatrix, PhaseVector, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReconstructionMethod {
    AdjointOnly(MetricKind),
    /// Singular values of `X_*X` below `rank_tol · σ_max` are dropped.
    PseudoInverse {
        metric: MetricKind,
        rank_tol: f64,
    },
    Tikhonov {
        metric: MetricKind,
        lambda: f64,
    },
    NaiveInverse,
    Wiener,
}

impl ReconstructionMethod {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ReconstructionMethod::Tikhonov { lambda, .. }
                if !(lambda >= 0.0) || !lambda.is_finite() =>
            {
                Err(Error::InvalidParameter(format!(
                    "Tikhonov lambda must be finite and >= 0, got {lambda}"
                )))
            }
            ReconstructionMethod::PseudoInverse { rank_tol, .. }
                if !(rank_tol > 0.0 && rank_tol < 1.0) =>
            {
                Err(Error::InvalidParameter(format!(
                    "rank tolerance must lie in (0, 1), got {rank_tol}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Metric whose kernel the method needs, if any.
    pub fn metric(&self) -> Option<MetricKind> {
        match *self {
            ReconstructionMethod::AdjointOnly(m) => Some(m),
            ReconstructionMethod::PseudoInverse { metric, .. } => Some(metric),
            ReconstructionMethod::Tikhonov { metric, .. } => Some(metric),
            ReconstructionMethod::NaiveInverse => None,
            ReconstructionMethod::Wiener => Some(MetricKind::Bures),
        }
    }
}

impl fmt::Display for ReconstructionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReconstructionMethod::AdjointOnly(m) => write!(f, "adjoint-{m}"),
            ReconstructionMethod::PseudoInverse { metric, .. } => write!(f, "pseudo-{metric}"),
            ReconstructionMethod::Tikhonov { metric, .. } => write!(f, "tikhonov-{metric}"),
            ReconstructionMethod::NaiveInverse => f.write_str("naive"),
            ReconstructionMethod::Wiener => f.write_str("wiener"),
        }
    }
}

/// `M_rec` for `method` at prior `prior` and channel `chan`.
pub fn moment_reconstruction_matrix(
    method: ReconstructionMethod,
    prior: &GaussianState,
    chan: &GaussianChannel,
) -> Result<PhaseMatrix> {
    moment_reconstruction_matrix_with(method, prior, chan, &KernelOptions::default())
}

pub fn moment_reconstruction_matrix_with(
    method: ReconstructionMethod,
    prior: &GaussianState,
    chan: &GaussianChannel,
    opts: &KernelOptions,
) -> Result<PhaseMatrix> {
    method.validate()?;
    match method {
        ReconstructionMethod::NaiveInverse => naive_inverse(chan.x()),
        ReconstructionMethod::Wiener => {
            let k = transpose_kernel_with(MetricKind::Bures, prior, chan, opts)?;
            Ok(k.x_star().transpose())
        }
        _ => {
            let metric = method.metric().expect("kernel-based method");
            let k = transpose_kernel_with(metric, prior, chan, opts)?;
            from_kernel(method, &k)
        }
    }
}

/// `M_rec` from an already computed kernel. `NaiveInverse` only reads `X`.
pub fn from_kernel(
    method: ReconstructionMethod,
    kernel: &ReconstructionKernel,
) -> Result<PhaseMatrix> {
    method.validate()?;
    let xs = kernel.x_star();
    let x = kernel.channel_x();
    match method {
        ReconstructionMethod::AdjointOnly(_) | ReconstructionMethod::Wiener => Ok(xs.transpose()),
        ReconstructionMethod::NaiveInverse => naive_inverse(x),
        ReconstructionMethod::Tikhonov { lambda, .. } => {
            let dim = xs.nrows();
            let lhs = xs * x + PhaseMatrix::identity(dim, dim).scale(lambda);
            let sol = lhs.lu().solve(xs).ok_or_else(|| {
                Error::SingularMatrix(format!("X_*X + {lambda}·1 is not invertible"))
            })?;
            Ok(sol.transpose())
        }
        ReconstructionMethod::PseudoInverse { rank_tol, .. } => {
            let gram = xs * x;
            let svd = gram.svd(true, true);
            let smax = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
            let pinv = svd
                .pseudo_inverse(rank_tol * smax)
                .map_err(|e| Error::NumericalFailure(e.to_string()))?;
            Ok((pinv * xs).transpose())
        }
    }
}

fn naive_inverse(x: &PhaseMatrix) -> Result<PhaseMatrix> {
    let inv = x
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularMatrix("channel X is not invertible".into()))?;
    if inv.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix(
            "channel X is numerically singular".into(),
        ));
    }
    Ok(inv.transpose())
}

/// `F = M_rec · F′`.
pub fn reconstruct_moments(m_rec: &PhaseMatrix, measured: &PhaseVector) -> Result<PhaseVector> {
    if m_rec.ncols() != measured.len() {
        return Err(Error::InvalidDimension(format!(
            "reconstruction matrix has {} columns, data has {} entries",
            m_rec.ncols(),
            measured.len()
        )));
    }
    Ok(m_rec * measured)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::standard_symplectic_form;
    use approx::assert_abs_diff_eq;
    use nalgebra::dvector;

    fn eye(s: f64) -> PhaseMatrix {
        PhaseMatrix::identity(2, 2).scale(s)
    }

    fn all_methods(lambda: f64) -> Vec<ReconstructionMethod> {
        let mut v = vec![
            ReconstructionMethod::NaiveInverse,
            ReconstructionMethod::Wiener,
        ];
        for m in MetricKind::ALL {
            v.push(ReconstructionMethod::AdjointOnly(m));
            v.push(ReconstructionMethod::Tikhonov { metric: m, lambda });
            v.push(ReconstructionMethod::PseudoInverse {
                metric: m,
                rank_tol: 1e-12,
            });
        }
        v
    }

    #[test]
    fn identity_channel_any_method() {
        let form = standard_symplectic_form(1).unwrap();
        let prior = GaussianState::new(eye(3.0), form.clone()).unwrap();
        let chan = GaussianChannel::identity(form);
        for method in all_methods(0.0) {
            let m = moment_reconstruction_matrix(method, &prior, &chan).unwrap();
            assert_abs_diff_eq!(m, eye(1.0), epsilon = 1e-10);
        }
    }

    /// a = 1, x = 1/2, y = 0, on both quadratures.
    fn noiseless_scalar() -> (GaussianState, GaussianChannel) {
        let form = standard_symplectic_form(1).unwrap();
        let prior = GaussianState::new(eye(1.0), form.clone()).unwrap();
        let chan = GaussianChannel::new(eye(0.5), eye(0.0), form).unwrap();
        (prior, chan)
    }

    #[test]
    fn noiseless_adjoint_equals_naive_inverse() {
        let (prior, chan) = noiseless_scalar();
        let adj = moment_reconstruction_matrix(
            ReconstructionMethod::AdjointOnly(MetricKind::Bures),
            &prior,
            &chan,
        )
        .unwrap();
        let naive = moment_reconstruction_matrix(ReconstructionMethod::NaiveInverse, &prior, &chan)
            .unwrap();
        let wiener =
            moment_reconstruction_matrix(ReconstructionMethod::Wiener, &prior, &chan).unwrap();
        assert_abs_diff_eq!(adj, eye(2.0), epsilon = 1e-15);
        assert_abs_diff_eq!(naive, eye(2.0), epsilon = 1e-15);
        assert_eq!(wiener, adj);
    }

    #[test]
    fn tikhonov_unit_lambda_halves() {
        // (x_* x + λ)⁻¹ x_* = (1 + 1)⁻¹ · 2
        let (prior, chan) = noiseless_scalar();
        let m = moment_reconstruction_matrix(
            ReconstructionMethod::Tikhonov {
                metric: MetricKind::Bures,
                lambda: 1.0,
            },
            &prior,
            &chan,
        )
        .unwrap();
        assert_abs_diff_eq!(m, eye(1.0), epsilon = 1e-15);
    }

    #[test]
    fn naive_inverse_needs_invertible_x() {
        let form = standard_symplectic_form(1).unwrap();
        let prior = GaussianState::new(eye(1.0), form.clone()).unwrap();
        let chan = GaussianChannel::new(eye(0.0), eye(0.5), form).unwrap();
        assert!(matches!(
            moment_reconstruction_matrix(ReconstructionMethod::NaiveInverse, &prior, &chan),
            Err(Error::SingularMatrix(_))
        ));
    }

    #[test]
    fn pseudo_inverse_drops_dead_directions() {
        // X kills the p quadrature; pseudo-inverse leaves it at zero instead of blowing up
        let form = standard_symplectic_form(1).unwrap();
        let prior = GaussianState::new(eye(1.0), form.clone()).unwrap();
        let x = PhaseMatrix::from_diagonal(&dvector![0.5, 0.0]);
        let chan = GaussianChannel::new(x, eye(0.5), form).unwrap();
        let m = moment_reconstruction_matrix(
            ReconstructionMethod::PseudoInverse {
                metric: MetricKind::Bures,
                rank_tol: 1e-9,
            },
            &prior,
            &chan,
        )
        .unwrap();
        assert_abs_diff_eq!(m[(0, 0)], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(1, 1)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn invalid_parameters() {
        let (prior, chan) = noiseless_scalar();
        for method in [
            ReconstructionMethod::Tikhonov {
                metric: MetricKind::Bures,
                lambda: -1.0,
            },
            ReconstructionMethod::PseudoInverse {
                metric: MetricKind::Bures,
                rank_tol: 1.5,
            },
        ] {
            assert!(matches!(
                moment_reconstruction_matrix(method, &prior, &chan),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn apply_matrix() {
        let f = reconstruct_moments(&eye(1.0), &dvector![0.3, -0.1]).unwrap();
        assert_eq!(f, dvector![0.3, -0.1]);
        let f = reconstruct_moments(&eye(2.0), &dvector![1.0, 0.0]).unwrap();
        assert_eq!(f, dvector![2.0, 0.0]);
        assert!(matches!(
            reconstruct_moments(&eye(1.0), &dvector![1.0, 0.0, 0.0]),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn method_names() {
        let names: Vec<String> = all_methods(0.1).iter().map(|m| m.to_string()).collect();
        assert!(names.contains(&"adjoint-sqrt".to_string()));
        assert!(names.contains(&"tikhonov-bures".to_string()));
        assert!(names.contains(&"pseudo-classical".to_string()));
        assert!(names.contains(&"wiener".to_string()));
    }
}

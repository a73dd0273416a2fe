//! Imaginary-time phase-space propagators `R_s^M`.
//!
//! For a Gaussian state with covariance `M`, conjugation by `ρ^s` acts on
//! field operators as a linear map on the complexified phase space. Per
//! decoupled mode with frequency `ω` and thermal parameter `βω` it is
//!
//! ```text
//! R_s = [[cosh(βωs),        -iω sinh(βωs)],
//!        [i sinh(βωs)/ω,     cosh(βωs)   ]]
//! ```
//!
//! and a general covariance is handled in its Williamson frame, where every
//! mode is isotropic (`ω = 1`): `R_s^M = S⁻¹ (⊕ R_s(βω_k, 1)) S`.

use nalgebra::Matrix2;

use crate::symplectic::{complexify, williamson, SymplecticForm, Williamson};
use crate::{ComplexPhaseMatrix, Error, PhaseMatrix, Result, C64};

/// Default floor on `ν − 1/2` below which a mode counts as pure.
pub const DEFAULT_EPSILON_PURITY: f64 = 1e-9;

/// Largest `βω|s|` accepted before `cosh` leaves double range.
pub const MAX_IMAGINARY_PHASE: f64 = 350.0;

/// Inverts `ν = coth(βω/2)/2`: `βω = ln((2ν+1)/(2ν−1))`.
pub fn symplectic_eig_to_thermal(nu: f64, epsilon_purity: f64) -> Result<f64> {
    if !(nu > 0.5 + epsilon_purity) {
        return Err(Error::PuritySingularity {
            nu,
            epsilon: epsilon_purity,
        });
    }
    Ok((2.0 / (2.0 * nu - 1.0)).ln_1p())
}

pub fn single_mode_propagator(beta_omega: f64, omega: f64, s: f64) -> Result<Matrix2<C64>> {
    if !beta_omega.is_finite() || !(omega > 0.0) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "single-mode propagator needs finite βω, ω > 0 and finite s (got {beta_omega}, {omega}, {s})"
        )));
    }
    let phase = beta_omega * s;
    if phase.abs() > MAX_IMAGINARY_PHASE {
        return Err(Error::Overflow(phase.abs()));
    }
    let c = phase.cosh();
    let sh = phase.sinh();
    Ok(Matrix2::new(
        C64::new(c, 0.0),
        C64::new(0.0, -omega * sh),
        C64::new(0.0, sh / omega),
        C64::new(c, 0.0),
    ))
}

/// `R_s^M` together with the covariance and time it was built from.
#[derive(Debug, Clone)]
pub struct ImaginaryTimePropagator {
    pub source_cov: PhaseMatrix,
    pub s: f64,
    pub matrix: ComplexPhaseMatrix,
}

/// Builds `R_s^M` from the Williamson decomposition of `m`.
pub fn propagator(
    m: &PhaseMatrix,
    form: &SymplecticForm,
    s: f64,
    epsilon_purity: f64,
) -> Result<ImaginaryTimePropagator> {
    let w = williamson(m, form)?;
    propagator_from_williamson(m, &w, form, s, epsilon_purity)
}

pub fn propagator_from_williamson(
    m: &PhaseMatrix,
    w: &Williamson,
    form: &SymplecticForm,
    s: f64,
    epsilon_purity: f64,
) -> Result<ImaginaryTimePropagator> {
    let dim = form.dim();
    let thermal =
        w.nu.iter()
            .map(|&nu| symplectic_eig_to_thermal(nu, epsilon_purity))
            .collect::<Result<Vec<_>>>()?;
    if s == 0.0 {
        return Ok(ImaginaryTimePropagator {
            source_cov: m.clone(),
            s,
            matrix: ComplexPhaseMatrix::identity(dim, dim),
        });
    }
    let mut normal = ComplexPhaseMatrix::zeros(dim, dim);
    for (k, &bw) in thermal.iter().enumerate() {
        let block = single_mode_propagator(bw, 1.0, s)?;
        normal.view_mut((2 * k, 2 * k), (2, 2)).copy_from(&block);
    }
    let matrix = complexify(&w.s_inverse(form)) * normal * complexify(&w.s);
    Ok(ImaginaryTimePropagator {
        source_cov: m.clone(),
        s,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{max_abs_complex, standard_symplectic_form, with_half_i_form};
    use approx::assert_abs_diff_eq;

    fn coth(x: f64) -> f64 {
        1.0 / x.tanh()
    }

    #[test]
    fn thermal_round_trip() {
        let nu = 0.5 * coth(0.5);
        assert_abs_diff_eq!(
            symplectic_eig_to_thermal(nu, DEFAULT_EPSILON_PURITY).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn thermal_classical_limit() {
        // 50-digit ln((2ν+1)/(2ν−1)) at ν = 1e6; the series gives 1/ν + 1/(12ν³)
        const EXPECTED: f64 = 0.00000100000000000008333333333334583;
        let bw = symplectic_eig_to_thermal(1e6, DEFAULT_EPSILON_PURITY).unwrap();
        assert!(((bw - EXPECTED) / EXPECTED).abs() < 1e-12);
        assert!(((bw - 1e-6) / 1e-6).abs() < 1e-12);
    }

    #[test]
    fn thermal_rejects_pure_mode() {
        assert!(matches!(
            symplectic_eig_to_thermal(0.5, DEFAULT_EPSILON_PURITY),
            Err(Error::PuritySingularity { .. })
        ));
        assert!(symplectic_eig_to_thermal(0.5 + 1e-10, DEFAULT_EPSILON_PURITY).is_err());
    }

    #[test]
    fn zero_time_is_identity() {
        let r = single_mode_propagator(3.0, 2.0, 0.0).unwrap();
        assert_eq!(r, Matrix2::identity());
    }

    #[test]
    fn closed_form_at_half_time() {
        let r = single_mode_propagator(2.0, 1.0, 0.5).unwrap();
        let (c, s) = (1.0_f64.cosh(), 1.0_f64.sinh());
        assert_abs_diff_eq!(r[(0, 0)].re, c, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(0, 1)].im, -s, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(1, 0)].im, s, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(1, 1)].re, c, epsilon = 1e-15);
    }

    #[test]
    fn unit_determinant() {
        for &(bw, w, s) in &[(0.3, 1.0, 0.5), (4.0, 0.2, -0.5), (10.0, 7.0, 1.3)] {
            let r = single_mode_propagator(bw, w, s).unwrap();
            let det = r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)];
            assert!((det - C64::new(1.0, 0.0)).norm() < 1e-12 * r[(0, 0)].norm_sqr().max(1.0));
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(
            single_mode_propagator(800.0, 1.0, 0.5),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn normal_form_oscillator_matches_closed_form() {
        // β = 1, ω = 2
        let omega = 2.0;
        let nu = 0.5 * coth(1.0);
        let form = standard_symplectic_form(1).unwrap();
        let m = PhaseMatrix::from_diagonal(&nalgebra::dvector![nu / omega, nu * omega]);
        let r = propagator(&m, &form, 0.5, DEFAULT_EPSILON_PURITY).unwrap();
        let expected = single_mode_propagator(2.0, omega, 0.5).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((r.matrix[(i, j)] - expected[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn invariants_on_two_mode_state() {
        let form = standard_symplectic_form(2).unwrap();
        #[rustfmt::skip]
        let m = PhaseMatrix::from_row_slice(4, 4, &[
            2.0, 0.3, 0.1, 0.0,
            0.3, 1.5, 0.0, 0.2,
            0.1, 0.0, 4.0, -0.4,
            0.0, 0.2, -0.4, 0.9,
        ]);
        let plus = propagator(&m, &form, 0.5, DEFAULT_EPSILON_PURITY)
            .unwrap()
            .matrix;
        let minus = propagator(&m, &form, -0.5, DEFAULT_EPSILON_PURITY)
            .unwrap()
            .matrix;
        let id = ComplexPhaseMatrix::identity(4, 4);
        assert!(max_abs_complex(&(&plus * &minus - &id)) < 1e-9);
        assert!(max_abs_complex(&(plus.map(|z| z.conj()) - &minus)) < 1e-9);
        let k = with_half_i_form(&m, &form);
        assert!(max_abs_complex(&(plus.transpose() * &k * &plus - &k)) < 1e-8);
        let zero = propagator(&m, &form, 0.0, DEFAULT_EPSILON_PURITY)
            .unwrap()
            .matrix;
        assert_eq!(zero, id);
    }

    #[test]
    fn pure_state_has_no_propagator() {
        let form = standard_symplectic_form(1).unwrap();
        let m = PhaseMatrix::identity(2, 2).scale(0.5);
        assert!(matches!(
            propagator(&m, &form, 0.5, DEFAULT_EPSILON_PURITY),
            Err(Error::PuritySingularity { .. })
        ));
    }
}

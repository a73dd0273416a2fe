//! Real and complexified phase-space linear algebra.
//!
//! Index convention (used everywhere in the crate): mode-major,
//! `(q₁, p₁, q₂, p₂, …)`, so each mode owns a contiguous 2×2 block.

use nalgebra::DMatrix;

use crate::{ComplexPhaseMatrix, Error, PhaseMatrix, Result, C64};

/// Slack used by every positivity test in the crate.
pub const POSITIVITY_SLACK: f64 = 1e-10;

/// Residual bound for Williamson outputs.
pub const WILLIAMSON_TOL: f64 = 1e-8;

/// The symplectic form `Δ` for `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n: usize,
    matrix: PhaseMatrix,
}

impl SymplecticForm {
    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &PhaseMatrix {
        &self.matrix
    }

    /// `(i/2) Δ` on the complexified phase space.
    pub fn half_i(&self) -> ComplexPhaseMatrix {
        self.matrix.map(|v| C64::new(0.0, 0.5 * v))
    }
}

/// Returns `Δ` with per-mode blocks `[[0, 1], [-1, 0]]`.
pub fn standard_symplectic_form(n: usize) -> Result<SymplecticForm> {
    if n == 0 {
        return Err(Error::InvalidDimension(
            "symplectic form needs at least one mode".into(),
        ));
    }
    let mut matrix = PhaseMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        matrix[(2 * k, 2 * k + 1)] = 1.0;
        matrix[(2 * k + 1, 2 * k)] = -1.0;
    }
    Ok(SymplecticForm { n, matrix })
}

/// Checks that `m` is square with even dimension and returns the mode count.
pub fn phase_dim<T: nalgebra::Scalar>(m: &DMatrix<T>) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::InvalidDimension(format!(
            "matrix is {r}x{c}, not square"
        )));
    }
    if r == 0 || r % 2 != 0 {
        return Err(Error::InvalidDimension(format!(
            "phase-space dimension {r} is not a positive even number"
        )));
    }
    Ok(r / 2)
}

pub fn complexify(m: &PhaseMatrix) -> ComplexPhaseMatrix {
    m.map(|v| C64::new(v, 0.0))
}

/// `M + (i/2) Δ`, the matrix whose positivity encodes the uncertainty relations.
pub fn with_half_i_form(m: &PhaseMatrix, form: &SymplecticForm) -> ComplexPhaseMatrix {
    complexify(m) + form.half_i()
}

pub fn max_abs(m: &PhaseMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn max_abs_complex(m: &ComplexPhaseMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.norm()))
}

/// Smallest eigenvalue of the Hermitian part `(M + M†)/2`.
pub fn hermitian_min_eig(m: &ComplexPhaseMatrix) -> Result<f64> {
    let (r, c) = m.shape();
    if r != c || r == 0 {
        return Err(Error::InvalidDimension(format!(
            "hermitian_min_eig needs a non-empty square matrix, got {r}x{c}"
        )));
    }
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigenvalues();
    Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Symmetric square root and inverse square root of an SPD matrix.
fn spd_sqrt_pair(a: &PhaseMatrix) -> Result<(PhaseMatrix, PhaseMatrix)> {
    let eig = a.clone().symmetric_eigen();
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::InvalidState(format!(
            "covariance is not positive definite (min eigenvalue {min:e})"
        )));
    }
    let u = &eig.eigenvectors;
    let root = u * PhaseMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * u.transpose();
    let inv_root =
        u * PhaseMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.sqrt().recip())) * u.transpose();
    Ok((root, inv_root))
}

/// Symplectic eigenvalues of `a`, sorted descending: the moduli of the
/// eigenvalues of `iΔA`, one per conjugate pair.
///
/// Uses the Hermitian matrix `i A^{1/2} Δ A^{1/2}`, which is similar to `iΔA`.
pub fn symplectic_eigenvalues(a: &PhaseMatrix, form: &SymplecticForm) -> Result<Vec<f64>> {
    check_form_dim(a, form)?;
    let (root, _) = spd_sqrt_pair(a)?;
    let k = &root * form.matrix() * &root;
    let h = k.map(|v| C64::new(0.0, v));
    let mut nu: Vec<f64> = h
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .filter(|&v| v > 0.0)
        .collect();
    nu.sort_by(|x, y| y.total_cmp(x));
    if nu.len() != form.modes() {
        return Err(Error::NumericalFailure(format!(
            "expected {} positive eigenvalues of iA^(1/2)ΔA^(1/2), found {}",
            form.modes(),
            nu.len()
        )));
    }
    Ok(nu)
}

fn check_form_dim(a: &PhaseMatrix, form: &SymplecticForm) -> Result<()> {
    let n = phase_dim(a)?;
    if n != form.modes() {
        return Err(Error::InvalidDimension(format!(
            "matrix has {n} modes, symplectic form has {}",
            form.modes()
        )));
    }
    Ok(())
}

/// Williamson normal form `A = Sᵀ D S`, `SᵀΔS = Δ`, `D = ⊕ diag(ν_k, ν_k)`.
#[derive(Debug, Clone)]
pub struct Williamson {
    /// Symplectic transform into normal coordinates.
    pub s: PhaseMatrix,
    /// Symplectic eigenvalues, descending.
    pub nu: Vec<f64>,
}

impl Williamson {
    /// `S⁻¹ = -Δ Sᵀ Δ`, exact for symplectic `S`.
    pub fn s_inverse(&self, form: &SymplecticForm) -> PhaseMatrix {
        let d = form.matrix();
        -(d * self.s.transpose() * d)
    }

    pub fn normal_form(&self) -> PhaseMatrix {
        let diag: Vec<f64> = self.nu.iter().flat_map(|&v| [v, v]).collect();
        PhaseMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
    }
}

/// Williamson decomposition of a symmetric positive-definite covariance.
///
/// With `K = A^{-1/2} Δ A^{-1/2}` (antisymmetric), the positive eigenvectors
/// `u = a + ib` of the Hermitian `iK` give an orthogonal `O = [b₁, a₁, b₂, a₂, …]`
/// with `OᵀKO = ⊕ μ_k [[0, 1], [-1, 0]]` and `ν_k = 1/μ_k`. Then
/// `S = D^{-1/2} Oᵀ A^{1/2}`.
pub fn williamson(a: &PhaseMatrix, form: &SymplecticForm) -> Result<Williamson> {
    check_form_dim(a, form)?;
    let n = form.modes();
    let asym = max_abs(&(a - a.transpose()));
    if asym > 1e-12 * max_abs(a).max(1.0) {
        return Err(Error::InvalidState(format!(
            "covariance is not symmetric (asymmetry {asym:e})"
        )));
    }
    let sym = (a + a.transpose()).scale(0.5);
    let (root, inv_root) = spd_sqrt_pair(&sym)?;
    let k = &inv_root * form.matrix() * &inv_root;
    let h = k.map(|v| C64::new(0.0, v));
    let eig = h.symmetric_eigen();

    let mut positive: Vec<usize> = (0..2 * n).filter(|&i| eig.eigenvalues[i] > 0.0).collect();
    if positive.len() != n {
        return Err(Error::NumericalFailure(format!(
            "expected {n} positive eigenvalues of iK, found {}",
            positive.len()
        )));
    }
    // ascending μ is descending ν
    positive.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let mut o = PhaseMatrix::zeros(2 * n, 2 * n);
    let mut nu = Vec::with_capacity(n);
    let mut d_inv_sqrt = Vec::with_capacity(2 * n);
    let scale = std::f64::consts::SQRT_2;
    for (mode, &i) in positive.iter().enumerate() {
        let u = eig.eigenvectors.column(i);
        for r in 0..2 * n {
            o[(r, 2 * mode)] = scale * u[r].im;
            o[(r, 2 * mode + 1)] = scale * u[r].re;
        }
        let v = eig.eigenvalues[i].recip();
        nu.push(v);
        d_inv_sqrt.extend([v.sqrt().recip(); 2]);
    }
    let s =
        PhaseMatrix::from_diagonal(&nalgebra::DVector::from_vec(d_inv_sqrt)) * o.transpose() * root;

    let out = Williamson { s, nu };
    let sym_res = max_abs(&(out.s.transpose() * form.matrix() * &out.s - form.matrix()));
    if !(sym_res < WILLIAMSON_TOL) {
        return Err(Error::NumericalFailure(format!(
            "Williamson transform is not symplectic (residual {sym_res:e})"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn form_single_mode() {
        let d = standard_symplectic_form(1).unwrap();
        assert_eq!(
            d.matrix(),
            &PhaseMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
        );
    }

    #[test]
    fn form_two_modes_is_block_diagonal() {
        let d = standard_symplectic_form(2).unwrap();
        #[rustfmt::skip]
        let expected = PhaseMatrix::from_row_slice(4, 4, &[
            0.0, 1.0, 0.0, 0.0,
            -1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, -1.0, 0.0,
        ]);
        assert_eq!(d.matrix(), &expected);
    }

    #[test]
    fn form_squares_to_minus_identity() {
        let d = standard_symplectic_form(3).unwrap();
        let sq = d.matrix() * d.matrix();
        assert_eq!(sq, -PhaseMatrix::identity(6, 6));
        assert_eq!(d.matrix().transpose(), -d.matrix());
    }

    #[test]
    fn form_rejects_zero_modes() {
        assert!(matches!(
            standard_symplectic_form(0),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn min_eig_identity() {
        let m = ComplexPhaseMatrix::identity(2, 2);
        assert_abs_diff_eq!(hermitian_min_eig(&m).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn min_eig_vacuum_saturates() {
        let d = standard_symplectic_form(1).unwrap();
        let a = PhaseMatrix::identity(2, 2).scale(0.5);
        let m = with_half_i_form(&a, &d);
        assert_abs_diff_eq!(hermitian_min_eig(&m).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn min_eig_matches_closed_form() {
        // tr/2 - sqrt((tr/2)^2 - det) for diag(2,1) + (i/2)Δ, 50-digit evaluation
        const EXPECTED: f64 = 0.792893218813452475599155637895;
        let d = standard_symplectic_form(1).unwrap();
        let a = PhaseMatrix::from_diagonal(&nalgebra::dvector![2.0, 1.0]);
        let m = with_half_i_form(&a, &d);
        assert_abs_diff_eq!(hermitian_min_eig(&m).unwrap(), EXPECTED, epsilon = 1e-14);
    }

    #[test]
    fn min_eig_rejects_non_square() {
        let m = ComplexPhaseMatrix::zeros(2, 3);
        assert!(matches!(
            hermitian_min_eig(&m),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn williamson_vacuum() {
        let d = standard_symplectic_form(1).unwrap();
        let a = PhaseMatrix::identity(2, 2).scale(0.5);
        let w = williamson(&a, &d).unwrap();
        assert_abs_diff_eq!(w.nu[0], 0.5, epsilon = 1e-14);
        // orthogonal and symplectic
        assert_abs_diff_eq!(
            w.s.transpose() * &w.s,
            PhaseMatrix::identity(2, 2),
            epsilon = 1e-12
        );
    }

    #[test]
    fn williamson_thermal_oscillator() {
        // β = 1, ω = 2: A = ν diag(1/ω, ω) with ν = coth(1)/2
        const NU: f64 = 0.656517642749665651818080623465;
        let omega = 2.0;
        let d = standard_symplectic_form(1).unwrap();
        let a = PhaseMatrix::from_diagonal(&nalgebra::dvector![NU / omega, NU * omega]);
        let w = williamson(&a, &d).unwrap();
        assert_abs_diff_eq!(w.nu[0], NU, epsilon = 1e-14);
        // S = diag(1/√ω, √ω) up to a symplectic rotation, so |S| entries are pinned
        let s = &w.s;
        let rot =
            s * PhaseMatrix::from_diagonal(&nalgebra::dvector![omega.sqrt(), 1.0 / omega.sqrt()]);
        assert_abs_diff_eq!(
            rot.transpose() * &rot,
            PhaseMatrix::identity(2, 2),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(s.transpose() * w.normal_form() * s, a, epsilon = 1e-13);
    }

    #[test]
    fn williamson_rejects_indefinite() {
        let d = standard_symplectic_form(1).unwrap();
        let a = PhaseMatrix::from_diagonal(&nalgebra::dvector![1.0, -1.0]);
        assert!(matches!(williamson(&a, &d), Err(Error::InvalidState(_))));
    }

    #[test]
    fn williamson_rejects_mismatched_form() {
        let d = standard_symplectic_form(2).unwrap();
        let a = PhaseMatrix::identity(2, 2);
        assert!(matches!(
            williamson(&a, &d),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn williamson_degenerate_two_modes() {
        let d = standard_symplectic_form(2).unwrap();
        let a = PhaseMatrix::identity(4, 4).scale(3.0);
        let w = williamson(&a, &d).unwrap();
        assert_abs_diff_eq!(w.nu[0], 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(w.nu[1], 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(w.s.transpose() * w.normal_form() * &w.s, a, epsilon = 1e-12);
    }

    #[test]
    fn symplectic_eigenvalues_agree_with_williamson() {
        let d = standard_symplectic_form(2).unwrap();
        #[rustfmt::skip]
        let a = PhaseMatrix::from_row_slice(4, 4, &[
            2.0, 0.3, 0.1, 0.0,
            0.3, 1.5, 0.0, 0.2,
            0.1, 0.0, 4.0, -0.4,
            0.0, 0.2, -0.4, 0.9,
        ]);
        let nu = symplectic_eigenvalues(&a, &d).unwrap();
        let w = williamson(&a, &d).unwrap();
        for (x, y) in nu.iter().zip(&w.nu) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }
}

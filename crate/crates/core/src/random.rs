//! Seeded generators of valid priors and channels for invariant checks.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::gaussian::{GaussianChannel, GaussianState};
use crate::symplectic::{
    hermitian_min_eig, standard_symplectic_form, symplectic_eigenvalues, SymplecticForm,
};
use crate::{ComplexPhaseVector, Error, PhaseMatrix, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomModelOptions {
    pub max_modes: usize,
    pub nu_min: f64,
    pub nu_max: f64,
    /// Required margin of the smallest symplectic eigenvalue of `B` above 1/2.
    pub epsilon_purity: f64,
    /// Probability of zeroing one column of `X`.
    pub degenerate_probability: f64,
}

impl Default for RandomModelOptions {
    fn default() -> Self {
        Self {
            max_modes: 4,
            nu_min: 0.500001,
            nu_max: 50.0,
            epsilon_purity: 1e-9,
            degenerate_probability: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomModel {
    pub prior: GaussianState,
    pub channel: GaussianChannel,
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Product of local shears, local squeezers and two-mode rotations.
pub fn random_symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PhaseMatrix {
    let dim = 2 * n;
    let mut s = PhaseMatrix::identity(dim, dim);
    for _ in 0..2 {
        for k in 0..n {
            let mut g = PhaseMatrix::identity(dim, dim);
            let r = (0.4 * normal(rng)).exp();
            let t = 0.5 * normal(rng);
            // [[r, r t], [0, 1/r]]
            g[(2 * k, 2 * k)] = r;
            g[(2 * k, 2 * k + 1)] = r * t;
            g[(2 * k + 1, 2 * k + 1)] = 1.0 / r;
            s = g * s;
        }
        for i in 0..n {
            for j in i + 1..n {
                let th = rng.random_range(0.0..std::f64::consts::TAU);
                let (sn, c) = th.sin_cos();
                let mut g = PhaseMatrix::identity(dim, dim);
                for q in 0..2 {
                    let (a, b) = (2 * i + q, 2 * j + q);
                    g[(a, a)] = c;
                    g[(a, b)] = sn;
                    g[(b, a)] = -sn;
                    g[(b, b)] = c;
                }
                s = g * s;
            }
        }
    }
    s
}

/// `Sᵀ diag(ν) S`, with `ν − 1/2` log-uniform between `nu_min − 1/2` and `nu_max − 1/2`.
pub fn random_covariance<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    nu_min: f64,
    nu_max: f64,
) -> PhaseMatrix {
    let s = random_symplectic(rng, n);
    let (lo, hi) = ((nu_min - 0.5).ln(), (nu_max - 0.5).ln());
    let mut d = PhaseMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        let nu = 0.5 + rng.random_range(lo..hi).exp();
        d[(2 * k, 2 * k)] = nu;
        d[(2 * k + 1, 2 * k + 1)] = nu;
    }
    let a = s.transpose() * d * s;
    (&a + a.transpose()).scale(0.5)
}

/// Random `X` and the cheapest isotropic noise floor that makes `(X, Y)`
/// completely positive, plus a random positive part.
pub fn random_channel<R: Rng + ?Sized>(
    rng: &mut R,
    form: &SymplecticForm,
    degenerate_probability: f64,
) -> Result<GaussianChannel> {
    let dim = form.dim();
    let scale = rng.random_range(0.1..1.0) / (dim as f64).sqrt();
    let mut x = PhaseMatrix::from_fn(dim, dim, |_, _| scale * normal(rng));
    if rng.random_bool(degenerate_probability) {
        let col = rng.random_range(0..dim);
        x.column_mut(col).fill(0.0);
    }
    let delta = form.matrix();
    let defect = (delta - x.transpose() * delta * &x).map(|v| C64::new(0.0, 0.5 * v));
    let floor = (-hermitian_min_eig(&defect)?).max(0.0);
    let w = PhaseMatrix::from_fn(dim, dim, |_, _| 0.3 * normal(rng));
    let y = PhaseMatrix::identity(dim, dim).scale(floor * (1.0 + 1e-6) + 1e-9) + &w * w.transpose();
    let y = (&y + y.transpose()).scale(0.5);
    GaussianChannel::new(x, y, form.clone())
}

/// A prior and channel whose output stays at least `epsilon_purity` away from purity.
pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    opts: &RandomModelOptions,
) -> Result<RandomModel> {
    if opts.max_modes == 0 || !(opts.nu_min > 0.5 && opts.nu_max > opts.nu_min) {
        return Err(Error::InvalidParameter(format!(
            "bad random-model options {opts:?}"
        )));
    }
    for _ in 0..1000 {
        let n = rng.random_range(1..=opts.max_modes);
        let form = standard_symplectic_form(n)?;
        let a = random_covariance(rng, n, opts.nu_min, opts.nu_max);
        let chan = random_channel(rng, &form, opts.degenerate_probability)?;
        let b = chan.map_covariance(&a);
        let nu_b = symplectic_eigenvalues(&b, &form)?;
        if nu_b.last().is_some_and(|&v| v > 0.5 + opts.epsilon_purity) {
            return Ok(RandomModel {
                prior: GaussianState::new(a, form)?,
                channel: chan,
            });
        }
    }
    Err(Error::NumericalFailure(
        "could not draw a channel output away from purity".into(),
    ))
}

/// Unit-norm complex probe vector.
pub fn random_probe<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexPhaseVector {
    let v = ComplexPhaseVector::from_fn(dim, |_, _| C64::new(normal(rng), normal(rng)));
    let n = v.norm();
    v.unscale(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{validate_channel, validate_state};
    use crate::symplectic::max_abs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symplectic_generator_preserves_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            let form = standard_symplectic_form(n).unwrap();
            let s = random_symplectic(&mut rng, n);
            let d = form.matrix();
            assert!(max_abs(&(&s * d * s.transpose() - d)) < 1e-10);
        }
    }

    #[test]
    fn models_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let opts = RandomModelOptions::default();
        for _ in 0..50 {
            let m = random_model(&mut rng, &opts).unwrap();
            assert!(validate_state(&m.prior).ok);
            assert!(validate_channel(&m.channel).ok);
        }
    }

    #[test]
    fn seeded_draws_repeat() {
        let opts = RandomModelOptions::default();
        let a = random_model(&mut ChaCha8Rng::seed_from_u64(3), &opts).unwrap();
        let b = random_model(&mut ChaCha8Rng::seed_from_u64(3), &opts).unwrap();
        assert_eq!(a.prior.cov(), b.prior.cov());
        assert_eq!(a.channel.x(), b.channel.x());
    }

    #[test]
    fn probes_are_normalised() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = random_probe(&mut rng, 6);
        assert!((p.norm() - 1.0).abs() < 1e-14);
    }
}

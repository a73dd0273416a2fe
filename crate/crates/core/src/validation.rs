//! Invariant suites over a configured field model and random valid models.
//!
//! Every check reduces to a defect measure and a tolerance; a check passes
//! when the worst defect seen over all samples is finite and within
//! tolerance. Results are aggregated by `(suite, name)` in first-seen order.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adjoint::{
    adjointness_residual, distance_from_identity, petz_covariance_recovery,
    transpose_kernel_sqrt_classical_limit, transpose_kernel_with, KernelOptions, MetricKind,
    ReconstructionKernel,
};
use crate::field::{
    build_mode_blocks, dense_circulant, kernel_spectrum_for, reconstruction_multipliers,
    FieldModel, ModeStatus,
};
use crate::gaussian::{
    apply_channel, validate_channel, validate_state, GaussianChannel, GaussianState,
};
use crate::imtime::propagator;
use crate::random::{random_model, random_probe, RandomModelOptions};
use crate::recon::{from_kernel, ReconstructionMethod};
use crate::symplectic::{
    max_abs, max_abs_complex, williamson, with_half_i_form, SymplecticForm, POSITIVITY_SLACK,
};
use crate::{ComplexPhaseMatrix, Error, PhaseMatrix, Result};

pub const ADJOINTNESS_TOL: f64 = 1e-8;
pub const PROPAGATOR_TOL: f64 = 1e-9;
pub const FORM_INVARIANCE_TOL: f64 = 1e-8;
pub const WILLIAMSON_RESIDUAL_TOL: f64 = 1e-8;
pub const CONTRACTION_TOL: f64 = 1e-8;
pub const CLASSICAL_TOL: f64 = 1e-12;
pub const FIXED_POINT_TOL: f64 = 1e-10;
pub const PETZ_FIXED_POINT_TOL: f64 = 1e-12;
pub const TIKHONOV_LIMIT_TOL: f64 = 1e-6;
pub const FFT_DENSE_TOL: f64 = 1e-10;
pub const PROBE_PAIRS: usize = 20;

/// Aggregated outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
}

/// Model that first made a check fail, kept for replay.
#[derive(Debug, Clone)]
pub struct FailingModel {
    pub origin: String,
    pub check: String,
    pub prior: PhaseMatrix,
    pub x: PhaseMatrix,
    pub y: PhaseMatrix,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub failing_model: Option<FailingModel>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, suite: &str, name: &str) -> Option<&Check> {
        self.checks
            .iter()
            .find(|c| c.suite == suite && c.name == name)
    }

    /// Folds `value` into the named check; NaN counts as a failure.
    pub fn record(
        &mut self,
        suite: &'static str,
        name: &'static str,
        value: f64,
        tolerance: f64,
    ) -> bool {
        let ok = value <= tolerance;
        match self
            .checks
            .iter_mut()
            .find(|c| c.suite == suite && c.name == name)
        {
            Some(c) => {
                c.worst = if value.is_nan() || c.worst.is_nan() {
                    f64::NAN
                } else {
                    c.worst.max(value)
                };
                c.samples += 1;
                c.passed &= ok;
            }
            None => self.checks.push(Check {
                suite,
                name,
                worst: value,
                tolerance,
                samples: 1,
                passed: ok,
            }),
        }
        ok
    }

    fn record_bool(&mut self, suite: &'static str, name: &'static str, ok: bool) -> bool {
        self.record(suite, name, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:<28} {:>8} {:>12} {:>10}  result",
            "suite", "check", "samples", "worst", "tolerance"
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<10} {:<28} {:>8} {:>12.3e} {:>10.1e}  {}",
                c.suite,
                c.name,
                c.samples,
                c.worst,
                c.tolerance,
                if c.passed { "pass" } else { "FAIL" }
            )?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// Error that marks a mode as out of reach of the square-root kernel rather
/// than as a broken invariant.
fn is_exclusion(e: &Error) -> bool {
    matches!(
        e,
        Error::PuritySingularity { .. } | Error::NotReal { .. } | Error::Overflow(_)
    )
}

fn williamson_residuals(report: &mut ValidationReport, m: &PhaseMatrix, form: &SymplecticForm) {
    match williamson(m, form) {
        Ok(w) => {
            let d = form.matrix();
            report.record(
                "symplectic",
                "williamson-symplectic",
                max_abs(&(w.s.transpose() * d * &w.s - d)),
                WILLIAMSON_RESIDUAL_TOL,
            );
            let recon = w.s.transpose() * w.normal_form() * &w.s;
            report.record(
                "symplectic",
                "williamson-reconstruction",
                max_abs(&(recon - m)) / max_abs(m),
                WILLIAMSON_RESIDUAL_TOL,
            );
        }
        Err(_) => {
            report.record(
                "symplectic",
                "williamson-symplectic",
                f64::NAN,
                WILLIAMSON_RESIDUAL_TOL,
            );
        }
    }
}

fn propagator_invariants(
    report: &mut ValidationReport,
    m: &PhaseMatrix,
    form: &SymplecticForm,
    eps: f64,
) {
    let built = propagator(m, form, 0.5, eps)
        .and_then(|p| propagator(m, form, -0.5, eps).map(|q| (p.matrix, q.matrix)))
        .and_then(|pq| propagator(m, form, 0.0, eps).map(|z| (pq, z.matrix)));
    let ((plus, minus), zero) = match built {
        Ok(v) => v,
        Err(e) if is_exclusion(&e) => return,
        Err(_) => {
            report.record("imtime", "inverse-scaled", f64::NAN, PROPAGATOR_TOL);
            return;
        }
    };
    let dim = form.dim();
    let id = ComplexPhaseMatrix::identity(dim, dim);
    // roundoff in these products grows like max|R_{1/2}| · max|R_{-1/2}|
    let kappa = (max_abs_complex(&plus) * max_abs_complex(&minus)).max(1.0);
    report.record(
        "imtime",
        "inverse-scaled",
        max_abs_complex(&(&plus * &minus - &id)) / kappa,
        PROPAGATOR_TOL,
    );
    report.record(
        "imtime",
        "conjugate",
        max_abs_complex(&(plus.map(|z| z.conj()) - &minus)),
        PROPAGATOR_TOL,
    );
    let k = with_half_i_form(m, form);
    report.record(
        "imtime",
        "form-invariance-scaled",
        max_abs_complex(&(plus.transpose() * &k * &plus - &k)) / (kappa * max_abs_complex(&k)),
        FORM_INVARIANCE_TOL,
    );
    report.record_bool("imtime", "zero-time-identity", zero == id);
}

fn sector_contraction_defect(k: &ReconstructionKernel) -> f64 {
    k.sector_eigenvalues()
        .iter()
        .map(|l| l.im.abs().max(-l.re).max(l.re - 1.0))
        .fold(0.0, f64::max)
}

fn sqrt_psd(m: &PhaseMatrix) -> PhaseMatrix {
    let e = m.clone().symmetric_eigen();
    let d = PhaseMatrix::from_diagonal(&e.eigenvalues.map(|l| l.max(0.0).sqrt()));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

/// Eigenvalue bound of `A^{1/2} X B⁻¹ Xᵀ A^{1/2}` against `[0, 1]`.
fn bures_monotonicity_defect(prior: &PhaseMatrix, chan: &GaussianChannel, b: &PhaseMatrix) -> f64 {
    let ah = sqrt_psd(prior);
    let Some(binv_xt) = b.clone().lu().solve(&(chan.x().transpose() * &ah)) else {
        return f64::NAN;
    };
    let t = &ah * chan.x() * binv_xt;
    let t = (&t + t.transpose()).scale(0.5);
    t.symmetric_eigenvalues()
        .iter()
        .map(|&l| (-l - POSITIVITY_SLACK).max(l - 1.0))
        .fold(0.0, f64::max)
}

fn kernel_checks(
    report: &mut ValidationReport,
    prior: &GaussianState,
    chan: &GaussianChannel,
    opts: &KernelOptions,
    rng: &mut ChaCha8Rng,
    probes: usize,
) -> usize {
    let dim = chan.form().dim();
    let pairs: Vec<_> = (0..probes)
        .map(|_| (random_probe(rng, dim), random_probe(rng, dim)))
        .collect();
    let mut excluded = 0;
    let mut bures = None;
    for metric in MetricKind::ALL {
        let k = match transpose_kernel_with(metric, prior, chan, opts) {
            Ok(k) => k,
            Err(e) if metric == MetricKind::SquareRoot && is_exclusion(&e) => {
                excluded += 1;
                continue;
            }
            Err(_) => {
                report.record("adjoint", "kernel-construction", f64::NAN, 0.0);
                continue;
            }
        };
        let worst = pairs
            .iter()
            .map(|(f, g)| adjointness_residual(&k, f, g))
            .fold(
                0.0,
                |a: f64, r| if r.is_nan() { f64::NAN } else { a.max(r) },
            )
            / k.propagator_scale().max(1.0);
        let (adj, contraction, weighted) = match metric {
            MetricKind::SquareRoot => (
                "adjointness-sqrt-scaled",
                "contraction-sqrt",
                "weighted-norm-sqrt",
            ),
            MetricKind::Bures => (
                "adjointness-bures",
                "contraction-bures",
                "weighted-norm-bures",
            ),
            MetricKind::ClassicalFisher => (
                "adjointness-classical",
                "contraction-classical",
                "weighted-norm-classical",
            ),
        };
        report.record("adjoint", adj, worst, ADJOINTNESS_TOL);
        report.record(
            "adjoint",
            contraction,
            sector_contraction_defect(&k),
            CONTRACTION_TOL,
        );
        let wn = k.weighted_sector_norm().unwrap_or(f64::NAN);
        report.record("adjoint", weighted, wn - 1.0, CONTRACTION_TOL);
        if metric == MetricKind::SquareRoot {
            let scale = max_abs(k.x_star()).max(f64::MIN_POSITIVE);
            report.record(
                "adjoint",
                "realness-sqrt",
                k.imag_max() / scale,
                opts.realness_tol,
            );
            let back =
                petz_covariance_recovery(&k, k.noisy_cov()).map(|a| max_abs(&(a - prior.cov())));
            report.record(
                "adjoint",
                "petz-fixed-point",
                back.unwrap_or(f64::NAN),
                PETZ_FIXED_POINT_TOL,
            );
        }
        recon_checks(report, &k);
        if metric == MetricKind::Bures {
            bures = Some(k);
        }
    }

    if let Some(b) = &bures {
        report.record(
            "adjoint",
            "bures-monotonicity",
            bures_monotonicity_defect(prior.cov(), chan, b.noisy_cov()),
            CONTRACTION_TOL,
        );
        let classical = transpose_kernel_sqrt_classical_limit(prior, chan)
            .map(|c| max_abs(&(c.x_star() - b.x_star())) / max_abs(b.x_star()).max(1.0));
        report.record(
            "adjoint",
            "classical-degeneration",
            classical.unwrap_or(f64::NAN),
            CLASSICAL_TOL,
        );
    }

    // roundoff in the square-root sandwich grows with the propagator norms
    let identity = GaussianChannel::identity(chan.form().clone());
    for metric in MetricKind::ALL {
        let name = match metric {
            MetricKind::SquareRoot => "identity-sqrt-scaled",
            _ => "identity-fixed-point",
        };
        match transpose_kernel_with(metric, prior, &identity, opts) {
            Ok(k) => {
                let d = distance_from_identity(k.x_star()) / k.propagator_scale().max(1.0);
                report.record("adjoint", name, d, FIXED_POINT_TOL);
            }
            Err(e) if is_exclusion(&e) => {}
            Err(_) => {
                report.record("adjoint", name, f64::NAN, FIXED_POINT_TOL);
            }
        }
    }
    excluded
}

fn recon_checks(report: &mut ValidationReport, k: &ReconstructionKernel) {
    let metric = k.metric();
    let gram = k.x_star() * k.channel_x();
    let sv = gram.singular_values();
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if smin > 1e-3 {
        let tik = from_kernel(
            ReconstructionMethod::Tikhonov {
                metric,
                lambda: 1e-10,
            },
            k,
        );
        let pse = from_kernel(
            ReconstructionMethod::PseudoInverse {
                metric,
                rank_tol: 1e-12,
            },
            k,
        );
        let d = match (tik, pse) {
            (Ok(t), Ok(p)) => max_abs(&(t - &p)) / max_abs(&p).max(1.0),
            _ => f64::NAN,
        };
        report.record("recon", "tikhonov-limit", d, TIKHONOV_LIMIT_TOL);
    }
}

fn gaussian_checks(report: &mut ValidationReport, prior: &GaussianState, chan: &GaussianChannel) {
    let d = chan.form().matrix();
    report.record_bool(
        "symplectic",
        "form-squared",
        d * d == -PhaseMatrix::identity(d.nrows(), d.ncols()),
    );
    report.record(
        "gaussian",
        "prior-validity",
        -validate_state(prior).min_eig,
        POSITIVITY_SLACK,
    );
    report.record(
        "gaussian",
        "channel-validity",
        -validate_channel(chan).min_eig,
        POSITIVITY_SLACK,
    );
    let y = chan.y().clone().symmetric_eigenvalues().min();
    report.record("gaussian", "noise-psd", -y, POSITIVITY_SLACK);
    let out = apply_channel(chan, prior)
        .map(|s| -validate_state(&s).min_eig)
        .unwrap_or(f64::NAN);
    report.record("gaussian", "output-validity", out, POSITIVITY_SLACK);
    let twice = chan.then(chan).map(|c2| {
        let direct = c2.map_covariance(prior.cov());
        let stepwise = chan.map_covariance(&chan.map_covariance(prior.cov()));
        let cp = -validate_channel(&c2).min_eig;
        (
            max_abs(&(direct - &stepwise)) / max_abs(&stepwise).max(1.0),
            cp,
        )
    });
    let (comp, cp) = twice.unwrap_or((f64::NAN, f64::NAN));
    report.record("gaussian", "composition", comp, 1e-10);
    report.record("gaussian", "composition-validity", cp, POSITIVITY_SLACK);
}

/// Runs every model-level check on `(prior, chan)`. Returns how many metrics
/// had to be skipped because the noisy state is too close to purity.
pub fn check_model(
    report: &mut ValidationReport,
    prior: &GaussianState,
    chan: &GaussianChannel,
    opts: &KernelOptions,
    rng: &mut ChaCha8Rng,
    probes: usize,
) -> usize {
    gaussian_checks(report, prior, chan);
    let form = chan.form();
    let b = chan.map_covariance(prior.cov());
    williamson_residuals(report, prior.cov(), form);
    williamson_residuals(report, &b, form);
    propagator_invariants(report, prior.cov(), form, opts.epsilon_purity);
    propagator_invariants(report, &b, form, opts.epsilon_purity);
    kernel_checks(report, prior, chan, opts, rng, probes)
}

fn field_checks(report: &mut ValidationReport, model: &FieldModel) -> Result<()> {
    let opts = model.kernel_options();
    for metric in MetricKind::ALL {
        let spec = kernel_spectrum_for(model, metric)?;
        let mut excluded = 0;
        for blk in build_mode_blocks(model)? {
            let Some(m) = &blk.matrices else { continue };
            match transpose_kernel_with(metric, &m.prior, &m.channel, &opts) {
                Ok(k) => {
                    let xs = k.x_star();
                    report.record(
                        "field",
                        "block-diagonal",
                        xs[(0, 1)].abs().max(xs[(1, 0)].abs()),
                        crate::field::BLOCK_DIAGONAL_TOL,
                    );
                    let m_rec = xs.transpose();
                    let amp = (k.channel_x() * m_rec.transpose()).singular_values().max();
                    report.record("field", "sector-bound", amp - 1.0, CONTRACTION_TOL);
                }
                Err(_) => excluded += 1,
            }
        }
        if excluded > 0 {
            report.notes.push(format!(
                "{metric}: {excluded} of {} modes excluded (noisy state within ε of purity)",
                model.n_sites
            ));
        }
        // parity: rows j and −j agree
        let parity = spec
            .rows
            .iter()
            .filter(|r| r.j > -(model.n_sites as i64) / 2)
            .map(|r| {
                let mirror = spec.rows.iter().find(|s| s.j == -r.j).expect("mirror mode");
                if r.status != mirror.status {
                    f64::INFINITY
                } else if r.status == ModeStatus::Ok {
                    (r.eig_q - mirror.eig_q)
                        .abs()
                        .max((r.eig_p - mirror.eig_p).abs())
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max);
        report.record("field", "parity", parity, 0.0);
        if metric == MetricKind::Bures {
            report.record("field", "bures-tail", bures_tail_defect(&spec), 0.0);
        }
    }

    let small = FieldModel {
        n_sites: model.n_sites.min(64),
        ..model.clone()
    };
    report.record(
        "field",
        "fft-vs-dense",
        fft_dense_defect(&small)?,
        FFT_DENSE_TOL,
    );
    Ok(())
}

/// Beyond each quadrature's Bures maximum the Bures eigenvalue must not
/// increase; the naive inverse must increase with `k` throughout.
fn bures_tail_defect(spec: &crate::field::KernelSpectrum) -> f64 {
    let mut rows: Vec<_> = spec.ok_rows().filter(|r| r.k > 0.0).collect();
    rows.sort_by(|a, b| a.k.total_cmp(&b.k));
    let quads: [fn(&crate::field::SpectrumRow) -> f64; 2] = [|r| r.eig_q, |r| r.eig_p];
    let mut worst: f64 = 0.0;
    for eig in quads {
        let Some(peak) = (0..rows.len()).max_by(|&a, &b| eig(rows[a]).total_cmp(&eig(rows[b])))
        else {
            return 0.0;
        };
        for w in rows[peak..].windows(2) {
            worst = worst.max(eig(w[1]) - eig(w[0]));
        }
    }
    for w in rows.windows(2) {
        if w[1].naive_inverse <= w[0].naive_inverse && w[1].x < 1.0 {
            worst = worst
                .max(w[0].naive_inverse - w[1].naive_inverse)
                .max(f64::MIN_POSITIVE);
        }
    }
    worst
}

fn fft_dense_defect(model: &FieldModel) -> Result<f64> {
    let n = model.n_sites;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut data = crate::field::FieldData::zeros(n, model.lattice_spacing);
    data.q[0] = 1.0;
    for v in data.p.iter_mut() {
        *v = rng.random_range(-1.0..1.0);
    }
    let mut worst: f64 = 0.0;
    for method in [
        ReconstructionMethod::AdjointOnly(model.metric),
        ReconstructionMethod::Wiener,
    ] {
        let mult = reconstruction_multipliers(model, method)?;
        let fft = crate::field::apply_kernel_fft(model, &mult, &data)?;
        let dq = dense_circulant(&mult.q) * nalgebra::DVector::from_column_slice(&data.q);
        let dp = dense_circulant(&mult.p) * nalgebra::DVector::from_column_slice(&data.p);
        for i in 0..n {
            worst = worst
                .max((fft.q[i] - dq[i]).abs())
                .max((fft.p[i] - dp[i]).abs());
        }
    }
    Ok(worst)
}

/// Field suite and per-mode model checks on `model`, then `trials` random
/// models drawn from `seed`.
pub fn run_suite(model: &FieldModel, trials: usize, seed: u64) -> Result<ValidationReport> {
    model.validate()?;
    let mut report = ValidationReport::default();
    let opts = model.kernel_options();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for blk in build_mode_blocks(model)? {
        let Some(m) = &blk.matrices else { continue };
        let before = report.all_passed();
        check_model(
            &mut report,
            &m.prior,
            &m.channel,
            &opts,
            &mut rng,
            PROBE_PAIRS,
        );
        if before && !report.all_passed() {
            remember_failure(
                &mut report,
                format!("field mode j = {}", blk.j),
                &m.prior,
                &m.channel,
            );
        }
    }
    field_checks(&mut report, model)?;

    let ropts = RandomModelOptions {
        epsilon_purity: model.epsilon_purity,
        ..RandomModelOptions::default()
    };
    for t in 0..trials {
        let rm = random_model(&mut rng, &ropts)?;
        let before = report.all_passed();
        check_model(
            &mut report,
            &rm.prior,
            &rm.channel,
            &opts,
            &mut rng,
            PROBE_PAIRS,
        );
        if before && !report.all_passed() {
            remember_failure(
                &mut report,
                format!("random trial {t} (seed {seed})"),
                &rm.prior,
                &rm.channel,
            );
        }
    }
    Ok(report)
}

fn remember_failure(
    report: &mut ValidationReport,
    origin: String,
    prior: &GaussianState,
    chan: &GaussianChannel,
) {
    let check = report
        .failures()
        .next()
        .map(|c| format!("{}/{}", c.suite, c.name))
        .unwrap_or_default();
    report.failing_model = Some(FailingModel {
        origin,
        check,
        prior: prior.cov().clone(),
        x: chan.x().clone(),
        y: chan.y().clone(),
    });
}

//! Newton iteration, linearization and continuation on the torus.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::gmres::gmres;
use super::pointwise::{is_positive, small_angle, small_eta_inverse, trace_product, Herm2};
use super::spectral::{hessian_symbol, Hessian, SpectralGrid};
use super::{IterationRecord, PotentialField, SolverConfig, SolverReport, TorusModel};
use crate::error::{Error, Result};
use crate::hermitian::HermitianPencil;

const FD_STEP: f64 = 1e-5;

/// Pointwise pencils `(χ(x), ω_φ(x))` over the grid.
#[derive(Clone, Debug)]
pub struct PencilField<'a> {
    n: usize,
    chi: &'a [Herm2],
    omega: Vec<Herm2>,
}

impl PencilField<'_> {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn chi(&self, i: usize) -> Herm2 {
        self.chi[i]
    }

    pub fn omega(&self, i: usize) -> Herm2 {
        self.omega[i]
    }

    pub fn pencil(&self, i: usize) -> Result<HermitianPencil> {
        HermitianPencil::new(
            self.chi[i].to_matrix(self.n),
            self.omega[i].to_matrix(self.n),
        )
    }
}

/// Discretized problem for one model: the grid, the deformed metric `χ(x)` and
/// the background form `A`.
#[derive(Debug)]
pub struct TorusSolver {
    model: TorusModel,
    grid: SpectralGrid,
    chi: Vec<Herm2>,
    a: Herm2,
    class_arg: f64,
}

fn range(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

fn sup_distance(values: &[f64], target: f64) -> f64 {
    values.iter().fold(0.0, |m, v| m.max((target - v).abs()))
}

impl TorusSolver {
    /// Builds `χ = I + s Σ amp ∂∂̄cos(k·x)` analytically on the grid.
    pub fn new(model: TorusModel) -> Result<Self> {
        let n = model.n();
        let grid = SpectralGrid::new(n, model.grid())?;
        let s = model.psi_amplitude();
        let modes: Vec<(Vec<f64>, Herm2, f64)> = model
            .psi_modes()
            .iter()
            .map(|m| {
                let k: Vec<f64> = m.k.iter().map(|&v| v as f64).collect();
                let sym = hessian_symbol(n, &k[..n], &k[n..]);
                (k, sym, s * m.amplitude)
            })
            .collect();
        let id = Herm2::identity(n);
        let chi: Vec<Herm2> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let x = grid.coords(i);
                modes.iter().fold(id, |acc, (k, sym, amp)| {
                    let phase: f64 = k.iter().zip(&x).map(|(a, b)| a * b).sum();
                    acc.add(&sym.scale(amp * phase.cos()))
                })
            })
            .collect();
        if let Some(bad) = chi.iter().position(|c| !is_positive(n, c)) {
            return Err(Error::MetricDegenerate(bad));
        }
        let a = Herm2::from_matrix(model.a());
        let class_arg = model.class_arg()?;
        Ok(Self {
            model,
            grid,
            chi,
            a,
            class_arg,
        })
    }

    pub fn model(&self) -> &TorusModel {
        &self.model
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn chi_field(&self) -> &[Herm2] {
        &self.chi
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "field has {len} values, grid has {}",
                self.grid.len()
            )));
        }
        Ok(())
    }

    fn omega_from(&self, h: &Hessian, extra: Option<(f64, &Hessian)>) -> Vec<Herm2> {
        (0..h.len())
            .into_par_iter()
            .map(|i| {
                let mut w = self.a.add(&h.at(i));
                if let Some((alpha, hv)) = extra {
                    w = w.add(&hv.at(i).scale(alpha));
                }
                w
            })
            .collect()
    }

    fn angles(&self, omega: &[Herm2]) -> Vec<f64> {
        let n = self.model.n();
        omega
            .par_iter()
            .zip(self.chi.par_iter())
            .map(|(w, c)| small_angle(n, c, w))
            .collect()
    }

    fn eta_inverse(&self, omega: &[Herm2]) -> Vec<Herm2> {
        let n = self.model.n();
        omega
            .par_iter()
            .zip(self.chi.par_iter())
            .map(|(w, c)| small_eta_inverse(n, c, w))
            .collect()
    }

    /// `-tr(η⁻¹ H)` pointwise.
    fn apply_with(&self, einv: &[Herm2], h: &Hessian) -> Vec<f64> {
        let n = self.model.n();
        einv.par_iter()
            .enumerate()
            .map(|(i, e)| -trace_product(n, e, &h.at(i)))
            .collect()
    }

    pub fn omega_field(&self, phi: &PotentialField) -> Result<PencilField<'_>> {
        self.check_len(phi.len())?;
        let h = self.grid.hessian(phi.values());
        Ok(PencilField {
            n: self.model.n(),
            chi: &self.chi,
            omega: self.omega_from(&h, None),
        })
    }

    /// Pointwise `Σ arccot(λ_i)` of `ω_φ` relative to `χ`.
    pub fn q_field(&self, phi: &PotentialField) -> Result<Vec<f64>> {
        let field = self.omega_field(phi)?;
        Ok(self.angles(&field.omega))
    }

    /// Pointwise `η⁻¹` for `ω_φ`.
    pub fn eta_inverse_field(&self, phi: &PotentialField) -> Result<Vec<Herm2>> {
        let field = self.omega_field(phi)?;
        Ok(self.eta_inverse(&field.omega))
    }

    /// Derivative of `q_field` at `phi` in direction `v`: `-η^{jk̄} v_{jk̄}`.
    pub fn linearized_apply(&self, phi: &PotentialField, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v.len())?;
        let einv = self.eta_inverse_field(phi)?;
        Ok(self.apply_with(&einv, &self.grid.hessian(v)))
    }

    /// Sup-norm error of `linearized_apply` against a central difference with
    /// step `1e-5`, relative to the sup norm of the linearization. Returns the
    /// absolute error when both sides vanish.
    pub fn linearization_fd_error(&self, phi: &PotentialField, v: &[f64]) -> Result<f64> {
        self.check_len(phi.len())?;
        self.check_len(v.len())?;
        let hphi = self.grid.hessian(phi.values());
        let hv = self.grid.hessian(v);
        let omega = self.omega_from(&hphi, None);
        let lin = self.apply_with(&self.eta_inverse(&omega), &hv);
        let plus = self.angles(&self.omega_from(&hphi, Some((FD_STEP, &hv))));
        let minus = self.angles(&self.omega_from(&hphi, Some((-FD_STEP, &hv))));
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..lin.len() {
            let fd = (plus[i] - minus[i]) / (2.0 * FD_STEP);
            err = err.max((fd - lin[i]).abs());
            scale = scale.max(lin[i].abs());
        }
        Ok(if scale > 1e-12 { err / scale } else { err })
    }

    /// Random trigonometric direction with a few modes of wave number at most 2.
    pub fn random_direction(&self, rng: &mut impl Rng) -> Vec<f64> {
        let dims = 2 * self.model.n();
        let terms: Vec<(Vec<f64>, f64, f64)> = (0..4)
            .map(|_| {
                let k: Vec<f64> = (0..dims).map(|_| rng.gen_range(-2i32..=2) as f64).collect();
                (k, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI))
            })
            .collect();
        (0..self.grid.len())
            .into_par_iter()
            .map(|i| {
                let x = self.grid.coords(i);
                terms
                    .iter()
                    .map(|(k, c, ph)| {
                        let phase: f64 = k.iter().zip(&x).map(|(a, b)| a * b).sum();
                        c * (phase + ph).cos()
                    })
                    .sum()
            })
            .collect()
    }

    /// Worst [`Self::linearization_fd_error`] over `trials` random directions.
    pub fn linearization_fd_check(
        &self,
        phi: &PotentialField,
        trials: usize,
        seed: u64,
    ) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let v = self.random_direction(&mut rng);
            worst = worst.max(self.linearization_fd_error(phi, &v)?);
        }
        Ok(worst)
    }

    /// Damped Newton for `q_field(φ) = theta_hat`.
    ///
    /// Each step solves `DQ(v) + c = θ̂ - Q(φ)` for a mean-zero `v` and a
    /// constant `c` with right-preconditioned GMRES. The constant absorbs any
    /// mismatch between `θ̂` and the class constant, which the potential
    /// cannot remove.
    pub fn newton_solve(
        &self,
        theta_hat: f64,
        phi0: PotentialField,
        config: &SolverConfig,
    ) -> Result<(SolverReport, PotentialField)> {
        self.check_len(phi0.len())?;
        if !theta_hat.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "target angle {theta_hat} is not finite"
            )));
        }
        if config.strict_supercritical && !(theta_hat > 0.0 && theta_hat < PI) {
            return Err(Error::NotSupercritical(theta_hat));
        }
        let n = self.model.n();
        let len = self.grid.len();
        let inside = |lo: f64, hi: f64| lo > 0.0 && hi < PI;

        let mut phi = PotentialField::from_values(phi0.into_values());
        let mut hphi = self.grid.hessian(phi.values());
        let mut omega = self.omega_from(&hphi, None);
        let mut q = self.angles(&omega);
        let mut residual = sup_distance(&q, theta_hat);
        let mut report = SolverReport {
            converged: false,
            iterations: 0,
            residual_sup: residual,
            angle_min: 0.0,
            angle_max: 0.0,
            theta_hat,
            class_arg: self.class_arg,
            psi_amplitude: self.model.psi_amplitude(),
            initial_residual: residual,
            linear_iterations: 0,
            history: vec![IterationRecord {
                iter: 0,
                residual,
                alpha: 0.0,
            }],
        };

        loop {
            if residual < config.tol {
                let (lo, hi) = range(&q);
                if !config.strict_supercritical || inside(lo, hi) {
                    report.converged = true;
                }
                break;
            }
            if report.iterations >= config.max_iterations {
                break;
            }

            let einv = self.eta_inverse(&omega);
            let mut ebar = Herm2::default();
            for e in &einv {
                ebar = ebar.add(e);
            }
            let ebar = ebar.scale(1.0 / len as f64);
            let precond: Vec<f64> = (0..len)
                .into_par_iter()
                .map(|k| {
                    if k == 0 {
                        return 1.0;
                    }
                    let p = -trace_product(n, &ebar, &self.grid.symbol(k));
                    if p > 0.0 {
                        1.0 / p
                    } else {
                        1.0
                    }
                })
                .collect();
            let precondition = |z: &[f64]| -> Vec<Complex64> {
                let mut spec = self.grid.forward_real(z);
                spec.par_iter_mut()
                    .zip(precond.par_iter())
                    .for_each(|(s, m)| *s *= m);
                spec
            };
            let operator = |z: &[f64]| -> Vec<f64> {
                let spec = precondition(z);
                let mean = spec[0].re / len as f64;
                let h = self.grid.hessian_from_spectrum(&spec);
                let mut out = self.apply_with(&einv, &h);
                out.par_iter_mut().for_each(|o| *o += mean);
                out
            };
            let rhs: Vec<f64> = q.iter().map(|v| theta_hat - v).collect();
            let (z, outcome) = gmres(
                operator,
                &rhs,
                config.linear_tol,
                config.restart,
                config.max_linear_iterations,
            );
            report.linear_iterations += outcome.iterations;
            let spec = precondition(&z);
            let hv = self.grid.hessian_from_spectrum(&spec);
            let step = PotentialField::from_values(self.grid.inverse_real(spec));

            let mut alpha = 1.0;
            let mut accepted = false;
            let mut blocked = None;
            for _ in 0..=config.max_halvings {
                let trial_omega = self.omega_from(&hphi, Some((alpha, &hv)));
                let trial_q = self.angles(&trial_omega);
                let trial_res = sup_distance(&trial_q, theta_hat);
                if trial_res < residual {
                    let (lo, hi) = range(&trial_q);
                    if !config.strict_supercritical || inside(lo, hi) {
                        accepted = true;
                        break;
                    }
                    blocked = Some((lo, hi));
                }
                alpha *= 0.5;
            }
            report.iterations += 1;
            if !accepted {
                let (lo, hi) = range(&q);
                report.angle_min = lo;
                report.angle_max = hi;
                report.residual_sup = residual;
                if let Some((min, max)) = blocked {
                    return Err(Error::AngleRangeViolation { min, max });
                }
                return Err(Error::NotConverged(Box::new(report)));
            }
            let updated: Vec<f64> = phi
                .values()
                .iter()
                .zip(step.values())
                .map(|(p, v)| p + alpha * v)
                .collect();
            phi = PotentialField::from_values(updated);
            hphi = self.grid.hessian(phi.values());
            omega = self.omega_from(&hphi, None);
            q = self.angles(&omega);
            residual = sup_distance(&q, theta_hat);
            report.history.push(IterationRecord {
                iter: report.iterations,
                residual,
                alpha,
            });
        }

        let (lo, hi) = range(&q);
        report.angle_min = lo;
        report.angle_max = hi;
        report.residual_sup = residual;
        if report.converged {
            Ok((report, phi))
        } else if config.strict_supercritical && residual < config.tol {
            Err(Error::AngleRangeViolation { min: lo, max: hi })
        } else {
            Err(Error::NotConverged(Box::new(report)))
        }
    }
}

/// Reports of a continuation run and the final potential.
#[derive(Clone, Debug)]
pub struct ContinuationRun {
    pub reports: Vec<SolverReport>,
    pub phi: PotentialField,
}

/// Ramps the deformation amplitude from 0 to `model.psi_amplitude()` in
/// `steps` equal increments, warm-starting each solve from the previous one.
pub fn continuation(
    model: &TorusModel,
    theta_hat: f64,
    steps: usize,
    config: &SolverConfig,
) -> Result<ContinuationRun> {
    if steps == 0 {
        return Err(Error::InvalidArgument(
            "continuation needs at least one step".into(),
        ));
    }
    let constant = model.constant_angle();
    if config.strict_supercritical && !(constant > 0.0 && constant < PI) {
        return Err(Error::NotSupercritical(constant));
    }
    let target = model.psi_amplitude();
    let len = model.grid().pow(2 * model.n() as u32);
    let mut phi = PotentialField::zeros(len);
    let mut reports = Vec::with_capacity(steps);
    let mut last_converged = 0.0;
    for k in 1..=steps {
        let s = target * k as f64 / steps as f64;
        let solver = TorusSolver::new(model.with_amplitude(s)?)?;
        match solver.newton_solve(theta_hat, phi.clone(), config) {
            Ok((report, next)) => {
                reports.push(report);
                phi = next;
                last_converged = s;
            }
            Err(Error::NotConverged(report)) => {
                return Err(Error::ContinuationStalled {
                    amplitude: s,
                    last_converged,
                    report,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ContinuationRun { reports, phi })
}

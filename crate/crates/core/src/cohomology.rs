//! Class-level angle data.
//!
//! An [`IntersectionProfile`] stores `I_k = ∫_X ω^k ∧ χ^{n-k}`. From it we get the
//! complex volume polynomial `γ(t) = ∫_X (tω + iχ)^n`, its principal argument
//! at `t = 1`, the continuous lift `Θ(t)` of `arg γ(t)` starting from `nπ/2`,
//! and the real zeros of `γ` on `[0, 1]` that obstruct such a lift.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{binomial, ComplexPoly};

/// Relative threshold on `|γ|` below which the volume counts as zero.
pub const ZERO_VOLUME_TOL: f64 = 1e-12;
/// Relative residual `|γ(t)| / scale` accepted for a root on `[0, 1]`.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;
/// A raw argument step larger than this triggers bisection of the sample gap.
pub const MAX_RAW_STEP: f64 = FRAC_PI_4;

const MAX_BISECTION_DEPTH: u32 = 60;

/// Intersection numbers `I_k = ∫_X ω^k ∧ χ^{n-k}` for `k = 0..=n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionProfile {
    n: usize,
    numbers: Vec<f64>,
}

impl IntersectionProfile {
    pub fn new(n: usize, numbers: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProfile("dimension must be positive".into()));
        }
        if numbers.len() != n + 1 {
            return Err(Error::InvalidProfile(format!(
                "expected {} intersection numbers for n = {n}, got {}",
                n + 1,
                numbers.len()
            )));
        }
        if numbers.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile(
                "non-finite intersection number".into(),
            ));
        }
        if !(numbers[0] > 0.0) {
            return Err(Error::InvalidProfile(format!(
                "∫χ^n must be positive, got {}",
                numbers[0]
            )));
        }
        Ok(Self { n, numbers })
    }

    /// Profile of the class `ω = Aχ` with `∫χ^n = volume`.
    pub fn homogeneous(n: usize, a: f64, volume: f64) -> Result<Self> {
        Self::new(n, (0..=n).map(|k| volume * a.powi(k as i32)).collect())
    }

    /// Profile of a constant form with relative eigenvalues `eigenvalues` on a
    /// space of `χ`-volume `volume`: `I_k = volume · e_k(λ) / C(n, k)`.
    pub fn from_eigenvalues(eigenvalues: &[f64], volume: f64) -> Result<Self> {
        let n = eigenvalues.len();
        let mut elementary = vec![0.0; n + 1];
        elementary[0] = 1.0;
        for (m, &l) in eigenvalues.iter().enumerate() {
            for k in (1..=m + 1).rev() {
                elementary[k] += l * elementary[k - 1];
            }
        }
        Self::new(
            n,
            (0..=n)
                .map(|k| volume * elementary[k] / binomial(n, k))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn numbers(&self) -> &[f64] {
        &self.numbers
    }

    /// Same profile with `ω` replaced by `-ω`.
    pub fn negated(&self) -> Self {
        Self {
            n: self.n,
            numbers: self
                .numbers
                .iter()
                .enumerate()
                .map(|(k, &v)| if k % 2 == 1 { -v } else { v })
                .collect(),
        }
    }
}

fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `γ(t) = Σ_k C(n,k) t^k i^{n-k} I_k`.
pub fn gamma_polynomial(profile: &IntersectionProfile) -> ComplexPoly {
    let n = profile.n;
    ComplexPoly {
        coeffs: (0..=n)
            .map(|k| i_pow(n - k) * (binomial(n, k) * profile.numbers[k]))
            .collect(),
    }
}

fn principal(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Principal argument of `γ(1) = ∫_X (ω + iχ)^n`, in `(-π, π]`.
pub fn principal_arg(profile: &IntersectionProfile) -> Result<f64> {
    let gamma = gamma_polynomial(profile);
    let g1 = gamma.eval(1.0);
    if g1.norm() <= ZERO_VOLUME_TOL * gamma.max_coeff() {
        return Err(Error::ZeroVolume(g1.norm()));
    }
    Ok(principal(g1))
}

/// Real `t ∈ [0, 1]` where `γ(t) = 0`.
///
/// Candidates are the near-real eigenvalues of the companion matrix of
/// `|γ(t)|²`. Real zeros of `|γ|²` are at least double, so eigenvalues come out
/// split by roughly `sqrt(eps)`; each candidate is polished by Newton's method
/// on `d|γ|²/dt` before the residual filter.
pub fn find_roots_on_interval(profile: &IntersectionProfile) -> Vec<f64> {
    let gamma = gamma_polynomial(profile);
    let scale = gamma.max_coeff();
    let modulus = gamma.modulus_squared().trimmed(1e-14);
    let d1 = modulus.derivative();
    let d2 = d1.derivative();

    let mut roots: Vec<f64> = Vec::new();
    for z in modulus.companion_roots() {
        if z.im.abs() > 1e-3 * (1.0 + z.norm()) || z.re < -1e-2 || z.re > 1.0 + 1e-2 {
            continue;
        }
        let start = z.re;
        let mut t = start;
        let mut best = (gamma.eval(t).norm(), t);
        for _ in 0..60 {
            let curvature = d2.eval(t);
            if curvature.abs() < f64::MIN_POSITIVE {
                break;
            }
            let next = t - d1.eval(t) / curvature;
            if !next.is_finite() || (next - start).abs() > 1e-2 {
                break;
            }
            t = next;
            let r = gamma.eval(t).norm();
            if r < best.0 {
                best = (r, t);
            }
        }
        let t = best.1;
        if !(-1e-9..=1.0 + 1e-9).contains(&t) {
            continue;
        }
        let t = t.clamp(0.0, 1.0);
        if gamma.eval(t).norm() < ROOT_RESIDUAL_TOL * scale {
            roots.push(t);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-7);
    roots
}

/// How a zero of `γ` on `[0, 1]` is reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootSeverity {
    /// A proven obstruction to solvability (complex dimension 3).
    Obstruction,
    /// The lift does not exist, but no solvability statement is attached.
    Warning,
}

/// Dimension 3 always gets `Obstruction`; other dimensions only when `strict`.
pub fn root_severity(n: usize, strict: bool) -> RootSeverity {
    if n == 3 || strict {
        RootSeverity::Obstruction
    } else {
        RootSeverity::Warning
    }
}

/// Sampled continuous lift of `arg γ(t)` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleBranch {
    pub t_samples: Vec<f64>,
    pub gamma_values: Vec<Complex64>,
    pub theta_values: Vec<f64>,
    pub min_modulus: f64,
    pub theta_end: f64,
}

impl AngleBranch {
    /// CSV with header `t,re,im,abs,theta`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,re,im,abs,theta")?;
        for ((t, g), th) in self
            .t_samples
            .iter()
            .zip(&self.gamma_values)
            .zip(&self.theta_values)
        {
            writeln!(out, "{t:?},{:?},{:?},{:?},{th:?}", g.re, g.im, g.norm())?;
        }
        Ok(())
    }
}

struct Lifter<'a> {
    gamma: &'a ComplexPoly,
    dgamma: ComplexPoly,
    tol: f64,
    branch: AngleBranch,
}

impl Lifter<'_> {
    fn last(&self) -> (f64, Complex64, f64) {
        let b = &self.branch;
        let i = b.t_samples.len() - 1;
        (b.t_samples[i], b.gamma_values[i], b.theta_values[i])
    }

    fn advance(&mut self, t_next: f64, depth: u32) -> Result<()> {
        let (t0, g0, theta0) = self.last();
        let g1 = self.gamma.eval(t_next);
        if g1.norm() < self.tol {
            return Err(Error::RootOnPath(t_next));
        }
        let step = (g1 / g0).arg();
        // the wrapped step alone aliases full turns, so also bound the local rate
        let rate = (self.dgamma.eval(t0) / g0)
            .norm()
            .max((self.dgamma.eval(t_next) / g1).norm());
        if step.abs() > MAX_RAW_STEP || rate * (t_next - t0) > MAX_RAW_STEP {
            if depth >= MAX_BISECTION_DEPTH {
                return Err(Error::RootOnPath(0.5 * (t0 + t_next)));
            }
            let mid = 0.5 * (t0 + t_next);
            self.advance(mid, depth + 1)?;
            return self.advance(t_next, depth + 1);
        }
        let raw = principal(g1);
        let lifted = raw + 2.0 * PI * ((theta0 + step - raw) / (2.0 * PI)).round();
        let b = &mut self.branch;
        b.t_samples.push(t_next);
        b.gamma_values.push(g1);
        b.theta_values.push(lifted);
        b.min_modulus = b.min_modulus.min(g1.norm());
        Ok(())
    }
}

/// Continuous lift `Θ(t)` of `arg γ(t)` with `Θ(0) = nπ/2`, sampled on a
/// uniform grid of `samples` points refined by bisection wherever the raw
/// argument, or the gap times `|γ'/γ|` at either end, exceeds `π/4`.
pub fn lift_branch(profile: &IntersectionProfile, samples: usize) -> Result<AngleBranch> {
    if samples < 2 {
        return Err(Error::InvalidArgument(
            "lift_branch needs at least 2 samples".into(),
        ));
    }
    if let Some(&t) = find_roots_on_interval(profile).first() {
        return Err(Error::RootOnPath(t));
    }
    let gamma = gamma_polynomial(profile);
    let g0 = gamma.eval(0.0);
    let mut lifter = Lifter {
        gamma: &gamma,
        dgamma: gamma.derivative(),
        tol: ROOT_RESIDUAL_TOL * gamma.max_coeff(),
        branch: AngleBranch {
            t_samples: vec![0.0],
            gamma_values: vec![g0],
            theta_values: vec![profile.n as f64 * FRAC_PI_2],
            min_modulus: g0.norm(),
            theta_end: f64::NAN,
        },
    };
    for k in 1..samples {
        let t = if k == samples - 1 {
            1.0
        } else {
            k as f64 / (samples - 1) as f64
        };
        lifter.advance(t, 0)?;
    }
    let mut branch = lifter.branch;
    branch.theta_end = *branch.theta_values.last().expect("at least two samples");
    Ok(branch)
}

/// `I_3 · I_0 < 9 · I_2 · I_1`.
pub fn chern_inequality_3d(profile: &IntersectionProfile) -> Result<bool> {
    if profile.n != 3 {
        return Err(Error::WrongDimension(profile.n));
    }
    let i = &profile.numbers;
    Ok(i[3] * i[0] < 9.0 * i[2] * i[1])
}

/// Direction of `Im γ(t) = 3t² I_2 - I_0` on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImMonotoneReport {
    pub im_at_0: f64,
    pub im_at_1: f64,
    /// `Im γ` is a quadratic with vertex at `t = 0`, hence monotone on `[0, 1]`.
    pub monotone: bool,
    pub trend: Trend,
    /// `Im γ(t) < 0` for every `t ∈ [0, 1)`.
    pub sign_definite: bool,
}

pub fn im_monotone_check_3d(profile: &IntersectionProfile) -> Result<ImMonotoneReport> {
    if profile.n != 3 {
        return Err(Error::WrongDimension(profile.n));
    }
    let i = &profile.numbers;
    let im_at_0 = -i[0];
    let im_at_1 = 3.0 * i[2] - i[0];
    let trend = if i[2] > 0.0 {
        Trend::Increasing
    } else if i[2] < 0.0 {
        Trend::Decreasing
    } else {
        Trend::Constant
    };
    // Im γ(0) = -I_0 < 0, so with a monotone Im γ the sign can only flip
    // before t = 1 if Im γ(1) > 0
    Ok(ImMonotoneReport {
        im_at_0,
        im_at_1,
        monotone: true,
        trend,
        sign_definite: im_at_1 <= 0.0,
    })
}

//! Numerical positivity conditions and membership verdicts.
//!
//! A class lies in the positive set when its principal argument is in
//! `(0, π)` and `∫_V Vol^p(ω)` is positive on every proper subvariety `V`.
//! Solvability of the equation itself is only decided for the homogeneous
//! torus family `ω = Aχ`, where the maximum principle pins the constant.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cohomology::{principal_arg, IntersectionProfile};
use crate::error::{Error, Result};
use crate::hermitian::{arccot, cot_checked, COT_ENDPOINT_TOL};
use crate::poly::{binomial, RealPoly};

/// Samples per unit length used by [`family_monotone_check`] (at least 1000 in total).
const MONOTONE_SAMPLES_PER_UNIT: f64 = 200.0;

/// A proper analytic subvariety, known only through `J_q = ∫_V ω^q ∧ χ^{p-q}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubvarietyData {
    name: String,
    p: usize,
    restricted: Vec<f64>,
}

impl SubvarietyData {
    pub fn new(name: impl Into<String>, p: usize, restricted: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if p == 0 {
            return Err(Error::InvalidSubvariety(format!(
                "{name}: dimension must be positive"
            )));
        }
        if restricted.len() != p + 1 {
            return Err(Error::InvalidSubvariety(format!(
                "{name}: expected {} restricted numbers for p = {p}, got {}",
                p + 1,
                restricted.len()
            )));
        }
        if restricted.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSubvariety(format!(
                "{name}: non-finite restricted number"
            )));
        }
        if !(restricted[0] > 0.0) {
            return Err(Error::InvalidSubvariety(format!(
                "{name}: ∫_V χ^p must be positive, got {}",
                restricted[0]
            )));
        }
        Ok(Self {
            name,
            p,
            restricted,
        })
    }

    /// The whole space viewed as a subvariety of dimension `n`.
    pub fn whole_space(profile: &IntersectionProfile) -> Self {
        Self {
            name: "X".into(),
            p: profile.dim(),
            restricted: profile.numbers().to_vec(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn restricted(&self) -> &[f64] {
        &self.restricted
    }

    /// `∫_V (ω + (t + i)χ)^p = Σ_q C(p,q) (t + i)^{p-q} J_q` as a polynomial in `t`,
    /// split into real and imaginary parts.
    fn shifted_volume(&self) -> (RealPoly, RealPoly) {
        let unit = RealPoly::new(vec![1.0]);
        let mut re = RealPoly::new(vec![0.0]);
        let mut im = RealPoly::new(vec![0.0]);
        for q in 0..=self.p {
            // (t + i)^m with m = p - q, expanded as Re + i Im
            let (mut pr, mut pi) = (unit.clone(), RealPoly::new(vec![0.0]));
            for _ in 0..self.p - q {
                let t = RealPoly::new(vec![0.0, 1.0]);
                let nr = pr.mul(&t).add(&pi.scale(-1.0));
                let ni = pi.mul(&t).add(&pr);
                pr = nr;
                pi = ni;
            }
            let c = binomial(self.p, q) * self.restricted[q];
            re = re.add(&pr.scale(c));
            im = im.add(&pi.scale(c));
        }
        (re, im)
    }
}

/// `Σ_q C(p,q) i^{p-q} J_q = ∫_V (ω + iχ)^p`.
fn complex_volume(sub: &SubvarietyData) -> Complex64 {
    let mut z = Complex64::new(0.0, 0.0);
    let mut ipow = Complex64::new(1.0, 0.0);
    for q in (0..=sub.p).rev() {
        z += ipow * (binomial(sub.p, q) * sub.restricted[q]);
        ipow *= Complex64::new(0.0, 1.0);
    }
    z
}

/// `∫_V Vol^p(ω, θ) = Re Z - cot(θ) Im Z` with `Z = ∫_V (ω + iχ)^p`.
pub fn vol_integral(sub: &SubvarietyData, theta: f64) -> Result<f64> {
    let cot = cot_checked(theta)?;
    let z = complex_volume(sub);
    Ok(z.re - cot * z.im)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Undecidable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriState {
    pub decision: Decision,
    pub reason: String,
}

impl TriState {
    fn new(decision: Decision, reason: impl Into<String>) -> Self {
        Self {
            decision,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubvarietyMargin {
    pub name: String,
    pub p: usize,
    /// `∫_V Vol^p(ω)`; positive means the condition holds on `V`.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub in_p: bool,
    pub in_p_reason: String,
    pub margins: Vec<SubvarietyMargin>,
    pub min_margin: Option<f64>,
    pub in_k: TriState,
    pub in_k1: TriState,
    pub arg: f64,
    pub constant_angle: Option<f64>,
    /// Verdicts on `in_p` treat the supplied subvariety list as complete.
    pub assumes_complete_subvarieties: bool,
}

/// Positivity test against the supplied subvarieties.
///
/// `in_k` and `in_k1` are reported as undecidable; only
/// [`torus_family_classify`] can settle them.
pub fn p_membership(
    profile: &IntersectionProfile,
    subs: &[SubvarietyData],
) -> Result<MembershipVerdict> {
    let n = profile.dim();
    for sub in subs {
        if sub.p >= n {
            return Err(Error::InvalidSubvariety(format!(
                "{}: dimension {} is not proper in dimension {n}",
                sub.name, sub.p
            )));
        }
    }
    let arg = principal_arg(profile)?;
    let undecided = |what: &str| {
        TriState::new(
            Decision::Undecidable,
            format!("{what} is only decided for the homogeneous torus family; use the torus solver for constructive evidence"),
        )
    };
    let mut verdict = MembershipVerdict {
        in_p: false,
        in_p_reason: String::new(),
        margins: Vec::new(),
        min_margin: None,
        in_k: undecided("solvability"),
        in_k1: undecided("solvability modulo 2π"),
        arg,
        constant_angle: None,
        assumes_complete_subvarieties: true,
    };

    if arg.abs() <= COT_ENDPOINT_TOL || (PI - arg).abs() <= COT_ENDPOINT_TOL {
        verdict.in_p_reason = format!("DegenerateAngle: Arg = {arg} is an endpoint of (0, π)");
        return Ok(verdict);
    }
    if !(arg > 0.0 && arg < PI) {
        verdict.in_p_reason = format!("Arg = {arg} is outside (0, π)");
        return Ok(verdict);
    }
    for sub in subs {
        verdict.margins.push(SubvarietyMargin {
            name: sub.name.clone(),
            p: sub.p,
            value: vol_integral(sub, arg)?,
        });
    }
    verdict.min_margin = verdict.margins.iter().map(|m| m.value).reduce(f64::min);
    match verdict.margins.iter().find(|m| !(m.value > 0.0)) {
        Some(bad) => {
            verdict.in_p_reason = format!("∫_V Vol^p = {} ≤ 0 on {}", bad.value, bad.name);
        }
        None => {
            verdict.in_p = true;
            verdict.in_p_reason = if subs.is_empty() {
                "Arg ∈ (0, π); no proper subvarieties supplied".into()
            } else {
                format!(
                    "Arg ∈ (0, π) and all {} subvariety integrals are positive",
                    subs.len()
                )
            };
        }
    }
    Ok(verdict)
}

/// Checks that `h(t) = ∫_V Vol^p(ω + tχ, θ)` is non-decreasing on `[0, t_max]`.
pub fn family_monotone_check(sub: &SubvarietyData, theta: f64, t_max: f64) -> Result<bool> {
    let cot = cot_checked(theta)?;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let (re, im) = sub.shifted_volume();
    let h = re.add(&im.scale(-cot));
    let slope = h.derivative();
    let samples = ((t_max * MONOTONE_SAMPLES_PER_UNIT).ceil() as usize).max(1000);
    let values: Vec<f64> = (0..=samples)
        .map(|k| slope.eval(t_max * k as f64 / samples as f64))
        .collect();
    let scale = h
        .coeffs
        .iter()
        .fold(0.0_f64, |m, c| m.max(c.abs()))
        .max(f64::MIN_POSITIVE);
    Ok(values.iter().all(|&d| d >= -1e-10 * scale))
}

/// Classifies `ω = Aχ` on a torus without proper subvarieties.
pub fn torus_family_classify(n: usize, a: f64) -> Result<MembershipVerdict> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !a.is_finite() {
        return Err(Error::InvalidArgument(format!("A must be finite, got {a}")));
    }
    let constant = n as f64 * arccot(a);
    let profile = IntersectionProfile::homogeneous(n, a, 1.0)?;
    let mut verdict = p_membership(&profile, &[])?;
    verdict.constant_angle = Some(constant);

    let in_k = constant > COT_ENDPOINT_TOL && constant < PI - COT_ENDPOINT_TOL;
    verdict.in_k = if in_k {
        TriState::new(
            Decision::Yes,
            format!("φ = 0 solves Q = n·arccot(A) = {constant} ∈ (0, π)"),
        )
    } else {
        TriState::new(
            Decision::No,
            format!(
                "by the maximum principle the only attainable constant is n·arccot(A) = {constant}, which is not in (0, π)"
            ),
        )
    };
    verdict.in_k1 = if verdict.in_p {
        TriState::new(
            Decision::Yes,
            format!("Arg ∈ (0, π) and φ = 0 solves Q = Arg mod 2π (constant {constant})"),
        )
    } else {
        TriState::new(
            Decision::No,
            format!("Arg = {} is not in (0, π)", verdict.arg),
        )
    };
    Ok(verdict)
}

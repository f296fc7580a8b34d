//! Batch front end shared by the `dhym` binary and the integration tests.
//!
//! Every command reads one JSON manifold file (or only flags) and produces a
//! JSON value plus a process exit code:
//! 0 success, 2 input error, 3 degenerate data, 4 obstruction, 5 solver failure.

use std::f64::consts::PI;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::{
    chern_inequality_3d, find_roots_on_interval, gamma_polynomial, im_monotone_check_3d,
    lift_branch, principal_arg, root_severity, IntersectionProfile, RootSeverity,
};
use crate::error::Error;
use crate::hermitian::CMatrix;
use crate::positivity::{
    family_monotone_check, p_membership, torus_family_classify, Decision, SubvarietyData,
};
use crate::torus::{continuation, PsiMode, SolverConfig, TorusModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_OBSTRUCTION: i32 = 4;
pub const EXIT_NOT_CONVERGED: i32 = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubvarietySpec {
    pub name: String,
    pub p: usize,
    pub restricted: Vec<f64>,
}

/// Complex matrix as nested rows; `im` defaults to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixSpec {
    pub fn to_matrix(&self) -> Result<CMatrix, Error> {
        let n = self.re.len();
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if n == 0 || !shape_ok(&self.re) || self.im.as_ref().is_some_and(|im| !shape_ok(im)) {
            return Err(Error::InvalidModel("A must be a square matrix".into()));
        }
        Ok(CMatrix::from_fn(n, n, |r, c| {
            let im = self.im.as_ref().map_or(0.0, |m| m[r][c]);
            Complex64::new(self.re[r][c], im)
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(rename = "A")]
    pub a: MatrixSpec,
    #[serde(default)]
    pub psi_modes: Vec<PsiMode>,
    #[serde(default)]
    pub psi_amplitude: f64,
}

/// Input format shared by all commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    pub n: usize,
    pub intersection: Vec<f64>,
    #[serde(default)]
    pub subvarieties: Vec<SubvarietySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusSpec>,
}

impl ManifoldFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::input(e.to_string()))?;
        file.profile()?;
        file.subvariety_data()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn profile(&self) -> Result<IntersectionProfile, CliError> {
        Ok(IntersectionProfile::new(self.n, self.intersection.clone())?)
    }

    pub fn subvariety_data(&self) -> Result<Vec<SubvarietyData>, CliError> {
        self.subvarieties
            .iter()
            .map(|s| {
                SubvarietyData::new(s.name.clone(), s.p, s.restricted.clone())
                    .map_err(CliError::from)
            })
            .collect()
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    pub details: Option<Value>,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            kind: "input",
            message: message.into(),
            details: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": self.kind, "message": self.message, "exit_code": self.code });
        if let Some(d) = &self.details {
            v["details"] = d.clone();
        }
        v
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (code, kind, details) = match &e {
            Error::ZeroVolume(_) => (EXIT_DEGENERATE, "zero_volume", None),
            Error::MetricDegenerate(_) => (EXIT_DEGENERATE, "metric_degenerate", None),
            Error::RootOnPath(t) => (EXIT_OBSTRUCTION, "root_on_path", Some(json!({ "t": t }))),
            Error::NotConverged(r) => (
                EXIT_NOT_CONVERGED,
                "not_converged",
                serde_json::to_value(r).ok(),
            ),
            Error::ContinuationStalled {
                amplitude,
                last_converged,
                report,
            } => (
                EXIT_NOT_CONVERGED,
                "continuation_stalled",
                Some(json!({
                    "amplitude": amplitude,
                    "last_converged": last_converged,
                    "report": report,
                })),
            ),
            Error::AngleRangeViolation { min, max } => (
                EXIT_NOT_CONVERGED,
                "angle_range_violation",
                Some(json!({ "min": min, "max": max })),
            ),
            _ => (EXIT_INPUT, "input", None),
        };
        Self {
            code,
            kind,
            message,
            details,
        }
    }
}

/// Successful command output.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self {
            report,
            code: EXIT_OK,
        }
    }
}

pub type CmdResult = Result<Outcome, CliError>;

fn supercritical(arg: f64) -> bool {
    arg > 0.0 && arg < PI
}

/// Principal argument of `γ(1)`, `γ(1)` itself and the supercritical flag.
pub fn cmd_angle(file: &ManifoldFile) -> CmdResult {
    let profile = file.profile()?;
    let g1 = gamma_polynomial(&profile).eval(1.0);
    let arg = principal_arg(&profile)?;
    Ok(Outcome::ok(json!({
        "n": file.n,
        "arg": arg,
        "gamma_1": { "re": g1.re, "im": g1.im },
        "supercritical": supercritical(arg),
    })))
}

/// Roots of `γ` on `[0, 1]` and the lifted branch. Exit code 4 when a root is
/// an obstruction (dimension 3, or any dimension with `strict`).
pub fn cmd_gamma_track(
    file: &ManifoldFile,
    samples: usize,
    csv: Option<&Path>,
    strict: bool,
) -> CmdResult {
    let profile = file.profile()?;
    let n = file.n;
    let mut roots = find_roots_on_interval(&profile);
    let mut report = json!({ "n": n });

    let branch = if roots.is_empty() {
        match lift_branch(&profile, samples) {
            Ok(b) => Some(b),
            Err(Error::RootOnPath(t)) => {
                roots.push(t);
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    report["roots"] = json!(roots);
    if let Some(b) = &branch {
        report["theta_end"] = json!(b.theta_end);
        report["min_modulus"] = json!(b.min_modulus);
        report["branch_samples"] = json!(b.t_samples.len());
        if let Some(path) = csv {
            let out = File::create(path)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            b.write_csv(BufWriter::new(out))
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        }
    } else {
        report["theta_end"] = Value::Null;
    }
    if n == 3 {
        report["chern_inequality"] = json!(chern_inequality_3d(&profile)?);
        report["im_monotone"] =
            serde_json::to_value(im_monotone_check_3d(&profile)?).expect("serializable");
    }
    let mut code = EXIT_OK;
    if !roots.is_empty() {
        let severity = root_severity(n, strict);
        report["root_severity"] = serde_json::to_value(severity).expect("serializable");
        if severity == RootSeverity::Obstruction {
            code = EXIT_OBSTRUCTION;
        }
    }
    Ok(Outcome { report, code })
}

/// Positivity conditions for the supplied subvarieties plus the monotonicity
/// of `t ↦ ∫_V Vol^p(ω + tχ)` on `[0, tmax]`.
pub fn cmd_cjy_check(file: &ManifoldFile, tmax: f64) -> CmdResult {
    if !(tmax > 0.0) || !tmax.is_finite() {
        return Err(CliError::input(format!(
            "--tmax must be positive, got {tmax}"
        )));
    }
    let profile = file.profile()?;
    let subs = file.subvariety_data()?;
    let verdict = p_membership(&profile, &subs)?;
    let arg = verdict.arg;
    let monotone: Vec<Value> = if supercritical(arg) {
        let mut all = vec![SubvarietyData::whole_space(&profile)];
        all.extend(subs.iter().cloned());
        all.iter()
            .map(|s| {
                Ok(json!({
                    "name": s.name(),
                    "p": s.dim(),
                    "monotone": family_monotone_check(s, arg, tmax)?,
                }))
            })
            .collect::<Result<_, Error>>()?
    } else {
        Vec::new()
    };
    Ok(Outcome::ok(json!({
        "n": file.n,
        "verdict": verdict,
        "family_monotone": monotone,
        "tmax": tmax,
    })))
}

/// Target constant for `solve-torus`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThetaChoice {
    /// `Σ arccot(eig A)`.
    Auto,
    Value(f64),
}

impl FromStr for ThetaChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Self::Auto);
        }
        s.parse::<f64>()
            .map(Self::Value)
            .map_err(|_| format!("expected `auto` or a number, got `{s}`"))
    }
}

pub fn default_grid(n: usize) -> usize {
    if n == 1 {
        256
    } else {
        32
    }
}

/// Continuation solve on the torus section of the file.
pub fn cmd_solve_torus(
    file: &ManifoldFile,
    theta: ThetaChoice,
    grid: Option<usize>,
    steps: usize,
    csv: Option<&Path>,
) -> CmdResult {
    let spec = file
        .torus
        .as_ref()
        .ok_or_else(|| CliError::input("file has no `torus` section"))?;
    let a = spec.a.to_matrix()?;
    if a.nrows() != file.n {
        return Err(CliError::input(format!(
            "A is {0}x{0} but n = {1}",
            a.nrows(),
            file.n
        )));
    }
    let grid = grid.or(spec.grid).unwrap_or_else(|| default_grid(file.n));
    let model = TorusModel::new(file.n, grid, a, spec.psi_modes.clone(), spec.psi_amplitude)?;
    let theta_hat = match theta {
        ThetaChoice::Auto => model.constant_angle(),
        ThetaChoice::Value(v) => v,
    };
    let run = continuation(&model, theta_hat, steps, &SolverConfig::default())?;
    let last = run.reports.last().expect("at least one step");
    if let Some(path) = csv {
        let out =
            File::create(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        last.write_history_csv(BufWriter::new(out))
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    }
    let predicted = model.predicted_constant().ok();
    Ok(Outcome::ok(json!({
        "n": file.n,
        "grid": grid,
        "steps": steps,
        "theta_hat": theta_hat,
        "constant_angle": model.constant_angle(),
        "predicted_constant": predicted,
        "achieved_constant": 0.5 * (last.angle_min + last.angle_max),
        "phi_sup": run.phi.sup_norm(),
        "report": last,
        "reports": run.reports,
    })))
}

/// Verdict table for the homogeneous torus class `ω = Aχ`.
pub fn cmd_counterexample(n: usize, a: f64) -> CmdResult {
    let verdict = torus_family_classify(n, a)?;
    let counterexample = verdict.in_p && verdict.in_k.decision == Decision::No;
    Ok(Outcome::ok(json!({
        "n": n,
        "A": a,
        "constant_angle": verdict.constant_angle,
        "arg": verdict.arg,
        "in_P": if verdict.in_p { "yes" } else { "no" },
        "in_K": verdict.in_k.decision,
        "in_K1": verdict.in_k1.decision,
        "counterexample": counterexample,
        "verdict": verdict,
    })))
}

#[derive(Debug, Parser)]
#[command(
    name = "dhym",
    version,
    about = "Angle, positivity and torus-solver tools for the deformed Hermitian-Yang-Mills equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Principal argument of the complex volume.
    Angle { file: PathBuf },
    /// Roots of the complex volume polynomial on [0, 1] and the lifted angle.
    GammaTrack {
        file: PathBuf,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Write the branch as CSV (t,re,im,abs,theta).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Treat a root as an obstruction in every dimension.
        #[arg(long)]
        strict: bool,
    },
    /// Numerical positivity against the listed subvarieties.
    CjyCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
    },
    /// Spectral continuation solve on the torus section.
    SolveTorus {
        file: PathBuf,
        #[arg(long, default_value = "auto", allow_negative_numbers = true)]
        theta: ThetaChoice,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        /// Write the Newton history of the last step as CSV (iter,residual,alpha).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Membership table for the torus family ω = Aχ.
    Counterexample {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long = "A", default_value_t = -1.0, allow_negative_numbers = true)]
        a: f64,
    },
}

pub fn run(command: &Command) -> CmdResult {
    match command {
        Command::Angle { file } => cmd_angle(&ManifoldFile::load(file)?),
        Command::GammaTrack {
            file,
            samples,
            csv,
            strict,
        } => cmd_gamma_track(
            &ManifoldFile::load(file)?,
            *samples,
            csv.as_deref(),
            *strict,
        ),
        Command::CjyCheck { file, tmax } => cmd_cjy_check(&ManifoldFile::load(file)?, *tmax),
        Command::SolveTorus {
            file,
            theta,
            grid,
            steps,
            csv,
        } => cmd_solve_torus(
            &ManifoldFile::load(file)?,
            *theta,
            *grid,
            *steps,
            csv.as_deref(),
        ),
        Command::Counterexample { n, a } => cmd_counterexample(*n, *a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn torus3(a: f64) -> ManifoldFile {
        ManifoldFile::from_json(&format!(
            r#"{{"n": 3, "intersection": [1, {a}, {}, {}]}}"#,
            a * a,
            a * a * a
        ))
        .unwrap()
    }

    #[test]
    fn angle_of_counterexample_class() {
        let out = cmd_angle(&torus3(-1.0)).unwrap();
        assert_eq!(out.report["arg"].as_f64().unwrap(), FRAC_PI_4);
        assert_eq!(out.report["supercritical"], json!(true));
        let zero = ManifoldFile::from_json(r#"{"n": 3, "intersection": [1, 0, 0, 0]}"#).unwrap();
        let out = cmd_angle(&zero).unwrap();
        assert!((out.report["arg"].as_f64().unwrap() + PI / 2.0).abs() < 1e-15);
        assert_eq!(out.report["supercritical"], json!(false));
    }

    #[test]
    fn schema_errors() {
        for bad in [
            r#"{"n": 3}"#,
            r#"{"n": 2, "intersection": [1, 2]}"#,
            r#"{"n": 1, "intersection": [0, 1]}"#,
            r#"{"n": 1, "intersection": [1, 1], "extra": 3}"#,
            r#"{"n": 2, "intersection": [1, 1, 1], "subvarieties": [{"name": "c", "p": 1, "restricted": [1]}]}"#,
        ] {
            assert_eq!(
                ManifoldFile::from_json(bad).unwrap_err().code,
                EXIT_INPUT,
                "{bad}"
            );
        }
    }

    #[test]
    fn gamma_track_codes() {
        let root = ManifoldFile::from_json(r#"{"n": 3, "intersection": [3, 1, 1, 3]}"#).unwrap();
        let out = cmd_gamma_track(&root, 64, None, false).unwrap();
        assert_eq!(out.code, EXIT_OBSTRUCTION);
        assert!((out.report["roots"][0].as_f64().unwrap() - 1.0).abs() < 1e-8);

        let out = cmd_gamma_track(&torus3(1.0), 64, None, false).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!((out.report["theta_end"].as_f64().unwrap() - 0.75 * PI).abs() < 1e-12);
        assert_eq!(out.report["chern_inequality"], json!(true));
        let out = cmd_gamma_track(&torus3(-1.0), 64, None, false).unwrap();
        assert!((out.report["theta_end"].as_f64().unwrap() - 2.25 * PI).abs() < 1e-12);
    }

    #[test]
    fn counterexample_defaults() {
        let out = cmd_counterexample(3, -1.0).unwrap();
        assert_eq!(out.report["in_P"], json!("yes"));
        assert_eq!(out.report["in_K"], json!("no"));
        assert_eq!(out.report["counterexample"], json!(true));
        let out = cmd_counterexample(3, 1.0).unwrap();
        assert_eq!(out.report["in_K"], json!("yes"));
        for k in -40..=40 {
            let out = cmd_counterexample(2, k as f64 * 0.25).unwrap();
            assert_eq!(
                out.report["counterexample"],
                json!(false),
                "A = {}",
                k as f64 * 0.25
            );
        }
    }

    #[test]
    fn theta_choice_parsing() {
        assert_eq!("auto".parse::<ThetaChoice>().unwrap(), ThetaChoice::Auto);
        assert_eq!(
            "-0.5".parse::<ThetaChoice>().unwrap(),
            ThetaChoice::Value(-0.5)
        );
        assert!("x".parse::<ThetaChoice>().is_err());
    }
}

//! Spectral damped-Newton solver for the angle equation on flat tori of
//! complex dimension 1 or 2.

mod gmres;
pub mod pointwise;
pub mod solver;
pub mod spectral;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cohomology::{lift_branch, principal_arg, IntersectionProfile};
use crate::error::{Error, Result};
use crate::hermitian::{lagrangian_angle, relative_spectrum, CMatrix, HermitianPencil, Spectrum};

pub use pointwise::{eta_metric, Herm2};
pub use solver::{continuation, ContinuationRun, PencilField, TorusSolver};
pub use spectral::{Hessian, SpectralGrid};

/// One term `amplitude · cos(k · x)` of the deformation potential `ψ`.
/// `k` lists integer wave numbers in axis order `(x_1, .., x_n, y_1, .., y_n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiMode {
    pub k: Vec<i64>,
    pub amplitude: f64,
}

/// Flat torus `C^n / (2πZ)^{2n}` with metric `χ = I + s ∂∂̄ψ` and background
/// class `ω = A`.
#[derive(Clone, Debug)]
pub struct TorusModel {
    n: usize,
    grid: usize,
    a: CMatrix,
    psi_modes: Vec<PsiMode>,
    psi_amplitude: f64,
}

impl TorusModel {
    pub fn new(
        n: usize,
        grid: usize,
        a: CMatrix,
        psi_modes: Vec<PsiMode>,
        psi_amplitude: f64,
    ) -> Result<Self> {
        if !(n == 1 || n == 2) {
            return Err(Error::InvalidModel(format!(
                "complex dimension must be 1 or 2, got {n}"
            )));
        }
        if grid < 4 || !grid.is_power_of_two() {
            return Err(Error::InvalidModel(format!(
                "grid must be a power of two >= 4, got {grid}"
            )));
        }
        if a.nrows() != n || a.ncols() != n {
            return Err(Error::InvalidModel(format!(
                "A is {}x{}, expected {n}x{n}",
                a.nrows(),
                a.ncols()
            )));
        }
        HermitianPencil::standard(a.clone())?;
        for mode in &psi_modes {
            if mode.k.len() != 2 * n {
                return Err(Error::InvalidModel(format!(
                    "psi wave vector {:?} needs {} entries",
                    mode.k,
                    2 * n
                )));
            }
            if mode
                .k
                .iter()
                .any(|&k| k.unsigned_abs() as usize >= grid / 2)
            {
                return Err(Error::InvalidModel(format!(
                    "psi wave vector {:?} is not resolved by a grid of {grid}",
                    mode.k
                )));
            }
            if !mode.amplitude.is_finite() {
                return Err(Error::InvalidModel("psi amplitude must be finite".into()));
            }
        }
        if !(0.0..=1.0).contains(&psi_amplitude) {
            return Err(Error::InvalidModel(format!(
                "psi_amplitude must lie in [0, 1], got {psi_amplitude}"
            )));
        }
        Ok(Self {
            n,
            grid,
            a,
            psi_modes,
            psi_amplitude,
        })
    }

    /// `χ = I`, `ω = A`, no deformation.
    pub fn flat(n: usize, grid: usize, a: CMatrix) -> Result<Self> {
        Self::new(n, grid, a, Vec::new(), 0.0)
    }

    pub fn with_amplitude(&self, s: f64) -> Result<Self> {
        Self::new(self.n, self.grid, self.a.clone(), self.psi_modes.clone(), s)
    }

    pub fn with_grid(&self, grid: usize) -> Result<Self> {
        Self::new(
            self.n,
            grid,
            self.a.clone(),
            self.psi_modes.clone(),
            self.psi_amplitude,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn psi_modes(&self) -> &[PsiMode] {
        &self.psi_modes
    }

    pub fn psi_amplitude(&self) -> f64 {
        self.psi_amplitude
    }

    /// Eigenvalues of `A`. The deformation is exact, so these also fix the
    /// cohomology class of `ω` relative to `[χ]`.
    pub fn background_spectrum(&self) -> Spectrum {
        relative_spectrum(&HermitianPencil::standard(self.a.clone()).expect("validated in new"))
    }

    /// Intersection numbers of `([ω], [χ])`, normalized to `∫χ^n = 1`.
    pub fn intersection_profile(&self) -> Result<IntersectionProfile> {
        IntersectionProfile::from_eigenvalues(self.background_spectrum().values(), 1.0)
    }

    /// `Σ arccot(eig A)`: the only constant a solution can have.
    pub fn constant_angle(&self) -> f64 {
        lagrangian_angle(&self.background_spectrum()).theta
    }

    /// Lifted branch endpoint `Θ(1)` from the intersection numbers.
    pub fn predicted_constant(&self) -> Result<f64> {
        Ok(lift_branch(&self.intersection_profile()?, 64)?.theta_end)
    }

    pub fn class_arg(&self) -> Result<f64> {
        principal_arg(&self.intersection_profile()?)
    }
}

/// Real potential on the grid, kept at mean zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialField {
    values: Vec<f64>,
}

impl PotentialField {
    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![0.0; len],
        }
    }

    /// Subtracts the grid mean.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        if !values.is_empty() {
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            values.iter_mut().for_each(|v| *v -= mean);
        }
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            0.0
        } else {
            self.values.iter().sum::<f64>() / self.values.len() as f64
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sup-norm distance to another field of the same length.
    pub fn distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Sup-norm residual target.
    pub tol: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
    /// Relative tolerance of the inner Krylov solve.
    pub linear_tol: f64,
    pub restart: usize,
    pub max_linear_iterations: usize,
    /// Require every accepted iterate to keep the pointwise angle in `(0, π)`.
    pub strict_supercritical: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 30,
            max_halvings: 20,
            linear_tol: 1e-12,
            restart: 30,
            max_linear_iterations: 300,
            strict_supercritical: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub residual: f64,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub converged: bool,
    pub iterations: usize,
    pub residual_sup: f64,
    pub angle_min: f64,
    pub angle_max: f64,
    pub theta_hat: f64,
    pub class_arg: f64,
    pub psi_amplitude: f64,
    pub initial_residual: f64,
    pub linear_iterations: usize,
    pub history: Vec<IterationRecord>,
}

impl SolverReport {
    /// CSV with header `iter,residual,alpha`.
    pub fn write_history_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "iter,residual,alpha")?;
        for r in &self.history {
            writeln!(out, "{},{:?},{:?}", r.iter, r.residual, r.alpha)?;
        }
        Ok(())
    }

    pub fn angle_width(&self) -> f64 {
        self.angle_max - self.angle_min
    }
}

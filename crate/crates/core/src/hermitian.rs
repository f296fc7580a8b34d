//! Pointwise linear algebra for Hermitian pencils `(chi, omega)`.
//!
//! The relative eigenvalues of `omega` with respect to a positive definite
//! `chi` are computed by reducing to the standard Hermitian problem
//! `L^{-1} omega L^{-*}`, where `chi = L L*`. Everything downstream (the
//! Lagrangian angle, restrictions to coordinate subspaces, the restricted
//! volume density) works on those spectra.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance on `max |M - M*|` for a matrix to count as Hermitian.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest admissible Cholesky pivot of `chi`, relative to `max |chi_ij|`.
pub const POSITIVITY_TOL: f64 = 1e-12;
/// Agreement required between the two angle formulas.
pub const ANGLE_ORACLE_TOL: f64 = 1e-10;
/// Half-width of the excluded neighbourhood of 0 and pi where cot is undefined.
pub const COT_ENDPOINT_TOL: f64 = 1e-10;

/// `arccot(x) = pi/2 - arctan(x)`, valued in `(0, pi)`.
#[inline]
pub fn arccot(x: f64) -> f64 {
    FRAC_PI_2 - x.atan()
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn asymmetry(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    let asym = asymmetry(m);
    if asym > SYMMETRY_TOL * (1.0 + max_abs(m)) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    Ok(())
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// A pair of Hermitian matrices with `chi` positive definite.
#[derive(Clone, Debug)]
pub struct HermitianPencil {
    chi: CMatrix,
    omega: CMatrix,
    chol: CMatrix,
}

impl HermitianPencil {
    pub fn new(chi: CMatrix, omega: CMatrix) -> Result<Self> {
        let n = chi.nrows();
        if n == 0 || !chi.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "chi must be a non-empty square matrix, got {}x{}",
                chi.nrows(),
                chi.ncols()
            )));
        }
        if omega.shape() != chi.shape() {
            return Err(Error::DimensionMismatch(format!(
                "omega is {}x{} but chi is {n}x{n}",
                omega.nrows(),
                omega.ncols()
            )));
        }
        if chi
            .iter()
            .chain(omega.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::DimensionMismatch("non-finite matrix entry".into()));
        }
        check_hermitian(&chi)?;
        check_hermitian(&omega)?;
        let chi = hermitian_part(&chi);
        let omega = hermitian_part(&omega);

        let scale = max_abs(&chi);
        let l = Cholesky::new(chi.clone())
            .map(|c| c.unpack())
            .ok_or(Error::NotPositiveDefinite { pivot: f64::NAN })?;
        let pivot = (0..n)
            .map(|i| l[(i, i)].re.powi(2))
            .fold(f64::INFINITY, f64::min);
        if !(pivot > POSITIVITY_TOL * scale) {
            return Err(Error::NotPositiveDefinite { pivot });
        }
        Ok(Self {
            chi,
            omega,
            chol: l,
        })
    }

    /// The pencil `(I, omega)`.
    pub fn standard(omega: CMatrix) -> Result<Self> {
        let n = omega.nrows();
        Self::new(CMatrix::identity(n, n), omega)
    }

    pub fn dim(&self) -> usize {
        self.chi.nrows()
    }

    pub fn chi(&self) -> &CMatrix {
        &self.chi
    }

    pub fn omega(&self) -> &CMatrix {
        &self.omega
    }

    /// `L^{-1} omega L^{-*}`, the matrix of `chi^{-1} omega` in a `chi`-unitary frame.
    pub fn reduced(&self) -> CMatrix {
        let y = self
            .chol
            .solve_lower_triangular(&self.omega)
            .expect("Cholesky factor has a nonzero diagonal");
        let b = self
            .chol
            .solve_lower_triangular(&y.adjoint())
            .expect("Cholesky factor has a nonzero diagonal");
        hermitian_part(&b)
    }
}

/// Relative eigenvalues, sorted in descending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts `values` descending; ties keep their input order.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    /// `n` copies of `a`.
    pub fn constant(n: usize, a: f64) -> Self {
        Self { values: vec![a; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Shifts every eigenvalue by `t` (the pencil `(chi, omega + t chi)`).
    pub fn shifted(&self, t: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v + t).collect(),
        }
    }

    /// `prod_j (lambda_j + i)`.
    pub fn complex_product(&self) -> Complex64 {
        self.values
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &v| {
                acc * Complex64::new(v, 1.0)
            })
    }
}

/// A value of the angle operator, in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleValue {
    pub theta: f64,
    pub supercritical: bool,
}

impl AngleValue {
    pub fn new(theta: f64) -> Self {
        Self {
            theta,
            supercritical: theta > 0.0 && theta < PI,
        }
    }

    /// `cot(theta)`, rejecting angles within `COT_ENDPOINT_TOL` of 0 or pi.
    pub fn cot(&self) -> Result<f64> {
        cot_checked(self.theta)
    }
}

pub(crate) fn cot_checked(theta: f64) -> Result<f64> {
    if !(theta > COT_ENDPOINT_TOL && theta < PI - COT_ENDPOINT_TOL) {
        return Err(Error::UndefinedCotangent(theta));
    }
    Ok(theta.cos() / theta.sin())
}

/// Generalized eigenvalues of `omega` relative to `chi`, descending.
pub fn relative_spectrum(pencil: &HermitianPencil) -> Spectrum {
    let eig = SymmetricEigen::new(pencil.reduced());
    Spectrum::new(eig.eigenvalues.iter().copied().collect())
}

/// `sum_i arccot(lambda_i)`.
pub fn lagrangian_angle(spec: &Spectrum) -> AngleValue {
    AngleValue::new(spec.values.iter().map(|&l| arccot(l)).sum())
}

/// The same angle read off the running product `prod (lambda_j + i)`.
///
/// Multiplying by `lambda + i` turns the product counter-clockwise by an
/// amount in `(0, pi)`, so each new principal argument is unwrapped onto the
/// branch nearest to `previous + pi/2`.
pub fn angle_via_argdet(spec: &Spectrum) -> AngleValue {
    let mut product = Complex64::new(1.0, 0.0);
    let mut theta = 0.0;
    for &l in &spec.values {
        product *= Complex64::new(l, 1.0);
        product /= product.norm();
        let raw = product.arg();
        let turns = ((theta + FRAC_PI_2 - raw) / (2.0 * PI)).round();
        theta = raw + 2.0 * PI * turns;
    }
    AngleValue::new(theta)
}

/// The pencil `(I_p, B)` where `B` is the principal submatrix of
/// `L^{-1} omega L^{-*}` on `indices` (0-based).
pub fn principal_restriction(
    pencil: &HermitianPencil,
    indices: &[usize],
) -> Result<HermitianPencil> {
    let n = pencil.dim();
    if indices.is_empty() || indices.len() > n {
        return Err(Error::BadIndexSet(format!(
            "need between 1 and {n} indices, got {}",
            indices.len()
        )));
    }
    for (pos, &i) in indices.iter().enumerate() {
        if i >= n {
            return Err(Error::BadIndexSet(format!(
                "index {i} out of range for dimension {n}"
            )));
        }
        if indices[..pos].contains(&i) {
            return Err(Error::BadIndexSet(format!("index {i} repeated")));
        }
    }
    let a = pencil.reduced();
    let p = indices.len();
    let b = CMatrix::from_fn(p, p, |r, c| a[(indices[r], indices[c])]);
    HermitianPencil::standard(b)
}

/// Cauchy interlacing `lambda_j >= mu_j >= lambda_{j+n-p}`.
pub fn interlace_check(full: &Spectrum, restricted: &Spectrum) -> Result<bool> {
    let n = full.len();
    let p = restricted.len();
    if p > n {
        return Err(Error::SizeMismatch {
            full: n,
            restricted: p,
        });
    }
    let tol = 1e-12 * (1.0 + full.sup_norm());
    let lam = full.values();
    let mu = restricted.values();
    Ok((0..p).all(|j| lam[j] + tol >= mu[j] && mu[j] + tol >= lam[j + n - p]))
}

/// Coefficient of `chi^p|_V` in the restricted `Vol^p` form:
/// `(Re P - cot(theta) Im P) / |P|` with `P = prod (mu_i + i)`.
pub fn volume_density(restricted: &Spectrum, theta: AngleValue) -> Result<f64> {
    if restricted.is_empty() {
        return Err(Error::InvalidArgument(
            "restricted spectrum is empty".into(),
        ));
    }
    let cot = theta.cot()?;
    let mut product = Complex64::new(1.0, 0.0);
    for &mu in restricted.values() {
        // keep |product| = 1; the density is scale free
        let factor = Complex64::new(mu, 1.0);
        product = product * factor / factor.norm();
    }
    Ok(product.re - cot * product.im)
}

/// `(cot(s) - cot(theta)) sin(s)` with `s = sum arccot(mu_i)`.
pub fn volume_density_cot_sin(restricted: &Spectrum, theta: AngleValue) -> Result<f64> {
    let cot = theta.cot()?;
    let s = lagrangian_angle(restricted).theta;
    Ok(s.cos() - cot * s.sin())
}

/// Scans `g(t) = Re prod(lambda_j + t + i) - cot(theta) Im prod(lambda_j + t + i)`
/// on a uniform grid of `[0, t_max]` and reports whether it never decreases.
pub fn density_monotone_scan(
    full: &Spectrum,
    theta: AngleValue,
    t_max: f64,
    samples: usize,
) -> Result<bool> {
    if !(theta.theta > 0.0 && theta.theta < PI) {
        return Err(Error::NotSupercritical(theta.theta));
    }
    if samples < 2 || !(t_max > 0.0) {
        return Err(Error::InvalidArgument(
            "need samples >= 2 and t_max > 0".into(),
        ));
    }
    let cot = theta.cot()?;
    let g: Vec<f64> = (0..samples)
        .map(|k| {
            let t = t_max * k as f64 / (samples - 1) as f64;
            let p = full.shifted(t).complex_product();
            p.re - cot * p.im
        })
        .collect();
    let scale = g.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    Ok(g.windows(2).all(|w| w[1] - w[0] >= -1e-10 * scale))
}

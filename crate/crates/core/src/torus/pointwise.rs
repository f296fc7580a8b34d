//! Closed-form pencil algebra for complex dimension 1 and 2.
//!
//! The solver evaluates the angle operator and its linearization at every grid
//! point, so these routines avoid heap allocation. They agree with the
//! general routines in [`crate::hermitian`] to rounding.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::hermitian::{arccot, CMatrix, HermitianPencil, POSITIVITY_TOL};

/// A Hermitian matrix of size at most 2, `[[d0, off], [conj(off), d1]]`.
/// In dimension 1 only `d0` is meaningful.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Herm2 {
    pub d0: f64,
    pub d1: f64,
    pub off: Complex64,
}

impl Herm2 {
    #[inline]
    pub const fn new(d0: f64, d1: f64, off: Complex64) -> Self {
        Self { d0, d1, off }
    }

    pub fn identity(n: usize) -> Self {
        if n == 1 {
            Self::new(1.0, 0.0, Complex64::new(0.0, 0.0))
        } else {
            Self::new(1.0, 1.0, Complex64::new(0.0, 0.0))
        }
    }

    /// Reads the upper triangle of a 1x1 or 2x2 matrix.
    pub fn from_matrix(m: &CMatrix) -> Self {
        if m.nrows() == 1 {
            Self::new(m[(0, 0)].re, 0.0, Complex64::new(0.0, 0.0))
        } else {
            Self::new(m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)])
        }
    }

    pub fn to_matrix(&self, n: usize) -> CMatrix {
        if n == 1 {
            CMatrix::from_element(1, 1, Complex64::new(self.d0, 0.0))
        } else {
            CMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(self.d0, 0.0),
                    self.off,
                    self.off.conj(),
                    Complex64::new(self.d1, 0.0),
                ],
            )
        }
    }

    #[inline]
    fn to_m2(self) -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::new(self.d0, 0.0),
            self.off,
            self.off.conj(),
            Complex64::new(self.d1, 0.0),
        )
    }

    #[inline]
    fn from_m2(m: &Matrix2<Complex64>) -> Self {
        Self::new(
            m[(0, 0)].re,
            m[(1, 1)].re,
            0.5 * (m[(0, 1)] + m[(1, 0)].conj()),
        )
    }

    #[inline]
    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.d0 + other.d0, self.d1 + other.d1, self.off + other.off)
    }

    #[inline]
    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.d0 * s, self.d1 * s, self.off * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.d0.abs().max(self.d1.abs()).max(self.off.norm())
    }
}

/// `tr(a b) = Σ_{j,k} a_{jk} b_{kj}`.
#[inline]
pub fn trace_product(n: usize, a: &Herm2, b: &Herm2) -> f64 {
    if n == 1 {
        a.d0 * b.d0
    } else {
        a.d0 * b.d0 + a.d1 * b.d1 + 2.0 * (a.off * b.off.conj()).re
    }
}

/// Smallest Cholesky pivot of `chi`.
#[inline]
pub fn smallest_pivot(n: usize, chi: &Herm2) -> f64 {
    if n == 1 || chi.d0 <= 0.0 {
        chi.d0
    } else {
        chi.d0.min(chi.d1 - chi.off.norm_sqr() / chi.d0)
    }
}

/// Positive definiteness test matching [`HermitianPencil::new`].
#[inline]
pub fn is_positive(n: usize, chi: &Herm2) -> bool {
    smallest_pivot(n, chi) > POSITIVITY_TOL * chi.max_abs()
}

/// Relative eigenvalues of `omega` with respect to `chi`, descending
/// (only the first entry is used when `n = 1`).
#[inline]
pub fn small_spectrum(n: usize, chi: &Herm2, omega: &Herm2) -> [f64; 2] {
    if n == 1 {
        return [omega.d0 / chi.d0, 0.0];
    }
    // χ = L L*, B = L⁻¹ ω L⁻*
    let l11 = chi.d0.sqrt();
    let l21 = chi.off.conj() / l11;
    let l22 = (chi.d1 - l21.norm_sqr()).sqrt();
    let m11 = 1.0 / l11;
    let m22 = 1.0 / l22;
    let m21 = -l21 * (m11 * m22);
    let b11 = m11 * m11 * omega.d0;
    let b12 = m11 * (omega.d0 * m21.conj() + omega.off * m22);
    let b22 = m21.norm_sqr() * omega.d0 + 2.0 * m22 * (m21 * omega.off).re + m22 * m22 * omega.d1;
    let mean = 0.5 * (b11 + b22);
    let radius = (0.5 * (b11 - b22)).hypot(b12.norm());
    [mean + radius, mean - radius]
}

/// `Σ arccot(λ_i)` at one point.
#[inline]
pub fn small_angle(n: usize, chi: &Herm2, omega: &Herm2) -> f64 {
    let l = small_spectrum(n, chi, omega);
    if n == 1 {
        arccot(l[0])
    } else {
        arccot(l[0]) + arccot(l[1])
    }
}

/// `η = χ + ω χ⁻¹ ω`.
#[inline]
pub fn small_eta(n: usize, chi: &Herm2, omega: &Herm2) -> Herm2 {
    if n == 1 {
        return Herm2::new(
            chi.d0 + omega.d0 * omega.d0 / chi.d0,
            0.0,
            Complex64::new(0.0, 0.0),
        );
    }
    let c = chi.to_m2();
    let w = omega.to_m2();
    let cinv = c.try_inverse().expect("chi is positive definite");
    Herm2::from_m2(&(c + w * cinv * w))
}

/// `η⁻¹` at one point.
#[inline]
pub fn small_eta_inverse(n: usize, chi: &Herm2, omega: &Herm2) -> Herm2 {
    let eta = small_eta(n, chi, omega);
    if n == 1 {
        return Herm2::new(1.0 / eta.d0, 0.0, Complex64::new(0.0, 0.0));
    }
    let det = eta.d0 * eta.d1 - eta.off.norm_sqr();
    Herm2::new(eta.d1 / det, eta.d0 / det, -eta.off / det)
}

/// `η = χ + ω χ⁻¹ ω` for a pencil of any size.
pub fn eta_metric(pencil: &HermitianPencil) -> CMatrix {
    let chi = pencil.chi();
    let omega = pencil.omega();
    let chi_inv_omega = chi
        .clone()
        .cholesky()
        .expect("pencil metric is positive definite")
        .solve(omega);
    let eta = chi + omega * chi_inv_omega;
    (&eta + eta.adjoint()).map(|z| z * 0.5)
}

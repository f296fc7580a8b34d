//! Random data shared by the property and acceptance suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use dhym::hermitian::{CMatrix, HermitianPencil};
use num_complex::Complex64;
use rand::Rng;

pub fn random_complex_matrix(rng: &mut impl Rng, n: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
    })
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> CMatrix {
    let m = random_complex_matrix(rng, n, scale);
    (&m + m.adjoint()).map(|z| z * 0.5)
}

/// `G G* + c I` with `c` in `[0.2, 1.2)`.
pub fn random_metric(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = random_complex_matrix(rng, n, 1.0);
    let c = rng.gen_range(0.2..1.2);
    &g * g.adjoint() + CMatrix::identity(n, n) * Complex64::new(c, 0.0)
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    random_complex_matrix(rng, n, 1.0).qr().q()
}

/// Eigenvalues whose arccot sum lies in `(0, π)`: angles are `π` times a
/// random point of the open simplex with one slack coordinate, kept away from
/// the faces so that no eigenvalue exceeds about 1e4 in size.
pub fn supercritical_eigenvalues(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..=n)
        .map(|_| -rng.gen_range(1e-6..0.999f64).ln())
        .collect();
    let total: f64 = e.iter().sum();
    e[..n]
        .iter()
        .map(|x| 1.0 / (PI * x / total).tan())
        .collect()
}

/// Pencil `(χ, ω)` with `χ = L L*` random and relative spectrum `eigenvalues`.
pub fn pencil_with_spectrum(rng: &mut impl Rng, eigenvalues: &[f64]) -> HermitianPencil {
    let n = eigenvalues.len();
    let chi = random_metric(rng, n);
    let l = chi.clone().cholesky().expect("metric").l();
    let u = random_unitary(rng, n);
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        eigenvalues.iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    let inner = &u * d * u.adjoint();
    let omega = &l * inner * l.adjoint();
    let omega = (&omega + omega.adjoint()).map(|z| z * 0.5);
    HermitianPencil::new(chi, omega).expect("valid pencil")
}

/// Sorted random subset of `0..n` of size in `1..n`.
pub fn proper_indices(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let p = rng.gen_range(1..n);
    let mut idx = rand::seq::index::sample(rng, n, p).into_vec();
    idx.sort_unstable();
    idx
}

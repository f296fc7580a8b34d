//! Fourier machinery on the standard flat torus `(R / 2πZ)^{2n}`.
//!
//! Grid functions live on `g^{2n}` points stored row-major, axis order
//! `(x_1, .., x_n, y_1, .., y_n)` with `z_j = x_j + i y_j`. Complex Hessians
//! `∂_j ∂_k̄ f` are applied in Fourier space through their exact symbol
//! `-¼ conj(ξ_j) ξ_k`, `ξ = m_x + i m_y`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::pointwise::Herm2;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Symbol of `∂_j ∂_k̄` for a wave vector split into `x` and `y` components.
///
/// Shared by the FFT path and the analytic Hessian of trigonometric modes.
pub(crate) fn hessian_symbol(n: usize, mx: &[f64], my: &[f64]) -> Herm2 {
    let diag = |j: usize| -0.25 * (mx[j] * mx[j] + my[j] * my[j]);
    if n == 1 {
        Herm2::new(diag(0), 0.0, ZERO)
    } else {
        let off = Complex64::new(
            -0.25 * (mx[0] * mx[1] + my[0] * my[1]),
            -0.25 * (mx[0] * my[1] - my[0] * mx[1]),
        );
        Herm2::new(diag(0), diag(1), off)
    }
}

/// Complex Hessian of a real grid function.
///
/// For `n = 1`, `diag` holds `H_11` in its real part. For `n = 2`, `diag`
/// packs the two real diagonal entries as `H_11 + i H_22` and `off` holds `H_12`.
#[derive(Clone, Debug)]
pub struct Hessian {
    n: usize,
    diag: Vec<Complex64>,
    off: Vec<Complex64>,
}

impl Hessian {
    #[inline]
    pub fn at(&self, i: usize) -> Herm2 {
        if self.n == 1 {
            Herm2::new(self.diag[i].re, 0.0, ZERO)
        } else {
            Herm2::new(self.diag[i].re, self.diag[i].im, self.off[i])
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }
}

pub struct SpectralGrid {
    n: usize,
    points: usize,
    dims: usize,
    len: usize,
    shift: u32,
    /// Wavenumber per grid index for second derivatives along one axis.
    even: Vec<f64>,
    /// Same with the Nyquist mode zeroed, for odd (first-order) factors.
    odd: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("points", &self.points)
            .finish()
    }
}

impl SpectralGrid {
    pub fn new(n: usize, points: usize) -> Result<Self> {
        if !(n == 1 || n == 2) {
            return Err(Error::InvalidModel(format!(
                "complex dimension must be 1 or 2, got {n}"
            )));
        }
        if points < 4 || !points.is_power_of_two() {
            return Err(Error::InvalidModel(format!(
                "grid must be a power of two >= 4, got {points}"
            )));
        }
        let dims = 2 * n;
        let half = points / 2;
        let even: Vec<f64> = (0..points)
            .map(|i| {
                if i < half {
                    i as f64
                } else {
                    i as f64 - points as f64
                }
            })
            .collect();
        let mut odd = even.clone();
        odd[half] = 0.0;
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            points,
            dims,
            len: points.pow(dims as u32),
            shift: points.trailing_zeros(),
            even,
            odd,
            forward: planner.plan_fft_forward(points),
            inverse: planner.plan_fft_inverse(points),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Grid index along `axis` of the flat index `idx`.
    #[inline]
    pub fn axis_index(&self, idx: usize, axis: usize) -> usize {
        let s = self.shift * (self.dims - 1 - axis) as u32;
        (idx >> s) & (self.points - 1)
    }

    /// Real coordinates `(x_1, .., x_n, y_1, .., y_n)` of grid point `idx`.
    pub fn coords(&self, idx: usize) -> [f64; 4] {
        let h = 2.0 * std::f64::consts::PI / self.points as f64;
        let mut out = [0.0; 4];
        for (axis, c) in out.iter_mut().enumerate().take(self.dims) {
            *c = h * self.axis_index(idx, axis) as f64;
        }
        out
    }

    /// Symbol of the complex Hessian at Fourier index `idx`.
    #[inline]
    pub fn symbol(&self, idx: usize) -> Herm2 {
        let n = self.n;
        let mut mx = [0.0; 2];
        let mut my = [0.0; 2];
        if n == 1 {
            mx[0] = self.even[self.axis_index(idx, 0)];
            my[0] = self.even[self.axis_index(idx, 1)];
            return hessian_symbol(1, &mx, &my);
        }
        let ix = [self.axis_index(idx, 0), self.axis_index(idx, 1)];
        let iy = [self.axis_index(idx, 2), self.axis_index(idx, 3)];
        let diag = |j: usize| {
            let (a, b) = (self.even[ix[j]], self.even[iy[j]]);
            -0.25 * (a * a + b * b)
        };
        for j in 0..2 {
            mx[j] = self.odd[ix[j]];
            my[j] = self.odd[iy[j]];
        }
        let mixed = hessian_symbol(2, &mx, &my);
        Herm2::new(diag(0), diag(1), mixed.off)
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let g = self.points;
        let fft = if inverse {
            &self.inverse
        } else {
            &self.forward
        };
        for axis in 0..self.dims {
            let stride = g.pow((self.dims - 1 - axis) as u32);
            if stride == 1 {
                let batch = g * (4096 / g).max(1);
                data.par_chunks_mut(batch)
                    .for_each(|chunk| fft.process(chunk));
                continue;
            }
            let block = stride * g;
            let scratch_len = fft.get_inplace_scratch_len();
            data.par_chunks_mut(block).for_each_init(
                || (vec![ZERO; block], vec![ZERO; scratch_len]),
                |(buf, scratch), blk| {
                    for t in 0..g {
                        let row = &blk[t * stride..(t + 1) * stride];
                        for (inner, &v) in row.iter().enumerate() {
                            buf[inner * g + t] = v;
                        }
                    }
                    fft.process_with_scratch(buf, scratch);
                    for t in 0..g {
                        let row = &mut blk[t * stride..(t + 1) * stride];
                        for (inner, v) in row.iter_mut().enumerate() {
                            *v = buf[inner * g + t];
                        }
                    }
                },
            );
        }
    }

    /// Unnormalized forward transform of a real field.
    pub fn forward_real(&self, f: &[f64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.len, "field length does not match the grid");
        let mut data: Vec<Complex64> = f.par_iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, false);
        data
    }

    /// Inverse transform including the `1/N` normalization; returns the real part.
    pub fn inverse_real(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut spec, true);
        let scale = 1.0 / self.len as f64;
        spec.par_iter().map(|z| z.re * scale).collect()
    }

    /// Complex Hessian from the (unnormalized) spectrum of a real field.
    pub fn hessian_from_spectrum(&self, spec: &[Complex64]) -> Hessian {
        assert_eq!(
            spec.len(),
            self.len,
            "spectrum length does not match the grid"
        );
        let scale = 1.0 / self.len as f64;
        if self.n == 1 {
            let mut diag: Vec<Complex64> = spec
                .par_iter()
                .enumerate()
                .map(|(i, &z)| z * (self.symbol(i).d0 * scale))
                .collect();
            self.transform(&mut diag, true);
            return Hessian {
                n: 1,
                diag,
                off: Vec::new(),
            };
        }
        let (mut diag, mut off): (Vec<Complex64>, Vec<Complex64>) = spec
            .par_iter()
            .enumerate()
            .map(|(i, &z)| {
                let s = self.symbol(i);
                (
                    z * Complex64::new(s.d0 * scale, s.d1 * scale),
                    z * (s.off * scale),
                )
            })
            .unzip();
        self.transform(&mut diag, true);
        self.transform(&mut off, true);
        Hessian { n: 2, diag, off }
    }

    pub fn hessian(&self, f: &[f64]) -> Hessian {
        self.hessian_from_spectrum(&self.forward_real(f))
    }

    /// Grid mean, summed in index order.
    pub fn mean(&self, f: &[f64]) -> f64 {
        f.iter().sum::<f64>() / f.len() as f64
    }
}

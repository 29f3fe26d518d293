//! Fourier differentiation on a [`Grid`].
//!
//! First-order operators are `Σ c_a ∂_{x^a}` with constant complex `c`, and
//! second-order ones are products of two of them. The Nyquist mode is dropped
//! from every first derivative and from mixed second derivatives; pure second
//! derivatives keep it. Both rules keep real fields real.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::grid::{ComplexField, Grid, ScalarField};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A first-order constant-coefficient operator `Σ_a c_a ∂_{x^a}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dir(pub [Complex64; 4]);

impl Dir {
    /// `∂/∂z^i = ½(∂_{x^{2i−1}} − √−1 ∂_{x^{2i}})`, `i` 1-based.
    pub fn z(i: usize) -> Dir {
        let mut c = [Complex64::new(0.0, 0.0); 4];
        c[2 * i - 2] = Complex64::new(0.5, 0.0);
        c[2 * i - 1] = Complex64::new(0.0, -0.5);
        Dir(c)
    }

    pub fn zbar(i: usize) -> Dir {
        let mut c = [Complex64::new(0.0, 0.0); 4];
        c[2 * i - 2] = Complex64::new(0.5, 0.0);
        c[2 * i - 1] = Complex64::new(0.0, 0.5);
        Dir(c)
    }

    /// `∂/∂x^a`, `a` 0-based.
    pub fn x(a: usize) -> Dir {
        let mut c = [Complex64::new(0.0, 0.0); 4];
        c[a] = Complex64::new(1.0, 0.0);
        Dir(c)
    }
}

pub struct Spectral {
    grid: Grid,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub fn new(grid: Grid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.points_per_axis();
        Spectral {
            grid,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.grid.points_per_axis();
        let d = self.grid.real_dim();
        let plan = if inverse { &self.inv } else { &self.fwd };
        let mut lines = vec![Complex64::new(0.0, 0.0); data.len()];
        for axis in 0..d {
            let stride = n.pow((d - 1 - axis) as u32);
            let block = stride * n;
            if stride == 1 {
                data.par_chunks_mut(n * 64).for_each_init(
                    || vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()],
                    |scratch, chunk| plan.process_with_scratch(chunk, scratch),
                );
                continue;
            }
            // gather every line along `axis` into contiguous storage
            lines.par_chunks_mut(n).enumerate().for_each(|(l, line)| {
                let base = (l / stride) * block + l % stride;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
            });
            lines.par_chunks_mut(n * 64).for_each_init(
                || vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()],
                |scratch, chunk| plan.process_with_scratch(chunk, scratch),
            );
            data.par_iter_mut().enumerate().for_each(|(idx, v)| {
                let (b, r) = (idx / block, idx % block);
                let (k, o) = (r / stride, r % stride);
                *v = lines[(b * stride + o) * n + k];
            });
        }
        if inverse {
            let scale = 1.0 / self.grid.len() as f64;
            data.par_iter_mut().for_each(|v| *v *= scale);
        }
    }

    pub fn forward(&self, f: &ComplexField) -> Vec<Complex64> {
        let mut data = f.values.clone();
        self.transform(&mut data, false);
        data
    }

    pub fn inverse(&self, mut spec: Vec<Complex64>) -> ComplexField {
        self.transform(&mut spec, true);
        ComplexField {
            grid: self.grid,
            values: spec,
        }
    }

    fn wavenumbers(&self, idx: usize) -> [i64; 4] {
        let m = self.grid.multi_index(idx);
        [0, 1, 2, 3].map(|a| {
            if a < self.grid.real_dim() {
                self.grid.wavenumber(m[a])
            } else {
                0
            }
        })
    }

    /// Fourier symbol of a first-order operator at a mode.
    pub fn symbol1(&self, d: Dir, k: [i64; 4]) -> Complex64 {
        (0..self.grid.real_dim())
            .filter(|&a| !self.grid.is_nyquist(k[a]))
            .map(|a| d.0[a] * Complex64::new(0.0, TWO_PI * k[a] as f64))
            .sum()
    }

    /// Fourier symbol of the product `d1 d2`: the product of the first-order
    /// symbols plus the pure second derivatives along Nyquist axes.
    pub fn symbol2(&self, d1: Dir, d2: Dir, k: [i64; 4]) -> Complex64 {
        let mut s = self.symbol1(d1, k) * self.symbol1(d2, k);
        for a in 0..self.grid.real_dim() {
            if self.grid.is_nyquist(k[a]) {
                s -= d1.0[a] * d2.0[a] * (TWO_PI * k[a] as f64).powi(2);
            }
        }
        s
    }

    /// Multiply a spectrum by a symbol and transform back.
    pub fn apply_symbol(&self, spec: &[Complex64], sym: impl Fn([i64; 4]) -> Complex64 + Sync) -> ComplexField {
        let out: Vec<Complex64> = spec
            .par_iter()
            .enumerate()
            .map(|(i, v)| v * sym(self.wavenumbers(i)))
            .collect();
        self.inverse(out)
    }

    pub fn partial(&self, f: &ComplexField, d: Dir) -> ComplexField {
        let spec = self.forward(f);
        self.apply_symbol(&spec, |k| self.symbol1(d, k))
    }

    /// Several first derivatives of one field, sharing the forward transform.
    pub fn partials(&self, f: &ComplexField, dirs: &[Dir]) -> Vec<ComplexField> {
        let spec = self.forward(f);
        dirs.iter().map(|&d| self.apply_symbol(&spec, |k| self.symbol1(d, k))).collect()
    }

    pub fn partial_real(&self, f: &ScalarField, d: Dir) -> ComplexField {
        self.partial(&f.to_complex(), d)
    }

    pub fn partial2(&self, f: &ComplexField, d1: Dir, d2: Dir) -> ComplexField {
        let spec = self.forward(f);
        self.apply_symbol(&spec, |k| self.symbol2(d1, d2, k))
    }

    /// Complex Hessian `H_{ij̄} = ∂_{z_i}∂_{z̄_j} f` of a real field, as
    /// `H[i][j]` fields (0-based).
    pub fn complex_hessian(&self, f: &ScalarField) -> Vec<Vec<ComplexField>> {
        let spec = self.forward(&f.to_complex());
        let n = self.grid.complex_dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.apply_symbol(&spec, |k| self.symbol2(Dir::z(i + 1), Dir::zbar(j + 1), k)))
                    .collect()
            })
            .collect()
    }

    /// Symbol of the flat Laplacian `Σ_i ∂_{z_i}∂_{z̄_i}` (a quarter of the
    /// Euclidean one).
    pub fn flat_laplacian_symbol(&self, k: [i64; 4]) -> f64 {
        (1..=self.grid.complex_dim())
            .map(|i| self.symbol2(Dir::z(i), Dir::zbar(i), k).re)
            .sum()
    }

    pub fn flat_laplacian(&self, f: &ScalarField) -> ScalarField {
        let spec = self.forward(&f.to_complex());
        self.apply_symbol(&spec, |k| Complex64::new(self.flat_laplacian_symbol(k), 0.0)).re()
    }

    /// Zero-mean solution `u` of `Σ_i u_{,iī} = f − mean f`.
    pub fn solve_flat_laplacian(&self, f: &ScalarField) -> ScalarField {
        let spec = self.forward(&f.to_complex());
        self.apply_symbol(&spec, |k| {
            let s = self.flat_laplacian_symbol(k);
            if s == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0 / s, 0.0)
            }
        })
        .re()
    }
}

//! Pointwise Hermitian matrices `g̃_{ij̄}` relative to the flat `g = I`.
//!
//! Index convention: `m[i][j] = g̃_{ij̄}` and the inverse metric is
//! `g̃^{ij̄} = inv[j][i]`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::grid::{ComplexField, Grid, ScalarField};
use crate::spectral::Spectral;

pub type Mat = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity() -> Mat {
    [[ONE, ZERO], [ZERO, ONE]]
}

/// Small dense helpers on the leading `n × n` block of a [`Mat`].
pub mod dense {
    use super::*;

    pub fn det(n: usize, m: &Mat) -> f64 {
        match n {
            1 => m[0][0].re,
            _ => (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re,
        }
    }

    pub fn adj(n: usize, m: &Mat) -> Mat {
        match n {
            1 => [[ONE, ZERO], [ZERO, ZERO]],
            _ => [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]],
        }
    }

    pub fn inv(n: usize, m: &Mat) -> Mat {
        let d = det(n, m);
        scale(&adj(n, m), 1.0 / d)
    }

    pub fn trace(n: usize, m: &Mat) -> f64 {
        (0..n).map(|i| m[i][i].re).sum()
    }

    pub fn mul(n: usize, a: &Mat, b: &Mat) -> Mat {
        let mut out = [[ZERO; 2]; 2];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = (0..n).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        out
    }

    pub fn scale(m: &Mat, s: f64) -> Mat {
        [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
    }

    pub fn add(a: &Mat, b: &Mat) -> Mat {
        [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
    }

    pub fn conj_transpose(m: &Mat) -> Mat {
        [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
    }

    /// Eigenvalues of a Hermitian matrix, largest first.
    pub fn eigenvalues(n: usize, m: &Mat) -> [f64; 2] {
        match n {
            1 => [m[0][0].re, m[0][0].re],
            _ => {
                let a = m[0][0].re;
                let d = m[1][1].re;
                let r = (((a - d) / 2.0).powi(2) + m[0][1].norm_sqr()).sqrt();
                [(a + d) / 2.0 + r, (a + d) / 2.0 - r]
            }
        }
    }

    pub fn min_eigenvalue(n: usize, m: &Mat) -> f64 {
        eigenvalues(n, m)[if n == 1 { 0 } else { 1 }]
    }

    /// Mixed discriminant `D(A, B)` with `D(A, A) = 2 det A` in dimension 2;
    /// in dimension 1 it is just `B`.
    pub fn mixed_discriminant(n: usize, a: &Mat, b: &Mat) -> f64 {
        match n {
            1 => b[0][0].re,
            _ => (a[0][0] * b[1][1] + a[1][1] * b[0][0] - a[0][1] * b[1][0] - a[1][0] * b[0][1]).re,
        }
    }

    /// Upper-triangular `R` with positive diagonal and `m = R^† R`.
    pub fn cholesky_upper(n: usize, m: &Mat) -> Option<Mat> {
        let r00 = m[0][0].re;
        if r00 <= 0.0 {
            return None;
        }
        let r00 = r00.sqrt();
        if n == 1 {
            return Some([[Complex64::new(r00, 0.0), ZERO], [ZERO, ZERO]]);
        }
        let r01 = m[0][1] / r00;
        let s = m[1][1].re - r01.norm_sqr();
        if s <= 0.0 {
            return None;
        }
        Some([[Complex64::new(r00, 0.0), r01], [ZERO, Complex64::new(s.sqrt(), 0.0)]])
    }

    /// Inverse of a general (not necessarily Hermitian) matrix.
    pub fn inv_general(n: usize, m: &Mat) -> Mat {
        match n {
            1 => [[m[0][0].inv(), ZERO], [ZERO, ZERO]],
            _ => {
                let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
            }
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("metric not positive definite at grid point {index} (x = {coords:?}), min eigenvalue {min_eigenvalue}")]
    NotPositive {
        index: usize,
        coords: [f64; 4],
        min_eigenvalue: f64,
    },
}

/// `g̃ = g + Hess φ` sampled on a grid.
#[derive(Clone, Debug)]
pub struct MetricField {
    pub grid: Grid,
    pub m: Vec<Mat>,
}

impl MetricField {
    pub fn flat(grid: Grid) -> Self {
        let n = grid.complex_dim();
        let mut id = [[ZERO; 2]; 2];
        for (i, row) in id.iter_mut().enumerate().take(n) {
            row[i] = ONE;
        }
        MetricField {
            grid,
            m: vec![id; grid.len()],
        }
    }

    /// Builds `δ_{ij} + ∂_{z_i}∂_{z̄_j}φ`, symmetrizing the off-diagonal pair
    /// so the result is exactly Hermitian.
    pub fn from_potential(spec: &Spectral, phi: &ScalarField) -> Self {
        let grid = spec.grid();
        let n = grid.complex_dim();
        let h = spec.complex_hessian(phi);
        let m = (0..grid.len())
            .into_par_iter()
            .map(|p| hessian_at(n, &h, p, true))
            .collect();
        MetricField { grid, m }
    }

    pub fn dim(&self) -> usize {
        self.grid.complex_dim()
    }

    pub fn check_positive(&self) -> Result<(), MetricError> {
        let n = self.dim();
        let (index, min) = self
            .m
            .iter()
            .map(|m| dense::min_eigenvalue(n, m))
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
        if min > 0.0 && min.is_finite() {
            Ok(())
        } else {
            Err(MetricError::NotPositive {
                index,
                coords: self.grid.coords(index),
                min_eigenvalue: min,
            })
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.dim();
        self.m.iter().map(|m| dense::min_eigenvalue(n, m)).fold(f64::INFINITY, f64::min)
    }

    pub fn pointwise(&self, f: impl Fn(usize, &Mat) -> f64 + Sync) -> ScalarField {
        let n = self.dim();
        ScalarField {
            grid: self.grid,
            values: self.m.par_iter().map(|m| f(n, m)).collect(),
        }
    }

    pub fn det(&self) -> ScalarField {
        self.pointwise(dense::det)
    }

    pub fn trace(&self) -> ScalarField {
        self.pointwise(dense::trace)
    }

    /// `tr_g̃ g = tr M^{-1}`.
    pub fn inverse_trace(&self) -> ScalarField {
        self.pointwise(|n, m| dense::trace(n, &dense::inv(n, m)))
    }

    /// Entry `(i, j)` of the metric as a complex field.
    pub fn entry(&self, i: usize, j: usize) -> ComplexField {
        ComplexField {
            grid: self.grid,
            values: self.m.iter().map(|m| m[i][j]).collect(),
        }
    }
}

/// `δ + H` at one point from Hessian fields, optionally with the identity.
pub(crate) fn hessian_at(n: usize, h: &[Vec<ComplexField>], p: usize, with_identity: bool) -> Mat {
    let mut m = [[ZERO; 2]; 2];
    for i in 0..n {
        m[i][i] = Complex64::new(h[i][i].values[p].re, 0.0);
        if with_identity {
            m[i][i] += ONE;
        }
    }
    if n == 2 {
        let off = (h[0][1].values[p] + h[1][0].values[p].conj()) * 0.5;
        m[0][1] = off;
        m[1][0] = off.conj();
    }
    m
}

//! Uniform periodic grids on the unit torus `[0,1)^{2n}` and fields sampled
//! on them. Coordinates pair up as `z^i = x^{2i−1} + √−1 x^{2i}`.

use num_complex::Complex64;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GridError {
    #[error("complex dimension must be 1 or 2, got {0}")]
    Dim(usize),
    #[error("points per axis must be even and in 4..=256, got {0}")]
    Points(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    dim: usize,
    n: usize,
}

impl Grid {
    pub fn new(complex_dim: usize, n: usize) -> Result<Grid, GridError> {
        if !(1..=2).contains(&complex_dim) {
            return Err(GridError::Dim(complex_dim));
        }
        if n % 2 != 0 || !(4..=256).contains(&n) {
            return Err(GridError::Points(n));
        }
        Ok(Grid { dim: complex_dim, n })
    }

    pub fn complex_dim(&self) -> usize {
        self.dim
    }

    pub fn real_dim(&self) -> usize {
        2 * self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.real_dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer coordinates of a flat index; axis 0 (`x¹`) varies slowest.
    pub fn multi_index(&self, mut idx: usize) -> [usize; 4] {
        let mut out = [0; 4];
        for a in (0..self.real_dim()).rev() {
            out[a] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    pub fn coords(&self, idx: usize) -> [f64; 4] {
        let m = self.multi_index(idx);
        let h = 1.0 / self.n as f64;
        [m[0] as f64 * h, m[1] as f64 * h, m[2] as f64 * h, m[3] as f64 * h]
    }

    /// Signed wavenumber of a mode index along one axis, in `[−N/2, N/2)`.
    pub fn wavenumber(&self, m: usize) -> i64 {
        let n = self.n as i64;
        let m = m as i64;
        if m < n / 2 {
            m
        } else {
            m - n
        }
    }

    pub fn is_nyquist(&self, k: i64) -> bool {
        k == -(self.n as i64) / 2
    }

    /// `ω^n/n!`-volume of the torus for the flat metric with `g_{ij̄} = δ_ij`.
    pub fn volume(&self) -> f64 {
        2f64.powi(self.dim as i32)
    }

    pub fn sample(&self, f: impl Fn([f64; 4]) -> f64) -> ScalarField {
        ScalarField {
            grid: *self,
            values: (0..self.len()).map(|i| f(self.coords(i))).collect(),
        }
    }
}

/// A real sample per grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn constant(grid: Grid, c: f64) -> Self {
        ScalarField {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Compensated sequential sum, so results do not depend on the thread
    /// count.
    pub fn mean(&self) -> f64 {
        compensated_sum(self.values.iter().copied()) / self.values.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        ScalarField {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField {
            grid: self.grid,
            values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }
}

/// Neumaier summation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// A complex sample per grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl ComplexField {
    pub fn re(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: self.values.iter().map(|v| v.re).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexField {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(Grid::new(1, 32).unwrap().len(), 1024);
        assert_eq!(Grid::new(2, 12).unwrap().len(), 20736);
        assert_eq!(Grid::new(2, 3), Err(GridError::Points(3)));
        assert_eq!(Grid::new(2, 258), Err(GridError::Points(258)));
        assert_eq!(Grid::new(3, 8), Err(GridError::Dim(3)));
    }

    #[test]
    fn index_round_trip() {
        let g = Grid::new(2, 6).unwrap();
        let m = g.multi_index(1 * 216 + 2 * 36 + 3 * 6 + 4);
        assert_eq!(m, [1, 2, 3, 4]);
        assert_eq!(g.wavenumber(3), -3);
        assert!(g.is_nyquist(-3));
    }
}

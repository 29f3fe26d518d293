//! Flat reference geometry with normalized forcing `F`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::{compensated_sum, Grid, ScalarField};
use crate::metric::MetricField;
use crate::spectral::Spectral;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum BackgroundError {
    #[error("amplitude must be finite and non-negative, got {0}")]
    Amplitude(f64),
    #[error("e^F leaves the floating-point range (amplitude {0})")]
    Range(f64),
    #[error("unknown forcing family {0:?}")]
    UnknownFamily(String),
    #[error("manufactured potential does not give a positive metric: {0}")]
    Manufactured(#[from] crate::metric::MetricError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FamilyKind {
    Zero,
    SingleMode,
    RandomBand,
    Manufactured,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Zero => "zero",
            FamilyKind::SingleMode => "single-mode",
            FamilyKind::RandomBand => "random-band",
            FamilyKind::Manufactured => "manufactured",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = BackgroundError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" => Ok(FamilyKind::Zero),
            "single-mode" => Ok(FamilyKind::SingleMode),
            "random-band" => Ok(FamilyKind::RandomBand),
            "manufactured" => Ok(FamilyKind::Manufactured),
            _ => Err(BackgroundError::UnknownFamily(s.to_string())),
        }
    }
}

/// A forcing family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Zero,
    SingleMode { amplitude: f64 },
    RandomBand { amplitude: f64, max_mode: u32, seed: u64 },
}

impl Family {
    pub fn from_kind(kind: FamilyKind, amplitude: f64, seed: u64) -> Family {
        match kind {
            FamilyKind::Zero => Family::Zero,
            FamilyKind::SingleMode | FamilyKind::Manufactured => Family::SingleMode { amplitude },
            FamilyKind::RandomBand => Family::RandomBand {
                amplitude,
                max_mode: 2,
                seed,
            },
        }
    }

    fn amplitude(&self) -> f64 {
        match *self {
            Family::Zero => 0.0,
            Family::SingleMode { amplitude } | Family::RandomBand { amplitude, .. } => amplitude,
        }
    }
}

/// Choice of volume form for [`integrate`].
#[derive(Clone, Copy, Debug)]
pub enum Weight<'a> {
    /// `ω^n/n!` of the flat metric.
    Omega,
    /// `ω̃^n/n!` of the given metric.
    OmegaTilde(&'a MetricField),
}

#[derive(Clone, Debug)]
pub struct BackgroundGeometry {
    pub grid: Grid,
    pub f: ScalarField,
}

impl BackgroundGeometry {
    pub fn exp_f(&self) -> ScalarField {
        self.f.map(f64::exp)
    }
}

pub fn make_background(grid: Grid, family: Family) -> Result<BackgroundGeometry, BackgroundError> {
    let amp = family.amplitude();
    if !(amp.is_finite() && amp >= 0.0) {
        return Err(BackgroundError::Amplitude(amp));
    }
    let raw = match family {
        Family::Zero => ScalarField::constant(grid, 0.0),
        Family::SingleMode { amplitude } => grid.sample(|x| amplitude * (2.0 * PI * x[0]).sin()),
        Family::RandomBand {
            amplitude,
            max_mode,
            seed,
        } => random_band(grid, amplitude, max_mode, seed),
    };
    normalize(grid, raw, amp)
}

fn random_band(grid: Grid, amplitude: f64, max_mode: u32, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = grid.real_dim();
    let k = max_mode as i64;
    let mut modes = Vec::new();
    let side = (2 * k + 1) as usize;
    for flat in 0..side.pow(d as u32) {
        let mut kv = [0i64; 4];
        let mut r = flat;
        for slot in kv.iter_mut().take(d) {
            *slot = (r % side) as i64 - k;
            r /= side;
        }
        if kv == [0; 4] {
            continue;
        }
        let c: f64 = rng.gen_range(-1.0..1.0);
        let phase: f64 = rng.gen_range(0.0..2.0 * PI);
        modes.push((kv, c, phase));
    }
    // place each cosine as a conjugate pair of Fourier coefficients
    let n = grid.points_per_axis() as i64;
    let index = |kv: &[i64; 4]| (0..d).fold(0usize, |acc, a| acc * n as usize + kv[a].rem_euclid(n) as usize);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    let scale = grid.len() as f64 / 2.0;
    for (kv, c, ph) in &modes {
        let neg = kv.map(|v| -v);
        coeffs[index(kv)] += Complex64::from_polar(c * scale, *ph);
        coeffs[index(&neg)] += Complex64::from_polar(c * scale, -ph);
    }
    let raw = Spectral::new(grid).inverse(coeffs).re();
    let sup = raw.sup_norm();
    if sup == 0.0 {
        raw
    } else {
        raw.map(|v| v * amplitude / sup)
    }
}

fn normalize(grid: Grid, raw: ScalarField, amp: f64) -> Result<BackgroundGeometry, BackgroundError> {
    // factor out the maximum before exponentiating so the mean cannot overflow
    let top = raw.max();
    let mean = raw.map(|v| (v - top).exp()).mean();
    let shift = top + mean.ln();
    let f = raw.map(|v| v - shift);
    let bad = f.values.iter().any(|v| {
        let e = v.exp();
        !(e.is_finite() && e > 0.0 && e.is_normal())
    });
    if bad || !shift.is_finite() {
        return Err(BackgroundError::Range(amp));
    }
    Ok(BackgroundGeometry { grid, f })
}

/// Forcing that makes `φ₀` an exact solution: `F₀ = log det(g + Hess φ₀)`.
/// No shift is applied; the mass condition holds because `det` integrates to
/// the flat volume.
pub fn manufactured(spec: &Spectral, phi0: &ScalarField) -> Result<BackgroundGeometry, BackgroundError> {
    let metric = MetricField::from_potential(spec, phi0);
    metric.check_positive()?;
    Ok(BackgroundGeometry {
        grid: spec.grid(),
        f: metric.det().map(f64::ln),
    })
}

/// The potential used for manufactured-solution runs: a single mode in `x¹`
/// plus a mode coupling `x¹` and `x³`, so the metric is not diagonal.
pub fn manufactured_potential(grid: Grid, amplitude: f64) -> ScalarField {
    let two = grid.complex_dim() == 2;
    grid.sample(|x| {
        let mut v = (2.0 * PI * x[0]).sin();
        if two {
            v += 0.5 * (2.0 * PI * (x[0] + x[2])).cos();
        }
        amplitude * v / (PI * PI)
    })
}

/// Uniform-grid quadrature: mean times total volume.
pub fn integrate(f: &ScalarField, weight: Weight<'_>) -> f64 {
    let vol = f.grid.volume();
    match weight {
        Weight::Omega => f.mean() * vol,
        Weight::OmegaTilde(m) => {
            let det = m.det();
            let s = compensated_sum(f.values.iter().zip(&det.values).map(|(a, b)| a * b));
            s / f.values.len() as f64 * vol
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_family_is_flat() {
        let g = Grid::new(2, 4).unwrap();
        let bg = make_background(g, Family::Zero).unwrap();
        assert!(bg.f.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn negative_amplitude_rejected() {
        let g = Grid::new(1, 8).unwrap();
        assert_eq!(
            make_background(g, Family::SingleMode { amplitude: -1.0 }).unwrap_err(),
            BackgroundError::Amplitude(-1.0)
        );
        assert!(matches!(
            make_background(g, Family::SingleMode { amplitude: 2000.0 }),
            Err(BackgroundError::Range(_))
        ));
    }
}

//! Newton–Krylov solver for `det(g + Hess φ) = e^F det g` and the checks on
//! the 1-form `a = d^cφ`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::background::BackgroundGeometry;
use crate::grid::{compensated_sum, ComplexField, ScalarField};
use crate::krylov::gmres;
use crate::metric::{dense, hessian_at, Mat, MetricError, MetricField};
use crate::spectral::{Dir, Spectral};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_newton: usize,
    pub tolerance: f64,
    pub krylov_tolerance: f64,
    pub krylov_max: usize,
    pub krylov_restart: usize,
    pub backtrack: f64,
    pub margin: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_newton: 30,
            tolerance: 1e-11,
            krylov_tolerance: 1e-13,
            krylov_max: 400,
            krylov_restart: 60,
            backtrack: 0.5,
            margin: 0.1,
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("{0} must lie in (0, 1)")]
    NotUnit(&'static str),
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [("tolerance", self.tolerance), ("krylov_tolerance", self.krylov_tolerance)] {
            if !(v > 0.0) {
                return Err(ConfigError::NotPositive(name));
            }
        }
        if self.max_newton == 0 {
            return Err(ConfigError::NotPositive("max_newton"));
        }
        if self.krylov_max == 0 || self.krylov_restart == 0 {
            return Err(ConfigError::NotPositive("krylov_max"));
        }
        for (name, v) in [("backtrack", self.backtrack), ("margin", self.margin)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(ConfigError::NotUnit(name));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub residual_sup: f64,
    pub step_norm: f64,
    pub linesearch_backtracks: u32,
    pub min_eigenvalue: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub iterations: Vec<IterationRecord>,
    pub final_residual_sup: f64,
    pub krylov_iterations: usize,
}

impl SolverTrace {
    pub fn newton_steps(&self) -> usize {
        self.iterations.len()
    }
}

#[derive(Debug, thiserror::Error, Clone)]
pub enum SolveError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("Newton did not converge in {} steps (residual {})", .trace.newton_steps(), .trace.final_residual_sup)]
    NonConvergence { trace: SolverTrace, last: PotentialField },
    #[error("line search could not keep the metric positive (residual {})", .trace.final_residual_sup)]
    PositivityLoss { trace: SolverTrace, last: PotentialField },
}

impl SolveError {
    pub fn trace(&self) -> Option<&SolverTrace> {
        match self {
            SolveError::NonConvergence { trace, .. } | SolveError::PositivityLoss { trace, .. } => Some(trace),
            _ => None,
        }
    }
}

/// A Kähler potential with `sup φ = 0` once solved.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialField {
    pub phi: ScalarField,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub potential: PotentialField,
    pub metric: MetricField,
    pub trace: SolverTrace,
}

/// The `(1,0)`-part `α` of a real 1-form `a = α + ᾱ`.
#[derive(Clone, Debug)]
pub struct OneFormField {
    pub alpha: Vec<ComplexField>,
}

/// `det(g + Hess φ) − e^F`.
pub fn ma_residual(spec: &Spectral, phi: &ScalarField, bg: &BackgroundGeometry) -> Result<ScalarField, MetricError> {
    let metric = MetricField::from_potential(spec, phi);
    metric.check_positive()?;
    Ok(residual_of(&metric, bg))
}

fn residual_of(metric: &MetricField, bg: &BackgroundGeometry) -> ScalarField {
    let det = metric.det();
    ScalarField {
        grid: metric.grid,
        values: det.values.iter().zip(&bg.f.values).map(|(d, f)| d - f.exp()).collect(),
    }
}

/// `tr(adj(g̃) Hess v)`: the derivative of `det g̃` in direction `v`.
pub fn linearized_apply_metric(spec: &Spectral, metric: &MetricField, v: &ScalarField) -> ScalarField {
    let n = metric.dim();
    let h = spec.complex_hessian(v);
    let values = (0..v.values.len())
        .into_par_iter()
        .map(|p| {
            let hv = hessian_at(n, &h, p, false);
            let adj = dense::adj(n, &metric.m[p]);
            dense::trace(n, &dense::mul(n, &adj, &hv))
        })
        .collect();
    ScalarField { grid: v.grid, values }
}

pub fn linearized_apply(spec: &Spectral, phi: &ScalarField, v: &ScalarField) -> Result<ScalarField, MetricError> {
    let metric = MetricField::from_potential(spec, phi);
    metric.check_positive()?;
    Ok(linearized_apply_metric(spec, &metric, v))
}

fn remove_mean(v: &mut [f64]) {
    let m = compensated_sum(v.iter().copied()) / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

pub fn newton_solve(spec: &Spectral, bg: &BackgroundGeometry, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    newton_solve_from(spec, bg, cfg, ScalarField::constant(spec.grid(), 0.0))
}

const STALL_STEP: f64 = 1e-14;

pub fn newton_solve_from(
    spec: &Spectral,
    bg: &BackgroundGeometry,
    cfg: &SolverConfig,
    start: ScalarField,
) -> Result<Solution, SolveError> {
    cfg.validate()?;
    let grid = spec.grid();
    let mut phi = start;
    let mut metric = MetricField::from_potential(spec, &phi);
    metric.check_positive()?;
    let mut residual = residual_of(&metric, bg);
    let mut trace = SolverTrace::default();
    let mut accepted = 0usize;
    loop {
        let r_sup = residual.sup_norm();
        trace.final_residual_sup = r_sup;
        if r_sup <= cfg.tolerance {
            break;
        }
        if accepted >= cfg.max_newton {
            return Err(SolveError::NonConvergence {
                trace,
                last: PotentialField { phi },
            });
        }
        let mut rhs: Vec<f64> = residual.values.iter().map(|v| -v).collect();
        remove_mean(&mut rhs);
        let apply = |x: &[f64]| {
            let f = ScalarField {
                grid,
                values: x.to_vec(),
            };
            let mut out = linearized_apply_metric(spec, &metric, &f).values;
            remove_mean(&mut out);
            out
        };
        let precond = |x: &[f64]| {
            spec.solve_flat_laplacian(&ScalarField {
                grid,
                values: x.to_vec(),
            })
            .values
        };
        let (delta, out) = gmres(apply, precond, &rhs, cfg.krylov_tolerance, cfg.krylov_restart, cfg.krylov_max);
        trace.krylov_iterations += out.iterations;

        let current_min = metric.min_eigenvalue();
        let mut step = 1.0;
        let mut backtracks = 0u32;
        let mut stayed_positive = false;
        let accepted_state = loop {
            let cand = ScalarField {
                grid,
                values: phi.values.iter().zip(&delta).map(|(p, d)| p + step * d).collect(),
            };
            let m = MetricField::from_potential(spec, &cand);
            let min = m.min_eigenvalue();
            if min >= cfg.margin * current_min {
                stayed_positive = true;
                let res = residual_of(&m, bg);
                if accepted == 0 || res.sup_norm() <= r_sup {
                    break Some((cand, m, res, min));
                }
            }
            backtracks += 1;
            step *= cfg.backtrack;
            if backtracks > 40 {
                break None;
            }
        };
        let Some((cand, m, res, min)) = accepted_state else {
            if stayed_positive {
                // no step length lowers the residual: the iteration has stalled
                return Err(SolveError::NonConvergence {
                    trace,
                    last: PotentialField { phi },
                });
            }
            return Err(SolveError::PositivityLoss {
                trace,
                last: PotentialField { phi },
            });
        };
        let step_norm = delta.iter().fold(0.0f64, |a, d| a.max(d.abs())) * step;
        trace.iterations.push(IterationRecord {
            residual_sup: res.sup_norm(),
            step_norm,
            linesearch_backtracks: backtracks,
            min_eigenvalue: min,
        });
        phi = cand;
        metric = m;
        residual = res;
        accepted += 1;
        // updates at roundoff level cannot lower a residual above tolerance
        let r_new = residual.sup_norm();
        if accepted > 1 && r_new > cfg.tolerance && step_norm <= STALL_STEP * (1.0 + phi.sup_norm()) {
            trace.final_residual_sup = r_new;
            return Err(SolveError::NonConvergence {
                trace,
                last: PotentialField { phi },
            });
        }
    }
    let top = phi.max();
    phi = phi.map(|v| v - top);
    Ok(Solution {
        potential: PotentialField { phi },
        metric,
        trace,
    })
}

/// `α = (−√−1/2) ∂φ`, so that `a = α + ᾱ = d^cφ`.
pub fn potential_to_one_form(spec: &Spectral, phi: &ScalarField) -> OneFormField {
    let n = spec.grid().complex_dim();
    let half_i = Complex64::new(0.0, -0.5);
    let alpha = (1..=n)
        .map(|i| {
            let d = spec.partial_real(phi, Dir::z(i));
            ComplexField {
                grid: d.grid,
                values: d.values.iter().map(|v| v * half_i).collect(),
            }
        })
        .collect();
    OneFormField { alpha }
}

/// `w_j = Σ_i adj(g̃)_{ji} α_i = det g̃ · g̃^{ij̄}α_i` at a point.
fn weighted(n: usize, m: &Mat, a: &OneFormField, p: usize) -> [Complex64; 2] {
    let adj = dense::adj(n, m);
    let mut w = [Complex64::new(0.0, 0.0); 2];
    for (j, wj) in w.iter_mut().enumerate().take(n) {
        *wj = (0..n).map(|i| adj[j][i] * a.alpha[i].values[p]).sum();
    }
    w
}

/// Pointwise `d*_g̃ a = −(2/det g̃) Re Σ_j ∂_{z̄_j}(det g̃ · g̃^{ij̄} α_i)`.
pub fn codifferential(spec: &Spectral, a: &OneFormField, metric: &MetricField) -> ScalarField {
    let grid = metric.grid;
    let n = metric.dim();
    let w: Vec<[Complex64; 2]> = (0..grid.len()).into_par_iter().map(|p| weighted(n, &metric.m[p], a, p)).collect();
    let mut div = vec![Complex64::new(0.0, 0.0); grid.len()];
    for j in 0..n {
        let f = ComplexField {
            grid,
            values: w.iter().map(|v| v[j]).collect(),
        };
        let d = spec.partial(&f, Dir::zbar(j + 1));
        div.iter_mut().zip(&d.values).for_each(|(s, v)| *s += v);
    }
    let det = metric.det();
    ScalarField {
        grid,
        values: div.iter().zip(&det.values).map(|(d, v)| -2.0 * d.re / v).collect(),
    }
}

pub fn gauge_residual(spec: &Spectral, a: &OneFormField, metric: &MetricField) -> f64 {
    codifferential(spec, a, metric).sup_norm()
}

/// `L²(g̃)` pairings of `a` with `dx¹, …, dx^{2n}`, in coordinate order.
pub fn harmonic_orthogonality(a: &OneFormField, metric: &MetricField) -> Vec<f64> {
    let grid = metric.grid;
    let n = metric.dim();
    let w: Vec<[Complex64; 2]> = (0..grid.len()).into_par_iter().map(|p| weighted(n, &metric.m[p], a, p)).collect();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        // (1,0)-parts of dx^{2i−1} and dx^{2i}
        for eta in [Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.5)] {
            let s = compensated_sum(w.iter().map(|v| 2.0 * (v[i] * eta.conj()).re));
            out.push(s / grid.len() as f64 * grid.volume());
        }
    }
    out
}

/// `|α|²_g̃ = g̃^{ij̄} α_i ᾱ_j` per point.
pub fn alpha_norm2(a: &OneFormField, metric: &MetricField) -> ScalarField {
    let n = metric.dim();
    ScalarField {
        grid: metric.grid,
        values: (0..metric.grid.len())
            .into_par_iter()
            .map(|p| {
                let inv = dense::inv(n, &metric.m[p]);
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        s += inv[j][i] * a.alpha[i].values[p] * a.alpha[j].values[p].conj();
                    }
                }
                s.re
            })
            .collect(),
    }
}

/// `|a|²_g̃` computed from the real components of `a` and the inverse of the
/// real `2n × 2n` metric, independently of [`alpha_norm2`].
pub fn one_form_norm2(a: &OneFormField, metric: &MetricField) -> ScalarField {
    use nalgebra::{Matrix4, Vector4};
    let n = metric.dim();
    // dz^i evaluated on the real coordinate vectors ∂_{x^a}
    let dz = |i: usize, b: usize| -> Complex64 {
        if b == 2 * i {
            Complex64::new(1.0, 0.0)
        } else if b == 2 * i + 1 {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    ScalarField {
        grid: metric.grid,
        values: (0..metric.grid.len())
            .into_par_iter()
            .map(|p| {
                let m = &metric.m[p];
                // unused real directions in dimension 1 get an identity block
                let g = Matrix4::from_fn(|b, c| {
                    if b >= 2 * n || c >= 2 * n {
                        return if b == c { 1.0 } else { 0.0 };
                    }
                    let mut s = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        for j in 0..n {
                            s += m[i][j] * dz(i, b) * dz(j, c).conj();
                        }
                    }
                    2.0 * s.re
                });
                let ginv = g.try_inverse().expect("positive metric");
                // a = α dz + ᾱ dz̄ has real components 2Re α, −2Im α
                let av = Vector4::from_fn(|b, _| {
                    if b >= 2 * n {
                        return 0.0;
                    }
                    let al = a.alpha[b / 2].values[p];
                    if b % 2 == 0 {
                        2.0 * al.re
                    } else {
                        -2.0 * al.im
                    }
                });
                av.dot(&(ginv * av))
            })
            .collect(),
    }
}

/// `∫|a|² dV_g̃`.
pub fn l2_norm2(a: &OneFormField, metric: &MetricField) -> f64 {
    crate::background::integrate(&one_form_norm2(a, metric), crate::background::Weight::OmegaTilde(metric))
}

/// Sup of `g̃^{ij̄}φ_{ij̄} − (n − tr_g̃ g)`.
pub fn almost_kahler_check(spec: &Spectral, phi: &ScalarField, metric: &MetricField) -> f64 {
    let n = metric.dim();
    let h = spec.complex_hessian(phi);
    (0..metric.grid.len())
        .into_par_iter()
        .map(|p| {
            let inv = dense::inv(n, &metric.m[p]);
            let hp = hessian_at(n, &h, p, false);
            let lap = dense::trace(n, &dense::mul(n, &inv, &hp));
            (lap - (n as f64 - dense::trace(n, &inv))).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// `2∫ω∧ω̃ / ∫ω̃²` on `T⁴`, and `∫ω̃/∫ω` on `T²`.
pub fn class_constant(metric: &MetricField) -> f64 {
    match metric.dim() {
        1 => metric.trace().mean(),
        _ => metric.trace().mean() / metric.det().mean(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig {
            margin: 1.0,
            ..SolverConfig::default()
        };
        assert_eq!(bad.validate(), Err(ConfigError::NotUnit("margin")));
    }

    #[test]
    fn flat_linearization_is_the_laplacian() {
        let g = Grid::new(2, 8).unwrap();
        let s = Spectral::new(g);
        let v = g.sample(|x| (2.0 * std::f64::consts::PI * (x[1] + x[3])).sin());
        let lv = linearized_apply(&s, &ScalarField::constant(g, 0.0), &v).unwrap();
        let lap = s.flat_laplacian(&v);
        for (a, b) in lv.values.iter().zip(&lap.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

//! End-to-end runs: solve, check every identity, and summarize.

use serde::{Deserialize, Serialize};

use crate::background::{self, BackgroundError, BackgroundGeometry, Family, FamilyKind};
use crate::grid::{Grid, GridError, ScalarField};
use crate::ma::{self, SolveError, SolverConfig, SolverTrace};
use crate::monitor;
use crate::spectral::Spectral;

/// Thresholds a converged run must meet to stay unflagged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub det: f64,
    pub two_d: f64,
    pub gauge: f64,
    pub ortho_relative: f64,
    pub da11: f64,
    pub lapz: f64,
    pub ein1: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            det: 1e-10,
            two_d: 1e-10,
            gauge: 1e-8,
            ortho_relative: 1e-8,
            da11: 1e-9,
            lapz: 1e-8,
            ein1: -1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub complex_dim: usize,
    pub n: usize,
    pub family: FamilyKind,
    pub amplitude: f64,
    pub seed: u64,
    pub solver: SolverConfig,
}

/// One CSV row; field order is the column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub family: String,
    pub amplitude: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub max_tr: f64,
    pub max_a2: f64,
    pub ratio: f64,
    pub res_det: f64,
    pub res_2d: f64,
    pub res_gauge: f64,
    /// Largest harmonic pairing divided by `‖a‖_{L²(g̃)}` (raw value when `a = 0`).
    pub res_ortho: f64,
    pub res_da11: f64,
    pub res_lapz: f64,
    pub ein1_margin: f64,
    pub newton_iters: usize,
    pub flagged: bool,
}

/// Checks that do not have a CSV column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtraChecks {
    /// `sup |λ₁λ₂ − e^F|`.
    pub res_cy: f64,
    /// `sup | |a|² − 2|α|² |`, the two sides computed independently.
    pub res_a2_split: f64,
    /// Laplacian identity on a band-limited test function.
    pub res_laplacian: f64,
    pub class_constant: f64,
    pub a_l2: f64,
    pub orthogonality: Vec<f64>,
    /// `sup |φ − φ₀ − c|` for manufactured runs.
    pub manufactured_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub complex_dim: usize,
    pub row: ReportRow,
    pub extra: Option<ExtraChecks>,
    pub trace: SolverTrace,
    pub error: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Background(#[from] BackgroundError),
    #[error(transparent)]
    Config(#[from] ma::ConfigError),
}

pub struct RunOutput {
    pub report: EstimateReport,
    /// The normalized potential, or the last iterate when the solve failed.
    pub phi: Option<ScalarField>,
}

fn background_for(spec: &Spectral, run: &RunSpec) -> Result<(BackgroundGeometry, Option<ScalarField>), RunError> {
    let grid = spec.grid();
    if run.family == FamilyKind::Manufactured {
        let phi0 = background::manufactured_potential(grid, run.amplitude);
        Ok((background::manufactured(spec, &phi0)?, Some(phi0)))
    } else {
        let fam = Family::from_kind(run.family, run.amplitude, run.seed);
        Ok((background::make_background(grid, fam)?, None))
    }
}

fn failed_row(run: &RunSpec, iters: usize) -> ReportRow {
    let nan = f64::NAN;
    ReportRow {
        family: run.family.to_string(),
        amplitude: run.amplitude,
        n: run.n,
        seed: run.seed,
        max_tr: nan,
        max_a2: nan,
        ratio: nan,
        res_det: nan,
        res_2d: nan,
        res_gauge: nan,
        res_ortho: nan,
        res_da11: nan,
        res_lapz: nan,
        ein1_margin: nan,
        newton_iters: iters,
        flagged: true,
    }
}

pub fn run_case(run: &RunSpec, thresholds: &Thresholds) -> Result<RunOutput, RunError> {
    run.solver.validate()?;
    let grid = Grid::new(run.complex_dim, run.n)?;
    let spec = Spectral::new(grid);
    let (bg, phi0) = background_for(&spec, run)?;
    let sol = match ma::newton_solve(&spec, &bg, &run.solver) {
        Ok(sol) => sol,
        Err(e) => {
            let trace = e.trace().cloned().unwrap_or_default();
            let phi = match &e {
                SolveError::NonConvergence { last, .. } | SolveError::PositivityLoss { last, .. } => {
                    Some(last.phi.clone())
                }
                _ => None,
            };
            return Ok(RunOutput {
                report: EstimateReport {
                    complex_dim: run.complex_dim,
                    row: failed_row(run, trace.newton_steps()),
                    extra: None,
                    trace,
                    error: Some(e.to_string()),
                },
                phi,
            });
        }
    };
    let phi = &sol.potential.phi;
    let metric = &sol.metric;
    let a = ma::potential_to_one_form(&spec, phi);
    let diag = match monitor::compute_diagnostics(&spec, metric, &a, &bg) {
        Ok(d) => d,
        Err(e) => {
            return Ok(RunOutput {
                report: EstimateReport {
                    complex_dim: run.complex_dim,
                    row: failed_row(run, sol.trace.newton_steps()),
                    extra: None,
                    trace: sol.trace,
                    error: Some(e.to_string()),
                },
                phi: Some(phi.clone()),
            })
        }
    };
    let ef = bg.exp_f();
    let sup_diff = |a: &ScalarField, b: &ScalarField| {
        a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };
    let max_tr = diag.tr.max();
    let max_a2 = diag.a2.max();
    let res_det = sup_diff(&metric.det(), &ef);
    let res_2d = sup_diff(&diag.inverse_tr, &diag.twisted_tr);
    let res_gauge = ma::gauge_residual(&spec, &a, metric);
    let orthogonality = ma::harmonic_orthogonality(&a, metric);
    let a_l2 = ma::l2_norm2(&a, metric).sqrt();
    let ortho_max = orthogonality.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let res_ortho = if a_l2 > 0.0 { ortho_max / a_l2 } else { ortho_max };
    let res_da11 = monitor::da11_identity_check(&diag, metric);
    let res_lapz = ma::almost_kahler_check(&spec, phi, metric);
    let ein1_margin = monitor::cauchy_schwarz_check(&diag);
    let lam_prod = ScalarField {
        grid,
        values: if run.complex_dim == 2 {
            diag.lambda1.values.iter().zip(&diag.lambda2.values).map(|(x, y)| x * y).collect()
        } else {
            diag.lambda1.values.clone()
        },
    };
    let res_cy = sup_diff(&lam_prod, &ef);
    let twice_alpha = diag.alpha2.map(|v| 2.0 * v);
    let res_a2_split = sup_diff(&diag.a2, &twice_alpha);
    let test_f = background::make_background(
        grid,
        Family::RandomBand {
            amplitude: 1.0,
            max_mode: 2,
            seed: run.seed ^ 0x5eed,
        },
    )?
    .f;
    let res_laplacian = monitor::laplacian_identity_check(&spec, &test_f, metric);
    let manufactured_error = phi0.map(|p0| {
        let diff = ScalarField {
            grid,
            values: phi.values.iter().zip(&p0.values).map(|(x, y)| x - y).collect(),
        };
        let m = diff.mean();
        diff.map(|v| v - m).sup_norm()
    });

    let t = thresholds;
    let flagged = !(res_det <= t.det
        && res_2d <= t.two_d
        && res_gauge <= t.gauge
        && res_ortho <= t.ortho_relative
        && res_da11 <= t.da11
        && res_lapz <= t.lapz
        && ein1_margin >= t.ein1
        && res_cy <= run.solver.tolerance);
    let row = ReportRow {
        family: run.family.to_string(),
        amplitude: run.amplitude,
        n: run.n,
        seed: run.seed,
        max_tr,
        max_a2,
        ratio: max_tr / (1.0 + max_a2),
        res_det,
        res_2d,
        res_gauge,
        res_ortho,
        res_da11,
        res_lapz,
        ein1_margin,
        newton_iters: sol.trace.newton_steps(),
        flagged,
    };
    Ok(RunOutput {
        report: EstimateReport {
            complex_dim: run.complex_dim,
            row,
            extra: Some(ExtraChecks {
                res_cy,
                res_a2_split,
                res_laplacian,
                class_constant: ma::class_constant(metric),
                a_l2,
                orthogonality,
                manufactured_error,
            }),
            trace: sol.trace,
            error: None,
        },
        phi: Some(phi.clone()),
    })
}

/// One run per amplitude, in the given order.
pub fn sweep(base: &RunSpec, amplitudes: &[f64], thresholds: &Thresholds) -> Result<Vec<EstimateReport>, RunError> {
    amplitudes
        .iter()
        .map(|&amplitude| {
            let run = RunSpec {
                amplitude,
                ..base.clone()
            };
            run_case(&run, thresholds).map(|o| o.report)
        })
        .collect()
}

pub fn to_csv(reports: &[EstimateReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(&r.row).expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
}

pub fn from_csv(text: &str) -> Result<Vec<ReportRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

pub fn to_json(reports: &[EstimateReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

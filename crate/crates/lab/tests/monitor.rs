use std::f64::consts::PI;

use lab::background::manufactured_potential;
use lab::ma::{newton_solve, potential_to_one_form, Solution};
use lab::metric::dense;
use lab::monitor::*;
use lab::report::{from_csv, to_csv, to_json};
use lab::*;
use num_complex::Complex64;

fn solve(dim: usize, n: usize, amplitude: f64) -> (Spectral, BackgroundGeometry, Solution) {
    let g = Grid::new(dim, n).unwrap();
    let s = Spectral::new(g);
    let bg = make_background(g, Family::SingleMode { amplitude }).unwrap();
    let sol = newton_solve(&s, &bg, &SolverConfig::default()).unwrap();
    (s, bg, sol)
}

fn diagnostics(s: &Spectral, bg: &BackgroundGeometry, sol: &Solution) -> PointwiseDiagnostics {
    let a = potential_to_one_form(s, &sol.potential.phi);
    compute_diagnostics(s, &sol.metric, &a, bg).unwrap()
}

fn run(dim: usize, n: usize, family: FamilyKind, amplitude: f64) -> RunSpec {
    RunSpec {
        complex_dim: dim,
        n,
        family,
        amplitude,
        seed: 7,
        solver: SolverConfig::default(),
    }
}

#[test]
fn flat_diagnostics() {
    let (s, bg, sol) = solve(2, 8, 0.0);
    let d = diagnostics(&s, &bg, &sol);
    let all = |f: &ScalarField, v: f64| f.values.iter().all(|x| (x - v).abs() < 1e-14);
    assert!(all(&d.tr, 2.0) && all(&d.inverse_tr, 2.0) && all(&d.twisted_tr, 2.0));
    assert!(all(&d.lambda1, 1.0) && all(&d.lambda2, 1.0));
    assert!(all(&d.a2, 0.0) && all(&d.mixed, 0.0) && all(&d.da11, 0.0));
    assert_eq!(cauchy_schwarz_check(&d), 0.0);
    assert_eq!(da11_identity_check(&d, &sol.metric), 0.0);
}

#[test]
fn solved_identities_in_dimension_two() {
    let (s, bg, sol) = solve(2, 16, 0.25);
    let d = diagnostics(&s, &bg, &sol);
    let ef = bg.exp_f();
    for p in 0..s.grid().len() {
        assert!((d.inverse_tr.values[p] - d.twisted_tr.values[p]).abs() <= 1e-10);
        let prod = d.lambda1.values[p] * d.lambda2.values[p];
        assert!((prod - ef.values[p]).abs() <= SolverConfig::default().tolerance);
        assert!(d.lambda1.values[p] >= d.lambda2.values[p]);
        assert!((d.a2.values[p] - 2.0 * d.alpha2.values[p]).abs() <= 1e-15 * (1.0 + d.a2.values[p]));
    }
    assert!(da11_identity_check(&d, &sol.metric) <= 1e-9);
    assert!(cauchy_schwarz_check(&d) >= -1e-8);
}

#[test]
fn mixed_norm_in_dimension_one_has_a_closed_form() {
    // g̃ = 1 − A sin 2πx gives |∇g̃|² = |∂_z g̃|²/g̃³ · g̃ = A²π²cos²/(1 − A sin)²
    let g = Grid::new(1, 32).unwrap();
    let s = Spectral::new(g);
    let amp = 0.5;
    let phi = g.sample(|x| amp * (2.0 * PI * x[0]).sin() / (PI * PI));
    let m = MetricField::from_potential(&s, &phi);
    let mixed = mixed_gradient_norm(&s, &m, &cholesky_frame(&m));
    for p in 0..g.len() {
        let t = 2.0 * PI * g.coords(p)[0];
        let expect = (amp * PI * t.cos()).powi(2) / (1.0 - amp * t.sin()).powi(2);
        assert!((mixed.values[p] - expect).abs() <= 1e-8, "{p}");
    }
}

// The metric is a trigonometric polynomial, so the tensor route differentiates
// it exactly; the frame route differentiates the Cholesky factor, whose
// spectral tail needs N=24 at this amplitude to fall below 1e-10.
fn coupled_metric() -> (Spectral, MetricField) {
    let g = Grid::new(2, 24).unwrap();
    let s = Spectral::new(g);
    let m = MetricField::from_potential(&s, &manufactured_potential(g, 0.15));
    m.check_positive().unwrap();
    (s, m)
}

#[test]
fn frame_and_tensor_routes_agree() {
    let (s, m) = coupled_metric();
    let frame = mixed_gradient_norm(&s, &m, &cholesky_frame(&m));
    let tensor = mixed_gradient_norm_tensor(&s, &m);
    let scale = frame.sup_norm();
    assert!(scale > 0.5);
    for (a, b) in frame.values.iter().zip(&tensor.values) {
        assert!((a - b).abs() <= 1e-9 * scale, "{a} {b}");
    }
}

#[test]
fn mixed_norm_does_not_depend_on_the_frame() {
    let (s, m) = coupled_metric();
    let g = s.grid();
    let base = cholesky_frame(&m);
    // a smoothly varying unitary rotation applied to each frame
    let rotated: Vec<_> = base
        .iter()
        .enumerate()
        .map(|(p, a)| {
            let x = g.coords(p);
            let th = 0.7 * (2.0 * PI * x[1]).sin() + 0.3 * (2.0 * PI * x[2]).cos();
            let ps = 2.0 * PI * (x[0] + x[3]);
            let u = [
                [Complex64::new(th.cos(), 0.0), -Complex64::from_polar(th.sin(), ps)],
                [Complex64::from_polar(th.sin(), -ps), Complex64::new(th.cos(), 0.0)],
            ];
            dense::mul(2, &u, a)
        })
        .collect();
    let a = mixed_gradient_norm(&s, &m, &base);
    let b = mixed_gradient_norm(&s, &m, &rotated);
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs() <= 1e-9, "{x} {y}");
    }
}

#[test]
fn cauchy_schwarz_under_stress_in_dimension_one() {
    let (s, bg, sol) = solve(1, 32, 1.0);
    assert!(cauchy_schwarz_check(&diagnostics(&s, &bg, &sol)) >= -1e-7);
}

#[test]
fn da11_on_a_synthetic_diagonal_metric() {
    let z = Complex64::new(0.0, 0.0);
    let m = [[Complex64::new(2.0, 0.0), z], [z, Complex64::new(0.5, 0.0)]];
    // C = g̃ − g is the (1,1)-part of da for a Kähler potential
    let c = [[Complex64::new(1.0, 0.0), z], [z, Complex64::new(-0.5, 0.0)]];
    assert_eq!(da11_rhs(2, &m), 1.25);
    assert!((da11_norm(2, &m, &c) - 1.25).abs() < 1e-15);
}

#[test]
fn laplacian_identity_cases() {
    let g = Grid::new(2, 8).unwrap();
    let s = Spectral::new(g);
    let flat = MetricField::flat(g);
    assert_eq!(laplacian_identity_check(&s, &ScalarField::constant(g, 4.0), &flat), 0.0);
    let f = g.sample(|x| (2.0 * PI * x[0]).sin());
    assert!(laplacian_identity_check(&s, &f, &flat) <= 1e-10);

    let (s, _, sol) = solve(2, 16, 0.5);
    let f = make_background(
        s.grid(),
        Family::RandomBand {
            amplitude: 1.0,
            max_mode: 2,
            seed: 3,
        },
    )
    .unwrap()
    .f;
    assert!(laplacian_identity_check(&s, &f, &sol.metric) <= 1e-9);
}

#[test]
fn flat_run_has_ratio_two() {
    let out = run_case(&run(2, 8, FamilyKind::Zero, 0.0), &Thresholds::default()).unwrap();
    assert_eq!(out.report.row.ratio, 2.0);
    assert!(!out.report.row.flagged);
    assert_eq!(out.report.extra.unwrap().class_constant, 2.0);
}

#[test]
fn ratio_is_grid_converged_in_dimension_one() {
    let r = |n| {
        run_case(&run(1, n, FamilyKind::SingleMode, 0.5), &Thresholds::default())
            .unwrap()
            .report
            .row
            .ratio
    };
    let (a, b) = (r(16), r(32));
    assert!(a > 0.0 && ((a - b) / b).abs() <= 0.05);
}

#[test]
fn sweep_rows_and_determinism() {
    let base = run(2, 8, FamilyKind::Zero, 0.0);
    let t = Thresholds::default();
    let first = sweep(&base, &[0.0], &t).unwrap();
    assert_eq!(first.len(), 1);
    assert_eq!(first[0].row.ratio, 2.0);

    let base = run(1, 16, FamilyKind::RandomBand, 0.0);
    let a = sweep(&base, &[0.0, 0.3, 0.6], &t).unwrap();
    let b = sweep(&base, &[0.0, 0.3, 0.6], &t).unwrap();
    assert_eq!(to_csv(&a), to_csv(&b));
    assert_eq!(to_json(&a), to_json(&b));
    let rows = from_csv(&to_csv(&a)).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1].amplitude, 0.3);
}

#[test]
fn csv_columns_are_in_report_order() {
    let r = sweep(&run(1, 8, FamilyKind::Zero, 0.0), &[0.0], &Thresholds::default()).unwrap();
    let header = to_csv(&r).lines().next().unwrap().to_string();
    assert_eq!(
        header,
        "family,amplitude,N,seed,max_tr,max_a2,ratio,res_det,res_2d,res_gauge,res_ortho,res_da11,res_lapz,ein1_margin,newton_iters,flagged"
    );
}

#[test]
fn torus_sweep_keeps_identity_residuals_small() {
    let reports = sweep(
        &run(2, 16, FamilyKind::SingleMode, 0.0),
        &[0.25, 0.5],
        &Thresholds::default(),
    )
    .unwrap();
    assert_eq!(reports.len(), 2);
    for r in &reports {
        let row = &r.row;
        for v in [row.res_det, row.res_2d, row.res_gauge, row.res_ortho, row.res_da11, row.res_lapz] {
            assert!(v <= 1e-8, "{row:?}");
        }
        assert!(row.ratio > 0.0);
        let extra = r.extra.as_ref().unwrap();
        assert!(extra.res_a2_split <= 1e-14);
        assert!((extra.class_constant - 2.0).abs() <= 1e-10);
    }
}

#[test]
fn failed_solve_becomes_a_flagged_row() {
    let mut spec = run(2, 8, FamilyKind::RandomBand, 0.5);
    spec.solver.max_newton = 1;
    let out = run_case(&spec, &Thresholds::default()).unwrap();
    assert!(out.report.row.flagged);
    assert!(out.report.row.ratio.is_nan());
    assert!(out.report.error.is_some());
    assert!(out.phi.is_some());
}

//! Fixed-format text summary of a directory of verify and run outputs.

use std::fmt::Write as _;
use std::path::Path;

use lab::report::{from_csv, ReportRow};
use serde::Deserialize;

use crate::CliError;

#[derive(Deserialize)]
struct CaseLine {
    id: String,
    pass: bool,
}

#[derive(Deserialize)]
struct VerifyFile {
    mutations: Vec<String>,
    passed: usize,
    failed: usize,
    cases: Vec<CaseLine>,
}

enum Input {
    Verify(VerifyFile),
    Runs(Vec<ReportRow>),
}

fn load(path: &Path) -> Option<Input> {
    let text = std::fs::read_to_string(path).ok()?;
    match path.extension()?.to_str()? {
        "json" => serde_json::from_str(&text).ok().map(Input::Verify),
        "csv" => from_csv(&text).ok().filter(|r| !r.is_empty()).map(Input::Runs),
        _ => None,
    }
}

fn worst_residual(r: &ReportRow) -> f64 {
    let all = [r.res_det, r.res_2d, r.res_gauge, r.res_ortho, r.res_da11, r.res_lapz];
    if all.iter().any(|v| v.is_nan()) {
        f64::NAN
    } else {
        all.into_iter().fold(0.0, f64::max)
    }
}

/// Render every readable input in `dir`, in file-name order. Run tables end
/// with the largest ratio, the empirical constant of the trace bound.
pub fn render(dir: &Path) -> Result<String, CliError> {
    let mut names: Vec<_> = std::fs::read_dir(dir)
        .map_err(|_| CliError::NoInput(dir.to_path_buf()))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    names.sort();
    let mut out = String::new();
    let mut any = false;
    for path in names {
        let Some(input) = load(&path) else { continue };
        any = true;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        match input {
            Input::Verify(v) => {
                let muts = if v.mutations.is_empty() { "none".to_string() } else { v.mutations.join(",") };
                writeln!(out, "== {name}: {} passed, {} failed (mutations: {muts})", v.passed, v.failed).unwrap();
                for c in &v.cases {
                    writeln!(out, "   {:<4}  {}", if c.pass { "pass" } else { "FAIL" }, c.id).unwrap();
                }
            }
            Input::Runs(rows) => {
                let flagged = rows.iter().filter(|r| r.flagged).count();
                writeln!(out, "== {name}: {} runs, {flagged} flagged", rows.len()).unwrap();
                writeln!(
                    out,
                    "{:<12} {:>9} {:>4} {:>6} {:>10} {:>10} {:>10} {:>10} {:>11} {:>5} {:>4}",
                    "family", "amplitude", "N", "seed", "max_tr", "max_a2", "ratio", "worst_res", "ein1_margin", "iters", "flag"
                )
                .unwrap();
                for r in &rows {
                    writeln!(
                        out,
                        "{:<12} {:>9.4} {:>4} {:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.2e} {:>11.2e} {:>5} {:>4}",
                        r.family,
                        r.amplitude,
                        r.n,
                        r.seed,
                        r.max_tr,
                        r.max_a2,
                        r.ratio,
                        worst_residual(r),
                        r.ein1_margin,
                        r.newton_iters,
                        if r.flagged { "yes" } else { "no" }
                    )
                    .unwrap();
                }
                let c_hat = rows.iter().map(|r| r.ratio).filter(|v| v.is_finite()).fold(f64::NAN, f64::max);
                writeln!(out, "   max ratio {c_hat:.6}").unwrap();
            }
        }
    }
    if !any {
        return Err(CliError::NoInput(dir.to_path_buf()));
    }
    Ok(out)
}

//! Pointwise diagnostics of a solved metric and the estimate report.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::background::BackgroundGeometry;
use crate::grid::{ComplexField, Grid, ScalarField};
use crate::ma::{alpha_norm2, one_form_norm2, OneFormField};
use crate::metric::{dense, hessian_at, Mat, MetricError, MetricField};
use crate::spectral::{Dir, Spectral};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct PointwiseDiagnostics {
    pub tr: ScalarField,
    pub inverse_tr: ScalarField,
    pub twisted_tr: ScalarField,
    pub lambda1: ScalarField,
    pub lambda2: ScalarField,
    pub a2: ScalarField,
    pub alpha2: ScalarField,
    pub mixed: ScalarField,
    pub grad_tr2: ScalarField,
    pub da11: ScalarField,
}

pub fn compute_diagnostics(
    spec: &Spectral,
    metric: &MetricField,
    a: &OneFormField,
    bg: &BackgroundGeometry,
) -> Result<PointwiseDiagnostics, MetricError> {
    metric.check_positive()?;
    let n = metric.dim();
    let twisted = metric.pointwise(|n, m| dense::trace(n, &dense::adj(n, m)));
    Ok(PointwiseDiagnostics {
        tr: metric.trace(),
        inverse_tr: metric.inverse_trace(),
        twisted_tr: ScalarField {
            grid: metric.grid,
            values: twisted.values.iter().zip(&bg.f.values).map(|(t, f)| (-f).exp() * t).collect(),
        },
        lambda1: metric.pointwise(|n, m| dense::eigenvalues(n, m)[0]),
        lambda2: metric.pointwise(|n, m| dense::eigenvalues(n, m)[if n == 1 { 0 } else { 1 }]),
        a2: one_form_norm2(a, metric),
        alpha2: alpha_norm2(a, metric),
        mixed: mixed_gradient_norm(spec, metric, &cholesky_frame(metric)),
        grad_tr2: grad_norm2(spec, &metric.trace(), metric),
        da11: da11_field(spec, a, metric, n),
    })
}

/// `|∇u|²_g̃ = g̃^{ij̄} u_i ū_j` with `u_i = ∂_{z_i}u`.
pub fn grad_norm2(spec: &Spectral, u: &ScalarField, metric: &MetricField) -> ScalarField {
    let n = metric.dim();
    let du: Vec<ComplexField> = (1..=n).map(|i| spec.partial_real(u, Dir::z(i))).collect();
    ScalarField {
        grid: u.grid,
        values: (0..u.values.len())
            .into_par_iter()
            .map(|p| {
                let inv = dense::inv(n, &metric.m[p]);
                let mut s = ZERO;
                for i in 0..n {
                    for j in 0..n {
                        s += inv[j][i] * du[i].values[p] * du[j].values[p].conj();
                    }
                }
                s.re
            })
            .collect(),
    }
}

/// Frame `A` with `A^T Ā = g̃`, i.e. `θ̃^i = Σ_j A_{ij} dz^j` is g̃-unitary.
/// Built as `conj(R)` from the Cholesky factor `g̃ = R^† R`.
pub fn cholesky_frame(metric: &MetricField) -> Vec<Mat> {
    let n = metric.dim();
    metric
        .m
        .par_iter()
        .map(|m| {
            let r = dense::cholesky_upper(n, m).expect("positive metric");
            [[r[0][0].conj(), r[0][1].conj()], [r[1][0].conj(), r[1][1].conj()]]
        })
        .collect()
}

fn entry_field(grid: Grid, frame: &[Mat], i: usize, j: usize) -> ComplexField {
    ComplexField {
        grid,
        values: frame.iter().map(|a| a[i][j]).collect(),
    }
}

/// `|∇g̃|²_{g,g̃}` from a g̃-unitary frame. With the flat Chern connection
/// the structure equation reads `dA + Θ̃A = (a^i_{kℓ} a^k_m θ̃^ℓ)`, where the
/// `(0,1)`-part fixes `Θ̃^{(0,1)} = −(∂̄A)A⁻¹` and unitarity gives the
/// `(1,0)`-part. The mixed norm contracts the resulting `dz^ℓ` coefficients
/// with `g̃^{-1}` on `ℓ` and plainly on the other two indices.
pub fn mixed_gradient_norm(spec: &Spectral, metric: &MetricField, frame: &[Mat]) -> ScalarField {
    let grid = metric.grid;
    let n = metric.dim();
    // d[ℓ][i][j] = ∂_{z_ℓ}A_{ij}, db[ℓ][i][j] = ∂_{z̄_ℓ}A_{ij}
    let mut d = vec![vec![vec![Vec::new(); n]; n]; n];
    let mut db = vec![vec![vec![Vec::new(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let f = entry_field(grid, frame, i, j);
            let dirs: Vec<Dir> = (1..=n).flat_map(|l| [Dir::z(l), Dir::zbar(l)]).collect();
            let mut out = spec.partials(&f, &dirs).into_iter();
            for l in 0..n {
                d[l][i][j] = out.next().unwrap().values;
                db[l][i][j] = out.next().unwrap().values;
            }
        }
    }
    ScalarField {
        grid,
        values: (0..grid.len())
            .into_par_iter()
            .map(|p| {
                let a = &frame[p];
                let ainv = dense::inv_general(n, a);
                let minv = dense::inv(n, &metric.m[p]);
                // b[ℓ][i][m]
                let mut b = [[[ZERO; 2]; 2]; 2];
                for l in 0..n {
                    let mut dba = [[ZERO; 2]; 2];
                    for i in 0..n {
                        for j in 0..n {
                            dba[i][j] = db[l][i][j][p];
                        }
                    }
                    let c = dense::mul(n, &dba, &ainv);
                    for i in 0..n {
                        for m in 0..n {
                            let mut s = d[l][i][m][p];
                            for k in 0..n {
                                s += c[k][i].conj() * a[k][m];
                            }
                            b[l][i][m] = s;
                        }
                    }
                }
                let mut total = ZERO;
                for i in 0..n {
                    for m in 0..n {
                        for q in 0..n {
                            for l in 0..n {
                                total += minv[q][l] * b[l][i][m] * b[q][i][m].conj();
                            }
                        }
                    }
                }
                total.re
            })
            .collect(),
    }
}

/// The same norm from index contraction alone: with
/// `G_ℓ = (∂_{z_ℓ}g̃) g̃⁻¹`, the value is
/// `Σ M_{jq} (M⁻¹)_{pℓ} (G_ℓ)_{mj} conj((G_p)_{mq})` with `M = g̃`.
pub fn mixed_gradient_norm_tensor(spec: &Spectral, metric: &MetricField) -> ScalarField {
    let grid = metric.grid;
    let n = metric.dim();
    let mut dm = vec![vec![vec![Vec::new(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let dirs: Vec<Dir> = (1..=n).map(Dir::z).collect();
            let out = spec.partials(&metric.entry(i, j), &dirs);
            for (slot, o) in dm.iter_mut().zip(out) {
                slot[i][j] = o.values;
            }
        }
    }
    ScalarField {
        grid,
        values: (0..grid.len())
            .into_par_iter()
            .map(|p| {
                let m = &metric.m[p];
                let minv = dense::inv(n, m);
                let g: Vec<Mat> = (0..n)
                    .map(|l| {
                        let mut dl = [[ZERO; 2]; 2];
                        for i in 0..n {
                            for j in 0..n {
                                dl[i][j] = dm[l][i][j][p];
                            }
                        }
                        dense::mul(n, &dl, &minv)
                    })
                    .collect();
                let mut total = ZERO;
                for mm in 0..n {
                    for j in 0..n {
                        for q in 0..n {
                            for pp in 0..n {
                                for l in 0..n {
                                    total += m[j][q] * minv[pp][l] * g[l][mm][j] * g[pp][mm][q].conj();
                                }
                            }
                        }
                    }
                }
                total.re
            })
            .collect(),
    }
}

/// Minimum over the grid of `|∇g̃|²_{g,g̃} − |∇ tr_g g̃|²_g̃ / tr_g g̃`.
pub fn cauchy_schwarz_check(diag: &PointwiseDiagnostics) -> f64 {
    (0..diag.tr.values.len())
        .map(|p| diag.mixed.values[p] - diag.grad_tr2.values[p] / diag.tr.values[p])
        .fold(f64::INFINITY, f64::min)
}

/// `|C|²_g̃` for a `(1,1)`-form `√−1 C_{ij̄} dz^i∧dz̄^j`.
pub fn da11_norm(n: usize, m: &Mat, c: &Mat) -> f64 {
    let inv = dense::inv(n, m);
    let mut s = ZERO;
    for i in 0..n {
        for j in 0..n {
            for p in 0..n {
                for q in 0..n {
                    s += inv[p][i] * inv[j][q] * c[i][j] * c[p][q].conj();
                }
            }
        }
    }
    s.re
}

/// `n − 2 tr_g̃ g + |g|²_g̃` with `|g|²_g̃ = Σ λ_i^{-2}`.
pub fn da11_rhs(n: usize, m: &Mat) -> f64 {
    let inv = dense::inv(n, m);
    n as f64 - 2.0 * dense::trace(n, &inv) + dense::trace(n, &dense::mul(n, &inv, &inv))
}

fn da11_field(spec: &Spectral, a: &OneFormField, metric: &MetricField, n: usize) -> ScalarField {
    // C_{ij̄} = ∂_{z_i} ᾱ_j − ∂_{z̄_j} α_i
    let grid = metric.grid;
    let mut c = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let p1 = spec.partial(&a.alpha[j].conj(), Dir::z(i + 1));
            let p2 = spec.partial(&a.alpha[i], Dir::zbar(j + 1));
            c[i][j] = p1.values.iter().zip(&p2.values).map(|(x, y)| x - y).collect::<Vec<_>>();
        }
    }
    ScalarField {
        grid,
        values: (0..grid.len())
            .into_par_iter()
            .map(|p| {
                let mut cp = [[ZERO; 2]; 2];
                for i in 0..n {
                    for j in 0..n {
                        // the form is C dz∧dz̄ = √−1 (−√−1 C) dz∧dz̄
                        cp[i][j] = c[i][j][p] * Complex64::new(0.0, -1.0);
                    }
                }
                da11_norm(n, &metric.m[p], &cp)
            })
            .collect(),
    }
}

pub fn da11_identity_check(diag: &PointwiseDiagnostics, metric: &MetricField) -> f64 {
    let n = metric.dim();
    (0..metric.grid.len())
        .into_par_iter()
        .map(|p| (diag.da11.values[p] - da11_rhs(n, &metric.m[p])).abs())
        .reduce(|| 0.0, f64::max)
}

/// Sup of `g̃^{ij̄} f_{ij̄} − 2 ω̃∧dd^c f/ω̃²`, the second term evaluated as a
/// mixed discriminant of component matrices.
pub fn laplacian_identity_check(spec: &Spectral, f: &ScalarField, metric: &MetricField) -> f64 {
    let n = metric.dim();
    let h = spec.complex_hessian(f);
    (0..metric.grid.len())
        .into_par_iter()
        .map(|p| {
            let m = &metric.m[p];
            let hp = hessian_at(n, &h, p, false);
            let lhs = dense::trace(n, &dense::mul(n, &dense::inv(n, m), &hp));
            let rhs = match n {
                1 => hp[0][0].re / m[0][0].re,
                _ => dense::mixed_discriminant(n, m, &hp) / dense::det(n, m),
            };
            (lhs - rhs).abs()
        })
        .reduce(|| 0.0, f64::max)
}

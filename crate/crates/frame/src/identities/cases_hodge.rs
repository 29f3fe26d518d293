//! Cases about the Hodge Laplacian of `a = α + ᾱ`, the eigenframe reductions
//! of the torsion terms, and the two-dimensional trace identity.

use num_rational::Rational64;

use crate::coeff::Coeff;
use crate::deriv::DerivationContext;
use crate::eigen::{exp_f, lambda_pow, substitute_eigenframe, to_background, EigenOptions};
use crate::expr::{FormError, FormExpr};
use crate::star::{hodge_star, omega_tilde};
use crate::symbol::{Family, Idx, IndexSymbol};

use super::ops::*;
use super::{Derivation, IdentityCase, Mutation};

fn alpha_bg(i: u8) -> IndexSymbol {
    IndexSymbol::of(Family::AlphaBg, &[], &[u(i)])
}

fn ad(i: u8, d: &[Idx]) -> FormExpr {
    e(alpha_d(i, d))
}

fn gen_p(k: u8) -> IndexSymbol {
    IndexSymbol::of(Family::P, &[], &[u(k)])
}

fn gen_q(k: u8) -> IndexSymbol {
    IndexSymbol::of(Family::Q, &[], &[b(k)])
}

fn g(i: u8, j: u8) -> IndexSymbol {
    IndexSymbol::of(Family::G, &[], &[u(i), b(j)])
}

fn s12() -> IndexSymbol {
    IndexSymbol::of(Family::S, &[], &[u(1), u(2)])
}

fn pow(s: IndexSymbol, n: i64, m: i64) -> FormExpr {
    FormExpr::sym_pow(s, Rational64::new(n, m))
}

fn lam(i: u8, n: i64, m: i64) -> FormExpr {
    lambda_pow(i, Rational64::new(n, m))
}

/// `Δ^H x = −(dd^* x + d^* dx)`.
pub fn hodge_laplacian(ctx: DerivationContext, x: &FormExpr) -> Result<FormExpr, FormError> {
    let a = d(ctx, &codiff(ctx, x)?)?;
    let b = codiff(ctx, &d(ctx, x)?)?;
    Ok(a.add(&b).neg())
}

/// `(Δ^H α)^{(1,0)} = 2α̃_{k,īi} θ̃^k`
pub fn dolore1_target() -> FormExpr {
    sum2(|k, i| ad(k, &[b(i), u(i)]).wedge(&th(k))).scale(Coeff::int(2))
}

/// `(Δ^H α)^{(0,1)} = (−4α̃_{i,j}Ñ^j_{k̄ī} − 2α̃_j K̃^j_{ik̄ī} + 2α̃_i Ñ^i_{j̄k̄,j}) θ̄^k`
pub fn dolore2_target() -> FormExpr {
    sum1(|k| {
        let c = sum2(|i, j| {
            ad(i, &[u(j)])
                .times(&e(n(j, k, i)))
                .scale(Coeff::int(-4))
                .sub(&e(alpha(j)).times(&e(kbar(j, i, k, i))).scale(Coeff::int(2)))
                .add(&e(alpha(i)).times(&e(n(i, j, k).with_derivs(&[u(j)]))).scale(Coeff::int(2)))
        });
        c.wedge(&thb(k))
    })
}

fn longa(dv: &mut Derivation) -> Result<(), FormError> {
    let al = alpha_form();
    dv.step("Hodge Laplacian of alpha and of conj(alpha)");
    let h = hodge_laplacian(dv.ctx, &al)?;
    let hbar = hodge_laplacian(dv.ctx, &al.conj())?;
    dv.check("Hodge Laplacian is real", &hbar, &h.conj());
    dv.step("split into generic (1,0) and (0,1) parts");
    let p = sum1(|k| e(gen_p(k)).wedge(&th(k)));
    let q = sum1(|k| e(gen_q(k)).wedge(&thb(k)));
    let lap_alpha = p.add(&q);
    let lap_a = lap_alpha.add(&lap_alpha.conj());
    let a = al.add(&al.conj());
    let lhs = bilinear(&lap_a, &a)?;
    let rhs = re(&bilinear(&p, &al.conj())?)
        .add(&re(&bilinear(&q, &al)?))
        .scale(Coeff::int(2));
    dv.check("g(Lap a, a)", &lhs, &rhs);
    Ok(())
}

/// Reference 2-form `ω = √−1 g_{ij̄} θ̃^i∧θ̄^j + ω^{(2,0)} + ω^{(0,2)}`.
fn reference_form() -> (FormExpr, FormExpr) {
    let w11 = sum2(|i, j| prod(&[e(g(i, j)), th(i), thb(j)])).scale(Coeff::i());
    let w20 = prod(&[e(s12()), th(1), th(2)]);
    let w2002 = w20.add(&w20.conj());
    (w11.add(&w2002), w2002)
}

fn staromega(dv: &mut Derivation) -> Result<(), FormError> {
    let (w, w2002) = reference_form();
    let tr = sum1(|i| e(g(i, i)));
    dv.step("2 w ^ w~ / w~^2");
    dv.check("trace", &wedge_trace(&w), &tr);
    let lhs = hodge_star(&w)?;
    let rhs = tr.times(&omega_tilde()).sub(&w).add(&w2002.scale(Coeff::int(2)));
    dv.check("*w", &lhs, &rhs);
    Ok(())
}

/// `Δ^H a = −2 d^c tr − 2 *d(ω^{(2,0)+(0,2)})`, with `tr` a generic function
/// and `ω` closed.
fn hodgechain_parts(ctx: DerivationContext) -> Result<(FormExpr, FormExpr, FormExpr), FormError> {
    let tr = e(scalar_f());
    let mu = prod(&[e(s12()), th(1), th(2)]);
    let mu = mu.add(&mu.conj());
    let star_w_closed = tr.times(&omega_tilde()).add(&mu.scale(Coeff::int(2)));
    let lhs = hodge_star(&d(ctx, &star_w_closed)?)?.neg();
    let dmu = hodge_star(&d(ctx, &mu)?)?.scale(Coeff::int(2));
    Ok((lhs, dc(ctx, &tr)?, dmu))
}

/// `d^*ω` minus the chain's final line as displayed (`−d^c tr − 2*dω^{(2,0)+(0,2)}`).
pub fn hodgechain_literal_residual() -> Result<FormExpr, FormError> {
    let (lhs, dctr, dmu) = hodgechain_parts(DerivationContext::default())?;
    Ok(lhs.add(&dctr).add(&dmu))
}

fn hodgechain(dv: &mut Derivation) -> Result<(), FormError> {
    dv.cite("ID-STAROMEGA");
    let w = omega_tilde();
    dv.check("*w~ = w~", &hodge_star(&w)?, &w);
    dv.check("d*w~ = 0", &d(dv.ctx, &hodge_star(&w)?)?, &int(0));
    dv.step("Lap a = -d*da = d*w with da = w~ - w and gauge d*a = 0");
    dv.step("*w = tr w~ - w + 2 w^(2,0)+(0,2), and dw = 0");
    let tr = e(scalar_f());
    dv.check(
        "*(d tr ^ w~) = 2 d^c tr",
        &hodge_star(&d(dv.ctx, &tr)?.wedge(&w))?,
        &dc(dv.ctx, &tr)?.scale(Coeff::int(2)),
    );
    let (lhs, dctr, dmu) = hodgechain_parts(dv.ctx)?;
    dv.check("d*w", &lhs, &dctr.scale(Coeff::int(-2)).sub(&dmu));
    Ok(())
}

/// `*dα` as displayed.
fn last_rhs() -> FormExpr {
    sum2(|i, j| prod(&[ad(i, &[u(j)]), th(j), th(i)]))
        .sub(&sum1(|i| prod(&[ad(i, &[b(i)]), th(hat(i)), thb(hat(i))])))
        .add(&sum1(|i| prod(&[ad(i, &[b(hat(i))]), th(i), thb(hat(i))])))
        .add(&sum3(|i, j, k| prod(&[e(alpha(i)), e(n(i, j, k)), thb(j), thb(k)])))
}

fn first_last(dv: &mut Derivation) -> Result<(FormExpr, FormExpr), FormError> {
    let al = alpha_form();
    dv.step("dd* alpha");
    let ddstar = d(dv.ctx, &codiff(dv.ctx, &al)?)?;
    let first = sum2(|i, k| {
        prod(&[ad(i, &[b(i), u(k)]), th(k)]).add(&prod(&[ad(i, &[b(i), b(k)]), thb(k)]))
    })
    .neg();
    dv.check("first", &ddstar, &first);
    dv.step("* d alpha");
    let sda = hodge_star(&d(dv.ctx, &al)?)?;
    dv.check("last", &sda, &last_rhs());
    dv.step("d * d alpha");
    let dsda = d(dv.ctx, &sda)?;
    Ok((ddstar, dsda))
}

fn dolore1(dv: &mut Derivation) -> Result<(), FormError> {
    let (ddstar, dsda) = first_last(dv)?;
    let lost = sum3(|i, j, k| prod(&[ad(i, &[u(j), b(k)]), thb(k), th(j), th(i)]))
        .sub(&sum2(|i, k| prod(&[ad(i, &[b(i), u(k)]), th(k), th(hat(i)), thb(hat(i))])))
        .add(&sum2(|i, k| prod(&[ad(i, &[b(hat(i)), u(k)]), th(k), th(i), thb(hat(i))])))
        .add(
            &sum3(|i, j, k| {
                sum2(|p, q| prod(&[e(alpha(i)), e(n(i, j, k)), ce(n(j, p, q)), th(p), th(q), thb(k)]))
            })
            .scale(Coeff::int(2)),
        );
    dv.check("lost", &dsda.type_part(2, 1)?, &lost);
    dv.step("(Lap alpha)^(1,0) = -(dd* alpha)^(1,0) + (*d*d alpha)^(1,0)");
    let lap10 = ddstar.type_part(1, 0)?.neg().add(&hodge_star(&dsda)?.type_part(1, 0)?);
    let before = sum1(|k| {
        sum1(|i| {
            ad(i, &[b(i), u(k)])
                .sub(&ad(i, &[u(k), b(i)]))
                .add(&ad(k, &[u(i), b(i)]))
                .add(&ad(k, &[b(i), u(i)]))
        })
        .sub(&sum3(|i, j, l| prod(&[e(alpha(i)), e(n(i, j, l)), ce(n(j, k, l))])).scale(Coeff::int(4)))
        .wedge(&th(k))
    });
    dv.check("(Lap alpha)^(1,0) before commuting", &lap10, &before);
    let c1 = dv.relation("ID-COMM1")?;
    let commuted = c1.apply(&lap10)?;
    let ax = dv.axiom("AX-216");
    dv.check("dolore1", &ax.apply(&commuted)?, &dolore1_target());
    Ok(())
}

fn dolore2(dv: &mut Derivation) -> Result<(), FormError> {
    let (ddstar, dsda) = first_last(dv)?;
    let first1 = sum2(|i, k| prod(&[ad(i, &[b(i), b(k)]), thb(k)])).neg();
    dv.check("first1", &ddstar.type_part(0, 1)?, &first1);
    let lost2 = sum4(|i, j, p, q| prod(&[ad(i, &[u(j)]), e(n(j, p, q)), thb(p), thb(q), th(i)]))
        .sub(&sum2(|i, k| prod(&[ad(i, &[b(i), b(k)]), thb(k), th(hat(i)), thb(hat(i))])))
        .add(&sum2(|i, k| prod(&[ad(i, &[b(hat(i)), b(k)]), thb(k), th(i), thb(hat(i))])))
        .add(&sum4(|i, j, k, p| {
            prod(&[e(alpha(i)), e(n(i, j, k).with_derivs(&[u(p)])), th(p), thb(j), thb(k)])
        }));
    dv.check("lost2", &dsda.type_part(1, 2)?, &lost2);
    dv.step("(Lap alpha)^(0,1) = -(dd* alpha)^(0,1) + (*d*d alpha)^(0,1)");
    let lap01 = ddstar.type_part(0, 1)?.neg().add(&hodge_star(&dsda)?.type_part(0, 1)?);
    let before = sum1(|k| {
        sum1(|i| ad(i, &[b(i), b(k)]).sub(&ad(i, &[b(k), b(i)])))
            .add(&sum2(|i, j| ad(i, &[u(j)]).times(&e(n(j, k, i)))).scale(Coeff::int(-2)))
            .add(&sum2(|i, j| e(alpha(i)).times(&e(n(i, j, k).with_derivs(&[u(j)])))).scale(Coeff::int(2)))
            .wedge(&thb(k))
    });
    dv.check("(Lap alpha)^(0,1) before commuting", &lap01, &before);
    let c2 = dv.relation("ID-COMM2")?;
    dv.check("dolore2", &c2.apply(&lap01)?, &c2.apply(&dolore2_target())?);
    Ok(())
}

fn eigen(x: &FormExpr, cy: bool) -> Result<FormExpr, FormError> {
    Ok(substitute_eigenframe(&to_background(x)?, EigenOptions { cy_rewrite: cy }))
}

/// `−4 α̃_j conj(α̃_i) Ñ^p_{q̄j̄} conj(Ñ^i_{p̄q̄})`
pub fn list_term() -> FormExpr {
    sum4(|i, j, p, q| prod(&[e(alpha(j)), ce(alpha(i)), e(n(p, q, j)), ce(n(i, p, q))])).scale(Coeff::int(-4))
}

fn list(dv: &mut Derivation) -> Result<(), FormError> {
    let x = list_term();
    dv.step("convert to the background frame and diagonalize g~ at the point");
    let raw = eigen(&x, false)?;
    let nb = |i, j, k| e(n_bg(i, j, k));
    let per_q = sum4(|j, q, h, k| {
        prod(&[lam(j, -1, 1), lam(q, -1, 1), e(alpha_bg(j)), ce(alpha_bg(h)), nb(k, q, j), ce(n_bg(h, k, q))])
    })
    .scale(Coeff::int(-4));
    dv.check("eigenframe", &raw, &per_q);
    let offdiag = sum2(|h, k| {
        prod(&[e(alpha_bg(1)), ce(alpha_bg(h)), nb(k, 2, 1), ce(n_bg(h, k, 2))])
            .add(&prod(&[e(alpha_bg(2)), ce(alpha_bg(h)), nb(k, 1, 2), ce(n_bg(h, k, 1))]))
    })
    .scale(Coeff::int(-4));
    dv.check("j != q", &raw, &prod(&[lam(1, -1, 1), lam(2, -1, 1), offdiag.clone()]));
    let cy = !dv.mutated(Mutation::CyRewriteOff);
    dv.step(if cy { "lambda_1 lambda_2 = e^F" } else { "skip lambda_1 lambda_2 = e^F" });
    let fin = eigen(&x, cy)?;
    let target = pow(exp_f(), -1, 1).times(&offdiag);
    dv.check("list", &fin, &substitute_eigenframe(&target, EigenOptions { cy_rewrite: false }));
    Ok(())
}

fn lapterms(dv: &mut Derivation) -> Result<(), FormError> {
    let nb = |i, j, k| e(n_bg(i, j, k));
    let ef = |n, m| pow(exp_f(), n, m);
    let bg = |x: &FormExpr| eigen(x, true);
    let offd = |f: &dyn Fn(u8, u8) -> FormExpr| f(1, 2).add(&f(2, 1));

    dv.step("alpha~_{i,j} alpha~_k N~^j_{~k~i}");
    let t1 = sum3(|i, j, k| prod(&[ad(i, &[u(j)]), e(alpha(k)), e(n(j, k, i))]));
    let t1_rhs = ef(-1, 1).times(&offd(&|i, k| {
        sum1(|j| prod(&[e(alpha_bg(i).with_derivs(&[u(j)])), e(alpha_bg(k)), nb(j, k, i)]))
    }));
    dv.check("torsion-derivative term", &bg(&t1)?, &bg(&t1_rhs)?);

    dv.step("alpha~_j alpha~_k K~^j_{i~k~i}");
    let kb = |j, i, k, l| IndexSymbol::of(Family::KBg, &[j], &[u(i), b(k), b(l)]);
    let t2 = sum3(|i, j, k| prod(&[e(alpha(j)), e(alpha(k)), e(kbar(j, i, k, i))]));
    let t2_rhs = ef(-1, 1).times(&offd(&|i, k| {
        sum1(|j| prod(&[e(alpha_bg(j)), e(alpha_bg(k)), e(kb(j, i, k, i))]))
    }));
    dv.check("curvature term", &bg(&t2)?, &bg(&t2_rhs)?);

    dv.step("alpha~_i alpha~_k N~^i_{~j~k,j}");
    let t3 = sum3(|i, j, k| prod(&[e(alpha(i)), e(alpha(k)), e(n(i, j, k).with_derivs(&[u(j)]))]));
    let ax = dv.axiom("AX-L44");
    let t3 = ax.apply(&t3)?;
    let first = ef(-1, 1).times(&offd(&|j, k| {
        sum1(|i| prod(&[e(alpha_bg(i)), e(alpha_bg(k)), e(n_bg(i, j, k).with_derivs(&[u(j)]))]))
    }));
    let second = ef(-1, 2).times(&offd(&|j, k| {
        sum3(|i, t, uu| {
            prod(&[e(alpha(i)), e(alpha(k)), nb(t, j, k), e(achern(i, uu, j)), e(acoef(uu, t))])
        })
    }));
    dv.check("torsion derivative term", &bg(&t3)?, &bg(&first.add(&second))?);
    Ok(())
}

fn vier_alg(dv: &mut Derivation) -> Result<(), FormError> {
    dv.cite("ID-LONGA");
    dv.cite("ID-DOLORE1");
    dv.cite("ID-DOLORE2");
    let al = alpha_form();
    let p = dolore1_target();
    let q = dolore2_target();
    let half_g = re(&bilinear(&p, &al.conj())?).add(&re(&bilinear(&q, &al)?));
    let inner = sum2(|i, j| {
        sum1(|k| {
            prod(&[ad(i, &[u(j)]), e(alpha(k)), e(n(j, k, i))])
                .scale(Coeff::int(-4))
                .sub(&prod(&[e(alpha(j)), e(alpha(k)), e(kbar(j, i, k, i))]).scale(Coeff::int(2)))
                .add(&prod(&[e(alpha(i)), e(alpha(k)), e(n(i, j, k).with_derivs(&[u(j)]))]).scale(Coeff::int(2)))
        })
    });
    let lap = re(&sum2(|k, i| ad(k, &[b(i), u(i)]).times(&ce(alpha(k)))))
        .scale(Coeff::int(2))
        .add(&re(&inner));
    dv.check("lap", &half_g, &lap);
    Ok(())
}

fn two_d(dv: &mut Derivation) -> Result<(), FormError> {
    let g11 = e(g(1, 1));
    let g12 = e(g(1, 2));
    let g21 = e(g(2, 1));
    let g22 = e(g(2, 2));
    let det = g11.times(&g22).sub(&g12.times(&g21));
    dv.step("adjugate of a 2x2 matrix");
    let adj = [[g22.clone(), g12.neg()], [g21.neg(), g11.clone()]];
    let m = [[g11.clone(), g12.clone()], [g21.clone(), g22.clone()]];
    for (r, row) in m.iter().enumerate() {
        for c in 0..2 {
            let entry = row[0].times(&adj[0][c]).add(&row[1].times(&adj[1][c]));
            let delta = if r == c { det.clone() } else { int(0) };
            dv.check(format!("(G adj G)_{}{}", r + 1, c + 1), &entry, &delta);
        }
    }
    dv.check("tr adj G = tr G", &adj[0][0].add(&adj[1][1]), &g11.add(&g22));
    dv.step("eigenvalues with lambda_1 lambda_2 = e^F");
    let lhs = lam(1, -1, 1).add(&lam(2, -1, 1));
    let rhs = pow(exp_f(), -1, 1).times(&lam(1, 1, 1).add(&lam(2, 1, 1)));
    let opts = EigenOptions::default();
    dv.check("tr_g~ g = e^-F tr_g g~", &substitute_eigenframe(&lhs, opts), &substitute_eigenframe(&rhs, opts));
    Ok(())
}

fn case(
    id: &'static str,
    title: &'static str,
    axioms: &'static [&'static str],
    relations: &'static [&'static str],
    recipe: fn(&mut Derivation) -> Result<(), FormError>,
) -> IdentityCase {
    IdentityCase {
        id,
        title,
        axioms,
        relations,
        recipe,
    }
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        case("ID-LONGA", "g(Lap a, a) = 2Re g(Lap^(1,0), conj alpha) + 2Re g(Lap^(0,1), alpha)", &[], &[], longa),
        case("ID-STAROMEGA", "*w = tr w~ - w + 2 w^(2,0)+(0,2)", &[], &[], staromega),
        case("ID-HODGECHAIN", "Lap a = -2 d^c tr - 2 *d w^(2,0)+(0,2)", &[], &["ID-STAROMEGA"], hodgechain),
        case("ID-DOLORE1", "(Lap alpha)^(1,0) = 2 alpha_{k,~ii} theta^k", &["AX-216"], &["ID-COMM1"], dolore1),
        case("ID-DOLORE2", "(Lap alpha)^(0,1) in torsion terms", &[], &["ID-COMM2"], dolore2),
        case("ID-LIST", "eigenframe reduction of the N conj(N) term", &[], &[], list),
        case("ID-LAPTERMS", "eigenframe reductions of the torsion terms in the Laplacian", &["AX-L44"], &[], lapterms),
        case("ID-VIER-ALG", "assembly of g(Lap a, a) from its (1,0) and (0,1) parts", &[], &["ID-LONGA", "ID-DOLORE1", "ID-DOLORE2"], vier_alg),
        case("ID-2D", "2x2 adjugate and tr_g~ g = e^-F tr_g g~", &[], &[], two_d),
    ]
}

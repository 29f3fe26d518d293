//! Imported curvature and torsion facts, held as tagged rewrite rules, and the
//! commutation relations derived from `dd = 0`.

use std::collections::BTreeSet;

use crate::coeff::Coeff;
use crate::deriv::DerivationContext;
use crate::expr::{FormError, FormExpr};
use crate::generator::Word;
use crate::rewrite::{solve_for, RuleSet};
use crate::symbol::{Idx, IndexSymbol};

use super::ops::*;
use super::Mutation;

/// `AX-COMM`: the curvature trace `R̃^j_{ikk̄}` in terms of the Ricci-type tensor
/// and torsion. `AX-216`: the antisymmetrized curvature `R̃^j_{kiī} − R̃^j_{ikī}`.
/// `AX-L44`: the covariant derivative `Ñ^i_{j̄k̄,p}` in background terms.
pub const AXIOM_TAGS: [&str; 3] = ["AX-COMM", "AX-216", "AX-L44"];

pub const MUTATION_TAGS: [&str; 2] = ["AX-216-signflip", "CY-REWRITE-off"];

fn nn_conj(a: IndexSymbol, b: IndexSymbol) -> FormExpr {
    e(a).times(&ce(b))
}

/// `R̃^j_{ikk̄} = T̃_{ij̄} − 4Ñ^q_{p̄j̄}conj(Ñ^p_{q̄ī}) − 4Ñ^p_{q̄j̄}conj(Ñ^i_{p̄q̄})`
/// (summed over `k`), used to eliminate `R̃^j_{i22̄}`.
pub fn ax_comm() -> RuleSet {
    let mut rules = RuleSet::new();
    for i in IDX {
        for j in IDX {
            let torsion = sum2(|p, q| {
                nn_conj(n(q, p, j), n(p, q, i)).add(&nn_conj(n(p, q, j), n(i, p, q)))
            });
            let rhs = e(ric_t(i, j))
                .sub(&e(r(j, i, 1, 1)))
                .sub(&torsion.scale(Coeff::int(4)));
            rules.insert(r(j, i, 2, 2), rhs);
        }
    }
    rules
}

/// `R̃^j_{kiī} − R̃^j_{ikī} = 4Ñ^j_{p̄ī}conj(Ñ^p_{k̄ī})` for `i ≠ k`, used to
/// eliminate `R̃^j_{kiī}`.
pub fn ax_216(sign: i64) -> RuleSet {
    let mut rules = RuleSet::new();
    for k in IDX {
        let i = hat(k);
        for j in IDX {
            let t = sum1(|p| nn_conj(n(j, p, i), n(p, k, i))).scale(Coeff::int(4 * sign));
            rules.insert(r(j, k, i, i), e(r(j, i, k, i)).add(&t));
        }
    }
    rules
}

/// `Ñ^i_{j̄k̄,p} = a^i_ℓ conj(b^r_j) conj(b^s_k) b^u_p N^ℓ_{r̄s̄,u}
///   + conj(b^r_j) conj(b^s_k) N^t_{r̄s̄} a^i_{up} a^u_t`.
pub fn ax_l44() -> RuleSet {
    let mut rules = RuleSet::new();
    for i in IDX {
        for (j, k) in [(1, 2), (2, 1)] {
            for p in IDX {
                let first = sum4(|l, rr, s, uu| {
                    prod(&[
                        e(acoef(i, l)),
                        ce(bcoef(rr, j)),
                        ce(bcoef(s, k)),
                        e(bcoef(uu, p)),
                        e(n_bg(l, rr, s).with_derivs(&[u(uu)])),
                    ])
                });
                let second = sum4(|rr, s, t, uu| {
                    prod(&[
                        ce(bcoef(rr, j)),
                        ce(bcoef(s, k)),
                        e(n_bg(t, rr, s)),
                        e(achern(i, uu, p)),
                        e(acoef(uu, t)),
                    ])
                });
                rules.insert(n(i, j, k).with_derivs(&[u(p)]), first.add(&second));
            }
        }
    }
    rules
}

pub fn axiom_rules(tag: &str, mutations: &BTreeSet<Mutation>) -> RuleSet {
    match tag {
        "AX-COMM" => ax_comm(),
        "AX-216" => ax_216(if mutations.contains(&Mutation::Ax216SignFlip) { -1 } else { 1 }),
        "AX-L44" => ax_l44(),
        _ => panic!("unregistered axiom {tag}"),
    }
}

/// `at_point(dd α̃_i)`.
pub fn dd_alpha_at_point(ctx: DerivationContext, i: u8) -> Result<FormExpr, FormError> {
    let a = e(alpha(i));
    Ok(ctx.ext_d(&ctx.ext_d(&a)?)?.at_point())
}

pub fn word(gens: &[FormExpr]) -> Word {
    let w = prod(gens);
    let (_, word, _) = w.terms().next().expect("nonzero word");
    word
}

/// The `(1,1)` components of `dd α̃_i = 0`, solved for `α̃_{i,kℓ̄}`.
pub fn comm1_derived(ctx: DerivationContext) -> Result<RuleSet, FormError> {
    let mut rules = RuleSet::new();
    for i in IDX {
        let part = dd_alpha_at_point(ctx, i)?.type_part(1, 1)?;
        for k in IDX {
            for l in IDX {
                let eq = part.coefficient(word(&[th(k), thb(l)]));
                let target = alpha_d(i, &[u(k), b(l)]);
                rules.insert(target.clone(), solve_for(&eq, &target)?);
            }
        }
    }
    Ok(rules)
}

/// The `(0,2)` component of `dd α̃_i = 0`, solved for `α̃_{i,2̄1̄}`.
pub fn comm2_derived(ctx: DerivationContext) -> Result<RuleSet, FormError> {
    let mut rules = RuleSet::new();
    for i in IDX {
        let part = dd_alpha_at_point(ctx, i)?.type_part(0, 2)?;
        let eq = part.coefficient(word(&[thb(1), thb(2)]));
        let target = alpha_d(i, &[b(2), b(1)]);
        rules.insert(target.clone(), solve_for(&eq, &target)?);
    }
    Ok(rules)
}

/// Commutation relations for second derivatives of a scalar, from `dd f = 0`:
/// eliminates `f_{,ℓ̄k}`, `f_{,21}` and `f_{,2̄1̄}`.
pub fn scalar_commutation(ctx: DerivationContext) -> Result<RuleSet, FormError> {
    let f = e(scalar_f());
    let ddf = ctx.ext_d(&ctx.ext_d(&f)?)?.at_point();
    let fd = |d: &[Idx]| scalar_f().with_derivs(d);
    let mut rules = RuleSet::new();
    let p11 = ddf.type_part(1, 1)?;
    for k in IDX {
        for l in IDX {
            let eq = p11.coefficient(word(&[th(k), thb(l)]));
            let target = fd(&[b(l), u(k)]);
            rules.insert(target.clone(), solve_for(&eq, &target)?);
        }
    }
    let eq20 = ddf.type_part(2, 0)?.coefficient(word(&[th(1), th(2)]));
    let t20 = fd(&[u(2), u(1)]);
    rules.insert(t20.clone(), solve_for(&eq20, &t20)?);
    let eq02 = ddf.type_part(0, 2)?.coefficient(word(&[thb(1), thb(2)]));
    let t02 = fd(&[b(2), b(1)]);
    rules.insert(t02.clone(), solve_for(&eq02, &t02)?);
    Ok(rules)
}

pub fn relation_rules(id: &str, ctx: DerivationContext) -> Result<RuleSet, FormError> {
    match id {
        "ID-COMM1" => comm1_derived(ctx),
        "ID-COMM2" => comm2_derived(ctx),
        _ => Err(FormError::UnknownFamily(format!("no rewrite rules for {id}"))),
    }
}

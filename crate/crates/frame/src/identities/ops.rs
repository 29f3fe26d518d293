//! Shorthand constructors and the derived operators used by the cases:
//! `d^*`, `d^c`, the Laplacian of a function, and the inner products on forms.

use crate::coeff::Coeff;
use crate::deriv::DerivationContext;
use crate::expr::{FormError, FormExpr};
use crate::generator::Word;
use crate::star::{hodge_star, omega_tilde, volume};
use crate::symbol::{Family, Idx, IndexSymbol};

pub const IDX: [u8; 2] = [1, 2];

pub fn hat(i: u8) -> u8 {
    3 - i
}

pub fn u(i: u8) -> Idx {
    Idx::u(i)
}

pub fn b(i: u8) -> Idx {
    Idx::b(i)
}

pub fn e(s: IndexSymbol) -> FormExpr {
    FormExpr::sym(s)
}

pub fn ce(s: IndexSymbol) -> FormExpr {
    FormExpr::sym(s.conjugated())
}

pub fn th(i: u8) -> FormExpr {
    FormExpr::theta(i, false)
}

pub fn thb(i: u8) -> FormExpr {
    FormExpr::theta(i, true)
}

pub fn int(n: i64) -> FormExpr {
    FormExpr::int(n)
}

/// Product of several factors (wedge, so forms may appear too).
pub fn prod(fs: &[FormExpr]) -> FormExpr {
    fs.iter().fold(FormExpr::int(1), |acc, f| acc.wedge(f))
}

/// `Σ_{i} f(i)` over `{1, 2}`.
pub fn sum1(f: impl Fn(u8) -> FormExpr) -> FormExpr {
    FormExpr::sum(&IDX.map(f))
}

pub fn sum2(f: impl Fn(u8, u8) -> FormExpr) -> FormExpr {
    sum1(|i| sum1(|j| f(i, j)))
}

pub fn sum3(f: impl Fn(u8, u8, u8) -> FormExpr) -> FormExpr {
    sum1(|i| sum2(|j, k| f(i, j, k)))
}

pub fn sum4(f: impl Fn(u8, u8, u8, u8) -> FormExpr) -> FormExpr {
    sum2(|i, j| sum2(|k, l| f(i, j, k, l)))
}

pub fn alpha(i: u8) -> IndexSymbol {
    IndexSymbol::of(Family::Alpha, &[], &[u(i)])
}

pub fn alpha_d(i: u8, d: &[Idx]) -> IndexSymbol {
    alpha(i).with_derivs(d)
}

/// `Ñ^i_{j̄k̄}`
pub fn n(i: u8, j: u8, k: u8) -> IndexSymbol {
    IndexSymbol::of(Family::N, &[i], &[b(j), b(k)])
}

/// `N^i_{j̄k̄}` in the background frame
pub fn n_bg(i: u8, j: u8, k: u8) -> IndexSymbol {
    IndexSymbol::of(Family::NBg, &[i], &[b(j), b(k)])
}

/// `R̃^i_{jkℓ̄}`
pub fn r(i: u8, j: u8, k: u8, l: u8) -> IndexSymbol {
    IndexSymbol::of(Family::R, &[i], &[u(j), u(k), b(l)])
}

/// `K̃^i_{jk̄ℓ̄}`
pub fn kbar(i: u8, j: u8, k: u8, l: u8) -> IndexSymbol {
    IndexSymbol::of(Family::K, &[i], &[u(j), b(k), b(l)])
}

/// `T̃_{ij̄}`
pub fn ric_t(i: u8, j: u8) -> IndexSymbol {
    IndexSymbol::of(Family::RicT, &[], &[u(i), b(j)])
}

pub fn scalar_f() -> IndexSymbol {
    IndexSymbol::of(Family::F, &[], &[])
}

pub fn acoef(i: u8, j: u8) -> IndexSymbol {
    IndexSymbol::of(Family::ACoef, &[i], &[u(j)])
}

pub fn bcoef(i: u8, j: u8) -> IndexSymbol {
    IndexSymbol::of(Family::BCoef, &[i], &[u(j)])
}

/// `a^i_{kℓ}`, the components of `∇g̃`
pub fn achern(i: u8, k: u8, l: u8) -> IndexSymbol {
    IndexSymbol::of(Family::AChern, &[i], &[u(k), u(l)])
}

/// `α = α̃_i θ̃^i`
pub fn alpha_form() -> FormExpr {
    sum1(|i| e(alpha(i)).wedge(&th(i)))
}

/// `d` of an expression representing a globally defined form: all
/// connection terms must cancel.
pub fn d(ctx: DerivationContext, x: &FormExpr) -> Result<FormExpr, FormError> {
    let r = ctx.ext_d(x)?;
    if r.has_connection() {
        return Err(FormError::ConnectionForm("d of a tensorial expression"));
    }
    Ok(r)
}

/// `d^* = −*d*`.
pub fn codiff(ctx: DerivationContext, x: &FormExpr) -> Result<FormExpr, FormError> {
    Ok(hodge_star(&d(ctx, &hodge_star(x)?)?)?.neg())
}

/// `∂u`, `∂̄u` for a 0-form.
pub fn dbar_parts(ctx: DerivationContext, x: &FormExpr) -> Result<(FormExpr, FormExpr), FormError> {
    let du = d(ctx, x)?;
    Ok((du.type_part(1, 0)?, du.type_part(0, 1)?))
}

/// `d^c u = (√−1/2)(∂̄u − ∂u)`.
pub fn dc(ctx: DerivationContext, x: &FormExpr) -> Result<FormExpr, FormError> {
    let (p, q) = dbar_parts(ctx, x)?;
    Ok(q.sub(&p).scale(Coeff::i() * Coeff::ratio(1, 2)))
}

/// Coefficient of the top-degree form relative to the volume form.
pub fn top_ratio(x: &FormExpr) -> FormExpr {
    let top = Word(0b1111);
    let v = volume().coefficient(top).as_constant().unwrap();
    x.coefficient(top).scale(v.inv().unwrap())
}

/// `2 ω̃∧X / ω̃²` for a 2-form `X`.
pub fn wedge_trace(x: &FormExpr) -> FormExpr {
    let w = omega_tilde();
    let top = Word(0b1111);
    let c = w.wedge(&w).coefficient(top).as_constant().unwrap();
    w.wedge(x).coefficient(top).scale(Coeff::int(2) * c.inv().unwrap())
}

/// Complex-bilinear extension of `g̃` on forms: `β∧*γ = g̃(β,γ)·vol`.
pub fn bilinear(beta: &FormExpr, gamma: &FormExpr) -> Result<FormExpr, FormError> {
    Ok(top_ratio(&beta.wedge(&hodge_star(gamma)?)))
}

/// Hermitian inner product `β∧conj(*γ) = g̃(β,γ)·vol`.
pub fn hermitian(beta: &FormExpr, gamma: &FormExpr) -> Result<FormExpr, FormError> {
    Ok(top_ratio(&beta.wedge(&hodge_star(gamma)?.conj())))
}

/// `Re x = (x + conj x)/2`.
pub fn re(x: &FormExpr) -> FormExpr {
    x.add(&x.conj()).scale(Coeff::ratio(1, 2))
}

/// `|x|² = x·conj(x)`.
pub fn abs2(x: &FormExpr) -> FormExpr {
    x.wedge(&x.conj())
}

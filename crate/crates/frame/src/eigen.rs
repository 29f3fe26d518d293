//! Passing from the `g̃`-unitary frame to a `g`-unitary background frame, and
//! specializing to frames that diagonalize `g̃` at a point.
//!
//! With `θ̃^i = a^i_j θ^j` and `θ^i = b^i_j θ̃^j`, a component converts by one
//! factor per slot: `a` for an upper index, `b` for a lower unbarred index, and
//! `conj(b)` for a lower barred index. At a point where `a^i_j = √λ_i δ_ij`, the
//! eigenvalues obey `λ₁λ₂ = e^F`.

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::expr::{Exponent, FormError, FormExpr, WedgeMonomial};
use crate::symbol::{Family, Idx, IndexSymbol};

fn acoef(i: u8, j: u8) -> IndexSymbol {
    IndexSymbol::of(Family::ACoef, &[i], &[Idx::u(j)])
}

fn bcoef(i: u8, j: u8) -> IndexSymbol {
    IndexSymbol::of(Family::BCoef, &[i], &[Idx::u(j)])
}

pub fn lambda(i: u8) -> IndexSymbol {
    IndexSymbol::of(Family::Lambda, &[], &[Idx::u(i)])
}

pub fn exp_f() -> IndexSymbol {
    IndexSymbol::of(Family::ExpF, &[], &[])
}

fn background_family(f: Family) -> Option<Family> {
    match f {
        Family::Alpha => Some(Family::AlphaBg),
        Family::N => Some(Family::NBg),
        Family::K => Some(Family::KBg),
        _ => None,
    }
}

/// Background-frame expansion of an unconjugated `g̃`-frame component, or
/// `None` for symbols that are not converted (scalars, frame coefficients,
/// curvature, and derivatives of `Ñ`, `K̃`, which need a separate rule).
pub fn background_expansion(s: &IndexSymbol) -> Option<FormExpr> {
    let bg = background_family(s.family)?;
    if s.family != Family::Alpha && !s.derivs.is_empty() {
        return None;
    }
    // enumerate all background index assignments
    let nu = s.upper.len();
    let slots: Vec<Idx> = s.covariant_slots().copied().collect();
    let total = nu + slots.len();
    let mut raw = Vec::new();
    for code in 0..(1u32 << total) {
        let pick = |k: usize| (code >> k & 1) as u8 + 1;
        let upper: Vec<u8> = (0..nu).map(pick).collect();
        let lowered: Vec<Idx> = slots
            .iter()
            .enumerate()
            .map(|(k, idx)| Idx { val: pick(nu + k), bar: idx.bar })
            .collect();
        let (lower, derivs) = lowered.split_at(s.lower.len());
        let Ok(target) = IndexSymbol::new(bg, upper.clone(), lower.to_vec(), derivs.to_vec()) else {
            continue;
        };
        let mut symbols = vec![(target, Rational64::one())];
        for (k, &u) in s.upper.iter().enumerate() {
            symbols.push((acoef(u, upper[k]), Rational64::one()));
        }
        for (orig, new) in slots.iter().zip(&lowered) {
            let b = bcoef(new.val, orig.val);
            let b = if orig.bar { b.conjugated() } else { b };
            symbols.push((b, Rational64::one()));
        }
        raw.push(WedgeMonomial {
            coeff: Coeff::one(),
            symbols,
            word: vec![],
        });
    }
    Some(FormExpr::normal_form(raw))
}

/// Rewrite every convertible `g̃`-frame component in background-frame terms.
pub fn to_background(e: &FormExpr) -> Result<FormExpr, FormError> {
    e.substitute(background_expansion)
}

/// Options for [`substitute_eigenframe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EigenOptions {
    /// Apply `λ₁λ₂ = e^F` by eliminating `λ₂`.
    pub cy_rewrite: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { cy_rewrite: true }
    }
}

/// `a^i_j ↦ √λ_i δ_ij`, `b^i_j ↦ λ_j^{−1/2} δ_ij`, then optionally
/// `λ₂^c ↦ e^{cF} λ₁^{−c}`, which makes every monomial in `λ₁, λ₂, e^F`
/// canonical so that `λ₁λ₂ ↦ e^F` holds wherever the product appears.
pub fn substitute_eigenframe(e: &FormExpr, opts: EigenOptions) -> FormExpr {
    let half = Rational64::new(1, 2);
    let raw = e
        .terms()
        .filter_map(|(scalar, w, c)| {
            let mut symbols = Vec::new();
            for (s, ex) in scalar.factors() {
                match s.family {
                    Family::ACoef | Family::BCoef => {
                        let (i, j) = (s.upper[0], s.lower[0].val);
                        if i != j {
                            return None;
                        }
                        let p = if s.family == Family::ACoef { half } else { -half };
                        symbols.push((lambda(i), p * ex));
                    }
                    _ => symbols.push((s.clone(), *ex)),
                }
            }
            if opts.cy_rewrite {
                symbols = symbols
                    .into_iter()
                    .flat_map(|(s, ex)| {
                        if s == lambda(2) {
                            vec![(exp_f(), ex), (lambda(1), -ex)]
                        } else {
                            vec![(s, ex)]
                        }
                    })
                    .collect();
            }
            Some(WedgeMonomial {
                coeff: c,
                symbols,
                word: w.gens().collect(),
            })
        })
        .collect();
    FormExpr::normal_form(raw)
}

/// `λ₁, λ₂` with exponent `p` each: helper for hand-written targets.
pub fn lambda_pow(i: u8, p: Exponent) -> FormExpr {
    if p.is_zero() {
        return FormExpr::int(1);
    }
    FormExpr::sym_pow(lambda(i), p)
}

//! Exterior derivative driven by the structure equations of a unitary frame.

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::expr::{FormError, FormExpr, WedgeMonomial};
use crate::generator::Gen;
use crate::symbol::{Family, Idx, IndexSymbol};

/// Structure equations in force.
///
/// `dθ̃^i = −θ̃^i_j∧θ̃^j + Ñ^i_{j̄k̄}θ̄^j∧θ̄^k` and
/// `dθ̃^i_j = −θ̃^i_k∧θ̃^k_j + R̃^i_{jkℓ̄}θ̃^k∧θ̄^ℓ + K̃^i_{jkℓ}θ̃^k∧θ̃^ℓ + K̃^i_{jk̄ℓ̄}θ̄^k∧θ̄^ℓ`.
/// With `torsion` off the `Ñ` and `K̃` terms are dropped (integrable case).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivationContext {
    pub torsion: bool,
}

impl Default for DerivationContext {
    fn default() -> Self {
        DerivationContext { torsion: true }
    }
}

fn mono(c: Coeff, symbols: Vec<IndexSymbol>, word: Vec<Gen>) -> WedgeMonomial {
    WedgeMonomial {
        coeff: c,
        symbols: symbols.into_iter().map(|s| (s, Rational64::one())).collect(),
        word,
    }
}

fn sym(f: Family, upper: &[u8], lower: &[Idx]) -> IndexSymbol {
    IndexSymbol::of(f, upper, lower)
}

impl DerivationContext {
    /// `d` of a single generator.
    pub fn d_gen(&self, g: Gen) -> FormExpr {
        if let Some((i, bar)) = g.frame_index() {
            let mut raw = Vec::new();
            for j in 1..=2 {
                raw.push(mono(Coeff::int(-1), vec![], vec![Gen::conn(i, j), Gen::theta(j, false)]));
                if self.torsion {
                    for k in 1..=2 {
                        raw.push(mono(
                            Coeff::one(),
                            vec![sym(Family::N, &[i], &[Idx::b(j), Idx::b(k)])],
                            vec![Gen::theta(j, true), Gen::theta(k, true)],
                        ));
                    }
                }
            }
            let e = FormExpr::normal_form(raw);
            return if bar { e.conj() } else { e };
        }
        let (i, j) = g.conn_index().expect("connection generator");
        let mut raw = Vec::new();
        for k in 1..=2 {
            raw.push(mono(Coeff::int(-1), vec![], vec![Gen::conn(i, k), Gen::conn(k, j)]));
            for l in 1..=2 {
                raw.push(mono(
                    Coeff::one(),
                    vec![sym(Family::R, &[i], &[Idx::u(j), Idx::u(k), Idx::b(l)])],
                    vec![Gen::theta(k, false), Gen::theta(l, true)],
                ));
                if self.torsion {
                    for bar in [false, true] {
                        let (kk, ll) = (Idx { val: k, bar }, Idx { val: l, bar });
                        raw.push(mono(
                            Coeff::one(),
                            vec![sym(Family::K, &[i], &[Idx::u(j), kk, ll])],
                            vec![Gen::theta(k, bar), Gen::theta(l, bar)],
                        ));
                    }
                }
            }
        }
        FormExpr::normal_form(raw)
    }

    /// `d` of a tensor component: covariant derivatives along the coframe plus
    /// connection corrections for every index slot.
    pub fn d_symbol(&self, s: &IndexSymbol) -> Result<FormExpr, FormError> {
        if !s.family.is_tensor_field() {
            return Err(FormError::UnknownFamily(s.family.name().to_string()));
        }
        if s.conj {
            return Ok(self.d_symbol(&s.clone().conjugated())?.conj());
        }
        let mut raw = Vec::new();
        for p in 1..=2 {
            for bar in [false, true] {
                let ds = s.clone().with_derivs(&[Idx { val: p, bar }]);
                raw.push(mono(Coeff::one(), vec![ds], vec![Gen::theta(p, bar)]));
            }
        }
        for (k, &u) in s.upper.iter().enumerate() {
            for q in 1..=2 {
                let mut t = s.clone();
                t.upper[k] = q;
                raw.push(mono(Coeff::int(-1), vec![t], vec![Gen::conn(u, q)]));
            }
        }
        let nl = s.lower.len();
        for (k, idx) in s.covariant_slots().enumerate() {
            for q in 1..=2 {
                let mut t = s.clone();
                let slot = if k < nl { &mut t.lower[k] } else { &mut t.derivs[k - nl] };
                slot.val = q;
                if idx.bar {
                    // conj(θ̃^q_b) = −θ̃^b_q
                    raw.push(mono(Coeff::int(-1), vec![t], vec![Gen::conn(idx.val, q)]));
                } else {
                    raw.push(mono(Coeff::one(), vec![t], vec![Gen::conn(q, idx.val)]));
                }
            }
        }
        Ok(FormExpr::normal_form(raw))
    }

    /// Leibniz-rule exterior derivative. The result may contain connection forms.
    pub fn ext_d(&self, e: &FormExpr) -> Result<FormExpr, FormError> {
        let mut out = FormExpr::zero();
        for (scalar, w, c) in e.terms() {
            let word = FormExpr::from_terms([(crate::expr::Scalar::one(), w, Coeff::one())]);
            // d of the scalar part
            for (k, (s, ex)) in scalar.factors().iter().enumerate() {
                let mut rest: Vec<(IndexSymbol, Rational64)> = scalar.factors().to_vec();
                rest[k].1 -= Rational64::one();
                let prefactor = FormExpr::normal_form(vec![WedgeMonomial {
                    coeff: c * Coeff::new(*ex, Rational64::zero()),
                    symbols: rest,
                    word: vec![],
                }]);
                let ds = self.d_symbol(s)?;
                out = out.add(&prefactor.wedge(&ds).wedge(&word));
            }
            // d of the word
            let coeff_part = FormExpr::from_terms([(scalar.clone(), crate::generator::Word::EMPTY, c)]);
            let gens: Vec<Gen> = w.gens().collect();
            for (k, g) in gens.iter().enumerate() {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let left = FormExpr::normal_form(vec![mono(Coeff::int(sign), vec![], gens[..k].to_vec())]);
                let right = FormExpr::normal_form(vec![mono(Coeff::one(), vec![], gens[k + 1..].to_vec())]);
                out = out.add(&coeff_part.wedge(&left).wedge(&self.d_gen(*g)).wedge(&right));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha_form() -> FormExpr {
        FormExpr::sum(&[1u8, 2].map(|i| {
            FormExpr::sym(sym(Family::Alpha, &[], &[Idx::u(i)])).wedge(&FormExpr::theta(i, false))
        }))
    }

    #[test]
    fn scalar_has_no_connection_terms() {
        let ctx = DerivationContext::default();
        let df = ctx.ext_d(&FormExpr::sym(sym(Family::F, &[], &[]))).unwrap();
        assert_eq!(df.len(), 4);
        assert!(!df.has_connection());
    }

    #[test]
    fn torsion_of_coframe_at_point() {
        let ctx = DerivationContext::default();
        let d = ctx.ext_d(&FormExpr::theta(1, false)).unwrap().at_point();
        let n = FormExpr::sym(sym(Family::N, &[1], &[Idx::b(1), Idx::b(2)]))
            .wedge(&FormExpr::theta(1, true))
            .wedge(&FormExpr::theta(2, true))
            .scale(Coeff::int(2));
        assert_eq!(d, n);
    }

    #[test]
    fn d_alpha_connection_terms_cancel() {
        let ctx = DerivationContext::default();
        let da = ctx.ext_d(&alpha_form()).unwrap();
        assert!(!da.has_connection(), "{da}");
        let t02 = da.type_part(0, 2).unwrap();
        let expect = FormExpr::sum(&[1u8, 2].map(|i| {
            FormExpr::sym(sym(Family::Alpha, &[], &[Idx::u(i)]))
                .times(&FormExpr::sym(sym(Family::N, &[i], &[Idx::b(1), Idx::b(2)])))
                .wedge(&FormExpr::theta(1, true))
                .wedge(&FormExpr::theta(2, true))
                .scale(Coeff::int(2))
        }));
        assert_eq!(t02, expect);
    }

    #[test]
    fn dd_of_scalar_has_no_connection() {
        let ctx = DerivationContext::default();
        let ddf = ctx.ext_d(&ctx.ext_d(&FormExpr::sym(sym(Family::F, &[], &[]))).unwrap()).unwrap();
        assert!(!ddf.has_connection(), "{ddf}");
    }

    #[test]
    fn real_scalar_has_no_rule() {
        let ctx = DerivationContext::default();
        let l = FormExpr::sym(sym(Family::Lambda, &[], &[Idx::u(1)]));
        assert!(matches!(ctx.ext_d(&l), Err(FormError::UnknownFamily(_))));
    }
}

//! Symbol-replacement rules and solving component equations for one symbol.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::coeff::Coeff;
use crate::expr::{FormError, FormExpr, Scalar};
use crate::generator::Word;
use crate::symbol::IndexSymbol;

/// Replacements `symbol ↦ 0-form`, applied simultaneously. Keys are stored
/// unconjugated; conjugated occurrences get the conjugated replacement.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RuleSet {
    rules: BTreeMap<IndexSymbol, FormExpr>,
}

impl RuleSet {
    pub fn new() -> Self {
        RuleSet::default()
    }

    pub fn insert(&mut self, from: IndexSymbol, to: FormExpr) {
        let (sign, key) = from.canonical().expect("rule for a vanishing component");
        let (key, to) = if key.conj {
            (key.conjugated(), to.conj())
        } else {
            (key, to)
        };
        self.rules.insert(key, to.scale(Coeff::int(sign)));
    }

    pub fn with(mut self, from: IndexSymbol, to: FormExpr) -> Self {
        self.insert(from, to);
        self
    }

    pub fn extend(&mut self, other: &RuleSet) {
        for (k, v) in &other.rules {
            self.rules.insert(k.clone(), v.clone());
        }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Number of symbol occurrences the rule set would replace.
    pub fn matches(&self, e: &FormExpr) -> usize {
        e.terms()
            .map(|(s, _, _)| {
                s.factors()
                    .iter()
                    .filter(|(x, _)| {
                        let k = if x.conj { x.clone().conjugated() } else { x.clone() };
                        self.rules.contains_key(&k)
                    })
                    .count()
            })
            .sum()
    }

    /// One simultaneous pass.
    pub fn apply(&self, e: &FormExpr) -> Result<FormExpr, FormError> {
        e.substitute(|s| self.rules.get(s).cloned())
    }

    /// Apply repeatedly until nothing changes (rules must not cycle).
    pub fn apply_fixpoint(&self, e: &FormExpr) -> Result<FormExpr, FormError> {
        let mut cur = e.clone();
        for _ in 0..16 {
            if self.matches(&cur) == 0 {
                return Ok(cur);
            }
            cur = self.apply(&cur)?;
        }
        Err(FormError::Degree("rewrite rules did not terminate".into()))
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.rules {
            writeln!(f, "{k} -> {v}")?;
        }
        Ok(())
    }
}

/// Solve the 0-form equation `eq = 0` for `target`, which must occur linearly
/// with a constant coefficient.
pub fn solve_for(eq: &FormExpr, target: &IndexSymbol) -> Result<FormExpr, FormError> {
    if eq.degree().is_some_and(|d| d != 0) {
        return Err(FormError::Degree("solve_for expects a 0-form equation".into()));
    }
    let (sign, target) = target
        .canonical()
        .ok_or_else(|| FormError::Degree(format!("{target} vanishes identically")))?;
    let lone = Scalar::normalize(vec![(target.clone(), One::one())]).unwrap().1;
    let mut coeff = None;
    let mut rest = Vec::new();
    for (s, w, c) in eq.terms() {
        if *s == lone {
            coeff = Some(c);
        } else if s.factors().iter().any(|(x, _)| *x == target) {
            return Err(FormError::Degree(format!("{target} occurs non-linearly")));
        } else {
            rest.push((s.clone(), w, c));
        }
    }
    let c = coeff.ok_or_else(|| FormError::Degree(format!("{target} does not occur")))?;
    let inv = (-c).inv().expect("nonzero coefficient") * Coeff::int(sign);
    Ok(FormExpr::from_terms(rest).scale(inv))
}

/// Coefficients of every basis word, as 0-form component equations.
pub fn components(e: &FormExpr) -> BTreeMap<Word, FormExpr> {
    let mut out: BTreeMap<Word, FormExpr> = BTreeMap::new();
    for (s, w, c) in e.terms() {
        let term = FormExpr::from_terms([(s.clone(), Word::EMPTY, c)]);
        let entry = out.entry(w).or_default();
        *entry = entry.add(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{Family, Idx};

    fn s(f: Family, up: &[u8], lo: &[Idx]) -> IndexSymbol {
        IndexSymbol::of(f, up, lo)
    }

    #[test]
    fn solve_linear() {
        let x = s(Family::Alpha, &[], &[Idx::u(1)]);
        let y = s(Family::Alpha, &[], &[Idx::u(2)]);
        // 2x − 3y = 0  ⇒  x = 3/2 y
        let eq = FormExpr::sym(x.clone())
            .scale(Coeff::int(2))
            .sub(&FormExpr::sym(y.clone()).scale(Coeff::int(3)));
        let sol = solve_for(&eq, &x).unwrap();
        assert_eq!(sol, FormExpr::sym(y).scale(Coeff::ratio(3, 2)));
    }

    #[test]
    fn rule_applies_to_conjugates() {
        let x = s(Family::Alpha, &[], &[Idx::u(1)]);
        let y = s(Family::Alpha, &[], &[Idx::u(2)]);
        let rules = RuleSet::new().with(x.clone(), FormExpr::sym(y.clone()).scale(Coeff::i()));
        let e = FormExpr::sym(x.conjugated());
        let out = rules.apply(&e).unwrap();
        assert_eq!(out, FormExpr::sym(y.conjugated()).scale(Coeff::i().conj()));
    }

    #[test]
    fn skew_rule_key_is_canonical() {
        let n21 = s(Family::N, &[1], &[Idx::b(2), Idx::b(1)]);
        let n12 = s(Family::N, &[1], &[Idx::b(1), Idx::b(2)]);
        let z = FormExpr::sym(s(Family::F, &[], &[]));
        let rules = RuleSet::new().with(n21, z.clone());
        assert_eq!(rules.apply(&FormExpr::sym(n12)).unwrap(), z.neg());
    }
}

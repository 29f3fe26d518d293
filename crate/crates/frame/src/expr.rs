//! Exact sums of wedge monomials, kept in normal form.
//!
//! A term is `coeff · Π symbol^exp · word`. The normal form merges terms that
//! share `(symbols, word)`, drops zero coefficients, sorts every word under the
//! global generator order, and puts skew-symmetric index pairs in canonical
//! order. Every constructor and operation in this module returns normal forms.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::generator::{Gen, Word};
use crate::symbol::IndexSymbol;

pub type Exponent = Rational64;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("{0}: expression still contains connection forms")]
    ConnectionForm(&'static str),
    #[error("no derivative rule registered for `{0}`")]
    UnknownFamily(String),
    #[error("cannot substitute into `{0}` raised to a non-natural power")]
    Power(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Degree(String),
}

/// Commutative product of symbols with rational exponents; sorted, merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(Vec<(IndexSymbol, Exponent)>);

impl Scalar {
    pub fn one() -> Self {
        Scalar(Vec::new())
    }

    pub fn factors(&self) -> &[(IndexSymbol, Exponent)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Normalize a raw factor list. `None` when a factor vanishes by skew symmetry.
    pub fn normalize(raw: Vec<(IndexSymbol, Exponent)>) -> Option<(i64, Scalar)> {
        let mut sign = 1i64;
        let mut acc: BTreeMap<IndexSymbol, Exponent> = BTreeMap::new();
        for (s, e) in raw {
            if e.is_zero() {
                continue;
            }
            let (sg, c) = s.canonical()?;
            if sg < 0 {
                assert!(e.is_integer(), "fractional power of a skew-symmetric component {s}");
                if e.to_integer() % 2 != 0 {
                    sign = -sign;
                }
            }
            *acc.entry(c).or_insert_with(Exponent::zero) += e;
        }
        let v = acc.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        Some((sign, Scalar(v)))
    }

    fn mul(&self, other: &Scalar) -> Scalar {
        let mut raw = self.0.clone();
        raw.extend(other.0.iter().cloned());
        // inputs are canonical so no sign can appear
        Scalar::normalize(raw).expect("canonical inputs").1
    }

    fn conj(&self) -> Scalar {
        let raw = self
            .0
            .iter()
            .map(|(s, e)| (s.clone().conjugated(), *e))
            .collect();
        Scalar::normalize(raw).expect("canonical inputs").1
    }
}

/// A raw, not yet normalized monomial.
#[derive(Clone, Debug)]
pub struct WedgeMonomial {
    pub coeff: Coeff,
    pub symbols: Vec<(IndexSymbol, Exponent)>,
    pub word: Vec<Gen>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct FormExpr {
    terms: BTreeMap<(Scalar, Word), Coeff>,
}

impl FormExpr {
    pub fn zero() -> Self {
        FormExpr::default()
    }

    pub fn constant(c: Coeff) -> Self {
        let mut e = FormExpr::zero();
        e.push(Scalar::one(), Word::EMPTY, c);
        e
    }

    pub fn int(n: i64) -> Self {
        FormExpr::constant(Coeff::int(n))
    }

    pub fn sym(s: IndexSymbol) -> Self {
        FormExpr::sym_pow(s, Exponent::one())
    }

    pub fn sym_pow(s: IndexSymbol, e: Exponent) -> Self {
        FormExpr::normal_form(vec![WedgeMonomial {
            coeff: Coeff::one(),
            symbols: vec![(s, e)],
            word: vec![],
        }])
    }

    pub fn gen(g: Gen) -> Self {
        let mut e = FormExpr::zero();
        e.push(Scalar::one(), Word(1 << g.index()), Coeff::one());
        e
    }

    /// `θ̃^i` or `θ̄^i`.
    pub fn theta(i: u8, bar: bool) -> Self {
        FormExpr::gen(Gen::theta(i, bar))
    }

    /// Canonical representative of a sum of raw monomials.
    pub fn normal_form(raw: Vec<WedgeMonomial>) -> Self {
        let mut e = FormExpr::zero();
        for m in raw {
            let Some((ws, word)) = Word::from_sequence(&m.word) else {
                continue;
            };
            let Some((ss, scalar)) = Scalar::normalize(m.symbols) else {
                continue;
            };
            e.push(scalar, word, m.coeff * Coeff::int(ws * ss));
        }
        e
    }

    fn push(&mut self, s: Scalar, w: Word, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let key = (s, w);
        let v = self.terms.entry(key.clone()).or_insert_with(Coeff::zero);
        *v = *v + c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Scalar, Word, Coeff)> {
        self.terms.iter().map(|((s, w), c)| (s, *w, *c))
    }

    /// Raw monomials, e.g. for re-normalization after external manipulation.
    pub fn monomials(&self) -> Vec<WedgeMonomial> {
        self.terms()
            .map(|(s, w, c)| WedgeMonomial {
                coeff: c,
                symbols: s.factors().to_vec(),
                word: w.gens().collect(),
            })
            .collect()
    }

    pub fn from_terms<I: IntoIterator<Item = (Scalar, Word, Coeff)>>(it: I) -> Self {
        let mut e = FormExpr::zero();
        for (s, w, c) in it {
            e.push(s, w, c);
        }
        e
    }

    pub fn add(&self, o: &FormExpr) -> FormExpr {
        let mut e = self.clone();
        for ((s, w), c) in &o.terms {
            e.push(s.clone(), *w, *c);
        }
        e
    }

    pub fn sub(&self, o: &FormExpr) -> FormExpr {
        self.add(&o.scale(Coeff::int(-1)))
    }

    pub fn neg(&self) -> FormExpr {
        self.scale(Coeff::int(-1))
    }

    pub fn scale(&self, c: Coeff) -> FormExpr {
        FormExpr::from_terms(self.terms().map(|(s, w, k)| (s.clone(), w, k * c)))
    }

    /// Graded-anticommutative product; words of degree above 4 in the coframe
    /// vanish automatically because a generator must repeat.
    pub fn wedge(&self, o: &FormExpr) -> FormExpr {
        let mut e = FormExpr::zero();
        for ((s1, w1), c1) in &self.terms {
            for ((s2, w2), c2) in &o.terms {
                if let Some((sign, w)) = w1.wedge(*w2) {
                    e.push(s1.mul(s2), w, *c1 * *c2 * Coeff::int(sign));
                }
            }
        }
        e
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a FormExpr>>(it: I) -> FormExpr {
        it.into_iter().fold(FormExpr::zero(), |acc, x| acc.add(x))
    }

    /// Complex conjugation: coefficients, symbols, and generators
    /// (`θ̃^i ↔ θ̄^i`, and `conj θ̃^i_j = −θ̃^j_i` for the unitary connection).
    pub fn conj(&self) -> FormExpr {
        let raw = self
            .terms()
            .map(|(s, w, c)| {
                let mut coeff = c.conj();
                let word = w
                    .gens()
                    .map(|g| match (g.frame_index(), g.conn_index()) {
                        (Some((i, bar)), _) => Gen::theta(i, !bar),
                        (_, Some((i, j))) => {
                            coeff = -coeff;
                            Gen::conn(j, i)
                        }
                        _ => unreachable!(),
                    })
                    .collect();
                WedgeMonomial {
                    coeff,
                    symbols: s.conj().factors().to_vec(),
                    word,
                }
            })
            .collect();
        FormExpr::normal_form(raw)
    }

    /// Re-canonicalize skew-symmetric index pairs. Normal forms already satisfy
    /// this, so on them the operation is the identity.
    pub fn apply_symmetries(&self) -> FormExpr {
        FormExpr::normal_form(self.monomials())
    }

    pub fn has_connection(&self) -> bool {
        self.terms.keys().any(|(_, w)| w.has_connection())
    }

    pub fn type_part(&self, p: u32, q: u32) -> Result<FormExpr, FormError> {
        if self.has_connection() {
            return Err(FormError::ConnectionForm("type_part"));
        }
        Ok(FormExpr::from_terms(
            self.terms()
                .filter(|(_, w, _)| w.bidegree() == (p, q))
                .map(|(s, w, c)| (s.clone(), w, c)),
        ))
    }

    /// Evaluate in a frame whose connection forms vanish at the point.
    pub fn at_point(&self) -> FormExpr {
        FormExpr::from_terms(
            self.terms()
                .filter(|(_, w, _)| !w.has_connection())
                .map(|(s, w, c)| (s.clone(), w, c)),
        )
    }

    /// The value of a constant expression.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self
                .terms()
                .next()
                .filter(|(s, w, _)| s.is_one() && *w == Word::EMPTY)
                .map(|(_, _, c)| c),
            _ => None,
        }
    }

    /// Degree if homogeneous (`None` for zero or mixed degree).
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|(_, w)| w.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// The 0-form coefficient multiplying the given word.
    pub fn coefficient(&self, word: Word) -> FormExpr {
        FormExpr::from_terms(
            self.terms()
                .filter(|(_, w, _)| *w == word)
                .map(|(s, _, c)| (s.clone(), Word::EMPTY, c)),
        )
    }

    /// Multiply every term by a 0-form expression.
    pub fn times(&self, scalar: &FormExpr) -> FormExpr {
        self.wedge(scalar)
    }

    /// Replace symbols: `rule(s)` returns the 0-form standing for an
    /// unconjugated symbol `s`; conjugated occurrences receive the conjugate of
    /// the replacement. Symbols without a rule are kept.
    pub fn substitute<F>(&self, rule: F) -> Result<FormExpr, FormError>
    where
        F: Fn(&IndexSymbol) -> Option<FormExpr>,
    {
        let lookup = |s: &IndexSymbol| -> Option<FormExpr> {
            if s.conj {
                rule(&s.clone().conjugated()).map(|e| e.conj())
            } else {
                rule(s)
            }
        };
        let mut out = FormExpr::zero();
        for (scalar, w, c) in self.terms() {
            let mut acc = FormExpr::zero();
            acc.push(Scalar::one(), w, c);
            for (s, e) in scalar.factors() {
                match lookup(s) {
                    Some(rep) => {
                        if !(e.is_integer() && *e > Exponent::zero()) {
                            return Err(FormError::Power(s.to_string()));
                        }
                        for _ in 0..e.to_integer() {
                            acc = acc.wedge(&rep);
                        }
                    }
                    None => acc = acc.wedge(&FormExpr::sym_pow(s.clone(), *e)),
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Symbols occurring anywhere in the expression.
    pub fn symbols(&self) -> Vec<IndexSymbol> {
        let mut v: Vec<IndexSymbol> = self
            .terms
            .keys()
            .flat_map(|(s, _)| s.factors().iter().map(|(x, _)| x.clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (s, w, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (sym, e) in s.factors() {
                write!(f, " * {sym}")?;
                if !e.is_one() {
                    if e.is_integer() {
                        write!(f, "^{}", e.numer())?;
                    } else {
                        write!(f, "^{}/{}", e.numer(), e.denom())?;
                    }
                }
            }
            for g in w.gens() {
                write!(f, " ^ {g}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for FormExpr {
    type Err = FormError;

    /// Inverse of `Display`: `coeff * sym ... ^ gen ^ gen` terms joined by ` + `.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(FormExpr::zero());
        }
        let perr = |m: String| FormError::Parse(m);
        let mut raw = Vec::new();
        for term in s.split(" + ") {
            let mut parts = term.split(" ^ ");
            let head = parts.next().ok_or_else(|| perr("empty term".into()))?;
            let word = parts
                .map(|g| g.trim().parse::<Gen>().map_err(perr))
                .collect::<Result<Vec<_>, _>>()?;
            let mut factors = head.split(" * ");
            let coeff: Coeff = factors
                .next()
                .ok_or_else(|| perr("missing coefficient".into()))?
                .parse()
                .map_err(perr)?;
            let mut symbols = Vec::new();
            for fct in factors {
                let (sym, exp) = match fct.rsplit_once("]^") {
                    Some((a, e)) => {
                        let exp = match e.split_once('/') {
                            Some((p, q)) => Rational64::new(
                                p.parse().map_err(|_| perr(format!("bad exponent `{e}`")))?,
                                q.parse().map_err(|_| perr(format!("bad exponent `{e}`")))?,
                            ),
                            None => Rational64::from_integer(
                                e.parse().map_err(|_| perr(format!("bad exponent `{e}`")))?,
                            ),
                        };
                        (format!("{a}]"), exp)
                    }
                    None => (fct.to_string(), Exponent::one()),
                };
                symbols.push((sym.parse::<IndexSymbol>().map_err(perr)?, exp));
            }
            raw.push(WedgeMonomial {
                coeff,
                symbols,
                word,
            });
        }
        Ok(FormExpr::normal_form(raw))
    }
}

impl std::ops::Add for &FormExpr {
    type Output = FormExpr;
    fn add(self, o: &FormExpr) -> FormExpr {
        FormExpr::add(self, o)
    }
}

impl std::ops::Sub for &FormExpr {
    type Output = FormExpr;
    fn sub(self, o: &FormExpr) -> FormExpr {
        FormExpr::sub(self, o)
    }
}

//! Indexed coefficient symbols: frame components of tensors, their covariant
//! derivatives, and the scalar bookkeeping symbols of the eigenframe reduction.

use std::fmt;

/// A frame index in `{1, 2}`, possibly barred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Idx {
    pub val: u8,
    pub bar: bool,
}

impl Idx {
    pub const fn u(val: u8) -> Self {
        Idx { val, bar: false }
    }

    pub const fn b(val: u8) -> Self {
        Idx { val, bar: true }
    }

    /// The complementary index: `1 ↔ 2`, bar preserved.
    pub const fn hat(self) -> Self {
        Idx { val: 3 - self.val, bar: self.bar }
    }
}

impl fmt::Display for Idx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bar {
            write!(f, "~")?;
        }
        write!(f, "{}", self.val)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Unbarred,
    Barred,
    /// both slots of a `Same` pair carry the same bar
    Same,
}

/// Tensor families appearing in the frame computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// components `α̃_i` of the (1,0)-part of the 1-form `a`
    Alpha,
    /// torsion / Nijenhuis components `Ñ^i_{j̄k̄}`
    N,
    /// curvature `R̃^i_{jkℓ̄}`
    R,
    /// curvature `K̃^i_{jkℓ}` and `K̃^i_{jk̄ℓ̄}`
    K,
    /// a fixed background (1,1)-tensor `T̃_{ij̄}` such as the Ricci form
    RicT,
    /// a scalar function
    F,
    /// (1,1)-components `g_{ij̄}` of the reference form in the `g̃`-frame
    G,
    /// (2,0)-components of the reference form in the `g̃`-frame
    S,
    /// generic (1,0) components of a 1-form
    P,
    /// generic (0,1) components of a 1-form
    Q,
    /// frame change `θ̃^i = a^i_j θ^j`
    ACoef,
    /// inverse frame change `θ^i = b^i_j θ̃^j`
    BCoef,
    /// eigenvalues of `g̃` relative to `g`
    Lambda,
    /// components `a^i_{kℓ}` of `∇g̃`
    AChern,
    /// the positive scalar `e^F`
    ExpF,
    /// `α` in the background frame
    AlphaBg,
    /// Nijenhuis tensor in the background frame
    NBg,
    /// `K` in the background frame
    KBg,
}

pub const ALL_FAMILIES: [Family; 18] = [
    Family::Alpha,
    Family::N,
    Family::R,
    Family::K,
    Family::RicT,
    Family::F,
    Family::G,
    Family::S,
    Family::P,
    Family::Q,
    Family::ACoef,
    Family::BCoef,
    Family::Lambda,
    Family::AChern,
    Family::ExpF,
    Family::AlphaBg,
    Family::NBg,
    Family::KBg,
];

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Alpha => "alpha",
            Family::N => "N",
            Family::R => "R",
            Family::K => "K",
            Family::RicT => "T",
            Family::F => "f",
            Family::G => "G",
            Family::S => "S",
            Family::P => "P",
            Family::Q => "Q",
            Family::ACoef => "a",
            Family::BCoef => "b",
            Family::Lambda => "lambda",
            Family::AChern => "ach",
            Family::ExpF => "expF",
            Family::AlphaBg => "alpha_g",
            Family::NBg => "N_g",
            Family::KBg => "K_g",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        ALL_FAMILIES.into_iter().find(|f| f.name() == s)
    }

    fn signature(self) -> (usize, &'static [Slot]) {
        use Slot::*;
        match self {
            Family::Alpha | Family::AlphaBg | Family::P | Family::Lambda => (0, &[Unbarred]),
            Family::Q => (0, &[Barred]),
            Family::N | Family::NBg => (1, &[Barred, Barred]),
            Family::R => (1, &[Unbarred, Unbarred, Barred]),
            Family::K | Family::KBg => (1, &[Unbarred, Same, Same]),
            Family::RicT | Family::G => (0, &[Unbarred, Barred]),
            Family::S => (0, &[Unbarred, Unbarred]),
            Family::F | Family::ExpF => (0, &[]),
            Family::ACoef | Family::BCoef => (1, &[Unbarred]),
            Family::AChern => (1, &[Unbarred, Unbarred]),
        }
    }

    /// Lower-slot pair that is skew-symmetric.
    pub fn antisymmetric_pair(self) -> Option<(usize, usize)> {
        match self {
            Family::N | Family::NBg | Family::S => Some((0, 1)),
            Family::K | Family::KBg => Some((1, 2)),
            _ => None,
        }
    }

    /// Families carrying a derivative rule in a [`crate::DerivationContext`].
    pub fn is_tensor_field(self) -> bool {
        matches!(
            self,
            Family::Alpha
                | Family::N
                | Family::R
                | Family::K
                | Family::RicT
                | Family::F
                | Family::G
                | Family::S
        )
    }

    /// Real scalars: conjugation acts trivially.
    pub fn is_real(self) -> bool {
        matches!(
            self,
            Family::Lambda | Family::ExpF | Family::ACoef | Family::BCoef
        )
    }

    /// Families that may carry covariant-derivative slots.
    fn allows_derivs(self) -> bool {
        self.is_tensor_field() || matches!(self, Family::AlphaBg | Family::NBg | Family::KBg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSymbol {
    pub family: Family,
    pub upper: Vec<u8>,
    pub lower: Vec<Idx>,
    pub derivs: Vec<Idx>,
    pub conj: bool,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("family `{family}` expects {expected} upper / {expected_lower} lower indices")]
    Arity {
        family: &'static str,
        expected: usize,
        expected_lower: usize,
    },
    #[error("family `{0}` has a barred/unbarred slot mismatch")]
    BarMismatch(&'static str),
    #[error("index value {0} out of range (must be 1 or 2)")]
    Range(u8),
    #[error("family `{0}` does not take derivative slots")]
    Derivs(&'static str),
}

impl IndexSymbol {
    pub fn new(
        family: Family,
        upper: Vec<u8>,
        lower: Vec<Idx>,
        derivs: Vec<Idx>,
    ) -> Result<Self, SymbolError> {
        let (nu, slots) = family.signature();
        if upper.len() != nu || lower.len() != slots.len() {
            return Err(SymbolError::Arity {
                family: family.name(),
                expected: nu,
                expected_lower: slots.len(),
            });
        }
        for v in upper
            .iter()
            .copied()
            .chain(lower.iter().chain(&derivs).map(|i| i.val))
        {
            if !(1..=2).contains(&v) {
                return Err(SymbolError::Range(v));
            }
        }
        let mut same: Option<bool> = None;
        for (slot, idx) in slots.iter().zip(&lower) {
            let ok = match slot {
                Slot::Unbarred => !idx.bar,
                Slot::Barred => idx.bar,
                Slot::Same => *same.get_or_insert(idx.bar) == idx.bar,
            };
            if !ok {
                return Err(SymbolError::BarMismatch(family.name()));
            }
        }
        if !derivs.is_empty() && !family.allows_derivs() {
            return Err(SymbolError::Derivs(family.name()));
        }
        Ok(IndexSymbol {
            family,
            upper,
            lower,
            derivs,
            conj: false,
        })
    }

    /// Constructor for hand-written statements; panics on a malformed symbol.
    pub fn of(family: Family, upper: &[u8], lower: &[Idx]) -> Self {
        IndexSymbol::new(family, upper.to_vec(), lower.to_vec(), vec![])
            .unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn with_derivs(mut self, d: &[Idx]) -> Self {
        assert!(self.family.allows_derivs(), "{} takes no derivatives", self.family.name());
        self.derivs.extend_from_slice(d);
        self
    }

    pub fn conjugated(mut self) -> Self {
        if !self.family.is_real() {
            self.conj = !self.conj;
        }
        self
    }

    /// Canonical slot order for the antisymmetric pair. `None` when the pair
    /// repeats an index (the component vanishes); otherwise the sign picked up.
    pub fn canonical(&self) -> Option<(i64, IndexSymbol)> {
        let mut s = self.clone();
        if s.family.is_real() {
            s.conj = false;
        }
        if let Some((a, b)) = s.family.antisymmetric_pair() {
            match s.lower[a].val.cmp(&s.lower[b].val) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => {
                    s.lower.swap(a, b);
                    return Some((-1, s));
                }
                std::cmp::Ordering::Less => {}
            }
        }
        Some((1, s))
    }

    /// Slot-wise index types for the derivative rule: lower slots followed by
    /// derivative slots.
    pub fn covariant_slots(&self) -> impl Iterator<Item = &Idx> {
        self.lower.iter().chain(self.derivs.iter())
    }
}

impl fmt::Display for IndexSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conj {
            write!(f, "!")?;
        }
        write!(f, "{}[", self.family.name())?;
        for u in &self.upper {
            write!(f, "{u}")?;
        }
        write!(f, ";")?;
        for l in &self.lower {
            write!(f, "{l}")?;
        }
        write!(f, "|")?;
        for d in &self.derivs {
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

fn parse_idx_list(s: &str) -> Result<Vec<Idx>, String> {
    let mut out = Vec::new();
    let mut bar = false;
    for ch in s.chars() {
        match ch {
            '~' => bar = true,
            '1' | '2' => {
                out.push(Idx {
                    val: ch as u8 - b'0',
                    bar,
                });
                bar = false;
            }
            _ => return Err(format!("bad index character `{ch}`")),
        }
    }
    if bar {
        return Err("dangling `~`".into());
    }
    Ok(out)
}

impl std::str::FromStr for IndexSymbol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (conj, rest) = match s.strip_prefix('!') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let (name, body) = rest
            .split_once('[')
            .ok_or_else(|| format!("missing `[` in `{s}`"))?;
        let body = body
            .strip_suffix(']')
            .ok_or_else(|| format!("missing `]` in `{s}`"))?;
        let family = Family::from_name(name).ok_or_else(|| format!("unknown family `{name}`"))?;
        let (up, rest) = body.split_once(';').ok_or("missing `;`")?;
        let (low, der) = rest.split_once('|').ok_or("missing `|`")?;
        let upper = parse_idx_list(up)?
            .into_iter()
            .map(|i| if i.bar { Err("barred upper index") } else { Ok(i.val) })
            .collect::<Result<Vec<_>, _>>()?;
        let mut sym = IndexSymbol::new(family, upper, parse_idx_list(low)?, parse_idx_list(der)?)
            .map_err(|e| e.to_string())?;
        if conj {
            sym = sym.conjugated();
        }
        Ok(sym)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_is_checked() {
        assert!(IndexSymbol::new(Family::N, vec![1], vec![Idx::b(1)], vec![]).is_err());
        assert!(IndexSymbol::new(Family::N, vec![1], vec![Idx::u(1), Idx::b(2)], vec![]).is_err());
        assert!(IndexSymbol::new(Family::K, vec![1], vec![Idx::u(1), Idx::u(1), Idx::b(2)], vec![]).is_err());
        assert!(IndexSymbol::new(Family::Lambda, vec![], vec![Idx::u(1)], vec![Idx::u(1)]).is_err());
        assert!(IndexSymbol::new(Family::Alpha, vec![], vec![Idx::u(3)], vec![]).is_err());
    }

    #[test]
    fn conjugation_is_involutive() {
        let s = IndexSymbol::of(Family::N, &[1], &[Idx::b(1), Idx::b(2)]);
        assert_eq!(s.clone().conjugated().conjugated(), s);
        let l = IndexSymbol::of(Family::Lambda, &[], &[Idx::u(2)]);
        assert_eq!(l.clone().conjugated(), l);
    }

    #[test]
    fn antisymmetric_canonical_order() {
        let n21 = IndexSymbol::of(Family::N, &[2], &[Idx::b(2), Idx::b(1)]);
        let (sign, c) = n21.canonical().unwrap();
        assert_eq!(sign, -1);
        assert_eq!(c, IndexSymbol::of(Family::N, &[2], &[Idx::b(1), Idx::b(2)]));
        assert!(IndexSymbol::of(Family::N, &[1], &[Idx::b(1), Idx::b(1)]).canonical().is_none());
        let k = IndexSymbol::of(Family::K, &[1], &[Idx::u(2), Idx::b(1), Idx::b(1)]);
        assert!(k.canonical().is_none());
    }

    #[test]
    fn text_round_trip() {
        let s = IndexSymbol::of(Family::Alpha, &[], &[Idx::u(1)])
            .with_derivs(&[Idx::b(2), Idx::u(1)])
            .conjugated();
        let t = s.to_string();
        assert_eq!(t, "!alpha[;1|~21]");
        assert_eq!(t.parse::<IndexSymbol>().unwrap(), s);
    }
}

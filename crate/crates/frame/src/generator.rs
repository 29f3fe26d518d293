//! Exterior generators: the unitary coframe `θ̃¹, θ̃², θ̄¹, θ̄²` and the
//! connection 1-forms `θ̃^i_j`.
//!
//! Global order: `θ̃¹ < θ̃² < θ̄¹ < θ̄² < θ̃^1_1 < θ̃^1_2 < θ̃^2_1 < θ̃^2_2`.
//! A word is a bitmask over this order, so a stored word is always sorted.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(u8);

impl Gen {
    pub const T1: Gen = Gen(0);
    pub const T2: Gen = Gen(1);
    pub const TB1: Gen = Gen(2);
    pub const TB2: Gen = Gen(3);

    /// `θ̃^i` (unbarred) or `θ̄^i` (barred).
    pub fn theta(i: u8, bar: bool) -> Gen {
        assert!((1..=2).contains(&i));
        Gen(i - 1 + if bar { 2 } else { 0 })
    }

    /// Connection form `θ̃^i_j`.
    pub fn conn(i: u8, j: u8) -> Gen {
        assert!((1..=2).contains(&i) && (1..=2).contains(&j));
        Gen(4 + 2 * (i - 1) + (j - 1))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn from_index(k: u8) -> Gen {
        assert!(k < 8);
        Gen(k)
    }

    pub fn is_connection(self) -> bool {
        self.0 >= 4
    }

    /// For a coframe generator: `(i, barred)`.
    pub fn frame_index(self) -> Option<(u8, bool)> {
        (self.0 < 4).then(|| (self.0 % 2 + 1, self.0 >= 2))
    }

    /// For a connection generator: `(i, j)` of `θ̃^i_j`.
    pub fn conn_index(self) -> Option<(u8, u8)> {
        self.is_connection()
            .then(|| ((self.0 - 4) / 2 + 1, (self.0 - 4) % 2 + 1))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.frame_index(), self.conn_index()) {
            (Some((i, false)), _) => write!(f, "t{i}"),
            (Some((i, true)), _) => write!(f, "~t{i}"),
            (_, Some((i, j))) => write!(f, "w{i}{j}"),
            _ => unreachable!(),
        }
    }
}

impl std::str::FromStr for Gen {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b = s.as_bytes();
        let digit = |c: u8| (c == b'1' || c == b'2').then(|| c - b'0');
        match b {
            [b't', d] => digit(*d).map(|i| Gen::theta(i, false)),
            [b'~', b't', d] => digit(*d).map(|i| Gen::theta(i, true)),
            [b'w', d, e] => digit(*d).zip(digit(*e)).map(|(i, j)| Gen::conn(i, j)),
            _ => None,
        }
        .ok_or_else(|| format!("unknown generator `{s}`"))
    }
}

/// Sorted exterior word stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub u8);

impl Word {
    pub const EMPTY: Word = Word(0);

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn gens(self) -> impl Iterator<Item = Gen> {
        (0..8u8).filter(move |k| self.0 & (1 << k) != 0).map(Gen)
    }

    pub fn contains(self, g: Gen) -> bool {
        self.0 & (1 << g.0) != 0
    }

    pub fn has_connection(self) -> bool {
        self.0 & 0xF0 != 0
    }

    /// `(p, q)`: numbers of unbarred and barred coframe generators.
    pub fn bidegree(self) -> (u32, u32) {
        ((self.0 & 0b0011).count_ones(), (self.0 & 0b1100).count_ones())
    }

    /// `self ∧ other` as a signed sorted word; `None` on a repeated generator.
    pub fn wedge(self, other: Word) -> Option<(i64, Word)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // each pair (g in self, h in other) with g > h costs one transposition
        let mut swaps = 0u32;
        for h in other.gens() {
            swaps += ((self.0 as u32) >> (h.0 + 1)).count_ones();
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((sign, Word(self.0 | other.0)))
    }

    /// Sort an arbitrary generator sequence, returning the sign of the sorting
    /// permutation, or `None` on repetition.
    pub fn from_sequence(gens: &[Gen]) -> Option<(i64, Word)> {
        let mut sign = 1;
        let mut w = Word::EMPTY;
        for g in gens {
            let (s, nw) = w.wedge(Word(1 << g.0))?;
            sign *= s;
            w = nw;
        }
        Some((sign, w))
    }
}

//! Hodge star of `g̃` on the unitary coframe, from the explicit table of values
//! on basic wedge products.

use std::collections::BTreeMap;

use crate::coeff::Coeff;
use crate::expr::{FormError, FormExpr, Scalar};
use crate::generator::{Gen, Word};

fn t(i: u8) -> Gen {
    Gen::theta(i, false)
}

fn tb(i: u8) -> Gen {
    Gen::theta(i, true)
}

/// One table row as written: `*(gens) = sign · (rhs)`, both sides unsorted.
#[derive(Clone, Debug)]
pub struct StarRow {
    pub lhs: Vec<Gen>,
    pub sign: i64,
    pub rhs: Vec<Gen>,
}

fn row(lhs: Vec<Gen>, sign: i64, rhs: Vec<Gen>) -> StarRow {
    StarRow { lhs, sign, rhs }
}

/// The table rows expanded over `i, j ∈ {1, 2}` with `î = 3 − i`, plus the
/// value `*1 = −θ̃¹∧θ̄¹∧θ̃²∧θ̄²` forced by `** = 1` on top-degree forms.
pub fn table_rows() -> Vec<StarRow> {
    let mut rows = vec![row(vec![], -1, vec![t(1), tb(1), t(2), tb(2)])];
    for i in 1..=2u8 {
        let h = 3 - i;
        rows.push(row(vec![t(i), tb(i), t(h), tb(h)], -1, vec![]));
        rows.push(row(vec![t(i)], 1, vec![t(i), t(h), tb(h)]));
        rows.push(row(vec![tb(i)], -1, vec![tb(i), t(h), tb(h)]));
        rows.push(row(vec![t(i), t(h), tb(h)], -1, vec![t(i)]));
        rows.push(row(vec![t(i), t(h), tb(i)], 1, vec![t(h)]));
        rows.push(row(vec![t(h), tb(h), tb(i)], 1, vec![tb(i)]));
        rows.push(row(vec![t(i), tb(h), tb(i)], -1, vec![tb(h)]));
        for j in 1..=2u8 {
            if i != j {
                rows.push(row(vec![t(i), t(j)], 1, vec![t(i), t(j)]));
                rows.push(row(vec![tb(i), tb(j)], 1, vec![tb(i), tb(j)]));
                rows.push(row(vec![t(i), tb(j)], -1, vec![t(i), tb(j)]));
            } else {
                rows.push(row(vec![t(i), tb(i)], 1, vec![t(h), tb(h)]));
            }
        }
    }
    rows
}

/// Values of the star on the sorted basis words.
#[derive(Clone, Debug)]
pub struct StarTable {
    map: BTreeMap<Word, (Coeff, Word)>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TableError {
    #[error("rows disagree on the value of *({0})")]
    Conflict(String),
    #[error("no row determines *({0})")]
    Missing(String),
}

fn word_text(w: Word) -> String {
    if w == Word::EMPTY {
        return "1".into();
    }
    w.gens().map(|g| g.to_string()).collect::<Vec<_>>().join(" ^ ")
}

impl StarTable {
    /// Sort every row and check that rows agree and cover all 16 basis words.
    pub fn build(rows: &[StarRow]) -> Result<StarTable, TableError> {
        let mut map = BTreeMap::new();
        for r in rows {
            let (sl, wl) = Word::from_sequence(&r.lhs).expect("table rows have distinct generators");
            let (sr, wr) = Word::from_sequence(&r.rhs).expect("table rows have distinct generators");
            let value = (Coeff::int(sl * sr * r.sign), wr);
            if let Some(prev) = map.insert(wl, value) {
                if prev != value {
                    return Err(TableError::Conflict(word_text(wl)));
                }
            }
        }
        for m in 0u8..16 {
            if !map.contains_key(&Word(m)) {
                return Err(TableError::Missing(word_text(Word(m))));
            }
        }
        Ok(StarTable { map })
    }

    pub fn standard() -> StarTable {
        StarTable::build(&table_rows()).expect("the star table is consistent")
    }

    pub fn basis() -> impl Iterator<Item = Word> {
        (0u8..16).map(Word)
    }

    pub fn get(&self, w: Word) -> (Coeff, Word) {
        self.map[&w]
    }

    pub fn apply(&self, e: &FormExpr) -> Result<FormExpr, FormError> {
        if e.has_connection() {
            return Err(FormError::ConnectionForm("hodge_star"));
        }
        Ok(FormExpr::from_terms(e.terms().map(|(s, w, c)| {
            let (k, v) = self.get(w);
            (s.clone(), v, c * k)
        })))
    }
}

/// `*` applied monomial-wise with the standard table.
pub fn hodge_star(e: &FormExpr) -> Result<FormExpr, FormError> {
    StarTable::standard().apply(e)
}

/// The basis word as a form.
pub fn basis_form(w: Word) -> FormExpr {
    FormExpr::from_terms([(Scalar::one(), w, Coeff::one())])
}

/// `−θ̃¹∧θ̄¹∧θ̃²∧θ̄² = ω̃²/2`. The table basis is orthonormal for
/// `β∧conj(*γ) = g̃(β,γ)·vol`.
pub fn volume() -> FormExpr {
    let (sign, w) = Word::from_sequence(&[t(1), tb(1), t(2), tb(2)]).unwrap();
    basis_form(w).scale(Coeff::int(-sign))
}

/// `ω̃ = √−1 Σ θ̃^i∧θ̄^i`.
pub fn omega_tilde() -> FormExpr {
    FormExpr::sum(&[1u8, 2].map(|i| {
        FormExpr::theta(i, false)
            .wedge(&FormExpr::theta(i, true))
            .scale(Coeff::i())
    }))
}

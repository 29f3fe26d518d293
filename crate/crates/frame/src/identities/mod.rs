//! Registry of frame identities, each reduced to an exact zero normal form.
//!
//! A case runs its derivation through a [`Derivation`] recorder, which logs the
//! operations performed, the axioms and previously established relations
//! consumed, and every checked equation. A case passes iff it completes and
//! every checked difference normalizes to zero.

mod axioms;
mod cases_forms;
mod cases_hodge;
pub mod ops;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::deriv::DerivationContext;
use crate::expr::{FormError, FormExpr};
use crate::rewrite::RuleSet;

pub use axioms::{AXIOM_TAGS, MUTATION_TAGS};
pub use cases_forms::glz_literal_residual;
pub use cases_hodge::hodgechain_literal_residual;

/// A perturbation of the axioms or rewrites, used to check that the
/// verification actually depends on them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mutation {
    /// flip the sign of the curvature-torsion term in AX-216
    Ax216SignFlip,
    /// skip the rewrite `λ₁λ₂ ↦ e^F` in the reduction of the `Ñ·conj(Ñ)` term
    CyRewriteOff,
}

impl Mutation {
    pub fn tag(self) -> &'static str {
        match self {
            Mutation::Ax216SignFlip => "AX-216-signflip",
            Mutation::CyRewriteOff => "CY-REWRITE-off",
        }
    }

    pub fn from_tag(s: &str) -> Option<Mutation> {
        [Mutation::Ax216SignFlip, Mutation::CyRewriteOff]
            .into_iter()
            .find(|m| m.tag() == s)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum IdentityError {
    #[error("unknown identity `{0}`")]
    UnknownId(String),
}

/// Recorder handed to a case while it runs.
pub struct Derivation {
    pub ctx: DerivationContext,
    mutations: BTreeSet<Mutation>,
    declared_axioms: &'static [&'static str],
    declared_relations: &'static [&'static str],
    steps: Vec<String>,
    axioms: Vec<String>,
    relations: Vec<String>,
    checks: Vec<(String, FormExpr)>,
}

impl Derivation {
    fn new(case: &IdentityCase, mutations: &BTreeSet<Mutation>) -> Self {
        Derivation {
            ctx: DerivationContext::default(),
            mutations: mutations.clone(),
            declared_axioms: case.axioms,
            declared_relations: case.relations,
            steps: Vec::new(),
            axioms: Vec::new(),
            relations: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn step(&mut self, what: impl Into<String>) {
        self.steps.push(what.into());
    }

    pub fn mutated(&self, m: Mutation) -> bool {
        self.mutations.contains(&m)
    }

    /// Fetch an imported axiom as rewrite rules, recording the use.
    pub fn axiom(&mut self, tag: &str) -> RuleSet {
        assert!(
            self.declared_axioms.contains(&tag),
            "axiom {tag} used without being declared by the case"
        );
        self.axioms.push(tag.to_string());
        self.step(format!("apply {tag}"));
        axioms::axiom_rules(tag, &self.mutations)
    }

    /// Fetch a relation established by another case, recording the use.
    pub fn relation(&mut self, id: &str) -> Result<RuleSet, FormError> {
        assert!(
            self.declared_relations.contains(&id),
            "relation {id} used without being declared by the case"
        );
        self.relations.push(id.to_string());
        self.step(format!("rewrite with {id}"));
        axioms::relation_rules(id, self.ctx)
    }

    /// Record that the conclusion of another case is used as an equation.
    pub fn cite(&mut self, id: &str) {
        assert!(
            self.declared_relations.contains(&id),
            "relation {id} cited without being declared by the case"
        );
        self.relations.push(id.to_string());
        self.step(format!("use {id}"));
    }

    /// Record the equation `lhs = rhs`.
    pub fn check(&mut self, label: impl Into<String>, lhs: &FormExpr, rhs: &FormExpr) {
        let label = label.into();
        self.step(format!("check {label}"));
        self.checks.push((label, lhs.sub(rhs)));
    }
}

type Recipe = fn(&mut Derivation) -> Result<(), FormError>;

#[derive(Clone)]
pub struct IdentityCase {
    pub id: &'static str,
    pub title: &'static str,
    pub axioms: &'static [&'static str],
    /// other cases whose conclusions this derivation consumes
    pub relations: &'static [&'static str],
    recipe: Recipe,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerificationResult {
    pub id: String,
    pub pass: bool,
    pub steps: Vec<String>,
    pub axioms_used: Vec<String>,
    pub relations_used: Vec<String>,
    /// nonzero residuals as `label: expr` lines; empty on a pass
    pub residual_text: String,
    pub error: Option<String>,
    #[serde(skip)]
    pub residuals: Vec<(String, FormExpr)>,
}

impl IdentityCase {
    pub fn verify(&self, mutations: &BTreeSet<Mutation>) -> VerificationResult {
        let mut d = Derivation::new(self, mutations);
        let outcome = (self.recipe)(&mut d);
        let residuals: Vec<(String, FormExpr)> =
            d.checks.into_iter().filter(|(_, r)| !r.is_zero()).collect();
        let error = match (&outcome, d.steps.iter().any(|s| s.starts_with("check "))) {
            (Err(e), _) => Some(e.to_string()),
            (Ok(()), false) => Some("derivation checked no equation".into()),
            _ => None,
        };
        let residual_text = residuals
            .iter()
            .map(|(l, r)| format!("{l}: {r}\n"))
            .collect::<String>();
        VerificationResult {
            id: self.id.to_string(),
            pass: error.is_none() && residuals.is_empty(),
            steps: d.steps,
            axioms_used: d.axioms,
            relations_used: d.relations,
            residual_text,
            error,
            residuals,
        }
    }
}

/// Immutable collection of cases.
#[derive(Clone)]
pub struct Registry {
    cases: Vec<IdentityCase>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Summary {
    pub mutations: Vec<String>,
    pub passed: usize,
    pub failed: usize,
    pub axiom_usage: BTreeMap<String, usize>,
    pub cases: Vec<VerificationResult>,
}

impl Summary {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

impl Registry {
    pub fn standard() -> Self {
        let mut cases = cases_forms::cases();
        cases.extend(cases_hodge::cases());
        Registry { cases }
    }

    pub fn empty() -> Self {
        Registry { cases: Vec::new() }
    }

    pub fn list(&self) -> Vec<&'static str> {
        self.cases.iter().map(|c| c.id).collect()
    }

    pub fn get(&self, id: &str) -> Result<&IdentityCase, IdentityError> {
        self.cases
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| IdentityError::UnknownId(id.to_string()))
    }

    pub fn verify(&self, id: &str, mutations: &BTreeSet<Mutation>) -> Result<VerificationResult, IdentityError> {
        Ok(self.get(id)?.verify(mutations))
    }

    /// Verify every case in parallel; results keep registry order.
    pub fn verify_all(&self, mutations: &BTreeSet<Mutation>) -> Summary {
        let cases: Vec<VerificationResult> = self.cases.par_iter().map(|c| c.verify(mutations)).collect();
        let mut axiom_usage = BTreeMap::new();
        for r in &cases {
            for a in &r.axioms_used {
                *axiom_usage.entry(a.clone()).or_insert(0) += 1;
            }
        }
        let passed = cases.iter().filter(|r| r.pass).count();
        Summary {
            mutations: mutations.iter().map(|m| m.tag().to_string()).collect(),
            passed,
            failed: cases.len() - passed,
            axiom_usage,
            cases,
        }
    }
}

/// Convenience: list of registered ids.
pub fn list_identities() -> Vec<&'static str> {
    Registry::standard().list()
}

/// Convenience: verify one case of the standard registry without mutations.
pub fn verify_identity(id: &str) -> Result<VerificationResult, IdentityError> {
    Registry::standard().verify(id, &BTreeSet::new())
}

//! Exact exterior algebra over a local unitary coframe in complex dimension 2,
//! and a registry of identities verified with it.

pub mod coeff;
pub mod deriv;
pub mod eigen;
pub mod expr;
pub mod generator;
pub mod identities;
pub mod rewrite;
pub mod star;
pub mod symbol;

pub use coeff::Coeff;
pub use deriv::DerivationContext;
pub use expr::{FormError, FormExpr, Scalar, WedgeMonomial};
pub use generator::{Gen, Word};
pub use symbol::{Family, Idx, IndexSymbol};
pub use identities::{list_identities, verify_identity, Mutation, Registry, Summary, VerificationResult};

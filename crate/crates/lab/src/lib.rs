//! Numerical laboratory on flat tori: spectral calculus, a Monge–Ampère
//! solver for the Kähler reduction of the Calabi–Yau equation, and pointwise
//! checks of the estimate's identities and inequalities.

pub mod background;
pub mod grid;
pub mod krylov;
pub mod ma;
pub mod metric;
pub mod monitor;
pub mod report;
pub mod snapshot;
pub mod spectral;

pub use background::{integrate, make_background, BackgroundGeometry, Family, FamilyKind, Weight};
pub use grid::{ComplexField, Grid, GridError, ScalarField};
pub use ma::{newton_solve, OneFormField, PotentialField, SolveError, SolverConfig, SolverTrace};
pub use metric::MetricField;
pub use report::{run_case, sweep, EstimateReport, ReportRow, RunSpec, Thresholds};
pub use spectral::{Dir, Spectral};

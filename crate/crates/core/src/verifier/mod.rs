//! Scenario loading, the identity registry, batch evaluation and reports.

pub mod fixtures;
pub mod registry;
pub mod report;
pub mod run;
pub mod scenario;

pub use fixtures::{fixture, FIXTURES};
pub use registry::{GateDef, IdentityDef, Probe, GATES, IDENTITIES};
pub use report::{Report, Status};
pub use run::{run_checks, RunConfig, RunError, THREADS_ENV};
pub use scenario::{canonical_id, load_scenario, Scenario, ScenarioError};

#[cfg(test)]
mod tests;

//! Manifest-driven check runner behind the `hochkit` binary.

pub mod job;
pub mod manifest;
pub mod run;
pub mod suite;

pub use manifest::{CaseSpec, Check, InputError, Manifest};
pub use run::{run_manifest, Report, RunOpts, Verdict};

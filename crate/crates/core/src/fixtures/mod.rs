//! Run configuration files, report serialization and stored fixture data.

pub mod config;
pub mod fixture_set;
pub mod report;

pub use config::{load_config, RunConfig};
pub use fixture_set::{FixtureEntry, FixtureSet, FnOracle, Oracle, OracleRegistry, Provenance, Regeneration};
pub use report::{format_scalar, parse_trailer, serialize_report, Report, Trailer};

//! File-level driver for the kernels: checking, translating, synthesizing
//! and the corpus runner behind the `predicheck` binary.

pub mod check;
pub mod corpus;
pub mod error;
pub mod options;
pub mod report;
pub mod synth;
pub mod translate;

pub use error::CliError;
pub use options::Options;
pub use report::RunReport;

//! Kernels for Heyting arithmetic in all finite types, a four-sort dependent
//! type checker, and the syntactic translations between them.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, reporting and the
//! command-line driver live in the `predicheck` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod aca;
pub mod derivations;
pub mod dtt;
pub mod hao;
pub mod logic;
pub mod names;
pub mod report;
pub mod sexp;
pub mod syntax;
pub mod translate;

/// Default reduction budget shared by every kernel.
pub const DEFAULT_FUEL: u64 = 1_000_000;

pub use sexp::Span;

//! Synthesized derivations: comprehension from unique choice, and the
//! choice principles as dependent-type terms.

pub mod ca;
pub mod choice;

pub use ca::{build_chi, ca_theory, derive_ca, CaError, CaInstance};
pub use choice::{ac_bang_term, ac_bang_trunc_term, ac_term};

//! Many-sorted intuitionistic natural deduction over HA^ω terms.

pub mod formula;
pub mod proof;
pub mod theory;

pub use formula::{expand_exists_unique, match_exists_unique, Formula};
pub use proof::{
    check_proof, choice_conclusion, infer_conclusion, AxiomInst, AxiomProfile, LemmaEnv, Principle, Proof,
    ProofDiagnostic, ProofEnv, ProofErrorKind,
};

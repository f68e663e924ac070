//! Syntactic translations between the systems.

pub mod emtt;
pub mod fol;
pub mod mltt;
pub mod transport;
pub mod trunc;

pub use emtt::{aca_to_emtt, formula_to_emtt};
pub use fol::{formula_to_fol, print_fol, FolFormula, FolTerm};
pub use mltt::{formula_to_mltt, term_to_mltt, type_to_mltt};
pub use transport::{theory_to_mltt, transport_context, transport_proof, TransportError};
pub use trunc::formula_to_trunc;

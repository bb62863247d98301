//! Finite semisymmetric quasigroups and their modules.
//!
//! The crate covers quasigroup tables and their identities ([`qg`]),
//! Mendelsohn triple systems ([`mts`]), semisymmetrization ([`semisym`]),
//! free group and quasigroup words ([`words`]), Schreier bases of the
//! universal stabilizer ([`stabilizer`]), group rings and word
//! differentiation ([`diffring`]), and matrix modules with the quasigroup
//! extensions they define ([`modext`]).

pub mod diffring;
pub mod modext;
pub mod mts;
pub mod qg;
pub mod semisym;
pub mod stabilizer;
pub mod words;

pub use diffring::{GroupRingElement, IdentityPair};
pub use modext::{Extension, ModMatrix, ModuleAssignment};
pub use mts::MendelsohnTripleSystem;
pub use qg::{FiniteQuasigroup, Permutation, PermutationGroup};
pub use stabilizer::StabilizerBasis;
pub use words::{FreeGroupWord, Letter, Normalizer, Term, Variety};

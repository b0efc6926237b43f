//! Unordered Bratteli diagrams and telescope equivalence.
//!
//! Matrices handed to this module are incidence matrices: entry `(i, j)`
//! counts edges from vertex `i` on one level to vertex `j` on the next, and
//! labels are column sums. A substitution with letter-count matrix `M`
//! therefore enters as `Mᵀ`; [`BratteliDiagram::from_substitution`] does
//! the transpose.

mod analyze;
mod certificate;
mod diagram;
mod iso;
mod split;
mod supernatural;

pub use analyze::{
    analyze_equivalence, distinguish, verify_invertible_witness, witness_chain, Budget,
    Distinction, InvertibleWitness, UnorderedCertificate, UnorderedVerdict,
};
pub use certificate::{Certificate, ChainElement, ChainLink, Via};
pub use diagram::BratteliDiagram;
pub use iso::isomorphic_stationary;
pub use split::{enlarge, state_split, Construction};
pub use supernatural::{rank_one_factors, supernatural, Exponent, SupernaturalNumber};

//! Ordered Bratteli diagrams: the order on incoming edges comes from the
//! letter positions in substitution images.
//!
//! Equivalence certificates reuse [`crate::bratteli::Certificate`] with
//! rectangular substitutions as level maps, so every identity is checked
//! letter by letter.

mod diagram;
mod paths;
mod search;
mod taf;

pub use diagram::OrderedDiagram;
pub use paths::{
    bounded_extreme_count, max_min_disjoint, maximal_path, minimal_path, path_counts, vershik_successor,
    BoundedCount, FinitePath, PathCounts,
};
pub(crate) use search::{accept, filtered_link, ordered_battery, LinkFilter};
pub use search::{analyze_ordered_equivalence, direct_link, OrderedBudget, OrderedCertificate, OrderedVerdict};
pub use taf::taf_description;

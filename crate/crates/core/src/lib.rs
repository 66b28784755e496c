//! Randomized ternary search tries.
//!
//! An [`RTrie`] stores a set of byte strings in a ternary search trie whose
//! binary search trees are kept balanced treap-style: every string draws a
//! random priority, every node carries the highest priority of the strings
//! below its prefix, and left/right links are heap-ordered. Searches,
//! inserts and deletes of a length-`k` string in a trie of `n` strings cost
//! `O(k + log n)` with high probability.
//!
//! ```
//! use rtrie::RTrie;
//!
//! let mut t = RTrie::seeded(42);
//! for s in ["AMY", "ANN", "ANNA", "BOB"] {
//!     t.insert(s).unwrap();
//! }
//! assert!(t.contains("ANN").unwrap());
//! assert!(!t.contains("AN").unwrap());
//! let an: Vec<_> = t.prefix_iter("AN").collect();
//! assert_eq!(an, vec![b"ANN".to_vec(), b"ANNA".to_vec()]);
//! assert!(t.check_invariants().is_ok());
//! ```
//!
//! The [`oracle`] module holds unbalanced reference structures used to
//! check shapes and search-path bounds, and [`stats`] generates workloads
//! and measures depth profiles.

pub mod cli;
mod error;
pub mod oracle;
pub mod priority;
pub mod shape;
pub mod stats;
pub mod trie;

pub use error::{Error, Result};
pub use priority::{FixedPriorities, PrioritySource, SeededPriorities, DEFAULT_CEILING};
pub use shape::{shapes_equal, Link, ShapeDigest, TernaryShape};
pub use trie::{
    DeleteOutcome, InsertOutcome, InvariantReport, NodeId, NodeRef, PathStats, PrefixIter, RTrie,
    RawNode, Violation, ViolationKind,
};

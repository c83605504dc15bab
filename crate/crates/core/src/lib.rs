//! Graph reconstruction from small-subgraph multisets via stable anchors.
//!
//! The library provides:
//!
//! * [`graph`]: bitset-backed simple graphs, vertex subsets, seeded G(n, 1/2)
//!   generation and graph6 serialization;
//! * [`iso`]: canonical forms, automorphisms, induced-embedding search and
//!   induced-copy counting;
//! * [`anchor`]: shadows, anchor testing and randomized stable-anchor search;
//! * [`recon`]: 2-adjacent bundles with unique reconstruction, subgraph decks,
//!   generalized Kelly counting and deck-based isomorphism decisions;
//! * [`experiments`]: seeded Monte Carlo estimators, closed-form probability
//!   evaluators and report emission for the CLI.
//!
//! The `parallel` feature (on by default) runs deck enumeration and
//! experiment trials on a rayon pool; results are identical either way
//! because all per-trial randomness is derived from a master seed.

pub mod anchor;
mod combin;
pub mod experiments;
pub mod graph;
pub mod graph6;
pub mod iso;
mod perm;
pub mod recon;
pub mod seeding;
pub mod textio;

pub use graph::{Graph, GraphError, VertexSet};
pub use iso::CanonicalKey;
pub use perm::Permutation;

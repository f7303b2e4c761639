//! Bilingual synonym set extraction from flat translation dictionaries.
//!
//! A dictionary of `(l1, l2)` translation pairs becomes a bipartite
//! translation graph; elementary cycles up to a bounded length are
//! enumerated; the words on each cycle form a candidate synonym set; and
//! overlapping candidates are consolidated into final bilingual synsets.
//! Words a cycle never reaches can fall back to trivial one-pair synsets.
//!
//! The [`eval`] module scores extracted synsets against a gold synset
//! inventory with max-cosine precision/recall/F-measure, and can rebuild a
//! gold inventory from its own flattened pairs to measure how much of it
//! the extraction recovers.
//!
//! The whole pipeline is deterministic: same input and configuration, same
//! bytes out, regardless of thread count.

pub mod cycle;
pub mod error;
pub mod eval;
pub mod graph;
pub mod lexicon;
pub mod pipeline;
pub mod synset;

pub use error::{Error, Result};

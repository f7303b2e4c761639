//! The bipartite translation graph.
//!
//! Each distinct word is a node; each translation pair contributes one
//! symmetric edge between its two words. Node indices are assigned in
//! `(lang, surface)` order, so the graph layout is a pure function of the
//! pair set.

use crate::error::{Error, Result};
use crate::lexicon::{LanguageLabels, LanguageTag, PairSet, Word};

/// Index of a node in a [`TranslationGraph`].
pub type NodeId = u32;

#[derive(Debug, Clone)]
pub struct TranslationGraph {
    words: Vec<Word>,
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

/// Builds the translation graph for a non-empty pair set.
///
/// Every edge connects an L1 node to an L2 node; the neighbor relation is
/// mutual; there are no self-loops or parallel edges.
pub fn build_graph(pairs: &PairSet) -> Result<TranslationGraph> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let words: Vec<Word> = pairs
        .iter()
        .flat_map(|p| [p.source().clone(), p.target().clone()])
        .collect::<std::collections::BTreeSet<Word>>()
        .into_iter()
        .collect();
    let index = |word: &Word| -> NodeId {
        words.binary_search(word).expect("word is in the node set") as NodeId
    };
    let mut adjacency = vec![Vec::new(); words.len()];
    for pair in pairs {
        let a = index(pair.source());
        let e = index(pair.target());
        adjacency[a as usize].push(e);
        adjacency[e as usize].push(a);
    }
    for neighbors in &mut adjacency {
        neighbors.sort_unstable();
    }
    Ok(TranslationGraph {
        words,
        adjacency,
        edge_count: pairs.len(),
    })
}

impl TranslationGraph {
    pub fn node_count(&self) -> usize {
        self.words.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn word(&self, node: NodeId) -> &Word {
        &self.words[node as usize]
    }

    pub fn lang(&self, node: NodeId) -> LanguageTag {
        self.words[node as usize].lang()
    }

    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node as usize]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node as usize].len()
    }

    pub fn node_id(&self, word: &Word) -> Option<NodeId> {
        self.words.binary_search(word).ok().map(|i| i as NodeId)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        0..self.words.len() as NodeId
    }

    /// Text edge list (`lang:word<TAB>lang:word` per line, sorted), for
    /// diffing graph builds.
    pub fn dump_edges(&self, labels: &LanguageLabels) -> String {
        let mut lines: Vec<String> = Vec::with_capacity(self.edge_count);
        for node in self.node_ids() {
            for &neighbor in self.neighbors(node) {
                if neighbor > node {
                    lines.push(format!(
                        "{}:{}\t{}:{}",
                        labels.label(self.lang(node)),
                        self.word(node).surface(),
                        labels.label(self.lang(neighbor)),
                        self.word(neighbor).surface(),
                    ));
                }
            }
        }
        lines.sort_unstable();
        let mut out = lines.join("\n");
        if !out.is_empty() {
            out.push('\n');
        }
        out
    }
}

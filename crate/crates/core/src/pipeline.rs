//! End-to-end extraction: pairs -> graph -> cycles -> candidates ->
//! consolidated synsets -> trivial-pair fallback. Shared by the CLI and the
//! reconstruction experiment so the two always agree.

use serde::Serialize;

use crate::cycle::{enumerate_cycles, Cycle};
use crate::error::Result;
use crate::graph::{build_graph, TranslationGraph};
use crate::lexicon::PairSet;
use crate::synset::{
    consolidate, cycles_to_candidates, emit_trivial_pairs, sort_synsets, BilingualSynset,
    ConsolidationPolicy,
};

/// Extraction parameters. Defaults: `k_max = 6`, consolidation on,
/// shared-word-each-side policy, trivial pairs off.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionConfig {
    pub k_max: usize,
    pub consolidate: bool,
    pub policy: ConsolidationPolicy,
    pub trivial_pairs: bool,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            k_max: 6,
            consolidate: true,
            policy: ConsolidationPolicy::default(),
            trivial_pairs: false,
        }
    }
}

/// Counts from one extraction run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PipelineStats {
    pub pair_count: usize,
    pub node_count: usize,
    pub edge_count: usize,
    pub cycle_count: usize,
    pub candidate_count: usize,
    pub consolidated_count: usize,
    pub trivial_count: usize,
    pub final_count: usize,
}

/// Everything an extraction run produces.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub synsets: Vec<BilingualSynset>,
    pub cycles: Vec<Cycle>,
    pub graph: TranslationGraph,
    pub stats: PipelineStats,
}

/// Runs the full extraction pipeline over a pair set.
///
/// An input with no cycles is not an error: the output is trivial pairs
/// only, or empty when the fallback is off.
pub fn extract(pairs: &PairSet, config: &ExtractionConfig) -> Result<Extraction> {
    let graph = build_graph(pairs)?;
    let cycles = enumerate_cycles(&graph, config.k_max)?;
    let candidates = cycles_to_candidates(&cycles, &graph);
    let candidate_count = candidates.len();
    let mut synsets = if config.consolidate {
        consolidate(candidates, &config.policy, pairs)?
    } else {
        candidates
    };
    let consolidated_count = synsets.len();
    let mut trivial_count = 0;
    if config.trivial_pairs {
        let trivial = emit_trivial_pairs(pairs, &synsets);
        trivial_count = trivial.len();
        synsets.extend(trivial);
    }
    sort_synsets(&mut synsets);
    let stats = PipelineStats {
        pair_count: pairs.len(),
        node_count: graph.node_count(),
        edge_count: graph.edge_count(),
        cycle_count: cycles.len(),
        candidate_count,
        consolidated_count,
        trivial_count,
        final_count: synsets.len(),
    };
    Ok(Extraction {
        synsets,
        cycles,
        graph,
        stats,
    })
}

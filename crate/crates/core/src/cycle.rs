//! Bounded elementary cycle enumeration over the translation graph.
//!
//! The searcher follows the per-root scheme of Johnson's elementary-circuit
//! algorithm: roots are processed in node order and a search rooted at `r`
//! only visits nodes greater than `r`, so each undirected cycle is found
//! exactly once, rooted at its smallest node. At the small depth bounds used
//! here, Johnson's blocked-set bookkeeping costs more than it saves, so path
//! expansion is a plain depth-bounded DFS with an on-path visited set.
//! Expansion of a partial path stops when the root is re-found (a cycle, if
//! at least four nodes long), when the frontier node has no admissible
//! neighbors left, or when the depth bound is hit.
//!
//! [`enumerate_cycles_bruteforce`] is an independent oracle over all simple
//! paths, for small graphs only.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, TranslationGraph};

/// Minimum number of nodes on a cycle. A two-node closed walk `a -> e -> a`
/// is just the pair itself and is never a cycle.
pub const MIN_CYCLE_LEN: usize = 4;

/// Maximum node count accepted by the brute-force oracle.
pub const BRUTE_FORCE_NODE_LIMIT: usize = 16;

/// An elementary cycle in canonical form.
///
/// The node sequence lists each node once; the edge back from the last node
/// to the first is implicit. Canonical form rotates the smallest node to the
/// front and orients the cycle so its smaller neighbor comes second, which
/// quotients away rotations and reflections.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    nodes: Vec<NodeId>,
}

impl Cycle {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Rewrites a cycle's node sequence into canonical form.
pub(crate) fn canonical_rotation(raw: &[NodeId]) -> Vec<NodeId> {
    let n = raw.len();
    let min_pos = (0..n).min_by_key(|&i| raw[i]).expect("cycle is non-empty");
    let forward_second = raw[(min_pos + 1) % n];
    let backward_second = raw[(min_pos + n - 1) % n];
    let mut out = Vec::with_capacity(n);
    if forward_second <= backward_second {
        out.extend((0..n).map(|i| raw[(min_pos + i) % n]));
    } else {
        out.extend((0..n).map(|i| raw[(min_pos + n - i) % n]));
    }
    out
}

fn validate_bound(k_max: usize) -> Result<()> {
    if k_max < MIN_CYCLE_LEN || !k_max.is_multiple_of(2) {
        return Err(Error::InvalidBound { k_max });
    }
    Ok(())
}

/// Nodes that survive iterated removal of degree-<2 nodes. Every cycle lies
/// entirely inside this core.
fn two_core(graph: &TranslationGraph) -> Vec<bool> {
    let n = graph.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v as NodeId)).collect();
    let mut in_core = vec![true; n];
    let mut pending: Vec<usize> = (0..n).filter(|&v| degree[v] < 2).collect();
    while let Some(v) = pending.pop() {
        if !in_core[v] || degree[v] >= 2 {
            continue;
        }
        in_core[v] = false;
        for &w in graph.neighbors(v as NodeId) {
            let w = w as usize;
            if in_core[w] {
                degree[w] -= 1;
                if degree[w] < 2 {
                    pending.push(w);
                }
            }
        }
    }
    in_core
}

/// Distance from `root` to every admissible node (`>= root`, in the core),
/// capped at `limit` edges. Used to prune paths that cannot return to the
/// root within the remaining budget.
fn distances_to_root(
    graph: &TranslationGraph,
    in_core: &[bool],
    root: NodeId,
    limit: usize,
) -> Vec<u32> {
    let n = graph.node_count();
    let mut dist = vec![u32::MAX; n];
    dist[root as usize] = 0;
    let mut frontier = vec![root];
    let mut depth = 0u32;
    while !frontier.is_empty() && (depth as usize) < limit {
        depth += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in graph.neighbors(v) {
                if w > root && in_core[w as usize] && dist[w as usize] == u32::MAX {
                    dist[w as usize] = depth;
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    dist
}

fn search_root(
    graph: &TranslationGraph,
    in_core: &[bool],
    root: NodeId,
    k_max: usize,
) -> Vec<Cycle> {
    let n = graph.node_count();
    let dist = distances_to_root(graph, in_core, root, k_max - 1);
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    on_path[root as usize] = true;
    let mut path: Vec<NodeId> = vec![root];
    // frames[d] = index of the next neighbor of path[d] to try.
    let mut frames: Vec<usize> = vec![0];
    while !frames.is_empty() {
        let depth = frames.len() - 1;
        let v = path[depth];
        let neighbors = graph.neighbors(v);
        let next = frames[depth];
        if next >= neighbors.len() {
            frames.pop();
            on_path[path.pop().expect("path tracks frames") as usize] = false;
            continue;
        }
        frames[depth] += 1;
        let w = neighbors[next];
        let len = path.len();
        if w == root {
            // Root re-found: a cycle, if long enough. Emitting only the
            // orientation whose second node is the smaller of the root's two
            // cycle neighbors kills the mirror duplicate.
            if len >= MIN_CYCLE_LEN && path[1] < path[len - 1] {
                debug_assert_eq!(len % 2, 0);
                out.push(Cycle {
                    nodes: path.clone(),
                });
            }
            continue;
        }
        if w < root || !in_core[w as usize] || on_path[w as usize] {
            continue;
        }
        if len >= k_max {
            continue; // depth bound reached
        }
        let return_budget = (k_max - len) as u32;
        if dist[w as usize] > return_budget {
            continue; // cannot close a cycle within the bound
        }
        on_path[w as usize] = true;
        path.push(w);
        frames.push(0);
    }
    out
}

/// Enumerates every elementary cycle of 4..=`k_max` nodes, each exactly once
/// in canonical form, sorted. `k_max` counts nodes on the cycle and must be
/// even: bilingual cycles alternate languages, so odd bounds admit nothing
/// more than the next lower even bound.
pub fn enumerate_cycles(graph: &TranslationGraph, k_max: usize) -> Result<Vec<Cycle>> {
    validate_bound(k_max)?;
    let in_core = two_core(graph);
    let roots: Vec<NodeId> = graph.node_ids().filter(|&v| in_core[v as usize]).collect();
    let per_root: Vec<Vec<Cycle>> = roots
        .par_iter()
        .map(|&root| search_root(graph, &in_core, root, k_max))
        .collect();
    let mut cycles: Vec<Cycle> = per_root.into_iter().flatten().collect();
    cycles.sort_unstable();
    debug_assert!(cycles.windows(2).all(|w| w[0] < w[1]));
    Ok(cycles)
}

/// Brute-force oracle with the same contract as [`enumerate_cycles`]:
/// exhaustive DFS over all simple paths from every start node, deduplicated
/// by canonical form. Rejects graphs with more than 16 nodes.
pub fn enumerate_cycles_bruteforce(graph: &TranslationGraph, k_max: usize) -> Result<Vec<Cycle>> {
    validate_bound(k_max)?;
    if graph.node_count() > BRUTE_FORCE_NODE_LIMIT {
        return Err(Error::GraphTooLarge {
            nodes: graph.node_count(),
        });
    }
    let mut found = std::collections::BTreeSet::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; graph.node_count()];
    for start in graph.node_ids() {
        path.push(start);
        on_path[start as usize] = true;
        brute_extend(graph, k_max, &mut path, &mut on_path, &mut found);
        on_path[start as usize] = false;
        path.pop();
    }
    Ok(found.into_iter().collect())
}

/// Text dump of cycles, one per line, in list order: nodes rendered as
/// `lang:word` joined by ` -> `.
pub fn dump_cycles(
    cycles: &[Cycle],
    graph: &TranslationGraph,
    labels: &crate::lexicon::LanguageLabels,
) -> String {
    let mut out = String::new();
    for cycle in cycles {
        let line: Vec<String> = cycle
            .nodes()
            .iter()
            .map(|&n| format!("{}:{}", labels.label(graph.lang(n)), graph.word(n).surface()))
            .collect();
        out.push_str(&line.join(" -> "));
        out.push('\n');
    }
    out
}

fn brute_extend(
    graph: &TranslationGraph,
    k_max: usize,
    path: &mut Vec<NodeId>,
    on_path: &mut [bool],
    found: &mut std::collections::BTreeSet<Cycle>,
) {
    let v = *path.last().expect("path is non-empty");
    for &w in graph.neighbors(v) {
        if w == path[0] && path.len() >= MIN_CYCLE_LEN {
            found.insert(Cycle {
                nodes: canonical_rotation(path),
            });
        }
        if !on_path[w as usize] && path.len() < k_max {
            path.push(w);
            on_path[w as usize] = true;
            brute_extend(graph, k_max, path, on_path, found);
            on_path[w as usize] = false;
            path.pop();
        }
    }
}

//! From cycles to bilingual synsets.
//!
//! Every cycle yields one candidate synset (its nodes partitioned by
//! language). Candidates overlap heavily — a K2,2 block inside a larger
//! synset appears as its own cycle — so overlapping candidates are
//! consolidated into final synsets. The merge predicate is what keeps
//! consolidation from chaining across word senses: the default policy
//! requires a shared word on *each* side, so two candidates linked only
//! through a single polysemous word stay apart.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cycle::Cycle;
use crate::error::{Error, Result};
use crate::graph::TranslationGraph;
use crate::lexicon::{LanguageTag, PairSet, Word};

/// Where a synset came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    /// Derived from one or more cycles, identified by their index in the
    /// enumeration output of the producing run.
    Cycles(BTreeSet<usize>),
    /// Fallback synset for a translation pair whose words sit on no cycle.
    TrivialPair,
}

impl Provenance {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Provenance::TrivialPair)
    }

    pub fn cycle_count(&self) -> usize {
        match self {
            Provenance::Cycles(ids) => ids.len(),
            Provenance::TrivialPair => 0,
        }
    }
}

/// A pair of word sets, one per language, asserting mutual synonymy.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BilingualSynset {
    l1_words: BTreeSet<Word>,
    l2_words: BTreeSet<Word>,
    provenance: Provenance,
}

impl BilingualSynset {
    pub fn new(
        l1_words: BTreeSet<Word>,
        l2_words: BTreeSet<Word>,
        provenance: Provenance,
    ) -> Result<BilingualSynset> {
        if l1_words.is_empty() || l2_words.is_empty() {
            return Err(Error::EmptySynset {
                id: "<candidate>".to_owned(),
            });
        }
        Ok(BilingualSynset {
            l1_words,
            l2_words,
            provenance,
        })
    }

    pub fn words(&self, side: LanguageTag) -> &BTreeSet<Word> {
        match side {
            LanguageTag::L1 => &self.l1_words,
            LanguageTag::L2 => &self.l2_words,
        }
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.words(word.lang()).contains(word)
    }

    fn set_pair(&self) -> (BTreeSet<Word>, BTreeSet<Word>) {
        (self.l1_words.clone(), self.l2_words.clone())
    }
}

/// How candidate synsets are allowed to merge.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ConsolidationPolicy {
    /// Merge iff the candidates share at least one word on each side.
    /// A one-sided shared word is exactly a sense boundary, so this is the
    /// default.
    #[default]
    SharedWordEachSide,
    /// Merge iff some dictionary pair is contained in both candidates.
    SharedPair,
    /// Merge iff the Jaccard similarity of the combined bilingual word sets
    /// reaches the threshold.
    Jaccard(f64),
}

impl std::fmt::Display for ConsolidationPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConsolidationPolicy::SharedWordEachSide => f.write_str("shared-word-each-side"),
            ConsolidationPolicy::SharedPair => f.write_str("shared-pair"),
            ConsolidationPolicy::Jaccard(theta) => write!(f, "jaccard({theta})"),
        }
    }
}

impl FromStr for ConsolidationPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<ConsolidationPolicy> {
        match s {
            "shared-word-each-side" => Ok(ConsolidationPolicy::SharedWordEachSide),
            "shared-pair" => Ok(ConsolidationPolicy::SharedPair),
            other => {
                if let Some(theta) = other
                    .strip_prefix("jaccard(")
                    .and_then(|rest| rest.strip_suffix(')'))
                {
                    let theta: f64 = theta.parse().map_err(|_| Error::UnknownPolicy {
                        name: other.to_owned(),
                    })?;
                    validate_theta(theta)?;
                    return Ok(ConsolidationPolicy::Jaccard(theta));
                }
                Err(Error::UnknownPolicy {
                    name: other.to_owned(),
                })
            }
        }
    }
}

pub fn validate_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidTheta { theta });
    }
    Ok(())
}

/// Converts cycles into candidate synsets, one per cycle, partitioning each
/// cycle's nodes by language. Exact-duplicate candidates merge with their
/// provenance unioned.
pub fn cycles_to_candidates(cycles: &[Cycle], graph: &TranslationGraph) -> Vec<BilingualSynset> {
    let mut by_sets: BTreeMap<(BTreeSet<Word>, BTreeSet<Word>), BTreeSet<usize>> = BTreeMap::new();
    for (cycle_id, cycle) in cycles.iter().enumerate() {
        let mut l1_words = BTreeSet::new();
        let mut l2_words = BTreeSet::new();
        for &node in cycle.nodes() {
            let word = graph.word(node).clone();
            match word.lang() {
                LanguageTag::L1 => l1_words.insert(word),
                LanguageTag::L2 => l2_words.insert(word),
            };
        }
        debug_assert_eq!(l1_words.len(), cycle.len() / 2);
        debug_assert_eq!(l2_words.len(), cycle.len() / 2);
        by_sets.entry((l1_words, l2_words)).or_default().insert(cycle_id);
    }
    by_sets
        .into_iter()
        .map(|((l1_words, l2_words), ids)| BilingualSynset {
            l1_words,
            l2_words,
            provenance: Provenance::Cycles(ids),
        })
        .collect()
}

fn intersects(a: &BTreeSet<Word>, b: &BTreeSet<Word>) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().any(|w| large.contains(w))
}

fn jaccard(a: &BilingualSynset, b: &BilingualSynset) -> f64 {
    let mut union: BTreeSet<&Word> = a.l1_words.iter().chain(&a.l2_words).collect();
    let b_all: BTreeSet<&Word> = b.l1_words.iter().chain(&b.l2_words).collect();
    let a_len = union.len();
    union.extend(&b_all);
    let inter = a_len + b_all.len() - union.len();
    inter as f64 / union.len() as f64
}

fn mergeable(
    a: &BilingualSynset,
    b: &BilingualSynset,
    policy: &ConsolidationPolicy,
    pairs: &PairSet,
) -> bool {
    match policy {
        ConsolidationPolicy::SharedWordEachSide => {
            intersects(&a.l1_words, &b.l1_words) && intersects(&a.l2_words, &b.l2_words)
        }
        ConsolidationPolicy::SharedPair => pairs.iter().any(|p| {
            a.l1_words.contains(p.source())
                && b.l1_words.contains(p.source())
                && a.l2_words.contains(p.target())
                && b.l2_words.contains(p.target())
        }),
        ConsolidationPolicy::Jaccard(theta) => jaccard(a, b) >= *theta,
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> UnionFind {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            self.parent[root] = self.parent[self.parent[root]];
            root = self.parent[root];
        }
        root
    }

    fn union(&mut self, x: usize, y: usize) {
        let (mut x, mut y) = (self.find(x), self.find(y));
        if x == y {
            return;
        }
        if self.size[x] < self.size[y] {
            std::mem::swap(&mut x, &mut y);
        }
        self.parent[y] = x;
        self.size[x] += self.size[y];
    }

    fn same(&mut self, x: usize, y: usize) -> bool {
        self.find(x) == self.find(y)
    }
}

fn merge_provenance(a: Provenance, b: &Provenance) -> Provenance {
    match (a, b) {
        (Provenance::Cycles(mut x), Provenance::Cycles(y)) => {
            x.extend(y.iter().copied());
            Provenance::Cycles(x)
        }
        (Provenance::TrivialPair, Provenance::TrivialPair) => Provenance::TrivialPair,
        // Mixed: cycle evidence dominates.
        (Provenance::Cycles(x), Provenance::TrivialPair) => Provenance::Cycles(x),
        (Provenance::TrivialPair, Provenance::Cycles(y)) => Provenance::Cycles(y.clone()),
    }
}

/// One merge pass: connected components under the merge predicate, each
/// component unioned into a single synset. Identical set-pairs always merge.
fn consolidate_pass(
    synsets: Vec<BilingualSynset>,
    policy: &ConsolidationPolicy,
    pairs: &PairSet,
) -> Vec<BilingualSynset> {
    let mut uf = UnionFind::new(synsets.len());

    // Candidates that share no word at all can never merge under any
    // policy (theta > 0), so only bucket-mates need a predicate check.
    let mut buckets: BTreeMap<&Word, Vec<usize>> = BTreeMap::new();
    for (i, synset) in synsets.iter().enumerate() {
        for word in synset.l1_words.iter().chain(&synset.l2_words) {
            buckets.entry(word).or_default().push(i);
        }
    }
    for members in buckets.values() {
        for (pos, &i) in members.iter().enumerate() {
            for &j in &members[pos + 1..] {
                if !uf.same(i, j) && mergeable(&synsets[i], &synsets[j], policy, pairs) {
                    uf.union(i, j);
                }
            }
        }
    }

    let mut components: BTreeMap<usize, BilingualSynset> = BTreeMap::new();
    for (i, synset) in synsets.into_iter().enumerate() {
        let root = uf.find(i);
        match components.remove(&root) {
            None => {
                components.insert(root, synset);
            }
            Some(mut acc) => {
                acc.l1_words.extend(synset.l1_words);
                acc.l2_words.extend(synset.l2_words);
                acc.provenance = merge_provenance(acc.provenance, &synset.provenance);
                components.insert(root, acc);
            }
        }
    }

    // Distinct components can still union to the same set-pair; collapse
    // them so no two outputs are equal as set-pairs.
    let mut by_sets: BTreeMap<(BTreeSet<Word>, BTreeSet<Word>), BilingualSynset> = BTreeMap::new();
    for synset in components.into_values() {
        match by_sets.remove(&synset.set_pair()) {
            None => {
                by_sets.insert(synset.set_pair(), synset);
            }
            Some(mut acc) => {
                acc.provenance = merge_provenance(acc.provenance, &synset.provenance);
                by_sets.insert(acc.set_pair(), acc);
            }
        }
    }
    by_sets.into_values().collect()
}

/// Merges overlapping candidates into final synsets.
///
/// Passes of component-wise merging repeat until no pass shrinks the list,
/// so the result is idempotent and independent of candidate order. `pairs`
/// is the dictionary the candidates came from; only the shared-pair policy
/// consults it.
pub fn consolidate(
    candidates: Vec<BilingualSynset>,
    policy: &ConsolidationPolicy,
    pairs: &PairSet,
) -> Result<Vec<BilingualSynset>> {
    if let ConsolidationPolicy::Jaccard(theta) = policy {
        validate_theta(*theta)?;
    }
    let mut current = candidates;
    loop {
        let before = current.len();
        current = consolidate_pass(current, policy, pairs);
        if current.len() == before {
            return Ok(current);
        }
    }
}

/// Emits `{a} = {e}` synsets for every pair whose two words both occur in no
/// covered synset. Words with a unique translation would otherwise vanish
/// from the output entirely.
pub fn emit_trivial_pairs(pairs: &PairSet, covered: &[BilingualSynset]) -> Vec<BilingualSynset> {
    let covered_words: BTreeSet<&Word> = covered
        .iter()
        .flat_map(|s| s.l1_words.iter().chain(&s.l2_words))
        .collect();
    pairs
        .iter()
        .filter(|p| !covered_words.contains(p.source()) && !covered_words.contains(p.target()))
        .map(|p| BilingualSynset {
            l1_words: [p.source().clone()].into(),
            l2_words: [p.target().clone()].into(),
            provenance: Provenance::TrivialPair,
        })
        .collect()
}

/// Sorts synsets into the canonical output order (by word sets).
pub fn sort_synsets(synsets: &mut [BilingualSynset]) {
    synsets.sort_by(|a, b| {
        (&a.l1_words, &a.l2_words).cmp(&(&b.l1_words, &b.l2_words))
    });
}

fn side_field(words: &BTreeSet<Word>) -> Result<String> {
    let mut parts = Vec::with_capacity(words.len());
    for word in words {
        if word.surface().contains('|') {
            return Err(Error::TsvUnsafeWord {
                word: word.surface().to_owned(),
            });
        }
        parts.push(word.surface());
    }
    Ok(parts.join("|"))
}

/// Writes synsets as TSV: `id<TAB>l1|..<TAB>l2|..<TAB>provenance_count`,
/// one line per synset, in input order. Ids are assigned sequentially.
pub fn write_synsets_tsv(synsets: &[BilingualSynset], mut out: impl Write) -> Result<()> {
    for (i, synset) in synsets.iter().enumerate() {
        writeln!(
            out,
            "s{:06}\t{}\t{}\t{}",
            i + 1,
            side_field(&synset.l1_words)?,
            side_field(&synset.l2_words)?,
            synset.provenance.cycle_count(),
        )?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct SynsetRecord {
    id: String,
    l1: Vec<String>,
    l2: Vec<String>,
    source: String,
}

/// Writes synsets as JSON lines with fields `id`, `l1`, `l2`, `source`.
pub fn write_synsets_jsonl(synsets: &[BilingualSynset], mut out: impl Write) -> Result<()> {
    for (i, synset) in synsets.iter().enumerate() {
        let record = SynsetRecord {
            id: format!("s{:06}", i + 1),
            l1: synset.l1_words.iter().map(|w| w.surface().to_owned()).collect(),
            l2: synset.l2_words.iter().map(|w| w.surface().to_owned()).collect(),
            source: if synset.provenance.is_trivial() {
                "trivial_pair".to_owned()
            } else {
                "cycles".to_owned()
            },
        };
        serde_json::to_writer(&mut out, &record).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn record_to_synset(
    l1: Vec<String>,
    l2: Vec<String>,
    trivial: bool,
    line_no: usize,
) -> Result<BilingualSynset> {
    let mut l1_words = BTreeSet::new();
    let mut l2_words = BTreeSet::new();
    for surface in &l1 {
        l1_words.insert(Word::new(surface, LanguageTag::L1)?);
    }
    for surface in &l2 {
        l2_words.insert(Word::new(surface, LanguageTag::L2)?);
    }
    if l1_words.is_empty() || l2_words.is_empty() {
        return Err(Error::MalformedLine { line: line_no });
    }
    Ok(BilingualSynset {
        l1_words,
        l2_words,
        provenance: if trivial {
            Provenance::TrivialPair
        } else {
            Provenance::Cycles(BTreeSet::new())
        },
    })
}

/// Reads synsets back from TSV. Accepts 3-field gold-style lines and
/// 4-field extraction lines; a provenance count of 0 marks a trivial pair.
/// Cycle ids are not carried by the file format.
pub fn read_synsets_tsv(input: impl BufRead) -> Result<Vec<BilingualSynset>> {
    let mut synsets = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 && fields.len() != 4 {
            return Err(Error::MalformedLine { line: line_no });
        }
        let split = |field: &str| -> Vec<String> {
            if field.trim().is_empty() {
                Vec::new()
            } else {
                field.split('|').map(|w| w.trim().to_owned()).collect()
            }
        };
        let trivial = fields.len() == 4 && fields[3].trim() == "0";
        synsets.push(record_to_synset(
            split(fields[1]),
            split(fields[2]),
            trivial,
            line_no,
        )?);
    }
    Ok(synsets)
}

/// Reads synsets back from JSON lines produced by [`write_synsets_jsonl`].
pub fn read_synsets_jsonl(input: impl BufRead) -> Result<Vec<BilingualSynset>> {
    let mut synsets = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: SynsetRecord =
            serde_json::from_str(&line).map_err(|_| Error::MalformedLine { line: line_no })?;
        synsets.push(record_to_synset(
            record.l1,
            record.l2,
            record.source == "trivial_pair",
            line_no,
        )?);
    }
    Ok(synsets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::enumerate_cycles;
    use crate::graph::build_graph;
    use crate::lexicon::load_pairs;

    fn word(surface: &str, lang: LanguageTag) -> Word {
        Word::new(surface, lang).unwrap()
    }

    fn set(surfaces: &[&str], lang: LanguageTag) -> BTreeSet<Word> {
        surfaces.iter().map(|s| word(s, lang)).collect()
    }

    fn synset(l1: &[&str], l2: &[&str]) -> BilingualSynset {
        BilingualSynset::new(
            set(l1, LanguageTag::L1),
            set(l2, LanguageTag::L2),
            Provenance::Cycles(BTreeSet::new()),
        )
        .unwrap()
    }

    fn pairs_of(text: &str) -> PairSet {
        load_pairs(text.as_bytes()).unwrap().pairs
    }

    const FOREST_PAIRS: &str = "\
غَابَة\tforest\nغَابَة\twood\nغَابَة\twoods\n\
غَاب\tforest\nغَاب\twood\nغَاب\twoods\n\
أَذْغَال\tforest\nأَذْغَال\twood\nأَذْغَال\twoods\n";

    #[test]
    fn one_candidate_per_cycle() {
        let pairs = pairs_of("غابة\tforest\nغابة\twoods\nغاب\tforest\nغاب\twoods\n");
        let graph = build_graph(&pairs).unwrap();
        let cycles = enumerate_cycles(&graph, 6).unwrap();
        let candidates = cycles_to_candidates(&cycles, &graph);
        assert_eq!(candidates.len(), 1);
        assert_eq!(
            *candidates[0].words(LanguageTag::L2),
            set(&["forest", "woods"], LanguageTag::L2)
        );
        assert_eq!(
            *candidates[0].words(LanguageTag::L1),
            set(&["غاب", "غابة"], LanguageTag::L1)
        );
    }

    #[test]
    fn no_cycles_no_candidates() {
        let pairs = pairs_of("a\tx\n");
        let graph = build_graph(&pairs).unwrap();
        assert!(cycles_to_candidates(&[], &graph).is_empty());
    }

    #[test]
    fn forest_neighborhood_yields_the_seven_root_candidates() {
        // The K3,3 neighborhood of a root word: cycles through the root give
        // six quad candidates plus one hexagon candidate (all six hexagons
        // share one node set).
        let pairs = pairs_of(FOREST_PAIRS);
        let graph = build_graph(&pairs).unwrap();
        let cycles = enumerate_cycles(&graph, 6).unwrap();
        let root = graph
            .node_id(&word("غَابَة", LanguageTag::L1))
            .unwrap();
        let through_root: Vec<Cycle> = cycles
            .iter()
            .filter(|c| c.nodes().contains(&root))
            .cloned()
            .collect();
        let candidates = cycles_to_candidates(&through_root, &graph);
        assert_eq!(candidates.len(), 7);

        let expected = [
            (vec!["غَابَة", "غَاب"], vec!["forest", "woods"]),
            (vec!["غَابَة", "أَذْغَال"], vec!["forest", "woods"]),
            (vec!["غَابَة", "أَذْغَال"], vec!["forest", "wood"]),
            (vec!["غَابَة", "غَاب"], vec!["forest", "wood"]),
            (vec!["غَاب", "غَابَة"], vec!["wood", "woods"]),
            (vec!["غَابَة", "أَذْغَال"], vec!["wood", "woods"]),
            (
                vec!["غَاب", "غَابَة", "أَذْغَال"],
                vec!["forest", "wood", "woods"],
            ),
        ];
        for (l1, l2) in expected {
            let l1 = set(&l1, LanguageTag::L1);
            let l2 = set(&l2, LanguageTag::L2);
            assert!(
                candidates
                    .iter()
                    .any(|c| *c.words(LanguageTag::L1) == l1 && *c.words(LanguageTag::L2) == l2),
                "missing candidate {l1:?} = {l2:?}"
            );
        }
    }

    #[test]
    fn hexagons_share_one_candidate_with_six_cycle_ids() {
        let pairs = pairs_of(FOREST_PAIRS);
        let graph = build_graph(&pairs).unwrap();
        let cycles = enumerate_cycles(&graph, 6).unwrap();
        let candidates = cycles_to_candidates(&cycles, &graph);
        // 9 quads + 1 deduplicated hexagon synset.
        assert_eq!(candidates.len(), 10);
        let hexagon = candidates
            .iter()
            .find(|c| c.words(LanguageTag::L1).len() == 3)
            .unwrap();
        assert_eq!(hexagon.provenance().cycle_count(), 6);
    }

    #[test]
    fn consolidation_collapses_the_forest_candidates_to_one() {
        let pairs = pairs_of(FOREST_PAIRS);
        let graph = build_graph(&pairs).unwrap();
        let cycles = enumerate_cycles(&graph, 6).unwrap();
        let candidates = cycles_to_candidates(&cycles, &graph);
        let merged = consolidate(
            candidates,
            &ConsolidationPolicy::SharedWordEachSide,
            &pairs,
        )
        .unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(
            *merged[0].words(LanguageTag::L1),
            set(&["غَاب", "غَابَة", "أَذْغَال"], LanguageTag::L1)
        );
        assert_eq!(
            *merged[0].words(LanguageTag::L2),
            set(&["forest", "wood", "woods"], LanguageTag::L2)
        );
        assert_eq!(merged[0].provenance().cycle_count(), 15);
    }

    #[test]
    fn disjoint_candidates_stay_apart() {
        let input = vec![synset(&["a1", "a2"], &["e1", "e2"]), synset(&["b1", "b2"], &["f1", "f2"])];
        let merged = consolidate(
            input.clone(),
            &ConsolidationPolicy::SharedWordEachSide,
            &PairSet::new(),
        )
        .unwrap();
        assert_eq!(merged, input);
    }

    #[test]
    fn single_candidate_is_returned_unchanged() {
        let input = vec![synset(&["a1", "a2"], &["e1", "e2"])];
        let merged = consolidate(
            input.clone(),
            &ConsolidationPolicy::SharedWordEachSide,
            &PairSet::new(),
        )
        .unwrap();
        assert_eq!(merged, input);
    }

    #[test]
    fn one_sided_overlap_does_not_merge_by_default() {
        // Two senses linked only through a polysemous L2-side word.
        let input = vec![synset(&["a1", "a2"], &["جدول", "x1"]), synset(&["b1", "b2"], &["جدول", "x2"])];
        let merged = consolidate(
            input.clone(),
            &ConsolidationPolicy::SharedWordEachSide,
            &PairSet::new(),
        )
        .unwrap();
        assert_eq!(merged.len(), 2);
        // A permissive Jaccard threshold does merge them.
        let merged = consolidate(input, &ConsolidationPolicy::Jaccard(0.1), &PairSet::new()).unwrap();
        assert_eq!(merged.len(), 1);
    }

    #[test]
    fn shared_pair_policy_requires_a_dictionary_pair() {
        let input = vec![synset(&["a1", "a2"], &["e1", "e2"]), synset(&["a1", "a3"], &["e1", "e3"])];
        // Shared words a1/e1 on each side, but (a1, e1) is a dictionary
        // entry only in the first pair set.
        let with_pair = pairs_of("a1\te1\n");
        let without_pair = pairs_of("a1\te2\na2\te1\n");
        let merged = consolidate(input.clone(), &ConsolidationPolicy::SharedPair, &with_pair).unwrap();
        assert_eq!(merged.len(), 1);
        let merged = consolidate(input.clone(), &ConsolidationPolicy::SharedPair, &without_pair).unwrap();
        assert_eq!(merged.len(), 2);
        // The default policy merges either way.
        let merged = consolidate(
            input,
            &ConsolidationPolicy::SharedWordEachSide,
            &without_pair,
        )
        .unwrap();
        assert_eq!(merged.len(), 1);
    }

    #[test]
    fn consolidation_runs_to_a_fixpoint() {
        // c1 and c2 merge in the first pass; their union then shares a word
        // on each side with c3, which only a second pass can pick up.
        let input = vec![
            synset(&["a1", "a2"], &["e1", "e2"]),
            synset(&["a1", "a3"], &["e1", "e3"]),
            synset(&["a2", "a9"], &["e3", "e9"]),
        ];
        let merged = consolidate(
            input,
            &ConsolidationPolicy::SharedWordEachSide,
            &PairSet::new(),
        )
        .unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(
            *merged[0].words(LanguageTag::L1),
            set(&["a1", "a2", "a3", "a9"], LanguageTag::L1)
        );
        assert_eq!(
            *merged[0].words(LanguageTag::L2),
            set(&["e1", "e2", "e3", "e9"], LanguageTag::L2)
        );
    }

    #[test]
    fn invalid_jaccard_threshold_is_rejected() {
        for theta in [0.0, -0.5, 1.5] {
            assert!(matches!(
                consolidate(Vec::new(), &ConsolidationPolicy::Jaccard(theta), &PairSet::new()),
                Err(Error::InvalidTheta { .. })
            ));
        }
    }

    #[test]
    fn policy_strings_round_trip() {
        for policy in [
            ConsolidationPolicy::SharedWordEachSide,
            ConsolidationPolicy::SharedPair,
            ConsolidationPolicy::Jaccard(0.5),
        ] {
            assert_eq!(
                policy.to_string().parse::<ConsolidationPolicy>().unwrap(),
                policy
            );
        }
        assert!(matches!(
            "frequency-rank".parse::<ConsolidationPolicy>(),
            Err(Error::UnknownPolicy { .. })
        ));
    }

    #[test]
    fn trivial_pairs_cover_uncovered_words() {
        let pairs = pairs_of("a1\te1\n");
        let emitted = emit_trivial_pairs(&pairs, &[]);
        assert_eq!(emitted.len(), 1);
        assert!(emitted[0].provenance().is_trivial());
        assert_eq!(*emitted[0].words(LanguageTag::L1), set(&["a1"], LanguageTag::L1));
        assert_eq!(*emitted[0].words(LanguageTag::L2), set(&["e1"], LanguageTag::L2));
    }

    #[test]
    fn trivial_pairs_are_suppressed_when_either_word_is_covered() {
        let pairs = pairs_of("forest\tغابة\n");
        let covered = vec![synset(&["forest", "woods"], &["x1", "x2"])];
        assert!(emit_trivial_pairs(&pairs, &covered).is_empty());
    }

    #[test]
    fn tsv_output_is_stable() {
        let synsets = vec![synset(&["a1", "a2"], &["e1"]), {
            let mut s = synset(&["b"], &["f"]);
            s.provenance = Provenance::TrivialPair;
            s
        }];
        let mut buf = Vec::new();
        write_synsets_tsv(&synsets, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "s000001\ta1|a2\te1\t0\ns000002\tb\tf\t0\n"
        );
    }

    #[test]
    fn tsv_rejects_pipe_in_words() {
        let synsets = vec![synset(&["a|b"], &["e"])];
        assert!(matches!(
            write_synsets_tsv(&synsets, Vec::new()),
            Err(Error::TsvUnsafeWord { .. })
        ));
        // JSONL handles the same word fine.
        assert!(write_synsets_jsonl(&synsets, Vec::new()).is_ok());
    }

    #[test]
    fn jsonl_round_trips_sets_and_source() {
        let mut synsets = vec![synset(&["a1", "a2"], &["e1", "e2"])];
        synsets.push(BilingualSynset {
            l1_words: set(&["b"], LanguageTag::L1),
            l2_words: set(&["f"], LanguageTag::L2),
            provenance: Provenance::TrivialPair,
        });
        let mut buf = Vec::new();
        write_synsets_jsonl(&synsets, &mut buf).unwrap();
        let reloaded = read_synsets_jsonl(buf.as_slice()).unwrap();
        assert_eq!(reloaded.len(), 2);
        assert_eq!(reloaded[0].words(LanguageTag::L1), synsets[0].words(LanguageTag::L1));
        assert!(reloaded[1].provenance().is_trivial());
    }

    #[test]
    fn tsv_reader_accepts_gold_style_lines() {
        let synsets = read_synsets_tsv("s1\ta1|a2\te1\n".as_bytes()).unwrap();
        assert_eq!(synsets.len(), 1);
        assert!(!synsets[0].provenance().is_trivial());
        let synsets = read_synsets_tsv("s1\tb\tf\t0\n".as_bytes()).unwrap();
        assert!(synsets[0].provenance().is_trivial());
    }
}

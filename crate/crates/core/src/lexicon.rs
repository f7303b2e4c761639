//! Bilingual dictionary and gold synset file handling.
//!
//! Words are compared by exact codepoint identity: no case folding, no
//! diacritic stripping, no morphological normalization. Surface forms that
//! differ in a single diacritic are different words. Loaders trim leading
//! and trailing whitespace from fields and never alter anything else.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{Read, Write};

use crate::error::{Error, Result};

/// One of the two languages of a run. `L1` sorts before `L2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LanguageTag {
    L1,
    L2,
}

impl LanguageTag {
    pub fn other(self) -> LanguageTag {
        match self {
            LanguageTag::L1 => LanguageTag::L2,
            LanguageTag::L2 => LanguageTag::L1,
        }
    }
}

/// User-visible labels for the two language tags, e.g. `ar` / `en`.
///
/// Labels are display-only configuration; they never participate in word
/// identity or ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageLabels {
    l1: String,
    l2: String,
}

impl LanguageLabels {
    pub fn new(l1: &str, l2: &str) -> Result<LanguageLabels> {
        let l1 = l1.trim();
        let l2 = l2.trim();
        if l1.is_empty() || l2.is_empty() || l1 == l2 {
            return Err(Error::InvalidLabels);
        }
        Ok(LanguageLabels {
            l1: l1.to_owned(),
            l2: l2.to_owned(),
        })
    }

    pub fn label(&self, tag: LanguageTag) -> &str {
        match tag {
            LanguageTag::L1 => &self.l1,
            LanguageTag::L2 => &self.l2,
        }
    }
}

impl Default for LanguageLabels {
    fn default() -> Self {
        LanguageLabels {
            l1: "l1".to_owned(),
            l2: "l2".to_owned(),
        }
    }
}

/// A surface form tagged with its language.
///
/// Ordering is lexicographic by `(lang, surface)`, which is the node order
/// of the translation graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    lang: LanguageTag,
    surface: String,
}

impl Word {
    /// Builds a word from a surface form, trimming surrounding whitespace.
    ///
    /// The trimmed surface must be non-empty and free of TAB and newline
    /// characters.
    pub fn new(surface: &str, lang: LanguageTag) -> Result<Word> {
        let surface = surface.trim();
        if surface.is_empty() {
            return Err(Error::InvalidWord {
                reason: "empty surface form".to_owned(),
            });
        }
        if surface.contains(['\t', '\n', '\r']) {
            return Err(Error::InvalidWord {
                reason: format!("`{}` contains a TAB or newline", surface.escape_debug()),
            });
        }
        Ok(Word {
            lang,
            surface: surface.to_owned(),
        })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn lang(&self) -> LanguageTag {
        self.lang
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)
    }
}

/// A dictionary entry, canonically directed L1 -> L2.
///
/// The translation graph is symmetric, so direction carries no meaning
/// beyond file layout; one canonical form keeps deduplication trivial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TranslationPair {
    source: Word,
    target: Word,
}

impl TranslationPair {
    pub fn new(source: Word, target: Word) -> Result<TranslationPair> {
        if source.lang() != LanguageTag::L1 || target.lang() != LanguageTag::L2 {
            return Err(Error::InvalidWord {
                reason: "translation pairs are directed L1 -> L2".to_owned(),
            });
        }
        Ok(TranslationPair { source, target })
    }

    pub fn source(&self) -> &Word {
        &self.source
    }

    pub fn target(&self) -> &Word {
        &self.target
    }
}

/// A set of deduplicated translation pairs.
pub type PairSet = BTreeSet<TranslationPair>;

/// A reference synset: one word set per language, at least one non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldSynset {
    id: String,
    l1_words: BTreeSet<Word>,
    l2_words: BTreeSet<Word>,
}

impl GoldSynset {
    pub fn new(
        id: &str,
        l1_words: BTreeSet<Word>,
        l2_words: BTreeSet<Word>,
    ) -> Result<GoldSynset> {
        if l1_words.is_empty() && l2_words.is_empty() {
            return Err(Error::EmptySynset { id: id.to_owned() });
        }
        debug_assert!(l1_words.iter().all(|w| w.lang() == LanguageTag::L1));
        debug_assert!(l2_words.iter().all(|w| w.lang() == LanguageTag::L2));
        Ok(GoldSynset {
            id: id.to_owned(),
            l1_words,
            l2_words,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn words(&self, side: LanguageTag) -> &BTreeSet<Word> {
        match side {
            LanguageTag::L1 => &self.l1_words,
            LanguageTag::L2 => &self.l2_words,
        }
    }

    /// True when both sides carry at least one word.
    pub fn is_bilingual(&self) -> bool {
        !self.l1_words.is_empty() && !self.l2_words.is_empty()
    }
}

/// Bookkeeping from a pairs-file load.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    /// Physical lines seen (including blanks and comments).
    pub lines: usize,
    /// Blank lines and `#` comment lines skipped.
    pub skipped: usize,
    /// Pair lines merged into an already-seen pair.
    pub duplicates: usize,
}

/// Result of [`load_pairs`].
#[derive(Debug, Clone)]
pub struct PairsLoad {
    pub pairs: PairSet,
    pub report: LoadReport,
}

/// Bookkeeping from a gold-synset load.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GoldLoadReport {
    pub lines: usize,
    pub skipped: usize,
    /// Words repeated within one side of one synset (collapsed).
    pub within_side_duplicates: usize,
}

/// Result of [`load_gold_synsets`].
#[derive(Debug, Clone)]
pub struct GoldLoad {
    pub synsets: Vec<GoldSynset>,
    pub report: GoldLoadReport,
}

fn read_text(mut input: impl Read) -> Result<String> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let text = match std::str::from_utf8(&bytes) {
        Ok(text) => text,
        Err(e) => {
            return Err(Error::InvalidUtf8 {
                offset: e.valid_up_to(),
            })
        }
    };
    // Tolerate a UTF-8 BOM; real dictionary dumps often start with one.
    Ok(text.strip_prefix('\u{feff}').unwrap_or(text).to_owned())
}

fn is_skippable(line: &str) -> bool {
    let trimmed = line.trim();
    trimmed.is_empty() || trimmed.starts_with('#')
}

/// Loads a bilingual dictionary: one `l1_word<TAB>l2_word` pair per line.
///
/// Blank lines and lines starting with `#` are skipped. Duplicate pairs are
/// merged and counted in the report.
pub fn load_pairs(input: impl Read) -> Result<PairsLoad> {
    let text = read_text(input)?;
    let mut pairs = PairSet::new();
    let mut report = LoadReport::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        report.lines += 1;
        if is_skippable(line) {
            report.skipped += 1;
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::MalformedLine { line: line_no });
        }
        let mut words = fields.iter().map(|field| {
            let trimmed = field.trim();
            if trimmed.is_empty() {
                return Err(Error::EmptyWord { line: line_no });
            }
            Ok(trimmed)
        });
        let source = Word::new(words.next().unwrap()?, LanguageTag::L1)?;
        let target = Word::new(words.next().unwrap()?, LanguageTag::L2)?;
        if !pairs.insert(TranslationPair::new(source, target)?) {
            report.duplicates += 1;
        }
    }
    Ok(PairsLoad { pairs, report })
}

/// Writes pairs in the format accepted by [`load_pairs`], sorted, LF line
/// endings. `load_pairs` after `serialize_pairs` is the identity on any
/// deduplicated pair set.
pub fn serialize_pairs(pairs: &PairSet, mut out: impl Write) -> std::io::Result<()> {
    for pair in pairs {
        writeln!(out, "{}\t{}", pair.source().surface(), pair.target().surface())?;
    }
    Ok(())
}

fn parse_side(field: &str, lang: LanguageTag, line_no: usize) -> Result<(BTreeSet<Word>, usize)> {
    let mut words = BTreeSet::new();
    let mut duplicates = 0;
    if field.trim().is_empty() {
        return Ok((words, duplicates));
    }
    for chunk in field.split('|') {
        let trimmed = chunk.trim();
        if trimmed.is_empty() {
            return Err(Error::MalformedLine { line: line_no });
        }
        if !words.insert(Word::new(trimmed, lang)?) {
            duplicates += 1;
        }
    }
    Ok((words, duplicates))
}

/// Loads a gold synset file: `id<TAB>w|w|w<TAB>w|w` per line.
///
/// Either word field may be empty (monolingual gold entries). Duplicate
/// words within a side are collapsed and counted in the report.
pub fn load_gold_synsets(input: impl Read) -> Result<GoldLoad> {
    let text = read_text(input)?;
    let mut synsets: Vec<GoldSynset> = Vec::new();
    let mut seen_ids = BTreeSet::new();
    let mut report = GoldLoadReport::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        report.lines += 1;
        if is_skippable(line) {
            report.skipped += 1;
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::MalformedLine { line: line_no });
        }
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(Error::MalformedLine { line: line_no });
        }
        if !seen_ids.insert(id.to_owned()) {
            return Err(Error::DuplicateSynsetId { id: id.to_owned() });
        }
        let (l1_words, dup1) = parse_side(fields[1], LanguageTag::L1, line_no)?;
        let (l2_words, dup2) = parse_side(fields[2], LanguageTag::L2, line_no)?;
        report.within_side_duplicates += dup1 + dup2;
        if l1_words.is_empty() && l2_words.is_empty() {
            return Err(Error::MalformedLine { line: line_no });
        }
        synsets.push(GoldSynset::new(id, l1_words, l2_words)?);
    }
    Ok(GoldLoad { synsets, report })
}

/// Flattens gold synsets into translation pairs: the union over synsets of
/// the full `l1 x l2` cross-product, deduplicated across synsets. Word-sense
/// membership is lost by construction.
pub fn flatten_synsets(gold: &[GoldSynset]) -> Result<PairSet> {
    let mut pairs = PairSet::new();
    for synset in gold {
        if !synset.is_bilingual() {
            return Err(Error::EmptySide {
                id: synset.id().to_owned(),
            });
        }
        for l1 in synset.words(LanguageTag::L1) {
            for l2 in synset.words(LanguageTag::L2) {
                pairs.insert(TranslationPair::new(l1.clone(), l2.clone())?);
            }
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(surface: &str, lang: LanguageTag) -> Word {
        Word::new(surface, lang).unwrap()
    }

    fn pair(l1: &str, l2: &str) -> TranslationPair {
        TranslationPair::new(word(l1, LanguageTag::L1), word(l2, LanguageTag::L2)).unwrap()
    }

    #[test]
    fn loads_a_single_pair() {
        let loaded = load_pairs("غابة\tforest\n".as_bytes()).unwrap();
        assert_eq!(loaded.pairs.len(), 1);
        assert!(loaded.pairs.contains(&pair("غابة", "forest")));
        assert_eq!(loaded.report.duplicates, 0);
    }

    #[test]
    fn empty_stream_yields_empty_set() {
        let loaded = load_pairs("".as_bytes()).unwrap();
        assert!(loaded.pairs.is_empty());
    }

    #[test]
    fn duplicate_pairs_are_merged_and_counted() {
        let loaded = load_pairs("a\tx\na\tx\n".as_bytes()).unwrap();
        assert_eq!(loaded.pairs.len(), 1);
        assert_eq!(loaded.report.duplicates, 1);
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let loaded = load_pairs("# header\n\na\tx\n  \n".as_bytes()).unwrap();
        assert_eq!(loaded.pairs.len(), 1);
        assert_eq!(loaded.report.skipped, 3);
    }

    #[test]
    fn crlf_line_endings_are_accepted() {
        let loaded = load_pairs("a\tx\r\nb\ty\r\n".as_bytes()).unwrap();
        assert_eq!(loaded.pairs.len(), 2);
        assert!(loaded.pairs.contains(&pair("a", "x")));
    }

    #[test]
    fn malformed_lines_report_the_line_number() {
        let err = load_pairs("a\tx\nnotabs\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 2 }));
        let err = load_pairs("a\tx\ty\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 1 }));
    }

    #[test]
    fn empty_fields_are_rejected() {
        let err = load_pairs("a\t \n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::EmptyWord { line: 1 }));
    }

    #[test]
    fn invalid_utf8_reports_the_offset() {
        let err = load_pairs(&b"ab\xff\tx\n"[..]).unwrap_err();
        assert!(matches!(err, Error::InvalidUtf8 { offset: 2 }));
    }

    #[test]
    fn surfaces_are_preserved_byte_for_byte() {
        // Diacritized and bare forms are distinct words.
        let text = "غَابَة\tforest\nغابة\tforest\n";
        let loaded = load_pairs(text.as_bytes()).unwrap();
        assert_eq!(loaded.pairs.len(), 2);
        let surfaces: Vec<&str> = loaded
            .pairs
            .iter()
            .map(|p| p.source().surface())
            .collect();
        assert!(surfaces.contains(&"غَابَة"));
        assert!(surfaces.contains(&"غابة"));
    }

    #[test]
    fn pairs_round_trip_through_serialization() {
        let loaded = load_pairs("b\ty\na\tx\na\ty\n".as_bytes()).unwrap();
        let mut buf = Vec::new();
        serialize_pairs(&loaded.pairs, &mut buf).unwrap();
        let reloaded = load_pairs(buf.as_slice()).unwrap();
        assert_eq!(loaded.pairs, reloaded.pairs);
        assert_eq!(reloaded.report.duplicates, 0);
    }

    #[test]
    fn loads_a_gold_synset_per_line() {
        let loaded = load_gold_synsets("s1\tغابة|غاب\tforest|woods\n".as_bytes()).unwrap();
        assert_eq!(loaded.synsets.len(), 1);
        let synset = &loaded.synsets[0];
        assert_eq!(synset.id(), "s1");
        assert_eq!(synset.words(LanguageTag::L1).len(), 2);
        assert_eq!(synset.words(LanguageTag::L2).len(), 2);
        assert!(synset
            .words(LanguageTag::L2)
            .contains(&word("woods", LanguageTag::L2)));
    }

    #[test]
    fn gold_side_may_be_empty() {
        let loaded = load_gold_synsets("s1\t\tforest\n".as_bytes()).unwrap();
        let synset = &loaded.synsets[0];
        assert!(synset.words(LanguageTag::L1).is_empty());
        assert_eq!(synset.words(LanguageTag::L2).len(), 1);
        assert!(!synset.is_bilingual());
    }

    #[test]
    fn within_side_duplicates_collapse_with_a_warning() {
        let loaded = load_gold_synsets("s1\ta|a\tx\n".as_bytes()).unwrap();
        assert_eq!(loaded.synsets[0].words(LanguageTag::L1).len(), 1);
        assert_eq!(loaded.report.within_side_duplicates, 1);
    }

    #[test]
    fn duplicate_synset_ids_are_rejected() {
        let err = load_gold_synsets("s1\ta\tx\ns1\tb\ty\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::DuplicateSynsetId { .. }));
    }

    #[test]
    fn gold_with_both_sides_empty_is_malformed() {
        let err = load_gold_synsets("s1\t\t\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 1 }));
    }

    #[test]
    fn flatten_takes_the_cross_product() {
        let gold = load_gold_synsets("s1\ta1|a2\te1\n".as_bytes()).unwrap().synsets;
        let pairs = flatten_synsets(&gold).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.contains(&pair("a1", "e1")));
        assert!(pairs.contains(&pair("a2", "e1")));
    }

    #[test]
    fn flatten_dedups_across_synsets() {
        let gold = load_gold_synsets("s1\ta1\te1|e2\ns2\ta1\te2|e3\n".as_bytes())
            .unwrap()
            .synsets;
        let pairs = flatten_synsets(&gold).unwrap();
        let expect: PairSet = [pair("a1", "e1"), pair("a1", "e2"), pair("a1", "e3")]
            .into_iter()
            .collect();
        assert_eq!(pairs, expect);
    }

    #[test]
    fn flatten_of_two_by_two_yields_four_pairs() {
        let gold = load_gold_synsets("s1\tغابة|غاب\tforest|woods\n".as_bytes())
            .unwrap()
            .synsets;
        assert_eq!(flatten_synsets(&gold).unwrap().len(), 4);
    }

    #[test]
    fn flatten_rejects_empty_sides() {
        let gold = load_gold_synsets("s1\t\tforest\n".as_bytes()).unwrap().synsets;
        let err = flatten_synsets(&gold).unwrap_err();
        assert!(matches!(err, Error::EmptySide { .. }));
    }

    #[test]
    fn words_order_by_lang_then_surface() {
        let a = word("z", LanguageTag::L1);
        let b = word("a", LanguageTag::L2);
        assert!(a < b);
    }

    #[test]
    fn word_rejects_empty_and_control_characters() {
        assert!(Word::new("  ", LanguageTag::L1).is_err());
        assert!(Word::new("a\tb", LanguageTag::L1).is_err());
        assert!(Word::new(" padded ", LanguageTag::L1).unwrap().surface() == "padded");
        // Interior spaces are fine: multiword entries are legal.
        assert!(Word::new("tabular array", LanguageTag::L2).is_ok());
    }

    #[test]
    fn labels_must_be_distinct() {
        assert!(LanguageLabels::new("ar", "ar").is_err());
        assert!(LanguageLabels::new("", "en").is_err());
        let labels = LanguageLabels::new("ar", "en").unwrap();
        assert_eq!(labels.label(LanguageTag::L1), "ar");
        assert_eq!(labels.label(LanguageTag::L2), "en");
    }

    #[test]
    fn bom_is_tolerated() {
        let loaded = load_pairs("\u{feff}a\tx\n".as_bytes()).unwrap();
        assert!(loaded.pairs.contains(&pair("a", "x")));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_word() -> impl Strategy<Value = String> {
            proptest::string::string_regex("[a-zغابةذروة]{1,6}").unwrap()
        }

        fn arb_pairs() -> impl Strategy<Value = PairSet> {
            proptest::collection::btree_set((arb_word(), arb_word()), 0..30).prop_map(|raw| {
                raw.into_iter()
                    .map(|(l1, l2)| {
                        TranslationPair::new(
                            Word::new(&l1, LanguageTag::L1).unwrap(),
                            Word::new(&l2, LanguageTag::L2).unwrap(),
                        )
                        .unwrap()
                    })
                    .collect()
            })
        }

        proptest! {
            #[test]
            fn serialize_then_load_is_identity(pairs in arb_pairs()) {
                let mut buf = Vec::new();
                serialize_pairs(&pairs, &mut buf).unwrap();
                let reloaded = load_pairs(buf.as_slice()).unwrap();
                prop_assert_eq!(reloaded.pairs, pairs);
                prop_assert_eq!(reloaded.report.duplicates, 0);
            }
        }
    }
}

//! Scoring extracted synsets against a gold standard, per language side.
//!
//! Each extracted synset contributes its best cosine match against any gold
//! synset (and vice versa for recall):
//!
//! ```text
//! precision = mean over extracted x of  max over gold y of  cosine(x, y)
//! recall    = mean over gold y      of  max over extracted x of  cosine(x, y)
//! ```
//!
//! Cosine over word sets uses binary membership vectors, which reduces to
//! `|x n y| / sqrt(|x| * |y|)`.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::{flatten_synsets, GoldSynset, LanguageLabels, LanguageTag};
use crate::pipeline::{extract, Extraction, ExtractionConfig, PipelineStats};
use crate::synset::BilingualSynset;

/// A deduplicated family of word sets, all of one language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonolingualSynsetSet {
    lang: LanguageTag,
    sets: Vec<BTreeSet<String>>,
}

impl MonolingualSynsetSet {
    /// Builds a family from raw word sets, dropping empties and
    /// deduplicating equal sets.
    pub fn from_sets(
        lang: LanguageTag,
        sets: impl IntoIterator<Item = BTreeSet<String>>,
    ) -> MonolingualSynsetSet {
        dedup_sets(sets, lang)
    }

    pub fn lang(&self) -> LanguageTag {
        self.lang
    }

    pub fn sets(&self) -> &[BTreeSet<String>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

fn dedup_sets(sets: impl IntoIterator<Item = BTreeSet<String>>, lang: LanguageTag) -> MonolingualSynsetSet {
    let unique: BTreeSet<BTreeSet<String>> =
        sets.into_iter().filter(|s| !s.is_empty()).collect();
    MonolingualSynsetSet {
        lang,
        sets: unique.into_iter().collect(),
    }
}

/// Projects bilingual synsets onto one side, dropping empties and
/// deduplicating equal sets.
pub fn project(synsets: &[BilingualSynset], side: LanguageTag) -> MonolingualSynsetSet {
    dedup_sets(
        synsets.iter().map(|s| {
            s.words(side)
                .iter()
                .map(|w| w.surface().to_owned())
                .collect()
        }),
        side,
    )
}

/// Projects gold synsets onto one side, dropping empties and deduplicating.
pub fn project_gold(gold: &[GoldSynset], side: LanguageTag) -> MonolingualSynsetSet {
    dedup_sets(
        gold.iter().map(|s| {
            s.words(side)
                .iter()
                .map(|w| w.surface().to_owned())
                .collect()
        }),
        side,
    )
}

fn intersection_size(x: &BTreeSet<String>, y: &BTreeSet<String>) -> usize {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    small.iter().filter(|w| large.contains(*w)).count()
}

/// Cosine similarity of two non-empty word sets in [0, 1].
pub fn cosine(x: &BTreeSet<String>, y: &BTreeSet<String>) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(intersection_size(x, y) as f64 / ((x.len() * y.len()) as f64).sqrt())
}

/// Mean over `from` of each set's best cosine against `against`.
///
/// Only sets sharing at least one word can have a non-zero cosine, so an
/// inverted word index narrows each max to the overlapping sets. Per-set
/// maxima are summed in family order, keeping the result independent of
/// thread count.
fn mean_max_cosine(from: &[BTreeSet<String>], against: &[BTreeSet<String>]) -> f64 {
    let mut index: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, set) in against.iter().enumerate() {
        for w in set {
            index.entry(w).or_default().push(i);
        }
    }
    let maxima: Vec<f64> = from
        .par_iter()
        .map(|x| {
            let mut candidates: Vec<usize> = x
                .iter()
                .filter_map(|w| index.get(w.as_str()))
                .flatten()
                .copied()
                .collect();
            candidates.sort_unstable();
            candidates.dedup();
            candidates
                .into_iter()
                .map(|i| {
                    intersection_size(x, &against[i]) as f64
                        / ((x.len() * against[i].len()) as f64).sqrt()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    maxima.iter().sum::<f64>() / from.len() as f64
}

/// Mean best-match cosine of each extracted synset against the gold family.
pub fn precision(extracted: &MonolingualSynsetSet, gold: &MonolingualSynsetSet) -> Result<f64> {
    if extracted.is_empty() {
        return Err(Error::EmptyExtracted);
    }
    if gold.is_empty() {
        return Err(Error::EmptyGold);
    }
    debug_assert_eq!(extracted.lang(), gold.lang());
    Ok(mean_max_cosine(extracted.sets(), gold.sets()))
}

/// Mean best-match cosine of each gold synset against the extracted family.
pub fn recall(extracted: &MonolingualSynsetSet, gold: &MonolingualSynsetSet) -> Result<f64> {
    if extracted.is_empty() {
        return Err(Error::EmptyExtracted);
    }
    if gold.is_empty() {
        return Err(Error::EmptyGold);
    }
    debug_assert_eq!(extracted.lang(), gold.lang());
    Ok(mean_max_cosine(gold.sets(), extracted.sets()))
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f_measure(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * (p * r) / (p + r)
    } else {
        0.0
    }
}

/// The configuration a report was produced under.
#[derive(Debug, Clone, Serialize)]
pub struct ReportConfig {
    pub k_max: Option<usize>,
    pub policy: Option<String>,
    pub consolidate: Option<bool>,
    pub trivial_pairs: Option<bool>,
    pub include_monolingual_gold: bool,
    /// Which extracted synsets enter the precision denominator:
    /// `all-extracted` or `cycles-only`.
    pub denominator: String,
}

impl ReportConfig {
    pub fn for_extraction(extraction: &ExtractionConfig, include_monolingual_gold: bool) -> Self {
        ReportConfig {
            k_max: Some(extraction.k_max),
            policy: Some(extraction.policy.to_string()),
            consolidate: Some(extraction.consolidate),
            trivial_pairs: Some(extraction.trivial_pairs),
            include_monolingual_gold,
            denominator: "all-extracted".to_owned(),
        }
    }

    pub fn pre_extracted(include_monolingual_gold: bool) -> Self {
        ReportConfig {
            k_max: None,
            policy: None,
            consolidate: None,
            trivial_pairs: None,
            include_monolingual_gold,
            denominator: "all-extracted".to_owned(),
        }
    }

    /// Row label mirroring the usual results-table convention.
    pub fn setting_label(&self) -> String {
        let mut label = match (self.k_max, self.consolidate) {
            (Some(k), Some(true)) => format!("k={k}, with consolidation"),
            (Some(k), Some(false)) => format!("k={k}, no consolidation"),
            _ => "pre-extracted".to_owned(),
        };
        if self.denominator == "cycles-only" {
            label.push_str(" (cycles-only)");
        }
        label
    }
}

/// Per-side precision/recall/F-measure, full precision, plus the run
/// configuration that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub side: String,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// Deduplicated projected synsets scored (the precision denominator).
    pub extracted_count: usize,
    /// Deduplicated gold sets scored (the recall denominator).
    pub gold_count: usize,
    pub config: ReportConfig,
}

/// Both sides' reports; the cycles-only variants exclude trivial-pair
/// synsets from the extracted family and are present when the run emitted
/// any.
#[derive(Debug, Clone, Serialize)]
pub struct ScoreSet {
    pub l1: MetricsReport,
    pub l2: MetricsReport,
    pub l1_cycles_only: Option<MetricsReport>,
    pub l2_cycles_only: Option<MetricsReport>,
}

impl ScoreSet {
    pub fn all_reports(&self) -> Vec<&MetricsReport> {
        let mut out = vec![&self.l1];
        if let Some(r) = &self.l1_cycles_only {
            out.push(r);
        }
        out.push(&self.l2);
        if let Some(r) = &self.l2_cycles_only {
            out.push(r);
        }
        out
    }
}

fn side_report(
    synsets: &[BilingualSynset],
    gold_precision: &MonolingualSynsetSet,
    gold_recall: &MonolingualSynsetSet,
    side: LanguageTag,
    label: &str,
    config: ReportConfig,
) -> Result<MetricsReport> {
    let extracted = project(synsets, side);
    let p = precision(&extracted, gold_precision)?;
    let r = recall(&extracted, gold_recall)?;
    Ok(MetricsReport {
        side: label.to_owned(),
        precision: p,
        recall: r,
        f_measure: f_measure(p, r),
        extracted_count: extracted.len(),
        gold_count: gold_recall.len(),
        config,
    })
}

/// Scores synsets against gold on both sides.
///
/// Precision is always measured against bilingual gold synsets; gold
/// entries with an empty side participate only in recall, on their
/// non-empty side (they reach this function only when the caller opted in).
pub fn score_synsets(
    synsets: &[BilingualSynset],
    gold: &[GoldSynset],
    labels: &LanguageLabels,
    template: &ReportConfig,
) -> Result<ScoreSet> {
    let bilingual: Vec<GoldSynset> = gold.iter().filter(|s| s.is_bilingual()).cloned().collect();
    let has_trivial = synsets.iter().any(|s| s.provenance().is_trivial());
    let has_cyclic = synsets.iter().any(|s| !s.provenance().is_trivial());
    let cycles_only: Vec<BilingualSynset> = if has_trivial && has_cyclic {
        synsets
            .iter()
            .filter(|s| !s.provenance().is_trivial())
            .cloned()
            .collect()
    } else {
        Vec::new()
    };

    let mut reports = ScoreSet {
        l1: side_report(
            synsets,
            &project_gold(&bilingual, LanguageTag::L1),
            &project_gold(gold, LanguageTag::L1),
            LanguageTag::L1,
            labels.label(LanguageTag::L1),
            template.clone(),
        )?,
        l2: side_report(
            synsets,
            &project_gold(&bilingual, LanguageTag::L2),
            &project_gold(gold, LanguageTag::L2),
            LanguageTag::L2,
            labels.label(LanguageTag::L2),
            template.clone(),
        )?,
        l1_cycles_only: None,
        l2_cycles_only: None,
    };
    if !cycles_only.is_empty() {
        let mut variant = template.clone();
        variant.denominator = "cycles-only".to_owned();
        reports.l1_cycles_only = Some(side_report(
            &cycles_only,
            &project_gold(&bilingual, LanguageTag::L1),
            &project_gold(gold, LanguageTag::L1),
            LanguageTag::L1,
            labels.label(LanguageTag::L1),
            variant.clone(),
        )?);
        reports.l2_cycles_only = Some(side_report(
            &cycles_only,
            &project_gold(&bilingual, LanguageTag::L2),
            &project_gold(gold, LanguageTag::L2),
            LanguageTag::L2,
            labels.label(LanguageTag::L2),
            variant,
        )?);
    }
    Ok(reports)
}

/// Full reconstruction experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub extraction: ExtractionConfig,
    /// Keep gold synsets with an empty side in recall scoring on their
    /// non-empty side. They are never flattened into pairs. Off by default:
    /// the pipeline is bilingual end to end.
    pub include_monolingual_gold: bool,
    pub labels: LanguageLabels,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            extraction: ExtractionConfig {
                trivial_pairs: true,
                ..ExtractionConfig::default()
            },
            include_monolingual_gold: false,
            labels: LanguageLabels::default(),
        }
    }
}

/// Everything a reconstruction run produces.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub scores: ScoreSet,
    pub synsets: Vec<BilingualSynset>,
    pub stats: PipelineStats,
    /// Gold synsets with an empty side, excluded from flattening.
    pub monolingual_gold: usize,
}

/// Rebuilds synsets from their own flattened pairs and scores the result.
///
/// Pipeline: flatten -> build graph -> enumerate cycles -> candidates ->
/// consolidate -> trivial pairs -> project and score each side.
pub fn run_experiment(gold: &[GoldSynset], config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    if gold.is_empty() {
        return Err(Error::EmptyGold);
    }
    let bilingual: Vec<GoldSynset> = gold.iter().filter(|s| s.is_bilingual()).cloned().collect();
    let monolingual_gold = gold.len() - bilingual.len();
    if bilingual.is_empty() {
        return Err(Error::EmptyGold);
    }
    let pairs = flatten_synsets(&bilingual)?;
    let Extraction { synsets, stats, .. } = extract(&pairs, &config.extraction)?;
    let scoring_gold: &[GoldSynset] = if config.include_monolingual_gold {
        gold
    } else {
        &bilingual
    };
    let template = ReportConfig::for_extraction(&config.extraction, config.include_monolingual_gold);
    let scores = score_synsets(&synsets, scoring_gold, &config.labels, &template)?;
    Ok(ExperimentOutcome {
        scores,
        synsets,
        stats,
        monolingual_gold,
    })
}

fn percent(x: f64) -> String {
    format!("{:.1}", x * 100.0)
}

/// Renders reports as an aligned text table, percentages to one decimal.
pub fn render_reports(reports: &[&MetricsReport]) -> String {
    let mut rows: Vec<[String; 7]> = vec![[
        "side".to_owned(),
        "setting".to_owned(),
        "Precision".to_owned(),
        "Recall".to_owned(),
        "F-Measure".to_owned(),
        "extracted".to_owned(),
        "gold".to_owned(),
    ]];
    for report in reports {
        rows.push([
            report.side.clone(),
            report.config.setting_label(),
            percent(report.precision),
            percent(report.recall),
            percent(report.f_measure),
            report.extracted_count.to_string(),
            report.gold_count.to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..7)
        .map(|col| rows.iter().map(|row| row[col].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        for (col, cell) in row.iter().enumerate() {
            if col > 0 {
                out.push_str("  ");
            }
            if col < 2 {
                out.push_str(&format!("{:<width$}", cell, width = widths[col]));
            } else {
                out.push_str(&format!("{:>width$}", cell, width = widths[col]));
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    }
    out
}

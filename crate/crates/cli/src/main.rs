//! `bisyn` — extract bilingual synonym sets from a flat translation
//! dictionary, and score extractions against gold synset inventories.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use bisyn::cycle::dump_cycles;
use bisyn::eval::{
    render_reports, run_experiment, score_synsets, ExperimentConfig, ReportConfig, ScoreSet,
};
use bisyn::lexicon::{
    load_gold_synsets, load_pairs, serialize_pairs, LanguageLabels, PairSet,
};
use bisyn::pipeline::{extract, Extraction, ExtractionConfig, PipelineStats};
use bisyn::synset::{
    read_synsets_jsonl, read_synsets_tsv, write_synsets_jsonl, write_synsets_tsv,
    BilingualSynset, ConsolidationPolicy,
};

#[derive(Parser)]
#[command(name = "bisyn", version, about = "Bilingual synonym set extraction")]
struct Cli {
    /// Worker threads for cycle enumeration and scoring (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract synsets from a pairs file.
    Extract(ExtractArgs),
    /// Flatten a gold synset file into translation pairs.
    Flatten(FlattenArgs),
    /// Score a pre-extracted synset file against a gold synset file.
    Evaluate(EvaluateArgs),
    /// Flatten a gold inventory, re-extract, and score the reconstruction.
    Experiment(ExperimentArgs),
    /// Print graph and cycle counts without extracting.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    SharedWordEachSide,
    SharedPair,
    Jaccard,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Tsv,
    Jsonl,
}

fn parse_k(s: &str) -> Result<usize, String> {
    let k: usize = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if k < 4 || !k.is_multiple_of(2) {
        return Err(format!(
            "cycle length bound must be an even integer >= 4; bilingual cycles \
             alternate languages and have an even number of nodes, so an odd \
             bound of {k} admits exactly the cycles of {}",
            if k >= 5 { k - 1 } else { 4 }
        ));
    }
    Ok(k)
}

#[derive(Args)]
struct PipelineArgs {
    /// Maximum number of nodes on a cycle (even, >= 4).
    #[arg(long = "k", value_parser = parse_k, default_value = "6")]
    k_max: usize,

    /// Skip the consolidation step.
    #[arg(long)]
    no_consolidate: bool,

    /// How overlapping candidate synsets merge.
    #[arg(long, value_enum, default_value = "shared-word-each-side")]
    policy: PolicyArg,

    /// Jaccard threshold in (0, 1]; only used with --policy jaccard.
    #[arg(long, default_value = "0.5")]
    theta: f64,
}

impl PipelineArgs {
    fn to_config(&self, trivial_pairs: bool) -> Result<ExtractionConfig> {
        let policy = match self.policy {
            PolicyArg::SharedWordEachSide => ConsolidationPolicy::SharedWordEachSide,
            PolicyArg::SharedPair => ConsolidationPolicy::SharedPair,
            PolicyArg::Jaccard => {
                if !(self.theta > 0.0 && self.theta <= 1.0) {
                    bail!("--theta must be in (0, 1], got {}", self.theta);
                }
                ConsolidationPolicy::Jaccard(self.theta)
            }
        };
        Ok(ExtractionConfig {
            k_max: self.k_max,
            consolidate: !self.no_consolidate,
            policy,
            trivial_pairs,
        })
    }
}

#[derive(Args)]
struct LabelArgs {
    /// Label for the first (left column) language.
    #[arg(long, default_value = "l1")]
    l1: String,

    /// Label for the second (right column) language.
    #[arg(long, default_value = "l2")]
    l2: String,
}

impl LabelArgs {
    fn labels(&self) -> Result<LanguageLabels> {
        LanguageLabels::new(&self.l1, &self.l2)
            .context("invalid --l1/--l2 labels")
            .map_err(config_error)
    }
}

#[derive(Args)]
struct ExtractArgs {
    /// Pairs file: `l1_word<TAB>l2_word` per line.
    #[arg(long)]
    pairs: PathBuf,

    #[command(flatten)]
    pipeline: PipelineArgs,

    /// Also emit `{a}={e}` synsets for pairs whose words sit on no cycle
    /// (off by default for extraction).
    #[arg(long)]
    trivial_pairs: bool,

    #[command(flatten)]
    labels: LabelArgs,

    /// Output synset format.
    #[arg(long, value_enum, default_value = "tsv")]
    format: FormatArg,

    /// Write synsets here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Write the graph edge list here, for diffing.
    #[arg(long)]
    dump_graph: Option<PathBuf>,

    /// Write the enumerated cycles here, for diffing.
    #[arg(long)]
    dump_cycles: Option<PathBuf>,
}

#[derive(Args)]
struct FlattenArgs {
    /// Gold synset file: `id<TAB>w|w<TAB>w|w` per line.
    #[arg(long)]
    gold: PathBuf,

    /// Write pairs here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Extracted synsets (TSV or JSONL, detected from --format).
    #[arg(long)]
    extracted: PathBuf,

    /// Format of the extracted synset file.
    #[arg(long, value_enum, default_value = "tsv")]
    format: FormatArg,

    /// Gold synset file.
    #[arg(long)]
    gold: PathBuf,

    /// Score gold synsets with an empty side in recall on their non-empty
    /// side (they are excluded entirely by default).
    #[arg(long)]
    include_monolingual_gold: bool,

    #[command(flatten)]
    labels: LabelArgs,

    /// Emit the reports as JSON instead of a text table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Gold synset file to flatten and rebuild.
    #[arg(long)]
    gold: PathBuf,

    #[command(flatten)]
    pipeline: PipelineArgs,

    /// Disable the trivial-pair fallback (on by default for experiments).
    #[arg(long)]
    no_trivial_pairs: bool,

    /// Score gold synsets with an empty side in recall on their non-empty
    /// side (they are excluded entirely by default).
    #[arg(long)]
    include_monolingual_gold: bool,

    #[command(flatten)]
    labels: LabelArgs,

    /// Emit the reports as JSON instead of a text table.
    #[arg(long)]
    json: bool,

    /// Also write the extracted synsets here (TSV).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Pairs file to analyze.
    #[arg(long)]
    pairs: PathBuf,

    #[command(flatten)]
    pipeline: PipelineArgs,

    #[command(flatten)]
    labels: LabelArgs,

    /// Write the graph edge list here.
    #[arg(long)]
    dump_graph: Option<PathBuf>,

    /// Write the enumerated cycles here.
    #[arg(long)]
    dump_cycles: Option<PathBuf>,
}

/// Marker for errors that should exit with status 2 (bad configuration)
/// rather than 1 (operational failure).
#[derive(Debug)]
struct ConfigError(anyhow::Error);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl std::error::Error for ConfigError {}

fn config_error(err: anyhow::Error) -> anyhow::Error {
    anyhow::Error::new(ConfigError(err))
}

fn open_input(path: &Path) -> Result<impl Read> {
    File::open(path).with_context(|| format!("cannot open `{}`", path.display()))
}

fn with_output<F>(out: &Option<PathBuf>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create `{}`", path.display()))?;
            let mut writer = BufWriter::new(file);
            write(&mut writer)?;
            writer.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut writer = BufWriter::new(stdout.lock());
            write(&mut writer)?;
            writer.flush()?;
        }
    }
    Ok(())
}

fn write_dumps(
    extraction: &Extraction,
    labels: &LanguageLabels,
    dump_graph: &Option<PathBuf>,
    dump_cycles_path: &Option<PathBuf>,
) -> Result<()> {
    if let Some(path) = dump_graph {
        std::fs::write(path, extraction.graph.dump_edges(labels))
            .with_context(|| format!("cannot write `{}`", path.display()))?;
    }
    if let Some(path) = dump_cycles_path {
        std::fs::write(path, dump_cycles(&extraction.cycles, &extraction.graph, labels))
            .with_context(|| format!("cannot write `{}`", path.display()))?;
    }
    Ok(())
}

fn summary_line(stats: &PipelineStats) -> String {
    format!(
        "pairs={} nodes={} edges={} cycles={} candidates={} consolidated={} trivial={} final={}",
        stats.pair_count,
        stats.node_count,
        stats.edge_count,
        stats.cycle_count,
        stats.candidate_count,
        stats.consolidated_count,
        stats.trivial_count,
        stats.final_count,
    )
}

fn load_pairs_file(path: &Path) -> Result<PairSet> {
    let loaded = load_pairs(open_input(path)?)
        .with_context(|| format!("failed to parse `{}`", path.display()))?;
    if loaded.report.duplicates > 0 {
        eprintln!("note: {} duplicate pair(s) merged", loaded.report.duplicates);
    }
    Ok(loaded.pairs)
}

fn load_gold_file(path: &Path) -> Result<Vec<bisyn::lexicon::GoldSynset>> {
    let loaded = load_gold_synsets(open_input(path)?)
        .with_context(|| format!("failed to parse `{}`", path.display()))?;
    if loaded.report.within_side_duplicates > 0 {
        eprintln!(
            "note: {} repeated word(s) within a synset side collapsed",
            loaded.report.within_side_duplicates
        );
    }
    Ok(loaded.synsets)
}

fn write_synsets(
    synsets: &[BilingualSynset],
    format: FormatArg,
    out: &Option<PathBuf>,
) -> Result<()> {
    with_output(out, |w| {
        match format {
            FormatArg::Tsv => write_synsets_tsv(synsets, w)?,
            FormatArg::Jsonl => write_synsets_jsonl(synsets, w)?,
        }
        Ok(())
    })
}

fn reports_json(scores: &ScoreSet, stats: Option<&PipelineStats>) -> String {
    let mut value = serde_json::json!({ "reports": scores.all_reports() });
    if let Some(stats) = stats {
        value["stats"] = serde_json::to_value(stats).expect("stats serialize");
    }
    serde_json::to_string_pretty(&value).expect("reports serialize")
}

fn cmd_extract(args: &ExtractArgs) -> Result<()> {
    let labels = args.labels.labels()?;
    let config = args.pipeline.to_config(args.trivial_pairs).map_err(config_error)?;
    let pairs = load_pairs_file(&args.pairs)?;
    let extraction = extract(&pairs, &config)?;
    write_dumps(&extraction, &labels, &args.dump_graph, &args.dump_cycles)?;
    write_synsets(&extraction.synsets, args.format, &args.out)?;
    eprintln!("{}", summary_line(&extraction.stats));
    Ok(())
}

fn cmd_flatten(args: &FlattenArgs) -> Result<()> {
    let synsets = load_gold_file(&args.gold)?;
    if synsets.is_empty() {
        return Err(bisyn::Error::EmptyInput.into());
    }
    let bilingual: Vec<_> = synsets.iter().filter(|s| s.is_bilingual()).cloned().collect();
    let skipped = synsets.len() - bilingual.len();
    if skipped > 0 {
        eprintln!("note: {skipped} gold synset(s) with an empty side skipped");
    }
    let pairs = bisyn::lexicon::flatten_synsets(&bilingual)?;
    with_output(&args.out, |w| {
        serialize_pairs(&pairs, w)?;
        Ok(())
    })?;
    eprintln!("synsets={} pairs={}", bilingual.len(), pairs.len());
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<()> {
    let labels = args.labels.labels()?;
    let reader = BufReader::new(open_input(&args.extracted)?);
    let synsets = match args.format {
        FormatArg::Tsv => read_synsets_tsv(reader),
        FormatArg::Jsonl => read_synsets_jsonl(reader),
    }
    .with_context(|| format!("failed to parse `{}`", args.extracted.display()))?;
    let gold = load_gold_file(&args.gold)?;
    let scoring_gold: Vec<_> = if args.include_monolingual_gold {
        gold
    } else {
        gold.into_iter().filter(|s| s.is_bilingual()).collect()
    };
    let template = ReportConfig::pre_extracted(args.include_monolingual_gold);
    let scores = score_synsets(&synsets, &scoring_gold, &labels, &template)?;
    if args.json {
        println!("{}", reports_json(&scores, None));
    } else {
        print!("{}", render_reports(&scores.all_reports()));
    }
    Ok(())
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<()> {
    let labels = args.labels.labels()?;
    let extraction = args
        .pipeline
        .to_config(!args.no_trivial_pairs)
        .map_err(config_error)?;
    let config = ExperimentConfig {
        extraction,
        include_monolingual_gold: args.include_monolingual_gold,
        labels,
    };
    let gold = load_gold_file(&args.gold)?;
    let outcome = run_experiment(&gold, &config)?;
    if outcome.monolingual_gold > 0 {
        eprintln!(
            "note: {} gold synset(s) with an empty side excluded from flattening",
            outcome.monolingual_gold
        );
    }
    if let Some(path) = &args.out {
        write_synsets(&outcome.synsets, FormatArg::Tsv, &Some(path.clone()))?;
    }
    if args.json {
        println!("{}", reports_json(&outcome.scores, Some(&outcome.stats)));
    } else {
        print!("{}", render_reports(&outcome.scores.all_reports()));
    }
    eprintln!("{}", summary_line(&outcome.stats));
    Ok(())
}

fn cmd_stats(args: &StatsArgs) -> Result<()> {
    let labels = args.labels.labels()?;
    let config = args.pipeline.to_config(false).map_err(config_error)?;
    let pairs = load_pairs_file(&args.pairs)?;
    let extraction = extract(&pairs, &config)?;
    write_dumps(&extraction, &labels, &args.dump_graph, &args.dump_cycles)?;
    let stats = &extraction.stats;
    println!("pairs\t{}", stats.pair_count);
    println!("nodes\t{}", stats.node_count);
    println!("edges\t{}", stats.edge_count);
    println!("cycles\t{}", stats.cycle_count);
    for len in (4..=args.pipeline.k_max).step_by(2) {
        let count = extraction.cycles.iter().filter(|c| c.len() == len).count();
        println!("cycles_len_{len}\t{count}");
    }
    println!("candidates\t{}", stats.candidate_count);
    println!("consolidated\t{}", stats.consolidated_count);
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(config_error(anyhow::anyhow!("--threads must be >= 1")));
        }
        // Ignore the error if a pool already exists (e.g. under tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match &cli.command {
        Command::Extract(args) => cmd_extract(args),
        Command::Flatten(args) => cmd_flatten(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Stats(args) => cmd_stats(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

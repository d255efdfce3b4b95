use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "moodseries",
    version,
    about = "Six-dimension daily mood series from timestamped short texts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Filter and score a corpus into a per-message dump.
    Score(ScoreArgs),
    /// Average scored messages into a raw daily series.
    Aggregate(AggregateArgs),
    /// Z-score or variance-normalize a raw series.
    Normalize(NormalizeArgs),
    /// Spearman correlation matrix between the six dimensions.
    Correlate(CorrelateArgs),
    /// Mann-Whitney comparisons between named periods.
    ComparePeriods(CompareArgs),
    /// Values around one date, per dimension.
    EventWindow(EventArgs),
    /// Join a series with an external daily index.
    AlignIndex(AlignArgs),
    /// End-to-end run from a config file and/or flags.
    Run(Box<RunArgs>),
    /// Corpus funnel and daily message counts.
    Diag(DiagArgs),
}

/// Inputs that decide which messages count and how they score.
#[derive(Args, Debug, Clone)]
pub struct ScorerArgs {
    /// Corpus files (JSON Lines or ts<TAB>text); `-` reads stdin.
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    pub corpus: Vec<PathBuf>,
    /// Lexicon file; defaults to the bundled demonstration lexicon.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Stopword list; defaults to the bundled 214-word list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Candidate pattern file; defaults to the built-in mood patterns.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    /// Scoring threads; defaults to the number of cores.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct RangeArgs {
    #[arg(long, requires = "end")]
    pub start: Option<NaiveDate>,
    #[arg(long, requires = "start")]
    pub end: Option<NaiveDate>,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub scorer: ScorerArgs,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["corpus", "scored"]))]
pub struct AggregateArgs {
    /// Corpus files to filter, score and aggregate in one pass.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub corpus: Vec<PathBuf>,
    /// A dump written by `score`.
    #[arg(long, conflicts_with = "corpus")]
    pub scored: Option<PathBuf>,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Raw,
    Zscore,
    Variance,
}

impl From<Kind> for moodseries::SeriesKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Raw => moodseries::SeriesKind::Raw,
            Kind::Zscore => moodseries::SeriesKind::ZScore,
            Kind::Variance => moodseries::SeriesKind::VarianceNormalized,
        }
    }
}

/// A series file and the kind it should be analysed as.
#[derive(Args, Debug, Clone)]
pub struct SeriesInput {
    /// Series CSV; a raw series is normalized to `--kind` first.
    #[arg(long)]
    pub series: PathBuf,
    /// Window half-width in days used when normalizing.
    #[arg(long, default_value_t = moodseries::series::DEFAULT_WINDOW)]
    pub k: u32,
}

#[derive(Args, Debug)]
pub struct NormalizeArgs {
    #[command(flatten)]
    pub input: SeriesInput,
    #[arg(long, value_enum, default_value_t = Kind::Zscore)]
    pub kind: Kind,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub input: SeriesInput,
    #[arg(long, value_enum, default_value_t = Kind::Zscore)]
    pub kind: Kind,
    /// 6x6 matrix CSV; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Long-form pairs CSV with sample sizes and approximate p-values.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: SeriesInput,
    #[arg(long, value_enum, default_value_t = Kind::Variance)]
    pub kind: Kind,
    /// `DJIA`, `WTI`, or a `name,start,end` file.
    #[arg(long)]
    pub periods: String,
    #[arg(long, default_value_t = moodseries::stats::DEFAULT_SIGNIFICANCE)]
    pub threshold: f64,
    /// All comparisons; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Only comparisons with p below the threshold.
    #[arg(long)]
    pub significant: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EventArgs {
    #[command(flatten)]
    pub input: SeriesInput,
    #[arg(long, value_enum, default_value_t = Kind::Zscore)]
    pub kind: Kind,
    #[arg(long)]
    pub date: NaiveDate,
    /// Days either side of the event.
    #[arg(long, default_value_t = moodseries::analysis::DEFAULT_EVENT_HALF_WIDTH)]
    pub h: u32,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Join {
    Inner,
    Outer,
}

#[derive(Args, Debug)]
pub struct AlignArgs {
    #[command(flatten)]
    pub input: SeriesInput,
    #[arg(long, value_enum, default_value_t = Kind::Zscore)]
    pub kind: Kind,
    /// Index CSV with `date,value` rows.
    #[arg(long)]
    pub index: PathBuf,
    /// Column name for the index; defaults to the file stem.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, value_enum, default_value_t = Join::Inner)]
    pub join: Join,
    /// `builtin` or a `date[..end],label` file; adds an event column.
    #[arg(long)]
    pub annotations: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Every config key, overridable from the command line.
#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<String>,
    #[arg(long)]
    pub lexicon: Option<String>,
    #[arg(long)]
    pub stopwords: Option<String>,
    #[arg(long)]
    pub patterns: Option<String>,
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub end: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub threshold: Option<String>,
    #[arg(long)]
    pub periods: Option<String>,
    #[arg(long)]
    pub compare_kind: Option<String>,
    #[arg(long)]
    pub correlate_kind: Option<String>,
    #[arg(long)]
    pub events: Option<String>,
    #[arg(long)]
    pub event_half_width: Option<String>,
    #[arg(long)]
    pub index: Option<String>,
    #[arg(long)]
    pub annotations: Option<String>,
    #[arg(long)]
    pub output: Option<String>,
    #[arg(long)]
    pub workers: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
}

impl RunArgs {
    pub fn overrides(&self) -> Vec<(&'static str, &String)> {
        let pairs = [
            ("corpus", &self.corpus),
            ("lexicon", &self.lexicon),
            ("stopwords", &self.stopwords),
            ("patterns", &self.patterns),
            ("start", &self.start),
            ("end", &self.end),
            ("k", &self.k),
            ("threshold", &self.threshold),
            ("periods", &self.periods),
            ("compare_kind", &self.compare_kind),
            ("correlate_kind", &self.correlate_kind),
            ("events", &self.events),
            ("event_half_width", &self.event_half_width),
            ("index", &self.index),
            ("annotations", &self.annotations),
            ("output", &self.output),
            ("workers", &self.workers),
            ("seed", &self.seed),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
            .collect()
    }
}

#[derive(Args, Debug)]
pub struct DiagArgs {
    #[command(flatten)]
    pub scorer: ScorerArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Directory for diagnostics.csv, daily_counts.csv and sample.csv;
    /// stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Reservoir-sample this many scored messages for inspection.
    #[arg(long, default_value_t = 0)]
    pub sample: usize,
    /// Seed for the sample.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

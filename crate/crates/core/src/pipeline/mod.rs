//! End-to-end run: ingest, filter, score, aggregate, normalize, test.
//!
//! Lines are parsed and scored in parallel batches; results are folded in
//! input order into an exact per-day accumulator, so every output is
//! byte-identical for any worker count. Outputs are written to a staging
//! directory and moved into place only when every stage has succeeded.

pub mod config;
pub mod ingest;

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analysis::{
    align_with_index, aligned_csv, builtin_periods, events_2008, extract_event_window, parse_annotations,
    parse_periods, Annotation, IndexSeries, JoinMode, Period,
};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::scoring::{Outcome, ScoredMessage, Scorer};
use crate::series::{
    series_to_csv_string, variance_normalize, zscore_normalize, DailyAggregator, DateRange, MoodSeries, SeriesError,
    SeriesKind,
};
use crate::stats::{compare_periods, correlation_matrix, ComparisonReport, CorrelationMatrix};
use crate::textnorm::{PatternSet, RawMessage, StopwordList};

pub use config::{load_config_file, parse_config_text, RunConfig};
pub use ingest::{ingest, open_corpus, parse_line, CorpusReader, LineBatches};

const BATCH_LINES: usize = 8192;

/// Where each input line went.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunDiagnostics {
    /// Every input line, well-formed or not.
    pub total: u64,
    pub malformed: u64,
    pub candidate_rejected: u64,
    /// Candidates with no lexicon match.
    pub zero_dropped: u64,
    /// Scored, but dated outside the configured range.
    pub out_of_range: u64,
    /// Scored and aggregated into some day.
    pub retained: u64,
    pub day_counts: BTreeMap<chrono::NaiveDate, u64>,
}

impl RunDiagnostics {
    /// Well-formed records that passed the candidate filter.
    pub fn candidates(&self) -> u64 {
        self.total - self.malformed - self.candidate_rejected
    }

    /// Candidates with a non-zero mood vector.
    pub fn scored(&self) -> u64 {
        self.candidates() - self.zero_dropped
    }

    /// Every line is accounted for exactly once, and the per-day counts
    /// add up to the retained total.
    pub fn is_conserved(&self) -> bool {
        self.total == self.retained + self.out_of_range + self.candidate_rejected + self.zero_dropped + self.malformed
            && self.day_counts.values().sum::<u64>() == self.retained
    }

    pub fn to_csv(&self) -> String {
        let rows = [
            ("total", self.total),
            ("malformed", self.malformed),
            ("candidate_rejected", self.candidate_rejected),
            ("candidates", self.candidates()),
            ("zero_dropped", self.zero_dropped),
            ("scored", self.scored()),
            ("out_of_range", self.out_of_range),
            ("retained", self.retained),
        ];
        let mut out = String::from("stage,count\n");
        for (k, v) in rows {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }

    /// `date,message_count` for every day of `series`, zero days included.
    pub fn daily_counts_csv(series: &MoodSeries) -> String {
        let mut out = String::from("date,message_count\n");
        for day in series.days() {
            out.push_str(&format!("{},{}\n", day.date, day.message_count));
        }
        out
    }
}

enum LineResult {
    Malformed,
    Rejected,
    NoMatch,
    Scored(RawMessage, ScoredMessage),
}

fn classify_line(line: &str, scorer: &Scorer) -> LineResult {
    let Ok(msg) = parse_line(line) else {
        return LineResult::Malformed;
    };
    match scorer.classify(&msg) {
        Outcome::Rejected => LineResult::Rejected,
        Outcome::NoMatch => LineResult::NoMatch,
        Outcome::Scored(s) => LineResult::Scored(msg, s),
    }
}

/// Streams every corpus through `scorer`. `on_scored` sees each scored
/// message in input order, in range or not.
pub fn process_corpus<F>(
    paths: &[PathBuf],
    scorer: &Scorer,
    range: Option<DateRange>,
    workers: usize,
    mut on_scored: F,
) -> Result<(RunDiagnostics, DailyAggregator)>
where
    F: FnMut(&RawMessage, &ScoredMessage) -> Result<()>,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let mut diag = RunDiagnostics::default();
    let mut agg = DailyAggregator::new(range);
    for path in paths {
        let mut batches = LineBatches::new(open_corpus(path)?, path.display().to_string(), BATCH_LINES);
        while let Some(batch) = batches.next_batch()? {
            let results: Vec<LineResult> =
                pool.install(|| batch.par_iter().map(|line| classify_line(line, scorer)).collect());
            diag.total += results.len() as u64;
            for r in results {
                match r {
                    LineResult::Malformed => diag.malformed += 1,
                    LineResult::Rejected => diag.candidate_rejected += 1,
                    LineResult::NoMatch => diag.zero_dropped += 1,
                    LineResult::Scored(msg, scored) => {
                        on_scored(&msg, &scored)?;
                        agg.add_message(&scored);
                    }
                }
            }
        }
    }
    diag.out_of_range = agg.out_of_range();
    diag.retained = agg.in_range();
    diag.day_counts = agg.day_counts().collect();
    Ok((diag, agg))
}

/// Loads the scorer described by `cfg` (bundled defaults where unset).
pub fn load_scorer(cfg: &RunConfig) -> Result<Scorer> {
    let stopwords = match &cfg.stopwords {
        Some(p) => StopwordList::load(p)?,
        None => StopwordList::default_english(),
    };
    let patterns = match &cfg.patterns {
        Some(p) => PatternSet::load(p)?,
        None => PatternSet::default_mood(),
    };
    let lexicon = match &cfg.lexicon {
        Some(p) => Lexicon::load(p)?,
        None => Lexicon::demo(),
    };
    Ok(Scorer::new(stopwords, patterns, lexicon))
}

/// Returns `series` as `kind`, normalizing a raw series with window `k`.
pub fn prepare_series(series: &MoodSeries, kind: SeriesKind, k: u32) -> Result<MoodSeries> {
    if series.kind() == kind {
        return Ok(series.clone());
    }
    match kind {
        SeriesKind::ZScore => Ok(zscore_normalize(series, k)?),
        SeriesKind::VarianceNormalized => Ok(variance_normalize(series, k)?),
        SeriesKind::Raw => Err(SeriesError::NotRaw(series.kind()).into()),
    }
}

/// A period set by name (`DJIA`, `WTI`) or from a `name,start,end` file.
/// Returns the set's label and its periods.
pub fn load_period_set(source: &str) -> Result<(String, Vec<Period>)> {
    if config::is_builtin_period_set(source) {
        return Ok((source.to_ascii_lowercase(), builtin_periods(source)?));
    }
    let path = Path::new(source);
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "periods".into());
    Ok((label, parse_periods(&text, source)?))
}

/// `builtin` or a path to a `date[..end],label` file.
pub fn load_annotations(source: &str) -> Result<Vec<Annotation>> {
    if source == "builtin" {
        return Ok(events_2008());
    }
    let text = fs::read_to_string(source).map_err(|e| Error::io(source, e))?;
    Ok(parse_annotations(&text, source)?)
}

pub fn load_index(path: &Path) -> Result<IndexSeries> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "index".into());
    Ok(IndexSeries::read_csv(BufReader::new(file), &name, "")?)
}

/// Everything a run produced.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub diagnostics: RunDiagnostics,
    pub raw: MoodSeries,
    pub zscore: MoodSeries,
    pub variance: MoodSeries,
    /// `None` when fewer than three days carry data.
    pub correlation: Option<CorrelationMatrix>,
    pub comparisons: Vec<(String, ComparisonReport)>,
    /// Output file names in write order.
    pub files: Vec<String>,
}

/// Files staged in a scratch directory, published together.
struct Staging {
    dir: PathBuf,
    target: PathBuf,
    files: Vec<String>,
}

impl Staging {
    fn new(target: &Path) -> Result<Self> {
        fs::create_dir_all(target).map_err(|e| Error::io(target, e))?;
        let dir = target.join(format!(".staging-{}", std::process::id()));
        if dir.exists() {
            fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        fs::create_dir(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Staging {
            dir,
            target: target.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn publish(self) -> Result<Vec<String>> {
        for name in &self.files {
            let to = self.target.join(name);
            fs::rename(self.dir.join(name), &to).map_err(|e| Error::io(&to, e))?;
        }
        fs::remove_dir(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        Ok(self.files.clone())
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.dir);
    }
}

/// Runs every stage described by `cfg` and writes its outputs.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let scorer = load_scorer(cfg).map_err(|e| e.in_stage("load"))?;
    let period_sets = cfg
        .periods
        .iter()
        .map(|p| load_period_set(p))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("load"))?;
    let annotations = cfg
        .annotations
        .as_deref()
        .map(load_annotations)
        .transpose()
        .map_err(|e| e.in_stage("load"))?;
    let indices = cfg
        .index
        .iter()
        .map(|p| load_index(p))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("load"))?;

    let (diagnostics, agg) =
        process_corpus(&cfg.corpus, &scorer, cfg.range, cfg.workers, |_, _| Ok(())).map_err(|e| e.in_stage("score"))?;
    let raw = agg.finish();
    let zscore = zscore_normalize(&raw, cfg.k).map_err(|e| Error::from(e).in_stage("normalize"))?;
    let variance = variance_normalize(&raw, cfg.k).map_err(|e| Error::from(e).in_stage("normalize"))?;
    let pick = |kind: SeriesKind| match kind {
        SeriesKind::Raw => &raw,
        SeriesKind::ZScore => &zscore,
        SeriesKind::VarianceNormalized => &variance,
    };

    let correlate_on = pick(cfg.correlate_kind);
    let correlation = if correlate_on.non_empty_days() >= 3 {
        Some(correlation_matrix(correlate_on).map_err(|e| Error::from(e).in_stage("correlate"))?)
    } else {
        None
    };

    let mut comparisons = Vec::new();
    for (label, periods) in &period_sets {
        let report = compare_periods(pick(cfg.compare_kind), periods, cfg.threshold)
            .map_err(|e| Error::from(e).in_stage("compare"))?;
        comparisons.push((label.clone(), report));
    }

    let events = cfg
        .events
        .iter()
        .map(|&d| extract_event_window(pick(cfg.correlate_kind), d, cfg.event_half_width))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::from(e).in_stage("event"))?;

    let mut aligned = Vec::new();
    for index in &indices {
        let rows = align_with_index(pick(cfg.correlate_kind), index, JoinMode::Inner)
            .map_err(|e| Error::from(e).in_stage("align"))?;
        aligned.push((
            index.name.clone(),
            aligned_csv(&rows, &index.name, annotations.as_deref()),
        ));
    }

    let write = || -> Result<Vec<String>> {
        let mut out = Staging::new(&cfg.output)?;
        out.write("diagnostics.csv", &diagnostics.to_csv())?;
        out.write("daily_counts.csv", &RunDiagnostics::daily_counts_csv(&raw))?;
        out.write("series_raw.csv", &series_to_csv_string(&raw))?;
        out.write("series_zscore.csv", &series_to_csv_string(&zscore))?;
        out.write("series_variance.csv", &series_to_csv_string(&variance))?;
        if let Some(m) = &correlation {
            out.write("correlation.csv", &m.to_csv())?;
            out.write("correlation_pairs.csv", &m.pairs_csv())?;
        }
        for (label, report) in &comparisons {
            out.write(&format!("comparisons_{label}.csv"), &report.to_csv())?;
            out.write(
                &format!("comparisons_{label}_significant.csv"),
                &report.significant_csv(),
            )?;
        }
        for ev in &events {
            out.write(&format!("event_{}.csv", ev.event), &ev.to_csv())?;
        }
        for (name, csv) in &aligned {
            out.write(&format!("aligned_{name}.csv"), csv)?;
        }
        out.publish()
    };
    let files = write().map_err(|e| e.in_stage("write"))?;

    Ok(RunOutput {
        diagnostics,
        raw,
        zscore,
        variance,
        correlation,
        comparisons,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(dir: &Path, lines: &[&str]) -> PathBuf {
        let p = dir.join("corpus.jsonl");
        fs::write(&p, lines.iter().map(|l| format!("{l}\n")).collect::<String>()).unwrap();
        p
    }

    #[test]
    fn funnel_is_conserved() {
        let dir = tempfile::tempdir().unwrap();
        let path = corpus(
            dir.path(),
            &[
                r#"{"ts":"2008-08-01T10:00:00Z","text":"I feel sad today"}"#,
                r#"{"ts":"2008-08-01T11:00:00Z","text":"nothing to see"}"#,
                r#"{"ts":"2008-08-02T11:00:00Z","text":"I feel fine"}"#,
                "garbage",
                r#"{"ts":"2009-01-02T11:00:00Z","text":"I am so exhausted"}"#,
                r#"{"ts":"2008-08-03T11:00:00Z","text":"feel sad http://x"}"#,
            ],
        );
        let scorer = load_scorer(&RunConfig::new(vec![], "o".into())).unwrap();
        let range = DateRange::new("2008-08-01".parse().unwrap(), "2008-08-31".parse().unwrap()).unwrap();
        let (d, _) = process_corpus(&[path], &scorer, Some(range), 2, |_, _| Ok(())).unwrap();
        assert_eq!(d.total, 6);
        assert_eq!(d.malformed, 1);
        assert_eq!(d.candidate_rejected, 2);
        assert_eq!(d.zero_dropped, 1);
        assert_eq!(d.out_of_range, 1);
        assert_eq!(d.retained, 1);
        assert!(d.is_conserved());
    }

    #[test]
    fn empty_corpus_writes_empty_series() {
        let dir = tempfile::tempdir().unwrap();
        let path = corpus(dir.path(), &[]);
        let out = dir.path().join("out");
        let mut cfg = RunConfig::new(vec![path], out.clone());
        cfg.workers = 1;
        let run = run_pipeline(&cfg).unwrap();
        assert_eq!(run.diagnostics.total, 0);
        assert!(run.raw.is_empty());
        assert!(run.correlation.is_none());
        assert!(out.join("series_raw.csv").exists());
        assert!(!out.join(format!(".staging-{}", std::process::id())).exists());
    }

    #[test]
    fn failed_stage_leaves_no_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let path = corpus(dir.path(), &[r#"{"ts":"2008-08-01T10:00:00Z","text":"I feel sad"}"#]);
        let out = dir.path().join("out");
        let mut cfg = RunConfig::new(vec![path], out.clone());
        cfg.periods = vec!["DJIA".into()];
        let err = run_pipeline(&cfg).unwrap_err();
        assert!(err.to_string().starts_with("compare:"), "{err}");
        assert!(!out.exists() || fs::read_dir(&out).unwrap().next().is_none());
    }

    #[test]
    fn prepare_series_kinds() {
        let raw = MoodSeries::from_values(
            "2008-08-01".parse().unwrap(),
            &[Some([1.0; 6]), Some([2.0; 6]), Some([3.0; 6])],
        );
        assert_eq!(prepare_series(&raw, SeriesKind::Raw, 1).unwrap(), raw);
        let z = prepare_series(&raw, SeriesKind::ZScore, 1).unwrap();
        assert_eq!(z.kind(), SeriesKind::ZScore);
        assert!(prepare_series(&z, SeriesKind::VarianceNormalized, 1).is_err());
    }
}

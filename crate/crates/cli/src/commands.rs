use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::SecondsFormat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use moodseries::analysis::{align_with_index, aligned_csv, extract_event_window, JoinMode};
use moodseries::error::ParseError;
use moodseries::pipeline::{self, config, RunConfig, RunDiagnostics};
use moodseries::scoring::{parse_scored_csv_row, scored_csv_row, SCORED_CSV_HEADER};
use moodseries::series::{read_series_csv, series_to_csv_string, DailyAggregator, DateRange};
use moodseries::stats::{compare_periods, correlation_matrix};
use moodseries::{Error, MoodSeries, Result};

use crate::args::*;

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Score(a) => score(a),
        Command::Aggregate(a) => aggregate(a),
        Command::Normalize(a) => normalize(a),
        Command::Correlate(a) => correlate(a),
        Command::ComparePeriods(a) => compare(a),
        Command::EventWindow(a) => event_window(a),
        Command::AlignIndex(a) => align(a),
        Command::Run(a) => run(*a),
        Command::Diag(a) => diag(a),
    }
}

/// Writes `contents` to `path`, or to stdout when `path` is `None` or `-`.
fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path.filter(|p| p.as_os_str() != "-") {
        Some(p) => fs::write(p, contents).map_err(|e| Error::io(p, e)),
        None => io::stdout()
            .lock()
            .write_all(contents.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn output_writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path.filter(|p| p.as_os_str() != "-") {
        Some(p) => Ok(Box::new(BufWriter::new(File::create(p).map_err(|e| Error::io(p, e))?))),
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn run_config(scorer: &ScorerArgs, range: Option<DateRange>) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(scorer.corpus.clone(), PathBuf::new());
    cfg.lexicon = scorer.lexicon.clone();
    cfg.stopwords = scorer.stopwords.clone();
    cfg.patterns = scorer.patterns.clone();
    cfg.range = range;
    if let Some(w) = scorer.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn date_range(r: RangeArgs) -> Result<Option<DateRange>> {
    match (r.start, r.end) {
        (Some(s), Some(e)) => Ok(Some(DateRange::new(s, e).map_err(|e| Error::Config(e.to_string()))?)),
        _ => Ok(None),
    }
}

fn load_series(input: &SeriesInput, kind: Kind) -> Result<MoodSeries> {
    let path = &input.series;
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let series = read_series_csv(BufReader::new(file), &path.display().to_string())?;
    pipeline::prepare_series(&series, kind.into(), input.k)
}

fn score(a: ScoreArgs) -> Result<()> {
    let cfg = run_config(&a.scorer, None)?;
    let scorer = pipeline::load_scorer(&cfg)?;
    let mut out = output_writer(a.output.as_deref())?;
    let out_name = a.output.as_ref().map_or("<stdout>".into(), |p| p.display().to_string());
    writeln!(out, "{SCORED_CSV_HEADER}").map_err(|e| Error::io(&out_name, e))?;
    let (diag, _) = pipeline::process_corpus(&cfg.corpus, &scorer, None, cfg.workers, |_, scored| {
        writeln!(out, "{}", scored_csv_row(scored)).map_err(|e| Error::io(&out_name, e))
    })?;
    out.flush().map_err(|e| Error::io(&out_name, e))?;
    eprintln!(
        "scored {} of {} lines ({} malformed, {} rejected, {} without matches)",
        diag.scored(),
        diag.total,
        diag.malformed,
        diag.candidate_rejected,
        diag.zero_dropped
    );
    Ok(())
}

fn aggregate(a: AggregateArgs) -> Result<()> {
    let range = date_range(a.range)?;
    let agg = if let Some(path) = &a.scored {
        let mut agg = DailyAggregator::new(range);
        let source = path.display().to_string();
        let reader = pipeline::open_corpus(path)?;
        for (n, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if n == 0 && line.starts_with("datetime,") {
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (ts, v) = parse_scored_csv_row(&line).map_err(|m| ParseError::new(&source, n + 1, m))?;
            agg.add(ts.date_naive(), &v);
        }
        agg
    } else {
        let scorer_args = ScorerArgs {
            corpus: a.corpus.clone(),
            lexicon: a.lexicon.clone(),
            stopwords: a.stopwords.clone(),
            patterns: a.patterns.clone(),
            workers: a.workers,
        };
        let cfg = run_config(&scorer_args, range)?;
        let scorer = pipeline::load_scorer(&cfg)?;
        pipeline::process_corpus(&cfg.corpus, &scorer, range, cfg.workers, |_, _| Ok(()))?.1
    };
    if agg.out_of_range() > 0 {
        eprintln!("skipped {} messages outside the date range", agg.out_of_range());
    }
    emit(a.output.as_deref(), &series_to_csv_string(&agg.finish()))
}

fn normalize(a: NormalizeArgs) -> Result<()> {
    let series = load_series(&a.input, a.kind)?;
    emit(a.output.as_deref(), &series_to_csv_string(&series))
}

fn correlate(a: CorrelateArgs) -> Result<()> {
    let series = load_series(&a.input, a.kind)?;
    let m = correlation_matrix(&series)?;
    if let Some(p) = &a.pairs {
        emit(Some(p), &m.pairs_csv())?;
    }
    emit(a.output.as_deref(), &m.to_csv())
}

fn compare(a: CompareArgs) -> Result<()> {
    if !(a.threshold > 0.0 && a.threshold < 1.0) {
        return Err(Error::Config(format!("threshold {} is not in (0, 1)", a.threshold)));
    }
    let series = load_series(&a.input, a.kind)?;
    let (_, periods) = pipeline::load_period_set(&a.periods)?;
    let report = compare_periods(&series, &periods, a.threshold)?;
    if let Some(p) = &a.significant {
        emit(Some(p), &report.significant_csv())?;
    }
    emit(a.output.as_deref(), &report.to_csv())
}

fn event_window(a: EventArgs) -> Result<()> {
    let series = load_series(&a.input, a.kind)?;
    let window = extract_event_window(&series, a.date, a.h)?;
    if window.is_clipped() {
        eprintln!(
            "window clipped at the series boundary ({} days before, {} after)",
            window.clipped_before, window.clipped_after
        );
    }
    emit(a.output.as_deref(), &window.to_csv())
}

fn align(a: AlignArgs) -> Result<()> {
    let series = load_series(&a.input, a.kind)?;
    let mut index = pipeline::load_index(&a.index)?;
    if let Some(name) = &a.name {
        index.name = name.clone();
    }
    let mode = match a.join {
        Join::Inner => JoinMode::Inner,
        Join::Outer => JoinMode::Outer,
    };
    let rows = align_with_index(&series, &index, mode)?;
    let annotations = a.annotations.as_deref().map(pipeline::load_annotations).transpose()?;
    emit(
        a.output.as_deref(),
        &aligned_csv(&rows, &index.name, annotations.as_deref()),
    )
}

fn run(a: RunArgs) -> Result<()> {
    let mut map = match &a.config {
        Some(p) => config::load_config_file(p)?,
        None => BTreeMap::new(),
    };
    for (key, value) in a.overrides() {
        map.insert(key.to_string(), value.clone());
    }
    let cfg = RunConfig::from_map(&map)?;
    let out = pipeline::run_pipeline(&cfg)?;
    let d = &out.diagnostics;
    eprintln!(
        "{} lines, {} retained over {} days; wrote {} files to {}",
        d.total,
        d.retained,
        out.raw.len(),
        out.files.len(),
        cfg.output.display()
    );
    Ok(())
}

/// Algorithm R over the scored stream, seeded for reproducibility.
struct Reservoir {
    rng: ChaCha8Rng,
    capacity: usize,
    seen: u64,
    items: Vec<String>,
}

impl Reservoir {
    fn new(capacity: usize, seed: u64) -> Self {
        Reservoir {
            rng: ChaCha8Rng::seed_from_u64(seed),
            capacity,
            seen: 0,
            items: Vec::with_capacity(capacity),
        }
    }

    fn offer(&mut self, make: impl FnOnce() -> String) {
        if self.capacity == 0 {
            return;
        }
        self.seen += 1;
        if self.items.len() < self.capacity {
            self.items.push(make());
        } else {
            let j = self.rng.random_range(0..self.seen);
            if (j as usize) < self.capacity {
                self.items[j as usize] = make();
            }
        }
    }
}

fn diag(a: DiagArgs) -> Result<()> {
    let range = date_range(a.range)?;
    let cfg = run_config(&a.scorer, range)?;
    let scorer = pipeline::load_scorer(&cfg)?;
    let mut reservoir = Reservoir::new(a.sample, a.seed);
    let (diag, agg) = pipeline::process_corpus(&cfg.corpus, &scorer, range, cfg.workers, |msg, scored| {
        reservoir.offer(|| {
            let mut w = csv::Writer::from_writer(Vec::new());
            let ts = scored.timestamp.to_rfc3339_opts(SecondsFormat::AutoSi, true);
            let _ = w.write_record([ts.as_str(), msg.text.as_str()]);
            String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
        });
        Ok(())
    })?;
    debug_assert!(diag.is_conserved());
    let counts = RunDiagnostics::daily_counts_csv(&agg.finish());
    let sample: String = std::iter::once("datetime,text\n".to_string())
        .chain(reservoir.items)
        .collect();
    match a.output.as_deref().filter(|p| p.as_os_str() != "-") {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            emit(Some(&dir.join("diagnostics.csv")), &diag.to_csv())?;
            emit(Some(&dir.join("daily_counts.csv")), &counts)?;
            if a.sample > 0 {
                emit(Some(&dir.join("sample.csv")), &sample)?;
            }
            Ok(())
        }
        None => {
            let mut text = diag.to_csv();
            text.push('\n');
            text.push_str(&counts);
            if a.sample > 0 {
                text.push('\n');
                text.push_str(&sample);
            }
            emit(None, &text)
        }
    }
}

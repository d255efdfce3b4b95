//! Run configuration: a flat `key = value` file whose keys can all be
//! overridden by command-line flags of the same name.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::series::{DateRange, SeriesKind, DEFAULT_WINDOW};
use crate::stats::DEFAULT_SIGNIFICANCE;

/// Keys understood by [`RunConfig::from_map`].
pub const KEYS: &[&str] = &[
    "corpus",
    "lexicon",
    "stopwords",
    "patterns",
    "start",
    "end",
    "k",
    "threshold",
    "periods",
    "compare_kind",
    "correlate_kind",
    "events",
    "event_half_width",
    "index",
    "annotations",
    "output",
    "workers",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus: Vec<PathBuf>,
    /// `None` uses the bundled demonstration lexicon.
    pub lexicon: Option<PathBuf>,
    /// `None` uses the bundled 214-word list.
    pub stopwords: Option<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub range: Option<DateRange>,
    /// Window half-width in days.
    pub k: u32,
    pub threshold: f64,
    /// `DJIA`, `WTI`, or a `name,start,end` period file per entry.
    pub periods: Vec<String>,
    pub compare_kind: SeriesKind,
    pub correlate_kind: SeriesKind,
    pub events: Vec<NaiveDate>,
    pub event_half_width: u32,
    pub index: Vec<PathBuf>,
    /// `builtin` or a path; labels aligned-index output.
    pub annotations: Option<String>,
    pub output: PathBuf,
    pub workers: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(corpus: Vec<PathBuf>, output: PathBuf) -> Self {
        RunConfig {
            corpus,
            lexicon: None,
            stopwords: None,
            patterns: None,
            range: None,
            k: DEFAULT_WINDOW,
            threshold: DEFAULT_SIGNIFICANCE,
            periods: Vec::new(),
            compare_kind: SeriesKind::VarianceNormalized,
            correlate_kind: SeriesKind::ZScore,
            events: Vec::new(),
            event_half_width: crate::analysis::DEFAULT_EVENT_HALF_WIDTH,
            index: Vec::new(),
            annotations: None,
            output,
            workers: default_workers(),
            seed: 0,
        }
    }

    /// Builds a config from key/value pairs (file entries already
    /// overlaid with flags).
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        for key in map.keys() {
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key `{key}`")));
            }
        }
        let get = |k: &str| map.get(k).map(|v| v.trim()).filter(|v| !v.is_empty());
        let list = |k: &str| -> Vec<String> {
            get(k)
                .map(|v| {
                    v.split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                })
                .unwrap_or_default()
        };
        let corpus: Vec<PathBuf> = list("corpus").into_iter().map(PathBuf::from).collect();
        let output = get("output").ok_or_else(|| Error::Config("`output` is required".into()))?;
        let mut cfg = RunConfig::new(corpus, PathBuf::from(output));
        cfg.lexicon = get("lexicon").map(PathBuf::from);
        cfg.stopwords = get("stopwords").map(PathBuf::from);
        cfg.patterns = get("patterns").map(PathBuf::from);
        let start = get("start").map(|s| parse_date("start", s)).transpose()?;
        let end = get("end").map(|s| parse_date("end", s)).transpose()?;
        cfg.range = match (start, end) {
            (Some(s), Some(e)) => Some(DateRange::new(s, e).map_err(|e| Error::Config(e.to_string()))?),
            (None, None) => None,
            _ => return Err(Error::Config("`start` and `end` must be given together".into())),
        };
        if let Some(k) = get("k") {
            cfg.k = parse_num("k", k)?;
        }
        if let Some(t) = get("threshold") {
            cfg.threshold = parse_num("threshold", t)?;
        }
        cfg.periods = list("periods");
        if let Some(kind) = get("compare_kind") {
            cfg.compare_kind = kind.parse().map_err(Error::Config)?;
        }
        if let Some(kind) = get("correlate_kind") {
            cfg.correlate_kind = kind.parse().map_err(Error::Config)?;
        }
        cfg.events = list("events")
            .iter()
            .map(|d| parse_date("events", d))
            .collect::<Result<_>>()?;
        if let Some(h) = get("event_half_width") {
            cfg.event_half_width = parse_num("event_half_width", h)?;
        }
        cfg.index = list("index").into_iter().map(PathBuf::from).collect();
        cfg.annotations = get("annotations").map(str::to_string);
        if let Some(w) = get("workers") {
            cfg.workers = parse_num("workers", w)?;
        }
        if let Some(s) = get("seed") {
            cfg.seed = parse_num("seed", s)?;
        }
        Ok(cfg)
    }

    /// Checks value ranges and that every input path exists.
    pub fn validate(&self) -> Result<()> {
        if self.corpus.is_empty() {
            return Err(Error::Config("at least one corpus file is required".into()));
        }
        if self.k < 1 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::Config(format!("threshold {} is not in (0, 1)", self.threshold)));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        let mut paths: Vec<&Path> = self
            .corpus
            .iter()
            .map(PathBuf::as_path)
            .filter(|p| p.as_os_str() != "-")
            .collect();
        paths.extend(self.lexicon.as_deref());
        paths.extend(self.stopwords.as_deref());
        paths.extend(self.patterns.as_deref());
        paths.extend(self.index.iter().map(PathBuf::as_path));
        for p in &self.periods {
            if !is_builtin_period_set(p) {
                paths.push(Path::new(p));
            }
        }
        if let Some(a) = self.annotations.as_deref().filter(|a| *a != "builtin") {
            paths.push(Path::new(a));
        }
        for p in paths {
            if !p.exists() {
                return Err(Error::Config(format!("{}: no such file", p.display())));
            }
        }
        Ok(())
    }
}

pub fn is_builtin_period_set(name: &str) -> bool {
    matches!(name.to_ascii_uppercase().as_str(), "DJIA" | "WTI")
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn parse_date(key: &str, s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d").map_err(|e| Error::Config(format!("{key}: `{s}`: {e}")))
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.trim()
        .parse()
        .map_err(|e| Error::Config(format!("{key}: `{s}`: {e}")))
}

/// Parses the flat config format: `key = value` per line, `#` comments.
pub fn parse_config_text(text: &str, source_name: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{source_name}:{}: expected `key = value`", n + 1)))?;
        let key = k.trim().replace('-', "_");
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(Error::Config(format!("{source_name}:{}: duplicate key `{key}`", n + 1)));
        }
    }
    Ok(map)
}

pub fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_text(&text, &path.display().to_string())
}

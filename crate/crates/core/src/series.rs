//! Daily aggregation and sliding-window normalization of mood series.
//!
//! Daily means are reduced from an exact histogram of unit vectors (keyed by
//! their bit patterns), so any partition or ordering of the input stream
//! produces bit-identical output. The final per-day sum runs in canonical
//! key order with pairwise summation.
//!
//! Window statistics use the non-empty days of `[i - k, i + k]`, truncated
//! at the series edges, with the sample (n - 1) standard deviation.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::str::FromStr;

use chrono::{Days, NaiveDate};
use thiserror::Error;

use crate::dimension::{MoodDimension, DIMENSIONS};
use crate::error::ParseError;
use crate::scoring::{format_component, ScoredMessage};

pub const DEFAULT_WINDOW: u32 = 30;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("reversed date range: {start} > {end}")]
    ReversedRange { start: NaiveDate, end: NaiveDate },
    #[error("date {date} is outside the series range {start}..={end}")]
    DateOutOfRange {
        date: NaiveDate,
        start: NaiveDate,
        end: NaiveDate,
    },
    #[error("window half-width must be at least 1 day")]
    ZeroWindow,
    #[error("series must be raw to normalize, got {0}")]
    NotRaw(SeriesKind),
    #[error("series is empty")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Raw,
    ZScore,
    VarianceNormalized,
}

impl SeriesKind {
    pub fn label(self) -> &'static str {
        match self {
            SeriesKind::Raw => "raw",
            SeriesKind::ZScore => "zscore",
            SeriesKind::VarianceNormalized => "variance",
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SeriesKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raw" => Ok(SeriesKind::Raw),
            "zscore" | "z" => Ok(SeriesKind::ZScore),
            "variance" | "variance-normalized" => Ok(SeriesKind::VarianceNormalized),
            other => Err(format!("unknown series kind `{other}` (raw, zscore, variance)")),
        }
    }
}

/// Inclusive range of UTC calendar days.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self, SeriesError> {
        if start > end {
            return Err(SeriesError::ReversedRange { start, end });
        }
        Ok(DateRange { start, end })
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    pub fn len_days(&self) -> usize {
        (self.end - self.start).num_days() as usize + 1
    }

    pub fn days(&self) -> impl Iterator<Item = NaiveDate> {
        let end = self.end;
        self.start.iter_days().take_while(move |d| *d <= end)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DailySlice {
    pub date: NaiveDate,
    /// Scored messages on this day.
    pub message_count: u64,
    /// `None` for an empty day.
    pub values: Option<[f64; DIMENSIONS]>,
    /// Dimensions whose window had no spread (value emitted as 0).
    pub degenerate: [bool; DIMENSIONS],
}

impl DailySlice {
    pub fn empty(date: NaiveDate) -> Self {
        DailySlice {
            date,
            message_count: 0,
            values: None,
            degenerate: [false; DIMENSIONS],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_none()
    }

    pub fn value(&self, dim: MoodDimension) -> Option<f64> {
        self.values.map(|v| v[dim.position()])
    }

    /// Value that is present and not produced by the zero-spread policy.
    pub fn usable_value(&self, dim: MoodDimension) -> Option<f64> {
        if self.degenerate[dim.position()] {
            None
        } else {
            self.value(dim)
        }
    }

    pub fn any_degenerate(&self) -> bool {
        self.degenerate.iter().any(|&d| d)
    }
}

/// Contiguous per-day series; empty days are present and flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct MoodSeries {
    kind: SeriesKind,
    window: Option<u32>,
    days: Vec<DailySlice>,
}

impl MoodSeries {
    /// Builds a raw series from per-day values; days must be contiguous.
    pub fn from_values(start: NaiveDate, values: &[Option<[f64; DIMENSIONS]>]) -> Self {
        let days = values
            .iter()
            .enumerate()
            .map(|(i, v)| DailySlice {
                date: start + Days::new(i as u64),
                message_count: u64::from(v.is_some()),
                values: *v,
                degenerate: [false; DIMENSIONS],
            })
            .collect();
        MoodSeries {
            kind: SeriesKind::Raw,
            window: None,
            days,
        }
    }

    /// Raw series from one column of values per dimension, all days non-empty.
    pub fn from_columns(start: NaiveDate, columns: &[Vec<f64>; DIMENSIONS]) -> Self {
        let n = columns[0].len();
        let values: Vec<_> = (0..n).map(|i| Some(std::array::from_fn(|d| columns[d][i]))).collect();
        Self::from_values(start, &values)
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn window(&self) -> Option<u32> {
        self.window
    }

    pub fn days(&self) -> &[DailySlice] {
        &self.days
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    pub fn range(&self) -> Option<DateRange> {
        Some(DateRange {
            start: self.days.first()?.date,
            end: self.days.last()?.date,
        })
    }

    pub fn position_of(&self, date: NaiveDate) -> Option<usize> {
        let start = self.days.first()?.date;
        let offset = (date - start).num_days();
        (offset >= 0 && (offset as usize) < self.days.len()).then_some(offset as usize)
    }

    pub fn get(&self, date: NaiveDate) -> Option<&DailySlice> {
        self.position_of(date).map(|i| &self.days[i])
    }

    /// Non-empty days.
    pub fn non_empty_days(&self) -> usize {
        self.days.iter().filter(|d| !d.is_empty()).count()
    }

    /// Values of one dimension over non-empty days, in date order.
    pub fn column(&self, dim: MoodDimension) -> Vec<f64> {
        self.days.iter().filter_map(|d| d.value(dim)).collect()
    }
}

/// Sum of `values` by recursive halving; fixed evaluation order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if values.len() <= BLOCK {
        values.iter().fold(0.0, |acc, v| acc + v)
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Exact multiset of unit vectors seen on one day.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DayAccumulator {
    buckets: BTreeMap<[u64; DIMENSIONS], u64>,
    count: u64,
}

impl DayAccumulator {
    pub fn add(&mut self, vector: &[f64; DIMENSIONS]) {
        *self.buckets.entry(vector.map(f64::to_bits)).or_default() += 1;
        self.count += 1;
    }

    pub fn merge(&mut self, other: DayAccumulator) {
        for (key, n) in other.buckets {
            *self.buckets.entry(key).or_default() += n;
        }
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Distinct vectors held.
    pub fn distinct(&self) -> usize {
        self.buckets.len()
    }

    pub fn mean(&self) -> Option<[f64; DIMENSIONS]> {
        if self.count == 0 {
            return None;
        }
        let n = self.count as f64;
        let mut terms = Vec::with_capacity(self.buckets.len());
        Some(std::array::from_fn(|d| {
            terms.clear();
            terms.extend(self.buckets.iter().map(|(key, &c)| c as f64 * f64::from_bits(key[d])));
            pairwise_sum(&terms) / n
        }))
    }
}

/// Streaming per-day aggregation with commutative, associative merge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DailyAggregator {
    range: Option<DateRange>,
    days: BTreeMap<NaiveDate, DayAccumulator>,
    out_of_range: u64,
}

impl DailyAggregator {
    /// With `range`, messages outside it are tallied and skipped. Without
    /// one, the series spans the first to last observed day.
    pub fn new(range: Option<DateRange>) -> Self {
        DailyAggregator {
            range,
            ..Default::default()
        }
    }

    pub fn add(&mut self, date: NaiveDate, vector: &[f64; DIMENSIONS]) {
        if let Some(range) = self.range {
            if !range.contains(date) {
                self.out_of_range += 1;
                return;
            }
        }
        self.days.entry(date).or_default().add(vector);
    }

    pub fn add_message(&mut self, msg: &ScoredMessage) {
        self.add(msg.timestamp.date_naive(), msg.vector.components());
    }

    pub fn merge(&mut self, other: DailyAggregator) {
        for (date, acc) in other.days {
            self.days.entry(date).or_default().merge(acc);
        }
        self.out_of_range += other.out_of_range;
    }

    pub fn out_of_range(&self) -> u64 {
        self.out_of_range
    }

    /// Messages accepted into some day.
    pub fn in_range(&self) -> u64 {
        self.days.values().map(DayAccumulator::count).sum()
    }

    pub fn day_counts(&self) -> impl Iterator<Item = (NaiveDate, u64)> + '_ {
        self.days.iter().map(|(d, a)| (*d, a.count()))
    }

    pub fn finish(&self) -> MoodSeries {
        let range = self.range.or_else(|| {
            Some(DateRange {
                start: *self.days.keys().next()?,
                end: *self.days.keys().next_back()?,
            })
        });
        let days = match range {
            None => Vec::new(),
            Some(range) => range
                .days()
                .map(|date| match self.days.get(&date) {
                    Some(acc) => DailySlice {
                        date,
                        message_count: acc.count(),
                        values: acc.mean(),
                        degenerate: [false; DIMENSIONS],
                    },
                    None => DailySlice::empty(date),
                })
                .collect(),
        };
        MoodSeries {
            kind: SeriesKind::Raw,
            window: None,
            days,
        }
    }
}

/// Averages scored messages into a raw daily series over `[start, end]`.
/// Returns the series and the number of out-of-range messages skipped.
pub fn aggregate_daily<'a, I>(scored: I, start: NaiveDate, end: NaiveDate) -> Result<(MoodSeries, u64), SeriesError>
where
    I: IntoIterator<Item = &'a ScoredMessage>,
{
    let mut agg = DailyAggregator::new(Some(DateRange::new(start, end)?));
    for msg in scored {
        agg.add_message(msg);
    }
    Ok((agg.finish(), agg.out_of_range()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowStats {
    pub center: NaiveDate,
    pub half_width: u32,
    /// Non-empty days inside the truncated window.
    pub sample_size: usize,
    pub mean: Option<[f64; DIMENSIONS]>,
    /// Sample standard deviation; `None` when fewer than two days.
    pub std_dev: Option<[f64; DIMENSIONS]>,
}

impl WindowStats {
    pub fn is_degenerate(&self) -> bool {
        self.std_dev.is_none()
    }
}

fn window_at(days: &[DailySlice], center: usize, k: u32) -> WindowStats {
    let lo = center.saturating_sub(k as usize);
    let hi = (center + k as usize).min(days.len() - 1);
    let rows: Vec<&[f64; DIMENSIONS]> = days[lo..=hi].iter().filter_map(|d| d.values.as_ref()).collect();
    let n = rows.len();
    let mut stats = WindowStats {
        center: days[center].date,
        half_width: k,
        sample_size: n,
        mean: None,
        std_dev: None,
    };
    if n == 0 {
        return stats;
    }
    let mut mean = [0.0; DIMENSIONS];
    let mut sd = [0.0; DIMENSIONS];
    for d in 0..DIMENSIONS {
        // Shifted sums: exact zero spread for constant windows.
        let shift = rows[0][d];
        let (mut s1, mut s2) = (0.0, 0.0);
        for r in &rows {
            let x = r[d] - shift;
            s1 += x;
            s2 += x * x;
        }
        let nf = n as f64;
        mean[d] = shift + s1 / nf;
        if n >= 2 {
            sd[d] = ((s2 - s1 * s1 / nf) / (nf - 1.0)).max(0.0).sqrt();
        }
    }
    stats.mean = Some(mean);
    if n >= 2 {
        stats.std_dev = Some(sd);
    }
    stats
}

/// Mean and sample standard deviation over the non-empty days of
/// `[date - k, date + k]`, truncated at the series edges.
pub fn window_stats(series: &MoodSeries, date: NaiveDate, k: u32) -> Result<WindowStats, SeriesError> {
    let range = series.range().ok_or(SeriesError::Empty)?;
    let pos = series.position_of(date).ok_or(SeriesError::DateOutOfRange {
        date,
        start: range.start,
        end: range.end,
    })?;
    Ok(window_at(&series.days, pos, k))
}

fn normalize(series: &MoodSeries, k: u32, kind: SeriesKind) -> Result<MoodSeries, SeriesError> {
    if k == 0 {
        return Err(SeriesError::ZeroWindow);
    }
    if series.kind != SeriesKind::Raw {
        return Err(SeriesError::NotRaw(series.kind));
    }
    let days = series
        .days
        .iter()
        .enumerate()
        .map(|(i, day)| {
            let Some(values) = day.values else {
                return DailySlice::empty(day.date);
            };
            let stats = window_at(&series.days, i, k);
            let mean = stats.mean.expect("window includes the day itself");
            let sd = stats.std_dev.unwrap_or([0.0; DIMENSIONS]);
            let mut out = [0.0; DIMENSIONS];
            let mut degenerate = [false; DIMENSIONS];
            for d in 0..DIMENSIONS {
                if sd[d] == 0.0 {
                    degenerate[d] = true;
                    continue;
                }
                out[d] = match kind {
                    SeriesKind::ZScore => (values[d] - mean[d]) / sd[d],
                    _ => values[d] / sd[d],
                };
            }
            DailySlice {
                date: day.date,
                message_count: day.message_count,
                values: Some(out),
                degenerate,
            }
        })
        .collect();
    Ok(MoodSeries {
        kind,
        window: Some(k),
        days,
    })
}

/// Per-day z-scores against the local window. Zero-spread windows emit 0
/// and flag the dimension degenerate.
pub fn zscore_normalize(series: &MoodSeries, k: u32) -> Result<MoodSeries, SeriesError> {
    normalize(series, k, SeriesKind::ZScore)
}

/// Per-day division by the local window standard deviation, keeping the
/// level (no mean subtraction).
pub fn variance_normalize(series: &MoodSeries, k: u32) -> Result<MoodSeries, SeriesError> {
    normalize(series, k, SeriesKind::VarianceNormalized)
}

pub const SERIES_CSV_HEADER: &str =
    "date,message_count,tension,depression,anger,vigour,fatigue,confusion,kind,k,degenerate";

/// Writes the series CSV. Components use 9 decimals; empty days leave the
/// component cells blank; `degenerate` is a six-character 0/1 mask in
/// dimension order.
pub fn write_series_csv<W: Write>(series: &MoodSeries, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SERIES_CSV_HEADER}")?;
    let k = series.window.map(|k| k.to_string()).unwrap_or_default();
    for day in &series.days {
        let mut row = format!("{},{}", day.date, day.message_count);
        match day.values {
            Some(v) => {
                for c in v {
                    let _ = write!(row, ",{}", format_component(c));
                }
            }
            None => row.push_str(",,,,,,"),
        }
        let mask: String = day.degenerate.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let _ = write!(row, ",{},{},{}", series.kind, k, mask);
        writeln!(out, "{row}")?;
    }
    Ok(())
}

pub fn series_to_csv_string(series: &MoodSeries) -> String {
    let mut buf = Vec::new();
    write_series_csv(series, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Reads a series CSV written by [`write_series_csv`].
pub fn read_series_csv<R: BufRead>(input: R, source_name: &str) -> Result<MoodSeries, ParseError> {
    let err = |line: usize, msg: String| ParseError::new(source_name, line, msg);
    let mut lines = input.lines().enumerate();
    match lines.next() {
        Some((_, Ok(h))) if h.trim_end() == SERIES_CSV_HEADER => {}
        Some((_, Ok(h))) => return Err(err(1, format!("unexpected header `{h}`"))),
        Some((_, Err(e))) => return Err(err(1, e.to_string())),
        None => return Err(err(0, "missing header".into())),
    }
    let mut kind = None;
    let mut window = None;
    let mut days: Vec<DailySlice> = Vec::new();
    for (n, line) in lines {
        let lineno = n + 1;
        let line = line.map_err(|e| err(lineno, e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 11 {
            return Err(err(lineno, format!("expected 11 columns, found {}", cells.len())));
        }
        let date = NaiveDate::parse_from_str(cells[0], "%Y-%m-%d").map_err(|e| err(lineno, format!("date: {e}")))?;
        if let Some(prev) = days.last() {
            if prev.date.succ_opt() != Some(date) {
                return Err(err(lineno, format!("date {date} does not follow {}", prev.date)));
            }
        }
        let message_count = cells[1]
            .parse::<u64>()
            .map_err(|e| err(lineno, format!("message_count: {e}")))?;
        let values = if cells[2..8].iter().all(|c| c.is_empty()) {
            None
        } else {
            let mut v = [0.0; DIMENSIONS];
            for (d, cell) in cells[2..8].iter().enumerate() {
                v[d] = cell
                    .parse::<f64>()
                    .map_err(|e| err(lineno, format!("component {}: {e}", d + 1)))?;
            }
            Some(v)
        };
        let row_kind: SeriesKind = cells[8].parse().map_err(|e: String| err(lineno, e))?;
        let row_window = if cells[9].is_empty() {
            None
        } else {
            Some(cells[9].parse::<u32>().map_err(|e| err(lineno, format!("k: {e}")))?)
        };
        if kind.is_some_and(|k| k != row_kind) || (kind.is_some() && window != row_window) {
            return Err(err(lineno, "kind/k differ between rows".into()));
        }
        kind = Some(row_kind);
        window = row_window;
        let mask = cells[10].as_bytes();
        if mask.len() != DIMENSIONS || !mask.iter().all(|b| *b == b'0' || *b == b'1') {
            return Err(err(lineno, format!("degenerate mask `{}`", cells[10])));
        }
        days.push(DailySlice {
            date,
            message_count,
            values,
            degenerate: std::array::from_fn(|d| mask[d] == b'1'),
        });
    }
    let kind = kind.unwrap_or(SeriesKind::Raw);
    if kind != SeriesKind::Raw && window.is_none() {
        return Err(err(0, "normalized series without k".into()));
    }
    Ok(MoodSeries { kind, window, days })
}

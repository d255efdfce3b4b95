//! Periods, event windows around dates of interest, and alignment of mood
//! series with external daily index series.

use std::fmt::Write as _;
use std::io::BufRead;

use chrono::{Days, NaiveDate};
use thiserror::Error;

use crate::dimension::{MoodDimension, DIMENSIONS};
use crate::error::ParseError;
use crate::scoring::format_component;
use crate::series::MoodSeries;

pub const DEFAULT_EVENT_HALF_WIDTH: u32 = 15;

const EVENTS_2008: &str = include_str!("../data/events_2008.txt");

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("period `{name}` starts after it ends ({start} > {end})")]
    ReversedPeriod {
        name: String,
        start: NaiveDate,
        end: NaiveDate,
    },
    #[error("unknown built-in period set `{0}` (expected DJIA or WTI)")]
    UnknownPeriodSet(String),
    #[error("date {0} is outside the series range")]
    DateOutOfRange(NaiveDate),
    #[error("series is empty")]
    EmptySeries,
    #[error("index `{index}` and the mood series do not overlap")]
    DisjointRanges { index: String },
}

/// Named inclusive date interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Period {
    pub name: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl Period {
    pub fn new(name: impl Into<String>, start: NaiveDate, end: NaiveDate) -> Result<Self, AnalysisError> {
        let name = name.into();
        if start > end {
            return Err(AnalysisError::ReversedPeriod { name, start, end });
        }
        Ok(Period { name, start, end })
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }
}

fn ymd(m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(2008, m, d).expect("valid 2008 date")
}

/// The four 2008 DJIA or WTI periods.
///
/// DJIA-II ends on October 8 so that October 9 belongs only to DJIA-III,
/// and WTI-II ends on September 30.
pub fn builtin_periods(kind: &str) -> Result<Vec<Period>, AnalysisError> {
    let spans: [(&str, NaiveDate, NaiveDate); 4] = match kind.to_ascii_uppercase().as_str() {
        "DJIA" => [
            ("DJIA-I", ymd(8, 1), ymd(8, 24)),
            ("DJIA-II", ymd(9, 15), ymd(10, 8)),
            ("DJIA-III", ymd(10, 9), ymd(10, 25)),
            ("DJIA-IV", ymd(12, 1), ymd(12, 20)),
        ],
        "WTI" => [
            ("WTI-I", ymd(8, 1), ymd(8, 22)),
            ("WTI-II", ymd(9, 15), ymd(9, 30)),
            ("WTI-III", ymd(10, 1), ymd(11, 21)),
            ("WTI-IV", ymd(11, 22), ymd(12, 16)),
        ],
        _ => return Err(AnalysisError::UnknownPeriodSet(kind.to_string())),
    };
    spans.into_iter().map(|(n, s, e)| Period::new(n, s, e)).collect()
}

/// Reads `name,start,end` lines (`#` comments, optional header).
pub fn parse_periods(text: &str, source_name: &str) -> Result<Vec<Period>, ParseError> {
    let mut out: Vec<Period> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (n == 0 && line.starts_with("name,")) {
            continue;
        }
        let err = |m: String| ParseError::new(source_name, n + 1, m);
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let [name, start, end] = cells[..] else {
            return Err(err("expected `name,start,end`".into()));
        };
        let start = parse_date(start).ok_or_else(|| err(format!("bad date `{start}`")))?;
        let end = parse_date(end).ok_or_else(|| err(format!("bad date `{end}`")))?;
        if out.iter().any(|p| p.name == name) {
            return Err(err(format!("duplicate period `{name}`")));
        }
        out.push(Period::new(name, start, end).map_err(|e| err(e.to_string()))?);
    }
    Ok(out)
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d").ok()
}

/// Values around an event date, one row per day offset.
#[derive(Debug, Clone, PartialEq)]
pub struct EventWindow {
    pub event: NaiveDate,
    pub half_width: u32,
    /// Contiguous offsets present in the series.
    pub offsets: Vec<i64>,
    /// Per offset; `None` for empty days.
    pub values: Vec<Option<[f64; DIMENSIONS]>>,
    /// Offsets dropped at the start / end because they fall outside the series.
    pub clipped_before: u32,
    pub clipped_after: u32,
}

impl EventWindow {
    pub fn is_clipped(&self) -> bool {
        self.clipped_before > 0 || self.clipped_after > 0
    }

    /// One dimension's values, aligned with `offsets`.
    pub fn dimension(&self, dim: MoodDimension) -> Vec<Option<f64>> {
        self.values.iter().map(|v| v.map(|v| v[dim.position()])).collect()
    }

    /// Offset of the largest value of `dim`, if any day has one.
    pub fn argmax(&self, dim: MoodDimension) -> Option<i64> {
        self.offsets
            .iter()
            .zip(self.dimension(dim))
            .filter_map(|(o, v)| Some((*o, v?)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(o, _)| o)
    }

    pub const CSV_HEADER: &'static str = "offset,tension,depression,anger,vigour,fatigue,confusion";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for (o, v) in self.offsets.iter().zip(&self.values) {
            let _ = write!(out, "{o}");
            match v {
                Some(v) => {
                    for c in v {
                        let _ = write!(out, ",{}", format_component(*c));
                    }
                }
                None => out.push_str(",,,,,,"),
            }
            out.push('\n');
        }
        out
    }
}

/// Copies the `[date - h, date + h]` slice of `series`, dropping offsets
/// outside the series and recording how many were dropped.
pub fn extract_event_window(series: &MoodSeries, date: NaiveDate, h: u32) -> Result<EventWindow, AnalysisError> {
    let range = series.range().ok_or(AnalysisError::EmptySeries)?;
    if !range.contains(date) {
        return Err(AnalysisError::DateOutOfRange(date));
    }
    let mut window = EventWindow {
        event: date,
        half_width: h,
        offsets: Vec::new(),
        values: Vec::new(),
        clipped_before: 0,
        clipped_after: 0,
    };
    let h = i64::from(h);
    for offset in -h..=h {
        let day = if offset < 0 {
            date.checked_sub_days(Days::new(offset.unsigned_abs()))
        } else {
            date.checked_add_days(Days::new(offset as u64))
        };
        match day.and_then(|d| series.get(d)) {
            Some(slice) => {
                window.offsets.push(offset);
                window.values.push(slice.values);
            }
            None if offset < 0 => window.clipped_before += 1,
            None => window.clipped_after += 1,
        }
    }
    Ok(window)
}

/// External daily index such as a stock or commodity price.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSeries {
    pub name: String,
    pub units: String,
    points: Vec<(NaiveDate, f64)>,
}

impl IndexSeries {
    /// Dates must be strictly increasing; gaps are allowed.
    pub fn new(
        name: impl Into<String>,
        units: impl Into<String>,
        points: Vec<(NaiveDate, f64)>,
    ) -> Result<Self, String> {
        if let Some(w) = points.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(format!("index dates not strictly increasing at {}", w[1].0));
        }
        Ok(IndexSeries {
            name: name.into(),
            units: units.into(),
            points,
        })
    }

    pub fn points(&self) -> &[(NaiveDate, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn value(&self, date: NaiveDate) -> Option<f64> {
        self.points
            .binary_search_by_key(&date, |p| p.0)
            .ok()
            .map(|i| self.points[i].1)
    }

    /// Reads `date,value` rows; a leading header row is skipped.
    pub fn read_csv<R: BufRead>(input: R, name: &str, units: &str) -> Result<Self, ParseError> {
        let mut points = Vec::new();
        for (n, line) in input.lines().enumerate() {
            let err = |m: String| ParseError::new(name, n + 1, m);
            let line = line.map_err(|e| err(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (date, value) = line
                .split_once(',')
                .ok_or_else(|| err("expected `date,value`".into()))?;
            let Some(date) = parse_date(date) else {
                if points.is_empty() && n == 0 {
                    continue; // header
                }
                return Err(err(format!("bad date `{date}`")));
            };
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|e| err(format!("bad value `{}`: {e}", value.trim())))?;
            if !value.is_finite() {
                return Err(err("value is not finite".into()));
            }
            points.push((date, value));
        }
        IndexSeries::new(name, units, points).map_err(|m| ParseError::new(name, 0, m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinMode {
    /// Only series dates on which the index has a value.
    Inner,
    /// Every series date; index cell empty where the index has no value.
    Outer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignedRow {
    pub date: NaiveDate,
    pub mood: Option<[f64; DIMENSIONS]>,
    pub index: Option<f64>,
}

/// Joins the mood series with an index by date. Missing index days stay
/// missing; nothing is interpolated.
pub fn align_with_index(
    series: &MoodSeries,
    index: &IndexSeries,
    mode: JoinMode,
) -> Result<Vec<AlignedRow>, AnalysisError> {
    let range = series.range().ok_or(AnalysisError::EmptySeries)?;
    if !index.points.iter().any(|(d, _)| range.contains(*d)) {
        return Err(AnalysisError::DisjointRanges {
            index: index.name.clone(),
        });
    }
    let rows = series
        .days()
        .iter()
        .map(|d| AlignedRow {
            date: d.date,
            mood: d.values,
            index: index.value(d.date),
        })
        .filter(|r| mode == JoinMode::Outer || r.index.is_some())
        .collect();
    Ok(rows)
}

/// Labelled date or date range used to annotate reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub label: String,
}

impl Annotation {
    pub fn covers(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }
}

/// Reads `date,label` or `start..end,label` lines.
pub fn parse_annotations(text: &str, source_name: &str) -> Result<Vec<Annotation>, ParseError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: String| ParseError::new(source_name, n + 1, m);
        let (when, label) = line
            .split_once(',')
            .ok_or_else(|| err("expected `date,label`".into()))?;
        let (start, end) = match when.split_once("..") {
            Some((s, e)) => (parse_date(s), parse_date(e)),
            None => (parse_date(when), parse_date(when)),
        };
        let (Some(start), Some(end)) = (start, end) else {
            return Err(err(format!("bad date `{when}`")));
        };
        if start > end {
            return Err(err(format!("reversed range `{when}`")));
        }
        out.push(Annotation {
            start,
            end,
            label: label.trim().to_string(),
        });
    }
    Ok(out)
}

/// The bundled August-December 2008 event timeline.
pub fn events_2008() -> Vec<Annotation> {
    parse_annotations(EVENTS_2008, "builtin:events_2008").expect("bundled annotations parse")
}

/// Labels of all annotations covering `date`, joined with `; `.
pub fn label_for(annotations: &[Annotation], date: NaiveDate) -> String {
    annotations
        .iter()
        .filter(|a| a.covers(date))
        .map(|a| a.label.as_str())
        .collect::<Vec<_>>()
        .join("; ")
}

/// CSV of aligned rows: date, six components, index value, optional label.
pub fn aligned_csv(rows: &[AlignedRow], index_name: &str, annotations: Option<&[Annotation]>) -> String {
    let mut out = String::from("date,tension,depression,anger,vigour,fatigue,confusion,");
    out.push_str(index_name);
    if annotations.is_some() {
        out.push_str(",annotation");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{}", r.date);
        match r.mood {
            Some(v) => {
                for c in v {
                    let _ = write!(out, ",{}", format_component(c));
                }
            }
            None => out.push_str(",,,,,,"),
        }
        out.push(',');
        if let Some(x) = r.index {
            let _ = write!(out, "{x}");
        }
        if let Some(ann) = annotations {
            let label = label_for(ann, r.date);
            let _ = write!(out, ",{}", csv_escape(&label));
        }
        out.push('\n');
    }
    out
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

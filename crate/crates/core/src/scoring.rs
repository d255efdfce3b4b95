//! Lexicon matching: term sets to mood count vectors and unit vectors.

use std::fmt::Write as _;

use chrono::{DateTime, SecondsFormat, Utc};

use crate::dimension::DIMENSIONS;
use crate::lexicon::Lexicon;
use crate::textnorm::{tokenize, PatternSet, RawMessage, StopwordList, TermSet};

/// Per-dimension count of distinct message stems found in the lexicon.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoodCounts(pub [u32; DIMENSIONS]);

impl MoodCounts {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|&c| f64::from(c) * f64::from(c)).sum::<f64>().sqrt()
    }
}

/// A mood vector with Euclidean norm 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoodVector([f64; DIMENSIONS]);

impl MoodVector {
    /// Wraps components that are already unit length. Returns `None` when
    /// the norm is off by more than 1e-9.
    pub fn from_unit(components: [f64; DIMENSIONS]) -> Option<Self> {
        let norm = components.iter().map(|c| c * c).sum::<f64>().sqrt();
        ((norm - 1.0).abs() <= 1e-9).then_some(MoodVector(components))
    }

    pub fn components(&self) -> &[f64; DIMENSIONS] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredMessage {
    pub timestamp: DateTime<Utc>,
    pub vector: MoodVector,
    pub counts: MoodCounts,
    /// Matched stems summed over dimensions; at least 1.
    pub match_count: u32,
}

/// Counts, per dimension, the distinct stems of `terms` present in the
/// lexicon. A stem repeated within a message counts once; a stem listed in
/// several dimensions counts in each of them.
pub fn score(terms: &TermSet, lexicon: &Lexicon) -> MoodCounts {
    let mut stems: Vec<&str> = terms.iter().collect();
    stems.sort_unstable();
    stems.dedup();
    let mut counts = [0u32; DIMENSIONS];
    for stem in stems {
        let mask = lexicon.dimension_mask(stem);
        if mask == 0 {
            continue;
        }
        for (pos, c) in counts.iter_mut().enumerate() {
            if mask & (1 << pos) != 0 {
                *c += 1;
            }
        }
    }
    MoodCounts(counts)
}

/// Occurrence counts (duplicates counted). Diagnostic only.
pub fn occurrence_counts(terms: &TermSet, lexicon: &Lexicon) -> MoodCounts {
    let mut counts = [0u32; DIMENSIONS];
    for stem in terms.iter() {
        let mask = lexicon.dimension_mask(stem);
        for (pos, c) in counts.iter_mut().enumerate() {
            if mask & (1 << pos) != 0 {
                *c += 1;
            }
        }
    }
    MoodCounts(counts)
}

/// `m / |m|`, or `None` for the zero vector.
pub fn unit_normalize(counts: &MoodCounts) -> Option<MoodVector> {
    let norm = counts.norm();
    if norm == 0.0 {
        return None;
    }
    Some(MoodVector(counts.0.map(|c| f64::from(c) / norm)))
}

/// Where a message ended up.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// Failed the mood-candidate patterns.
    Rejected,
    /// Candidate, but no lexicon matches.
    NoMatch,
    Scored(ScoredMessage),
}

/// Message scorer with its filtering configuration.
#[derive(Debug, Clone)]
pub struct Scorer {
    pub stopwords: StopwordList,
    pub patterns: PatternSet,
    pub lexicon: Lexicon,
}

impl Scorer {
    pub fn new(stopwords: StopwordList, patterns: PatternSet, lexicon: Lexicon) -> Self {
        Scorer {
            stopwords,
            patterns,
            lexicon,
        }
    }

    pub fn classify(&self, msg: &RawMessage) -> Outcome {
        if !self.patterns.is_candidate(&msg.text) {
            return Outcome::Rejected;
        }
        let counts = score(&tokenize(&msg.text, &self.stopwords), &self.lexicon);
        match unit_normalize(&counts) {
            None => Outcome::NoMatch,
            Some(vector) => Outcome::Scored(ScoredMessage {
                timestamp: msg.timestamp,
                vector,
                counts,
                match_count: counts.total(),
            }),
        }
    }
}

/// Scores one message under the default mood patterns.
pub fn score_message(msg: &RawMessage, stopwords: &StopwordList, lexicon: &Lexicon) -> Option<ScoredMessage> {
    if !crate::textnorm::is_mood_candidate(&msg.text) {
        return None;
    }
    let counts = score(&tokenize(&msg.text, stopwords), lexicon);
    unit_normalize(&counts).map(|vector| ScoredMessage {
        timestamp: msg.timestamp,
        vector,
        counts,
        match_count: counts.total(),
    })
}

pub const SCORED_CSV_HEADER: &str = "datetime,tension,depression,anger,vigour,fatigue,confusion,match_count";

/// One scored-dump CSV row (no trailing newline).
pub fn scored_csv_row(msg: &ScoredMessage) -> String {
    let mut row = msg.timestamp.to_rfc3339_opts(SecondsFormat::AutoSi, true);
    for c in msg.vector.components() {
        let _ = write!(row, ",{}", format_component(*c));
    }
    let _ = write!(row, ",{}", msg.match_count);
    row
}

/// Parses one scored-dump row back into its timestamp and components.
/// Components are taken as written; rounding to 9 decimals means they
/// are unit length only to within about 1e-9.
pub fn parse_scored_csv_row(line: &str) -> Result<(DateTime<Utc>, [f64; DIMENSIONS]), String> {
    let fields: Vec<&str> = line.trim_end_matches('\r').split(',').collect();
    if fields.len() != DIMENSIONS + 2 {
        return Err(format!("expected {} fields, found {}", DIMENSIONS + 2, fields.len()));
    }
    let ts = crate::textnorm::parse_timestamp(fields[0]).ok_or_else(|| format!("bad datetime `{}`", fields[0]))?;
    let mut v = [0.0; DIMENSIONS];
    for (slot, field) in v.iter_mut().zip(&fields[1..=DIMENSIONS]) {
        *slot = field
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite() && *x >= 0.0)
            .ok_or_else(|| format!("bad component `{field}`"))?;
    }
    fields[DIMENSIONS + 1]
        .parse::<u32>()
        .map_err(|_| format!("bad match_count `{}`", fields[DIMENSIONS + 1]))?;
    Ok((ts, v))
}

/// Fixed 9-decimal rendering shared by every CSV writer; never emits `-0`.
pub fn format_component(value: f64) -> String {
    let s = format!("{value:.9}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

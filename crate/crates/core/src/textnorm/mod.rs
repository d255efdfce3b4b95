//! Message cleaning, stemming, and mood-candidate filtering.
//!
//! A message becomes a [`TermSet`] by splitting on whitespace, stripping
//! every non-ASCII-alphanumeric character, lowercasing, dropping tokens that
//! became empty, removing stopwords, and Porter-stemming what is left, in
//! that order.

mod candidate;
pub mod porter;
mod stopwords;

use std::sync::OnceLock;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};

pub use candidate::{MatchMode, Pattern, PatternSet};
pub use porter::stem as porter_stem;
pub use stopwords::StopwordList;

/// One timestamped short text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMessage {
    pub timestamp: DateTime<Utc>,
    pub text: String,
}

impl RawMessage {
    pub fn new(timestamp: DateTime<Utc>, text: impl Into<String>) -> Self {
        RawMessage {
            timestamp,
            text: text.into(),
        }
    }

    /// UTC calendar day of the message.
    pub fn date(&self) -> NaiveDate {
        self.timestamp.date_naive()
    }
}

/// Parses an ISO-8601 timestamp into UTC.
///
/// Accepts RFC 3339 with any offset, naive `YYYY-MM-DDTHH:MM:SS[.f]` or
/// `YYYY-MM-DD HH:MM:SS[.f]` (taken as UTC), and bare dates (midnight UTC).
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(naive.and_utc());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .map(|d| d.and_hms_opt(0, 0, 0).expect("midnight").and_utc())
}

/// Cleaned, stopword-filtered, stemmed terms of one message, in order of
/// appearance. Duplicates are kept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermSet {
    pub terms: Vec<String>,
    /// Whitespace-delimited tokens in the original text.
    pub source_token_count: usize,
}

impl TermSet {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }
}

/// Lowercase ASCII-alphanumeric residue of one token, before stemming.
pub fn clean_token(token: &str) -> String {
    token
        .chars()
        .filter(char::is_ascii_alphanumeric)
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

pub fn tokenize(text: &str, stopwords: &StopwordList) -> TermSet {
    let mut terms = Vec::new();
    let mut source_token_count = 0;
    for token in text.split_whitespace() {
        source_token_count += 1;
        let cleaned = clean_token(token);
        if cleaned.is_empty() || stopwords.contains(&cleaned) {
            continue;
        }
        terms.push(porter::stem(&cleaned));
    }
    TermSet {
        terms,
        source_token_count,
    }
}

/// Candidate decision under the default mood patterns.
pub fn is_mood_candidate(text: &str) -> bool {
    static DEFAULT: OnceLock<PatternSet> = OnceLock::new();
    DEFAULT.get_or_init(PatternSet::default_mood).is_candidate(text)
}

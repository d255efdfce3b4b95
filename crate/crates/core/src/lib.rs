//! Daily public-mood time series from timestamped short texts.
//!
//! Messages are cleaned and stemmed ([`textnorm`]), matched against a
//! six-dimension mood lexicon ([`lexicon`], [`scoring`]), averaged per UTC
//! day and normalized against a sliding window ([`series`]), then compared
//! across periods and against external index series ([`stats`],
//! [`analysis`]). [`pipeline`] wires the stages together over streaming
//! corpus files.

#![forbid(unsafe_code)]

pub mod analysis;
pub mod dimension;
pub mod error;
pub mod lexicon;
pub mod pipeline;
pub mod scoring;
pub mod series;
pub mod stats;
pub mod textnorm;

pub use dimension::{MoodDimension, DIMENSIONS};
pub use error::{Error, Result};
pub use lexicon::Lexicon;
pub use scoring::{MoodVector, ScoredMessage};
pub use series::{DailySlice, MoodSeries, SeriesKind};
pub use textnorm::{RawMessage, StopwordList, TermSet};

//! Deterministic workloads for the benchmarks.

use chrono::{Days, NaiveDate, TimeZone, Utc};
use moodseries::{MoodSeries, RawMessage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FILLER: &[&str] = &[
    "today", "work", "the", "train", "was", "late", "again", "and", "my", "coffee", "went", "cold", "watching", "news",
    "about", "markets", "with", "friends", "tonight",
];
const MOOD: &[&str] = &[
    "tense",
    "anxious",
    "sad",
    "lonely",
    "angry",
    "annoyed",
    "lively",
    "energetic",
    "tired",
    "exhausted",
    "confused",
    "bewildered",
    "nervous",
    "gloomy",
    "furious",
    "cheerful",
];
const CUES: &[&str] = &["I feel", "feeling", "I'm so", "im", "I am", "being"];

/// `n` short messages spread over August 2008; about two thirds are mood candidates.
pub fn messages(n: usize, seed: u64) -> Vec<RawMessage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Utc.with_ymd_and_hms(2008, 8, 1, 0, 0, 0).unwrap();
    (0..n)
        .map(|_| {
            let mut words: Vec<&str> = (0..rng.random_range(4..12))
                .map(|_| FILLER[rng.random_range(0..FILLER.len())])
                .collect();
            if rng.random_bool(0.67) {
                let at = rng.random_range(0..=words.len());
                words.insert(at, MOOD[rng.random_range(0..MOOD.len())]);
                words.insert(at, CUES[rng.random_range(0..CUES.len())]);
            }
            let ts = start + chrono::Duration::seconds(rng.random_range(0..31 * 86_400));
            RawMessage::new(ts, words.join(" "))
        })
        .collect()
}

/// Stem-shaped lowercase words.
pub fn words(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const SUFFIXES: &[&str] = &["", "s", "ing", "ed", "ness", "ational", "ful", "ly", "ization", "ies"];
    (0..n)
        .map(|_| {
            let stem: String = (0..rng.random_range(3..8))
                .map(|_| char::from(b'a' + rng.random_range(0..26u8)))
                .collect();
            stem + SUFFIXES[rng.random_range(0..SUFFIXES.len())]
        })
        .collect()
}

/// A raw daily series of `days` days with uniform components.
pub fn raw_series(days: usize, seed: u64) -> MoodSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<Option<[f64; 6]>> = (0..days)
        .map(|_| Some(std::array::from_fn(|_| rng.random::<f64>())))
        .collect();
    MoodSeries::from_values(NaiveDate::from_ymd_opt(2000, 1, 1).unwrap(), &values)
}

/// Two samples of the given sizes.
pub fn samples(n1: usize, n2: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = (0..n1).map(|_| rng.random::<f64>()).collect();
    let b = (0..n2).map(|_| rng.random::<f64>() + 0.2).collect();
    (a, b)
}

/// Day offsets for `n` vectors spread over `days` days starting 2008-08-01.
pub fn day_of(i: usize, days: u64) -> NaiveDate {
    NaiveDate::from_ymd_opt(2008, 8, 1).unwrap() + Days::new(i as u64 % days)
}

//! Seeded synthetic corpora with known funnel counts.
//!
//! Each day mixes scored mood messages (dimension shares drift slowly and
//! linearly over the span, so the sliding window sees seasonal movement
//! rather than pure sampling noise), plus non-candidate chatter, URL
//! messages, candidates without lexicon matches and malformed lines.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::io::{self, Write};

use chrono::{Days, NaiveDate};
use moodseries::{Lexicon, MoodDimension};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BASE_SHARE: [f64; 6] = [0.19, 0.19, 0.19, 0.05, 0.19, 0.19];
const SLOPE_PER_DAY: [f64; 6] = [0.002, -0.002, 0.0018, 0.0003, -0.0018, 0.002];

const CUES: &[&str] = &[
    "I feel {}",
    "feeling {} today",
    "I'm so {}",
    "im {} again",
    "I am {} right now",
    "Feel {} at work",
    "being {} lol",
];
const CHATTER: &[&str] = &[
    "going to the game tonight",
    "just got home from the office",
    "watching the debate with friends",
    "new phone arrived",
    "coffee then meetings",
    "traffic on the bridge again",
];
const NO_MATCH: &[&str] = &[
    "I feel like pizza tonight",
    "I am at the airport",
    "feeling the rain outside",
    "be there at noon",
    "im on the train",
];

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub start: NaiveDate,
    pub days: u32,
    pub scored_per_day: u32,
    pub seed: u64,
    /// Extra messages on one day, each with two distinct Vigour terms,
    /// as a fraction of the day's scored volume.
    pub vigour_spike: Option<(NaiveDate, f64)>,
    /// Chatter, URL, no-match and malformed lines alongside the scored ones.
    pub noise_lines: bool,
}

impl SynthConfig {
    pub fn autumn_2008(scored_per_day: u32, seed: u64) -> Self {
        SynthConfig {
            start: NaiveDate::from_ymd_opt(2008, 8, 1).unwrap(),
            days: 153,
            scored_per_day,
            seed,
            vigour_spike: None,
            noise_lines: true,
        }
    }

    /// Roughly `lines` lines in total over the 153-day span.
    pub fn with_total_lines(lines: u64, seed: u64) -> Self {
        let per_day = lines as f64 / 153.0 / (1.0 + 0.25 + 0.03 + 0.10 + 0.01);
        Self::autumn_2008(per_day.round() as u32, seed)
    }

    pub fn end(&self) -> NaiveDate {
        self.start + Days::new(u64::from(self.days) - 1)
    }
}

/// What the generator wrote, by funnel stage.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynthCounts {
    pub total: u64,
    pub malformed: u64,
    pub rejected: u64,
    pub zero: u64,
    pub scored: u64,
    pub per_day: BTreeMap<NaiveDate, u64>,
}

fn terms_by_dimension(lexicon: &Lexicon) -> Vec<Vec<String>> {
    MoodDimension::ALL
        .iter()
        .map(|&d| {
            lexicon
                .stems(d)
                .flat_map(|s| lexicon.raw_forms(d, s).into_iter().flatten().cloned())
                .collect()
        })
        .collect()
}

fn shares(day: u32, days: u32) -> [f64; 6] {
    let t = f64::from(day) - f64::from(days - 1) / 2.0;
    let mut s = [0.0; 6];
    for i in 0..6 {
        s[i] = (BASE_SHARE[i] + SLOPE_PER_DAY[i] * t).max(0.01);
    }
    let total: f64 = s.iter().sum();
    s.map(|x| x / total)
}

fn pick<'a, R: Rng>(rng: &mut R, items: &'a [String]) -> &'a str {
    &items[rng.random_range(0..items.len())]
}

fn two_distinct<'a, R: Rng>(rng: &mut R, items: &'a [String]) -> (&'a str, &'a str) {
    let i = rng.random_range(0..items.len());
    let mut j = rng.random_range(0..items.len() - 1);
    if j >= i {
        j += 1;
    }
    (&items[i], &items[j])
}

fn line<R: Rng>(rng: &mut R, date: NaiveDate, text: &str) -> String {
    let secs = rng.random_range(0..86_400u32);
    let ts = format!("{date}T{:02}:{:02}:{:02}Z", secs / 3600, secs / 60 % 60, secs % 60);
    if rng.random_bool(0.05) {
        format!("{ts}\t{text}")
    } else {
        format!("{{\"ts\":\"{ts}\",\"text\":\"{text}\"}}")
    }
}

/// Writes the corpus in day order and returns the counts it contains.
pub fn write_corpus<W: Write>(cfg: &SynthConfig, mut out: W) -> io::Result<SynthCounts> {
    let terms = terms_by_dimension(&Lexicon::demo());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut counts = SynthCounts::default();
    let n = cfg.scored_per_day;
    let mut lines = Vec::new();
    for day in 0..cfg.days {
        let date = cfg.start + Days::new(u64::from(day));
        let share = shares(day, cfg.days);
        lines.clear();
        let mut scored_today = 0u64;
        for _ in 0..n {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let dim = share.iter().position(|s| {
                acc += s;
                u < acc
            });
            let dim = dim.unwrap_or(5);
            let mut words = if rng.random_bool(0.3) {
                let (a, b) = two_distinct(&mut rng, &terms[dim]);
                format!("{a} and {b}")
            } else {
                pick(&mut rng, &terms[dim]).to_string()
            };
            if rng.random_bool(0.1) {
                let other = rng.random_range(0..6);
                words = format!("{words} but {}", pick(&mut rng, &terms[other]));
            }
            let cue = CUES[rng.random_range(0..CUES.len())];
            lines.push(line(&mut rng, date, &cue.replace("{}", &words)));
            scored_today += 1;
        }
        if let Some((spike_day, frac)) = cfg.vigour_spike {
            if spike_day == date {
                for _ in 0..(f64::from(n) * frac).round() as u32 {
                    let (a, b) = two_distinct(&mut rng, &terms[MoodDimension::Vigour.position()]);
                    lines.push(line(&mut rng, date, &format!("I feel so {a} and {b} today")));
                    scored_today += 1;
                }
            }
        }
        if cfg.noise_lines {
            for _ in 0..n / 4 {
                let text = CHATTER[rng.random_range(0..CHATTER.len())];
                lines.push(line(&mut rng, date, text));
            }
            for _ in 0..(n * 3).div_ceil(100) {
                let dim = rng.random_range(0..6);
                let text = format!("I feel {} http://example.com/x", pick(&mut rng, &terms[dim]));
                lines.push(line(&mut rng, date, &text));
            }
            counts.rejected += u64::from(n / 4 + (n * 3).div_ceil(100));
            for _ in 0..n / 10 {
                let text = NO_MATCH[rng.random_range(0..NO_MATCH.len())];
                lines.push(line(&mut rng, date, text));
            }
            counts.zero += u64::from(n / 10);
            for i in 0..n.div_ceil(100) {
                lines.push(match i % 3 {
                    0 => "garbage without a tab".to_string(),
                    1 => format!("{{\"ts\":\"{date}T25:00:00Z\",\"text\":\"I feel sad\"}}"),
                    _ => String::new(),
                });
            }
            counts.malformed += u64::from(n.div_ceil(100));
        }
        // interleave kinds within the day
        for i in (1..lines.len()).rev() {
            let j = rng.random_range(0..=i);
            lines.swap(i, j);
        }
        for l in &lines {
            writeln!(out, "{l}")?;
        }
        counts.total += lines.len() as u64;
        counts.scored += scored_today;
        counts.per_day.insert(date, scored_today);
    }
    Ok(counts)
}

pub fn corpus_string(cfg: &SynthConfig) -> (String, SynthCounts) {
    let mut buf = Vec::new();
    let counts = write_corpus(cfg, &mut buf).unwrap();
    (String::from_utf8(buf).unwrap(), counts)
}

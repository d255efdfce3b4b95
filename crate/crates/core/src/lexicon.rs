//! The six-dimension mood lexicon.
//!
//! Source files list raw adjectives under `[dimension]` section headers, one
//! per line, with `#` comments and optional `name = ...` / `version = ...`
//! header lines. A `dimension: term, term` line is accepted as shorthand
//! for a one-line section. Every term is cleaned and Porter-stemmed at load,
//! so scoring compares stems with stems.
//!
//! The canonical save format writes each stem followed by its raw forms as a
//! trailing comment (`tens # tense, tension`). When a term line carries such
//! a comment the raw forms are authoritative: each is re-stemmed and must
//! reproduce the listed stem.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::dimension::{MoodDimension, DIMENSIONS};
use crate::textnorm::{clean_token, porter};

const DEMO: &str = include_str!("../data/demo_poms_lexicon.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{source_name}:{line}: {message}")]
    Malformed {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("{source_name}:{line}: unknown dimension `{label}`")]
    UnknownDimension {
        source_name: String,
        line: usize,
        label: String,
    },
    #[error("{source_name}: empty dimension `{dimension}`")]
    EmptyDimension {
        source_name: String,
        dimension: MoodDimension,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A stem that belongs to more than one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapRow {
    pub stem: String,
    pub dimensions: Vec<MoodDimension>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    name: String,
    version: String,
    /// Per dimension: stem -> raw forms that produced it.
    entries: [BTreeMap<String, BTreeSet<String>>; DIMENSIONS],
    /// Stem -> bitmask of dimensions containing it.
    index: HashMap<String, u8>,
}

impl Lexicon {
    /// Builds a lexicon from raw terms per dimension.
    pub fn from_raw_terms<S: AsRef<str>>(name: &str, terms: [&[S]; DIMENSIONS]) -> Result<Self, LexiconError> {
        let mut entries: [BTreeMap<String, BTreeSet<String>>; DIMENSIONS] = Default::default();
        for (pos, list) in terms.iter().enumerate() {
            for raw in list.iter() {
                let raw = clean_token(raw.as_ref());
                if raw.is_empty() {
                    continue;
                }
                entries[pos].entry(porter::stem(&raw)).or_default().insert(raw);
            }
        }
        Self::build(name.to_string(), String::new(), entries, name)
    }

    /// Bundled demonstration lexicon (single-word base adjectives only).
    pub fn demo() -> Self {
        Self::parse(DEMO, "builtin:demo_poms_lexicon").expect("bundled lexicon parses")
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self, LexiconError> {
        let malformed = |line: usize, message: String| LexiconError::Malformed {
            source_name: source_name.to_string(),
            line,
            message,
        };
        let dimension = |line: usize, label: &str| {
            label
                .parse::<MoodDimension>()
                .map_err(|_| LexiconError::UnknownDimension {
                    source_name: source_name.to_string(),
                    line,
                    label: label.trim().to_string(),
                })
        };

        let mut name = String::new();
        let mut version = String::new();
        let mut entries: [BTreeMap<String, BTreeSet<String>>; DIMENSIONS] = Default::default();
        let mut current: Option<MoodDimension> = None;

        for (n, line) in text.lines().enumerate() {
            let lineno = n + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('[') {
                let label = rest
                    .strip_suffix(']')
                    .ok_or_else(|| malformed(lineno, "unterminated section header".into()))?;
                current = Some(dimension(lineno, label)?);
                continue;
            }
            if current.is_none() {
                if let Some((key, value)) = trimmed.split_once('=') {
                    match key.trim() {
                        "name" => name = value.trim().to_string(),
                        "version" => version = value.trim().to_string(),
                        other => return Err(malformed(lineno, format!("unknown header key `{other}`"))),
                    }
                    continue;
                }
            }
            if let Some((label, terms)) = trimmed.split_once(':') {
                let dim = dimension(lineno, label)?;
                for raw in terms.split(',') {
                    let raw = raw.trim();
                    if raw.is_empty() {
                        continue;
                    }
                    let (stem, cleaned) = stem_raw(raw).map_err(|m| malformed(lineno, m))?;
                    entries[dim.position()].entry(stem).or_default().insert(cleaned);
                }
                continue;
            }
            let dim = current.ok_or_else(|| malformed(lineno, "term outside of a [dimension] section".into()))?;
            let slot = &mut entries[dim.position()];
            match trimmed.split_once('#') {
                Some((stem, raws)) => {
                    // canonical form: `stem # raw, raw`
                    let stem = stem.trim();
                    let mut forms = BTreeSet::new();
                    for raw in raws.split(',').map(str::trim).filter(|r| !r.is_empty()) {
                        let (derived, cleaned) = stem_raw(raw).map_err(|m| malformed(lineno, m))?;
                        if derived != stem {
                            return Err(malformed(
                                lineno,
                                format!("raw form `{raw}` stems to `{derived}`, not `{stem}`"),
                            ));
                        }
                        forms.insert(cleaned);
                    }
                    if forms.is_empty() {
                        return Err(malformed(lineno, format!("stem `{stem}` lists no raw forms")));
                    }
                    slot.entry(stem.to_string()).or_default().extend(forms);
                }
                None => {
                    let (stem, cleaned) = stem_raw(trimmed).map_err(|m| malformed(lineno, m))?;
                    slot.entry(stem).or_default().insert(cleaned);
                }
            }
        }
        if name.is_empty() {
            name = source_name.to_string();
        }
        Self::build(name, version, entries, source_name)
    }

    fn build(
        name: String,
        version: String,
        entries: [BTreeMap<String, BTreeSet<String>>; DIMENSIONS],
        source_name: &str,
    ) -> Result<Self, LexiconError> {
        let mut index: HashMap<String, u8> = HashMap::new();
        for (pos, stems) in entries.iter().enumerate() {
            if stems.is_empty() {
                return Err(LexiconError::EmptyDimension {
                    source_name: source_name.to_string(),
                    dimension: MoodDimension::ALL[pos],
                });
            }
            for stem in stems.keys() {
                *index.entry(stem.clone()).or_default() |= 1 << pos;
            }
        }
        Ok(Lexicon {
            name,
            version,
            entries,
            index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// Distinct (dimension, raw term) pairs before stemming.
    pub fn raw_term_count(&self) -> usize {
        self.entries.iter().flat_map(|d| d.values()).map(BTreeSet::len).sum()
    }

    pub fn stems(&self, dim: MoodDimension) -> impl Iterator<Item = &str> {
        self.entries[dim.position()].keys().map(String::as_str)
    }

    pub fn stem_count(&self, dim: MoodDimension) -> usize {
        self.entries[dim.position()].len()
    }

    pub fn raw_forms(&self, dim: MoodDimension, stem: &str) -> Option<&BTreeSet<String>> {
        self.entries[dim.position()].get(stem)
    }

    pub fn contains(&self, dim: MoodDimension, stem: &str) -> bool {
        self.entries[dim.position()].contains_key(stem)
    }

    /// Bitmask of dimensions (bit = position) that contain `stem`.
    pub fn dimension_mask(&self, stem: &str) -> u8 {
        self.index.get(stem).copied().unwrap_or(0)
    }

    /// Stems appearing in two or more dimensions, sorted by stem.
    pub fn overlap_report(&self) -> Vec<OverlapRow> {
        let mut rows: Vec<OverlapRow> = self
            .index
            .iter()
            .filter(|(_, mask)| mask.count_ones() >= 2)
            .map(|(stem, &mask)| OverlapRow {
                stem: stem.clone(),
                dimensions: MoodDimension::ALL
                    .into_iter()
                    .filter(|d| mask & (1 << d.position()) != 0)
                    .collect(),
            })
            .collect();
        rows.sort_by(|a, b| a.stem.cmp(&b.stem));
        rows
    }

    /// Canonical text form; [`Lexicon::parse`] reads it back unchanged.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name = {}", self.name);
        if !self.version.is_empty() {
            let _ = writeln!(out, "version = {}", self.version);
        }
        for dim in MoodDimension::ALL {
            let _ = writeln!(out, "\n[{}]", dim.label());
            for (stem, raws) in &self.entries[dim.position()] {
                let raws: Vec<&str> = raws.iter().map(String::as_str).collect();
                let _ = writeln!(out, "{stem} # {}", raws.join(", "));
            }
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), LexiconError> {
        std::fs::write(path, self.to_canonical_string()).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

fn stem_raw(raw: &str) -> Result<(String, String), String> {
    if raw.split_whitespace().nth(1).is_some() {
        return Err(format!("multi-word term `{raw}` (only single words are supported)"));
    }
    let cleaned = clean_token(raw);
    if cleaned.is_empty() {
        return Err(format!("term `{raw}` has no alphanumeric characters"));
    }
    Ok((porter::stem(&cleaned), cleaned))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
[tension]
tense
anxious
[depression]
sad
[anger]
angry
[vigour]
lively
[fatigue]
weary
[confusion]
confused
";

    #[test]
    fn loads_and_stems() {
        let lex = Lexicon::parse(SMALL, "small").unwrap();
        let tension: Vec<&str> = lex.stems(MoodDimension::Tension).collect();
        assert_eq!(tension, vec!["anxiou", "tens"]);
        assert!(lex.contains(MoodDimension::Depression, "sad"));
        assert_eq!(lex.raw_term_count(), 7);
        assert!(lex.overlap_report().is_empty());
    }

    #[test]
    fn inline_shorthand() {
        let text = "tension: tense, anxious\ndepression: sad\nanger: angry\nvigour: lively\nfatigue: weary\nconfusion: confused\n";
        assert_eq!(
            Lexicon::parse(text, "x").unwrap().entries,
            Lexicon::parse(SMALL, "y").unwrap().entries
        );
    }

    #[test]
    fn empty_file_is_empty_dimension() {
        let err = Lexicon::parse("", "empty").unwrap_err();
        assert!(matches!(
            err,
            LexiconError::EmptyDimension {
                dimension: MoodDimension::Tension,
                ..
            }
        ));
        assert!(err.to_string().contains("empty dimension"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = Lexicon::parse("[tension]\ntense\n[joy]\nhappy\n", "f").unwrap_err();
        assert!(matches!(err, LexiconError::UnknownDimension { line: 3, .. }), "{err}");
        let err = Lexicon::parse("tense\n", "f").unwrap_err();
        assert!(matches!(err, LexiconError::Malformed { line: 1, .. }), "{err}");
        let err = Lexicon::parse("[tension]\non edge\n", "f").unwrap_err();
        assert!(matches!(err, LexiconError::Malformed { line: 2, .. }), "{err}");
        let err = Lexicon::parse("[tension\n", "f").unwrap_err();
        assert!(matches!(err, LexiconError::Malformed { line: 1, .. }), "{err}");
    }

    #[test]
    fn duplicates_merge_within_dimension() {
        let text = SMALL.replace("tense\n", "tense\ntensed\nTense\n");
        let lex = Lexicon::parse(&text, "d").unwrap();
        assert_eq!(lex.stem_count(MoodDimension::Tension), 2);
        let forms: Vec<&str> = lex
            .raw_forms(MoodDimension::Tension, "tens")
            .unwrap()
            .iter()
            .map(String::as_str)
            .collect();
        assert_eq!(forms, vec!["tense", "tensed"]);
    }

    #[test]
    fn cross_dimension_overlap_is_reported() {
        let text = SMALL
            .replace("angry\n", "angry\nannoyed\n")
            .replace("anxious\n", "anxious\nannoyed\n");
        let lex = Lexicon::parse(&text, "o").unwrap();
        let report = lex.overlap_report();
        assert_eq!(
            report,
            vec![OverlapRow {
                stem: "annoi".into(),
                dimensions: vec![MoodDimension::Tension, MoodDimension::Anger],
            }]
        );
        assert_eq!(lex.dimension_mask("annoi"), 0b101);
    }

    #[test]
    fn canonical_round_trip() {
        for lex in [Lexicon::demo(), Lexicon::parse(SMALL, "s").unwrap()] {
            let text = lex.to_canonical_string();
            let back = Lexicon::parse(&text, "roundtrip").unwrap();
            assert_eq!(back, lex);
            assert_eq!(back.to_canonical_string(), text);
        }
    }

    #[test]
    fn canonical_entries_are_checked() {
        let bad = SMALL.replace("tense\n", "tense # sad\n");
        assert!(Lexicon::parse(&bad, "b").is_err());
    }

    #[test]
    fn demo_lexicon_shape() {
        let lex = Lexicon::demo();
        assert_eq!(lex.name(), "demo-poms-base");
        assert!(lex.contains(MoodDimension::Depression, "sad"));
        for dim in MoodDimension::ALL {
            assert!(lex.stem_count(dim) > 0);
        }
        assert!(lex.overlap_report().is_empty());
    }
}

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, ParseError, Result};

const DEFAULT_ENGLISH: &str = include_str!("../../data/stopwords_en_214.txt");

/// Words removed from a message before stemming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordList {
    entries: HashSet<String>,
    source_id: String,
}

impl StopwordList {
    /// The bundled 214-entry English list.
    pub fn default_english() -> Self {
        Self::parse(DEFAULT_ENGLISH, "builtin:stopwords_en_214").expect("bundled stopword list parses")
    }

    /// A list that removes nothing.
    pub fn disabled() -> Self {
        StopwordList {
            entries: HashSet::new(),
            source_id: "disabled".to_string(),
        }
    }

    pub fn from_words<I, S>(words: I, source_id: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopwordList {
            entries: words.into_iter().map(|w| w.as_ref().trim().to_lowercase()).collect(),
            source_id: source_id.into(),
        }
    }

    /// Parses the one-word-per-line format; `#` starts a comment line.
    pub fn parse(text: &str, source_id: &str) -> Result<Self> {
        let mut entries = HashSet::new();
        for (n, line) in text.lines().enumerate() {
            let word = line.trim();
            if word.is_empty() || word.starts_with('#') {
                continue;
            }
            if word.split_whitespace().nth(1).is_some() {
                return Err(ParseError::new(source_id, n + 1, "expected one word per line").into());
            }
            entries.insert(word.to_lowercase());
        }
        if entries.is_empty() {
            return Err(ParseError::new(source_id, 0, "stopword list has no entries").into());
        }
        Ok(StopwordList {
            entries,
            source_id: source_id.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(word)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }
}

impl Default for StopwordList {
    fn default() -> Self {
        Self::default_english()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_list_has_214_entries() {
        let list = StopwordList::default_english();
        assert_eq!(list.len(), 214);
        for w in ["too", "to", "go", "the", "and", "get", "am", "be", "being", "im"] {
            assert!(list.contains(w), "{w}");
        }
        for w in ["feeling", "lazy", "shops", "something", "eat", "sad"] {
            assert!(!list.contains(w), "{w}");
        }
    }

    #[test]
    fn parse_skips_comments_and_lowercases() {
        let list = StopwordList::parse("# header\nThe\n\n  a \n", "t").unwrap();
        assert_eq!(list.len(), 2);
        assert!(list.contains("the"));
    }

    #[test]
    fn parse_rejects_empty_and_multiword() {
        assert!(StopwordList::parse("# nothing\n", "t").is_err());
        let err = StopwordList::parse("ok\ntwo words\n", "t").unwrap_err();
        assert!(err.to_string().contains("t:2"), "{err}");
    }
}

//! Retention and exclusion patterns that decide which messages count as
//! mood expressions.

use std::path::Path;

use crate::error::{Error, ParseError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchMode {
    /// Case-insensitive substring of the message.
    Substring,
    /// Case-insensitive match against a whole whitespace-delimited token
    /// with leading and trailing punctuation removed.
    Token,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    text: String,
    mode: MatchMode,
}

impl Pattern {
    pub fn new(text: &str, mode: MatchMode) -> Self {
        let text = match mode {
            MatchMode::Substring => fold(text),
            MatchMode::Token => trim_token(&fold(text)).to_string(),
        };
        Pattern { text, mode }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn mode(&self) -> MatchMode {
        self.mode
    }
}

/// Lowercases and maps typographic apostrophes to `'`.
fn fold(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '\u{2019}' | '\u{2018}' | '\u{02BC}' => '\'',
            c => c,
        })
        .flat_map(char::to_lowercase)
        .collect()
}

fn trim_token(token: &str) -> &str {
    token.trim_matches(|c: char| !c.is_alphanumeric())
}

/// A message is a mood candidate when at least one retention pattern matches
/// and no exclusion pattern does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    retain: Vec<Pattern>,
    exclude: Vec<Pattern>,
}

impl PatternSet {
    pub fn new(retain: Vec<Pattern>, exclude: Vec<Pattern>) -> Self {
        let mut set = PatternSet {
            retain: Vec::new(),
            exclude: Vec::new(),
        };
        for p in retain {
            if !set.retain.contains(&p) {
                set.retain.push(p);
            }
        }
        for p in exclude {
            if !set.exclude.contains(&p) {
                set.exclude.push(p);
            }
        }
        set
    }

    /// `feel` as substring; `I'm`, `Im`, `am`, `being`, `be` as whole tokens;
    /// messages containing `http:` or `www.` are excluded.
    pub fn default_mood() -> Self {
        let retain = vec![
            Pattern::new("feel", MatchMode::Substring),
            Pattern::new("I'm", MatchMode::Token),
            Pattern::new("Im", MatchMode::Token),
            Pattern::new("am", MatchMode::Token),
            Pattern::new("being", MatchMode::Token),
            Pattern::new("be", MatchMode::Token),
        ];
        let exclude = vec![
            Pattern::new("http:", MatchMode::Substring),
            Pattern::new("www.", MatchMode::Substring),
        ];
        PatternSet::new(retain, exclude)
    }

    pub fn retain(&self) -> &[Pattern] {
        &self.retain
    }

    pub fn exclude(&self) -> &[Pattern] {
        &self.exclude
    }

    /// Parses a pattern file. Each non-comment line is
    /// `substring <pattern>`, `token <pattern>`, or `exclude <pattern>`
    /// (exclusions are substring matches).
    pub fn parse(text: &str, source_id: &str) -> Result<Self> {
        let mut retain = Vec::new();
        let mut exclude = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (mode, pattern) = line
                .split_once(char::is_whitespace)
                .map(|(m, p)| (m, p.trim()))
                .ok_or_else(|| ParseError::new(source_id, n + 1, "expected `<mode> <pattern>`"))?;
            if pattern.is_empty() {
                return Err(ParseError::new(source_id, n + 1, "empty pattern").into());
            }
            match mode.to_ascii_lowercase().as_str() {
                "substring" => retain.push(Pattern::new(pattern, MatchMode::Substring)),
                "token" => retain.push(Pattern::new(pattern, MatchMode::Token)),
                "exclude" => exclude.push(Pattern::new(pattern, MatchMode::Substring)),
                other => {
                    return Err(ParseError::new(
                        source_id,
                        n + 1,
                        format!("unknown pattern mode `{other}` (expected substring, token or exclude)"),
                    )
                    .into())
                }
            }
        }
        if retain.is_empty() {
            return Err(ParseError::new(source_id, 0, "no retention patterns").into());
        }
        Ok(PatternSet::new(retain, exclude))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn is_candidate(&self, text: &str) -> bool {
        let folded = fold(text);
        if self.exclude.iter().any(|p| folded.contains(p.text.as_str())) {
            return false;
        }
        self.retain.iter().any(|p| match p.mode {
            MatchMode::Substring => folded.contains(p.text.as_str()),
            MatchMode::Token => folded.split_whitespace().any(|tok| trim_token(tok) == p.text),
        })
    }
}

impl Default for PatternSet {
    fn default() -> Self {
        Self::default_mood()
    }
}

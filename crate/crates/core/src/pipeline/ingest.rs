//! Streaming corpus reader.
//!
//! One record per line: a JSON object with string fields `ts` (ISO-8601)
//! and `text`, or the plain `ts<TAB>text` fallback. Lines that fail to
//! parse (blank lines included) are tallied as malformed and skipped.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::textnorm::{parse_timestamp, RawMessage};

#[derive(Deserialize)]
struct JsonRecord {
    ts: String,
    text: String,
}

/// Parses one corpus line.
pub fn parse_line(line: &str) -> std::result::Result<RawMessage, String> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    if line.trim().is_empty() {
        return Err("blank line".into());
    }
    let (ts, text) = if line.trim_start().starts_with('{') {
        let rec: JsonRecord = serde_json::from_str(line).map_err(|e| format!("json: {e}"))?;
        (rec.ts, rec.text)
    } else {
        let (ts, text) = line.split_once('\t').ok_or("expected `ts<TAB>text` or a JSON object")?;
        (ts.to_string(), text.to_string())
    };
    let timestamp = parse_timestamp(&ts).ok_or_else(|| format!("unparseable timestamp `{ts}`"))?;
    Ok(RawMessage { timestamp, text })
}

/// Reads raw lines in file order, a batch at a time.
pub struct LineBatches<R> {
    reader: R,
    source: String,
    batch_size: usize,
    done: bool,
}

impl<R: BufRead> LineBatches<R> {
    pub fn new(reader: R, source: impl Into<String>, batch_size: usize) -> Self {
        LineBatches {
            reader,
            source: source.into(),
            batch_size: batch_size.max(1),
            done: false,
        }
    }

    /// Next batch of lines, or `None` at end of input. Invalid UTF-8 is
    /// replaced so that the line is still counted (and later rejected).
    pub fn next_batch(&mut self) -> Result<Option<Vec<String>>> {
        if self.done {
            return Ok(None);
        }
        let mut batch = Vec::with_capacity(self.batch_size);
        let mut buf = Vec::new();
        while batch.len() < self.batch_size {
            buf.clear();
            let n = self
                .reader
                .read_until(b'\n', &mut buf)
                .map_err(|e| Error::io(&self.source, e))?;
            if n == 0 {
                self.done = true;
                break;
            }
            if buf.last() == Some(&b'\n') {
                buf.pop();
            }
            batch.push(String::from_utf8_lossy(&buf).into_owned());
        }
        Ok((!batch.is_empty()).then_some(batch))
    }
}

/// Opens a corpus file (`-` reads standard input).
pub fn open_corpus(path: &Path) -> Result<Box<dyn BufRead + Send>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufReader::with_capacity(1 << 16, io::stdin())));
    }
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(Box::new(BufReader::with_capacity(1 << 16, file)))
}

/// Records of one corpus in file order, counting malformed lines.
pub struct CorpusReader<R> {
    lines: LineBatches<R>,
    pending: std::vec::IntoIter<String>,
    malformed: u64,
    records: u64,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(reader: R, source: impl Into<String>) -> Self {
        CorpusReader {
            lines: LineBatches::new(reader, source, 4096),
            pending: Vec::new().into_iter(),
            malformed: 0,
            records: 0,
        }
    }

    pub fn malformed(&self) -> u64 {
        self.malformed
    }

    pub fn records(&self) -> u64 {
        self.records
    }

    /// Next well-formed record; I/O errors are fatal.
    pub fn next_record(&mut self) -> Result<Option<RawMessage>> {
        loop {
            if let Some(line) = self.pending.next() {
                match parse_line(&line) {
                    Ok(msg) => {
                        self.records += 1;
                        return Ok(Some(msg));
                    }
                    Err(_) => self.malformed += 1,
                }
                continue;
            }
            match self.lines.next_batch()? {
                Some(batch) => self.pending = batch.into_iter(),
                None => return Ok(None),
            }
        }
    }
}

/// Opens `path` for record-by-record reading.
pub fn ingest(path: &Path) -> Result<CorpusReader<Box<dyn BufRead + Send>>> {
    Ok(CorpusReader::new(open_corpus(path)?, path.display().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read_all(text: &str) -> (Vec<RawMessage>, u64) {
        let mut r = CorpusReader::new(text.as_bytes(), "mem");
        let mut out = Vec::new();
        while let Some(m) = r.next_record().unwrap() {
            out.push(m);
        }
        (out, r.malformed())
    }

    #[test]
    fn empty_input() {
        assert_eq!(read_all(""), (vec![], 0));
    }

    #[test]
    fn one_valid_one_malformed() {
        let (recs, bad) = read_all("{\"ts\":\"2008-08-01T10:00:00Z\",\"text\":\"I feel sad\"}\nnot a record\n");
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].text, "I feel sad");
        assert_eq!(bad, 1);
    }

    #[test]
    fn tsv_fallback_and_crlf() {
        let (recs, bad) = read_all("2008-08-01T10:00:00Z\tI am tired\r\n2008-08-02 11:00:00\tok\n");
        assert_eq!(bad, 0);
        assert_eq!(recs[0].text, "I am tired");
        assert_eq!(recs[1].date().to_string(), "2008-08-02");
    }

    #[test]
    fn malformed_variants() {
        let text = "\n{\"ts\":\"nope\",\"text\":\"x\"}\n{\"ts\":\"2008-08-01\"}\n{\"ts\":\"2008-08-01\",\"text\":null}\n{broken\nbad-ts\ttext\n";
        let (recs, bad) = read_all(text);
        assert!(recs.is_empty());
        assert_eq!(bad, 6);
    }

    #[test]
    fn json_extra_fields_and_escapes() {
        let (recs, _) = read_all("{\"id\":7,\"ts\":\"2008-08-01T00:00:00+02:00\",\"text\":\"tab\\there \\u00e9\"}\n");
        assert_eq!(recs[0].text, "tab\there é");
        assert_eq!(recs[0].date().to_string(), "2008-07-31");
    }

    #[test]
    fn invalid_utf8_is_malformed_not_fatal() {
        let bytes: &[u8] = b"2008-08-01\t\xff\xfe\n";
        let mut r = CorpusReader::new(bytes, "mem");
        // lossy decoding keeps the line; it parses as TSV with replacement chars
        assert!(r.next_record().unwrap().is_some());
        assert!(r.next_record().unwrap().is_none());
    }
}

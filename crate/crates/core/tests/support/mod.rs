//! Shared by the integration suites of several crates.
#![allow(dead_code)]

pub mod oracles;
pub mod synth;

use std::path::PathBuf;

pub fn core_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core")
}

pub fn porter_pairs() -> Vec<(String, String)> {
    let dir = core_dir().join("tests/data/porter");
    let voc = std::fs::read_to_string(dir.join("voc.txt")).unwrap();
    let out = std::fs::read_to_string(dir.join("output.txt")).unwrap();
    let pairs: Vec<_> = voc
        .lines()
        .zip(out.lines())
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert_eq!(pairs.len(), voc.lines().count());
    pairs
}

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use moodseries::scoring::{Outcome, Scorer};
use moodseries::series::{variance_normalize, zscore_normalize, DailyAggregator};
use moodseries::stats::{mann_whitney, spearman_rho};
use moodseries::textnorm::{porter_stem, tokenize, PatternSet};
use moodseries::{Lexicon, StopwordList};
use moodseries_bench::{day_of, messages, raw_series, samples, words};

fn textnorm(c: &mut Criterion) {
    let vocab = words(10_000, 1);
    let mut g = c.benchmark_group("textnorm");
    g.throughput(Throughput::Elements(vocab.len() as u64));
    g.bench_function("porter_stem", |b| {
        b.iter(|| vocab.iter().map(|w| porter_stem(black_box(w)).len()).sum::<usize>())
    });
    let msgs = messages(10_000, 2);
    let stopwords = StopwordList::default_english();
    g.throughput(Throughput::Elements(msgs.len() as u64));
    g.bench_function("tokenize", |b| {
        b.iter(|| {
            msgs.iter()
                .map(|m| tokenize(black_box(&m.text), &stopwords).terms.len())
                .sum::<usize>()
        })
    });
    g.finish();
}

fn scoring(c: &mut Criterion) {
    let msgs = messages(10_000, 3);
    let scorer = Scorer::new(
        StopwordList::default_english(),
        PatternSet::default_mood(),
        Lexicon::demo(),
    );
    let mut g = c.benchmark_group("scoring");
    g.throughput(Throughput::Elements(msgs.len() as u64));
    g.bench_function("classify", |b| {
        b.iter(|| {
            msgs.iter()
                .filter(|m| matches!(scorer.classify(black_box(m)), Outcome::Scored(_)))
                .count()
        })
    });
    g.finish();
}

fn series(c: &mut Criterion) {
    let msgs = messages(20_000, 4);
    let scorer = Scorer::new(
        StopwordList::default_english(),
        PatternSet::default_mood(),
        Lexicon::demo(),
    );
    let vectors: Vec<[f64; 6]> = msgs
        .iter()
        .filter_map(|m| match scorer.classify(m) {
            Outcome::Scored(s) => Some(*s.vector.components()),
            _ => None,
        })
        .collect();
    let mut g = c.benchmark_group("series");
    g.throughput(Throughput::Elements(vectors.len() as u64));
    g.bench_function("aggregate", |b| {
        b.iter(|| {
            let mut agg = DailyAggregator::new(None);
            for (i, v) in vectors.iter().enumerate() {
                agg.add(day_of(i, 153), v);
            }
            agg.finish().len()
        })
    });
    for days in [365, 3650] {
        let raw = raw_series(days, 5);
        g.throughput(Throughput::Elements(days as u64));
        g.bench_with_input(BenchmarkId::new("zscore", days), &raw, |b, s| {
            b.iter(|| zscore_normalize(s, 30).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("variance", days), &raw, |b, s| {
            b.iter(|| variance_normalize(s, 30).unwrap())
        });
    }
    g.finish();
}

fn stats(c: &mut Criterion) {
    let mut g = c.benchmark_group("stats");
    for (n1, n2) in [(8, 8), (20, 25), (200, 200)] {
        let (a, b) = samples(n1, n2, 6);
        g.bench_with_input(
            BenchmarkId::new("mann_whitney", format!("{n1}x{n2}")),
            &(a, b),
            |bench, (a, b)| bench.iter(|| mann_whitney(a, b).unwrap()),
        );
    }
    let (x, y) = samples(150, 150, 7);
    g.bench_function("spearman_150", |b| {
        b.iter(|| spearman_rho(black_box(&x), black_box(&y)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, textnorm, scoring, series, stats);
criterion_main!(benches);

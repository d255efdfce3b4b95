//! Slow, obviously-correct reference implementations.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// Distinct terms of `terms` found in each dimension's stem list, by
/// linear scan.
pub fn intersection_counts(terms: &[String], dims: &[Vec<String>; 6]) -> [u32; 6] {
    let distinct: BTreeSet<&String> = terms.iter().collect();
    let mut out = [0u32; 6];
    for (slot, stems) in out.iter_mut().zip(dims) {
        *slot = distinct.iter().filter(|t| stems.iter().any(|s| s == **t)).count() as u32;
    }
    out
}

/// Doubled U statistic of `a`: 2 * #(a > b) + #(a == b) over all pairs.
fn doubled_u(a: &[f64], b: &[f64]) -> i64 {
    let mut u = 0;
    for x in a {
        for y in b {
            u += match x.partial_cmp(y).unwrap() {
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            };
        }
    }
    u
}

/// Two-sided Mann-Whitney p by enumerating every labeling of the pooled
/// sample into groups of the original sizes. Returns `(min(U1, U2), p)`.
pub fn mann_whitney_enumerated(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (n1, n2) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    assert!(n <= 24, "enumeration is exponential");
    let centre = (n1 * n2) as i64; // doubled n1*n2/2
    let observed = (doubled_u(a, b) - centre).abs();
    let (mut extreme, mut total) = (0u64, 0u64);
    let (mut ga, mut gb) = (Vec::with_capacity(n1), Vec::with_capacity(n2));
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        ga.clear();
        gb.clear();
        for (i, &v) in pooled.iter().enumerate() {
            if mask >> i & 1 == 1 {
                ga.push(v);
            } else {
                gb.push(v);
            }
        }
        total += 1;
        if (doubled_u(&ga, &gb) - centre).abs() >= observed {
            extreme += 1;
        }
    }
    let u1 = doubled_u(a, b) as f64 / 2.0;
    let u = u1.min((n1 * n2) as f64 - u1);
    (u, extreme as f64 / total as f64)
}

/// Average ranks by counting: 1 + #smaller + (#equal - 1) / 2.
pub fn average_ranks_by_counting(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let smaller = x.iter().filter(|&&w| w < v).count() as f64;
            let equal = x.iter().filter(|&&w| w == v).count() as f64;
            1.0 + smaller + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Pearson correlation, two-pass.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

pub fn spearman_brute(x: &[f64], y: &[f64]) -> f64 {
    pearson(&average_ranks_by_counting(x), &average_ranks_by_counting(y))
}

/// Standard normal deviate by Box-Muller from two uniforms in (0, 1].
pub fn gaussian(u1: f64, u2: f64) -> f64 {
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

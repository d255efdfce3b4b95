//! Two-sample Mann-Whitney U test.
//!
//! Ranks are averaged over ties. The reported statistic is `min(U1, U2)`.
//! The two-sided p-value is the share of labelings whose `|U1 - n1*n2/2|`
//! is at least the observed one: exact (permutation distribution of the
//! tied ranks) when `n1 + n2 <= 16`, otherwise the normal approximation
//! with tie-corrected variance and continuity correction.

use statrs::function::erf::erfc;

use super::StatsError;

/// Largest pooled size for which the exact distribution is used.
pub const EXACT_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    /// `min(U1, U2)`.
    pub u: f64,
    /// U of the first sample: pairs (a, b) with a > b, ties counting 1/2.
    pub u1: f64,
    pub p: f64,
    pub method: PMethod,
}

/// Pooled ranks, doubled so that average ranks of ties are integers.
struct Pooled {
    n1: usize,
    n2: usize,
    doubled_ranks: Vec<u64>,
    /// Doubled rank sum of the first sample.
    doubled_r1: u64,
    tie_sizes: Vec<usize>,
}

impl Pooled {
    fn new(a: &[f64], b: &[f64]) -> Result<Self, StatsError> {
        if a.is_empty() || b.is_empty() {
            return Err(StatsError::EmptySample);
        }
        if a.iter().chain(b).any(|v| v.is_nan()) {
            return Err(StatsError::NotANumber);
        }
        let mut pooled: Vec<(f64, bool)> = a
            .iter()
            .map(|&v| (v, true))
            .chain(b.iter().map(|&v| (v, false)))
            .collect();
        pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("no NaN"));
        let mut doubled_ranks = Vec::with_capacity(pooled.len());
        let mut doubled_r1 = 0;
        let mut tie_sizes = Vec::new();
        let mut start = 0;
        while start < pooled.len() {
            let mut end = start + 1;
            while end < pooled.len() && pooled[end].0 == pooled[start].0 {
                end += 1;
            }
            let r = (start + 1 + end) as u64;
            for item in &pooled[start..end] {
                doubled_ranks.push(r);
                if item.1 {
                    doubled_r1 += r;
                }
            }
            if end - start > 1 {
                tie_sizes.push(end - start);
            }
            start = end;
        }
        Ok(Pooled {
            n1: a.len(),
            n2: b.len(),
            doubled_ranks,
            doubled_r1,
            tie_sizes,
        })
    }

    /// `2 * U1`.
    fn doubled_u1(&self) -> i64 {
        self.doubled_r1 as i64 - (self.n1 * (self.n1 + 1)) as i64
    }

    fn u1(&self) -> f64 {
        self.doubled_u1() as f64 / 2.0
    }

    fn result(&self, p: f64, method: PMethod) -> MannWhitney {
        let u1 = self.u1();
        let u2 = (self.n1 * self.n2) as f64 - u1;
        MannWhitney {
            u: u1.min(u2),
            u1,
            p: p.clamp(0.0, 1.0),
            method,
        }
    }

    fn exact_p(&self) -> f64 {
        let n1 = self.n1;
        let max_sum: u64 = self.doubled_ranks.iter().sum();
        let width = max_sum as usize + 1;
        // ways[j][s]: subsets of size j with doubled rank sum s
        let mut ways = vec![vec![0u64; width]; n1 + 1];
        ways[0][0] = 1;
        for &r in &self.doubled_ranks {
            let r = r as usize;
            for j in (1..=n1).rev() {
                let (lower, upper) = ways.split_at_mut(j);
                let (prev, cur) = (&lower[j - 1], &mut upper[0]);
                for s in (r..width).rev() {
                    cur[s] += prev[s - r];
                }
            }
        }
        let centre = (self.n1 * self.n2) as i64;
        let offset = (n1 * (n1 + 1)) as i64;
        let observed = (self.doubled_u1() - centre).abs();
        let mut extreme = 0u64;
        let mut total = 0u64;
        for (s, &count) in ways[n1].iter().enumerate() {
            if count == 0 {
                continue;
            }
            total += count;
            if (s as i64 - offset - centre).abs() >= observed {
                extreme += count;
            }
        }
        extreme as f64 / total as f64
    }

    fn normal_p(&self) -> f64 {
        let (n1, n2) = (self.n1 as f64, self.n2 as f64);
        let n = n1 + n2;
        let mean = n1 * n2 / 2.0;
        let tie_term: f64 = self.tie_sizes.iter().map(|&t| (t * t * t - t) as f64).sum();
        let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
        if var <= 0.0 {
            return 1.0;
        }
        let z = ((self.u1() - mean).abs() - 0.5).max(0.0) / var.sqrt();
        erfc(z / std::f64::consts::SQRT_2)
    }
}

/// Exact for pooled size up to [`EXACT_LIMIT`], normal approximation above.
pub fn mann_whitney(a: &[f64], b: &[f64]) -> Result<MannWhitney, StatsError> {
    let pooled = Pooled::new(a, b)?;
    if pooled.n1 + pooled.n2 <= EXACT_LIMIT {
        Ok(pooled.result(pooled.exact_p(), PMethod::Exact))
    } else {
        Ok(pooled.result(pooled.normal_p(), PMethod::Normal))
    }
}

/// Exact permutation p-value at any size. Cost grows with
/// `n1 * (n1 + n2)^3`; intended for small samples.
pub fn mann_whitney_exact(a: &[f64], b: &[f64]) -> Result<MannWhitney, StatsError> {
    let pooled = Pooled::new(a, b)?;
    Ok(pooled.result(pooled.exact_p(), PMethod::Exact))
}

pub fn mann_whitney_normal(a: &[f64], b: &[f64]) -> Result<MannWhitney, StatsError> {
    let pooled = Pooled::new(a, b)?;
    Ok(pooled.result(pooled.normal_p(), PMethod::Normal))
}

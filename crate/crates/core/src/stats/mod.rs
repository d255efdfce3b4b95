//! Rank statistics over mood series: the inter-dimension Spearman matrix
//! and Mann-Whitney comparisons of mood levels between periods.

mod mann_whitney;
mod rank;
mod spearman;

use std::fmt::Write as _;

use thiserror::Error;

pub use mann_whitney::{mann_whitney, mann_whitney_exact, mann_whitney_normal, MannWhitney, PMethod, EXACT_LIMIT};
pub use rank::{average_ranks, median, tie_groups};
pub use spearman::{spearman, spearman_rho, t_test_p, Spearman};

use crate::analysis::Period;
use crate::dimension::{MoodDimension, DIMENSIONS};
use crate::scoring::format_component;
use crate::series::MoodSeries;

pub const DEFAULT_SIGNIFICANCE: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("samples differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {needed} observations, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("zero rank variance: correlation undefined")]
    ZeroRankVariance,
    #[error("empty sample")]
    EmptySample,
    #[error("sample contains NaN")]
    NotANumber,
    #[error("at least two periods are required")]
    NeedTwoPeriods,
    #[error("duplicate period name `{0}`")]
    DuplicatePeriod(String),
    #[error("period `{name}` ({start}..={end}) is outside the series range")]
    PeriodOutOfRange {
        name: String,
        start: chrono::NaiveDate,
        end: chrono::NaiveDate,
    },
    #[error("period `{name}` has no usable {dimension} values")]
    PeriodWithoutData { name: String, dimension: MoodDimension },
}

/// Pairwise Spearman correlations between the six dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    /// `None` where the correlation is undefined (constant column).
    pub rho: [[Option<f64>; DIMENSIONS]; DIMENSIONS],
    /// t-approximation p-values (approximate).
    pub p_approx: [[Option<f64>; DIMENSIONS]; DIMENSIONS],
    /// Days used for each pair (pairwise complete).
    pub n: [[usize; DIMENSIONS]; DIMENSIONS],
}

impl CorrelationMatrix {
    pub fn get(&self, a: MoodDimension, b: MoodDimension) -> Option<f64> {
        self.rho[a.position()][b.position()]
    }

    /// Largest pairwise day count.
    pub fn sample_size(&self) -> usize {
        self.n.iter().flatten().copied().max().unwrap_or(0)
    }

    fn render(cells: &[[Option<f64>; DIMENSIONS]; DIMENSIONS]) -> String {
        let mut out = String::from("dimension");
        for d in MoodDimension::ALL {
            let _ = write!(out, ",{d}");
        }
        out.push('\n');
        for a in MoodDimension::ALL {
            out.push_str(a.label());
            for b in MoodDimension::ALL {
                match cells[a.position()][b.position()] {
                    Some(v) => {
                        let _ = write!(out, ",{}", format_component(v));
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    /// 6x6 rho matrix with dimension headers.
    pub fn to_csv(&self) -> String {
        Self::render(&self.rho)
    }

    /// Long form: one row per unordered pair with n and approximate p.
    pub fn pairs_csv(&self) -> String {
        let mut out = String::from("dimension_a,dimension_b,n,rho,p_approx\n");
        for a in MoodDimension::ALL {
            for b in MoodDimension::ALL.into_iter().skip(a.position() + 1) {
                let (i, j) = (a.position(), b.position());
                let cell = |v: Option<f64>| v.map(format_component).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{a},{b},{},{},{}",
                    self.n[i][j],
                    cell(self.rho[i][j]),
                    cell(self.p_approx[i][j])
                );
            }
        }
        out
    }
}

/// Spearman correlations between every pair of dimensions over the days on
/// which both values are usable (present and not degenerate).
pub fn correlation_matrix(series: &MoodSeries) -> Result<CorrelationMatrix, StatsError> {
    let usable = series.non_empty_days();
    if usable < 3 {
        return Err(StatsError::TooFew { needed: 3, got: usable });
    }
    let mut m = CorrelationMatrix {
        rho: [[None; DIMENSIONS]; DIMENSIONS],
        p_approx: [[None; DIMENSIONS]; DIMENSIONS],
        n: [[0; DIMENSIONS]; DIMENSIONS],
    };
    for a in MoodDimension::ALL {
        for b in MoodDimension::ALL.into_iter().skip(a.position()) {
            let (x, y): (Vec<f64>, Vec<f64>) = series
                .days()
                .iter()
                .filter_map(|d| Some((d.usable_value(a)?, d.usable_value(b)?)))
                .unzip();
            let (i, j) = (a.position(), b.position());
            m.n[i][j] = x.len();
            m.n[j][i] = x.len();
            let result = match spearman(&x, &y) {
                Ok(s) => Some(s),
                Err(StatsError::ZeroRankVariance) | Err(StatsError::TooFew { .. }) => None,
                Err(e) => return Err(e),
            };
            let (rho, p) = match (result, i == j) {
                (Some(_), true) => (Some(1.0), Some(0.0)),
                (Some(s), false) => (Some(s.rho), Some(s.p_approx)),
                (None, _) => (None, None),
            };
            m.rho[i][j] = rho;
            m.rho[j][i] = rho;
            m.p_approx[i][j] = p;
            m.p_approx[j][i] = p;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodComparison {
    pub dimension: MoodDimension,
    pub period_a: String,
    pub period_b: String,
    pub median_a: f64,
    pub median_b: f64,
    pub n_a: usize,
    pub n_b: usize,
    pub u: f64,
    pub p: f64,
    pub method: PMethod,
}

/// Every (dimension, unordered period pair) comparison plus the threshold
/// used for the significant view.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub comparisons: Vec<PeriodComparison>,
    pub threshold: f64,
}

impl ComparisonReport {
    pub fn significant(&self) -> impl Iterator<Item = &PeriodComparison> {
        self.comparisons.iter().filter(|c| c.p < self.threshold)
    }

    pub const CSV_HEADER: &'static str = "dimension,period_a,period_b,median_a,median_b,U,p,significant";

    fn csv_rows<'a>(&self, rows: impl Iterator<Item = &'a PeriodComparison>) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for c in rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                c.dimension,
                c.period_a,
                c.period_b,
                format_component(c.median_a),
                format_component(c.median_b),
                c.u,
                format_p(c.p),
                c.p < self.threshold
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        self.csv_rows(self.comparisons.iter())
    }

    pub fn significant_csv(&self) -> String {
        self.csv_rows(self.significant())
    }
}

fn format_p(p: f64) -> String {
    // p-values can be far below the 9-decimal grid
    if p != 0.0 && p < 1e-6 {
        format!("{p:.6e}")
    } else {
        format!("{p:.9}")
    }
}

/// Mann-Whitney comparisons for every dimension and unordered pair of
/// periods, ordered by dimension, then by the periods' positions in
/// `periods`. Day values are the usable (present, non-degenerate) values.
pub fn compare_periods(
    series: &MoodSeries,
    periods: &[Period],
    threshold: f64,
) -> Result<ComparisonReport, StatsError> {
    if periods.len() < 2 {
        return Err(StatsError::NeedTwoPeriods);
    }
    for (i, p) in periods.iter().enumerate() {
        if periods[..i].iter().any(|q| q.name == p.name) {
            return Err(StatsError::DuplicatePeriod(p.name.clone()));
        }
    }
    let range = series.range();
    for p in periods {
        if !range.is_some_and(|r| r.contains(p.start) && r.contains(p.end)) {
            return Err(StatsError::PeriodOutOfRange {
                name: p.name.clone(),
                start: p.start,
                end: p.end,
            });
        }
    }
    let values = |p: &Period, dim: MoodDimension| -> Result<Vec<f64>, StatsError> {
        let v: Vec<f64> = series
            .days()
            .iter()
            .filter(|d| p.contains(d.date))
            .filter_map(|d| d.usable_value(dim))
            .collect();
        if v.is_empty() {
            return Err(StatsError::PeriodWithoutData {
                name: p.name.clone(),
                dimension: dim,
            });
        }
        Ok(v)
    };
    let mut comparisons = Vec::with_capacity(DIMENSIONS * periods.len() * (periods.len() - 1) / 2);
    for dim in MoodDimension::ALL {
        for (i, a) in periods.iter().enumerate() {
            for b in &periods[i + 1..] {
                let (xa, xb) = (values(a, dim)?, values(b, dim)?);
                let mw = mann_whitney(&xa, &xb)?;
                comparisons.push(PeriodComparison {
                    dimension: dim,
                    period_a: a.name.clone(),
                    period_b: b.name.clone(),
                    median_a: median(&xa),
                    median_b: median(&xb),
                    n_a: xa.len(),
                    n_b: xb.len(),
                    u: mw.u,
                    p: mw.p,
                    method: mw.method,
                });
            }
        }
    }
    Ok(ComparisonReport { comparisons, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::builtin_periods;
    use chrono::NaiveDate;

    fn date(m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2008, m, d).unwrap()
    }

    fn wavy_series(start: NaiveDate, n: usize) -> MoodSeries {
        let cols: [Vec<f64>; DIMENSIONS] =
            std::array::from_fn(|d| (0..n).map(|i| ((i * (d + 3)) as f64 * 0.7).sin()).collect());
        MoodSeries::from_columns(start, &cols)
    }

    #[test]
    fn identical_dimensions_give_all_ones() {
        let col: Vec<f64> = (0..30).map(|i| (i as f64 * 1.3).cos()).collect();
        let cols: [Vec<f64>; DIMENSIONS] = std::array::from_fn(|_| col.clone());
        let m = correlation_matrix(&MoodSeries::from_columns(date(8, 1), &cols)).unwrap();
        for row in m.rho {
            for v in row {
                assert!((v.unwrap() - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(m.sample_size(), 30);
    }

    #[test]
    fn matrix_is_symmetric_with_unit_diagonal() {
        let m = correlation_matrix(&wavy_series(date(8, 1), 50)).unwrap();
        for i in 0..DIMENSIONS {
            assert_eq!(m.rho[i][i], Some(1.0));
            for j in 0..DIMENSIONS {
                assert_eq!(m.rho[i][j], m.rho[j][i]);
                let r = m.rho[i][j].unwrap();
                assert!((-1.0..=1.0).contains(&r));
            }
        }
        let csv = m.to_csv();
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with("dimension,tension,depression,anger,vigour,fatigue,confusion\n"));
        assert_eq!(m.pairs_csv().lines().count(), 16);
    }

    #[test]
    fn matrix_needs_three_days() {
        assert!(matches!(
            correlation_matrix(&wavy_series(date(8, 1), 2)),
            Err(StatsError::TooFew { .. })
        ));
    }

    #[test]
    fn thirty_six_comparisons_for_four_periods() {
        let series = wavy_series(date(8, 1), 142);
        let periods = builtin_periods("DJIA").unwrap();
        let report = compare_periods(&series, &periods, DEFAULT_SIGNIFICANCE).unwrap();
        assert_eq!(report.comparisons.len(), 36);
        assert_eq!(report.comparisons[0].dimension, MoodDimension::Tension);
        assert_eq!(
            (
                report.comparisons[0].period_a.as_str(),
                report.comparisons[0].period_b.as_str()
            ),
            ("DJIA-I", "DJIA-II")
        );
        assert_eq!(report.comparisons[5].period_a, "DJIA-III");
        assert_eq!(report.comparisons[6].dimension, MoodDimension::Depression);
        assert_eq!(report.to_csv().lines().count(), 37);
    }

    #[test]
    fn duplicated_periods_are_never_significant() {
        let series = wavy_series(date(8, 1), 60);
        let a = Period::new("A", date(8, 5), date(8, 20)).unwrap();
        let b = Period::new("B", date(8, 5), date(8, 20)).unwrap();
        let report = compare_periods(&series, &[a, b], 0.05).unwrap();
        assert_eq!(report.comparisons.len(), 6);
        assert!(report.comparisons.iter().all(|c| (c.p - 1.0).abs() < 1e-12));
        assert_eq!(report.significant().count(), 0);
    }

    #[test]
    fn shifted_period_is_detected() {
        // 32 days; periods I = days 0..8, IV = days 24..32; +3 on vigour in IV
        let n = 32;
        let mut cols: [Vec<f64>; DIMENSIONS] =
            std::array::from_fn(|d| (0..n).map(|i| ((i * 7 + d * 13) % 11) as f64 / 11.0).collect());
        for v in &mut cols[MoodDimension::Vigour.position()][24..32] {
            *v += 3.0;
        }
        let series = MoodSeries::from_columns(date(8, 1), &cols);
        let periods = [
            Period::new("I", date(8, 1), date(8, 8)).unwrap(),
            Period::new("IV", date(8, 25), date(9, 1)).unwrap(),
        ];
        let report = compare_periods(&series, &periods, 0.05).unwrap();
        let vig = report
            .comparisons
            .iter()
            .find(|c| c.dimension == MoodDimension::Vigour)
            .unwrap();
        assert_eq!(vig.method, PMethod::Exact);
        assert!(vig.p < 0.01, "{}", vig.p);
        assert_eq!(vig.u, 0.0);
    }

    #[test]
    fn period_errors_name_the_period() {
        let series = wavy_series(date(8, 1), 30);
        let periods = builtin_periods("DJIA").unwrap();
        let err = compare_periods(&series, &periods, 0.05).unwrap_err();
        assert!(err.to_string().contains("DJIA-II"), "{err}");
        let one = &periods[..1];
        assert_eq!(
            compare_periods(&series, one, 0.05).unwrap_err(),
            StatsError::NeedTwoPeriods
        );
        let dup = [periods[0].clone(), periods[0].clone()];
        assert!(matches!(
            compare_periods(&series, &dup, 0.05),
            Err(StatsError::DuplicatePeriod(_))
        ));
    }

    #[test]
    fn p_formatting() {
        assert_eq!(format_p(0.05), "0.050000000");
        assert_eq!(format_p(1.5e-9), "1.500000e-9");
        assert_eq!(format_p(0.0), "0.000000000");
    }
}

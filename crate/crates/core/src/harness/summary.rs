use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::record::EvalRecord;
use super::run::best_record;
use crate::error::{Error, Result};
use crate::predictors::Family;

/// Linear-interpolation percentile of already sorted values, `q` in [0, 1].
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionStats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub p10: f64,
    pub p90: f64,
    pub max: f64,
}

impl DistributionStats {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        Some(DistributionStats {
            count: v.len(),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            median: percentile(&v, 0.5),
            p10: percentile(&v, 0.1),
            p90: percentile(&v, 0.9),
            max: v[v.len() - 1],
        })
    }
}

/// Per-family statistics. "All" pools every grid point; "optimized" uses
/// each machine's best record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySummary {
    pub family: Family,
    pub records: usize,
    pub failed: usize,
    pub machines: usize,
    pub distortion_all: Option<DistributionStats>,
    pub distance_all: Option<DistributionStats>,
    pub distortion_optimized: Option<DistributionStats>,
    pub distance_optimized: Option<DistributionStats>,
    /// Mean distortion at the smallest and largest size present.
    pub distortion_at_min_size: Option<f64>,
    pub distortion_at_max_size: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub family: Family,
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressionTarget {
    MinDistortion,
    MinDistance,
}

impl RegressionTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            RegressionTarget::MinDistortion => "min_distortion",
            RegressionTarget::MinDistance => "min_distance",
        }
    }
}

/// `target ≈ coef_h_mu·h_μ + coef_c_mu·C_μ + intercept` over machines.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Regression {
    pub family: Family,
    pub target: RegressionTarget,
    pub machines: usize,
    pub coef_h_mu: f64,
    pub coef_c_mu: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub total_records: usize,
    pub families: Vec<FamilySummary>,
    /// Normalized distance of each machine's best record.
    pub histogram: Vec<HistogramBin>,
    pub regressions: Vec<Regression>,
    /// Regressions that could not be fitted, with the reason.
    pub regression_notes: Vec<String>,
}

/// Ordinary least squares of `ys` on `[x0, x1, 1]` through the normal
/// equations. Returns `([b0, b1, intercept], R²)`; `R² = 0` for a
/// constant target.
pub fn ols(xs: &[[f64; 2]], ys: &[f64]) -> Result<([f64; 3], f64)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "regression needs at least 3 observations, got {}",
            xs.len().min(ys.len())
        )));
    }
    let mut xtx = Matrix3::<f64>::zeros();
    let mut xty = Vector3::<f64>::zeros();
    for (x, &y) in xs.iter().zip(ys) {
        let row = Vector3::new(x[0], x[1], 1.0);
        xtx += row * row.transpose();
        xty += row * y;
    }
    let sv = xtx.singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > 1e-12 * smax) {
        return Err(Error::DegenerateRegression(
            "design matrix is rank deficient (h_mu and C_mu do not vary independently)".into(),
        ));
    }
    let beta = xtx
        .lu()
        .solve(&xty)
        .ok_or_else(|| Error::DegenerateRegression("singular normal equations".into()))?;
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (beta[0] * x[0] + beta[1] * x[1] + beta[2])).powi(2))
        .sum();
    let r2 = if ss_tot == 0.0 { 0.0 } else { 1.0 - ss_res / ss_tot };
    Ok(([beta[0], beta[1], beta[2]], r2))
}

fn by_family(records: &[EvalRecord]) -> BTreeMap<Family, Vec<&EvalRecord>> {
    let mut m: BTreeMap<Family, Vec<&EvalRecord>> = BTreeMap::new();
    for r in records {
        m.entry(r.family).or_default().push(r);
    }
    m
}

fn by_machine<'a>(records: &[&'a EvalRecord]) -> BTreeMap<&'a str, Vec<&'a EvalRecord>> {
    let mut m: BTreeMap<&str, Vec<&EvalRecord>> = BTreeMap::new();
    for r in records {
        m.entry(r.machine_id.as_str()).or_default().push(r);
    }
    m
}

/// Fits both targets for every family, using one row per machine: its
/// lowest distortion and its lowest normalized distance.
pub fn complexity_regression(records: &[EvalRecord]) -> Vec<(Family, RegressionTarget, Result<Regression>)> {
    let mut out = Vec::new();
    for (family, recs) in by_family(records) {
        let machines = by_machine(&recs);
        for target in [RegressionTarget::MinDistortion, RegressionTarget::MinDistance] {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for rs in machines.values() {
                let ok = rs.iter().filter(|r| !r.failed);
                let y = match target {
                    RegressionTarget::MinDistortion => ok.map(|r| r.normalized_distortion_pct).reduce(f64::min),
                    RegressionTarget::MinDistance => ok.filter_map(|r| r.normalized_distance).reduce(f64::min),
                };
                if let Some(y) = y {
                    xs.push([rs[0].h_mu, rs[0].c_mu]);
                    ys.push(y);
                }
            }
            let fit = ols(&xs, &ys).map(|(c, r2)| Regression {
                family,
                target,
                machines: xs.len(),
                coef_h_mu: c[0],
                coef_c_mu: c[1],
                intercept: c[2],
                r_squared: r2,
            });
            out.push((family, target, fit));
        }
    }
    out
}

/// Summarizes a record store. Failed records are counted but contribute to
/// no statistic. `bin_width` sets the normalized-distance histogram bins.
pub fn aggregate(records: &[EvalRecord], bin_width: f64) -> Result<SuiteSummary> {
    if records.iter().all(|r| r.failed) {
        return Err(Error::NoRecords);
    }
    assert!(bin_width > 0.0, "bin width must be positive");
    let mut families = Vec::new();
    let mut histogram = Vec::new();
    for (family, recs) in by_family(records) {
        let ok: Vec<&EvalRecord> = recs.iter().copied().filter(|r| !r.failed).collect();
        let machines = by_machine(&recs);
        let best: Vec<&EvalRecord> = machines.values().filter_map(|rs| best_record(rs.iter().copied())).collect();
        let size_mean = |size: Option<usize>| {
            size.and_then(|s| {
                DistributionStats::of(ok.iter().filter(|r| r.size == s).map(|r| r.normalized_distortion_pct))
                    .map(|d| d.mean)
            })
        };
        let best_distances: Vec<f64> = best.iter().filter_map(|r| r.normalized_distance).collect();
        if let Some(&max) = best_distances.iter().max_by(|a, b| a.total_cmp(b)) {
            let nbins = ((max / bin_width).floor() as usize + 1).max(1);
            let mut counts = vec![0; nbins];
            for d in &best_distances {
                counts[((d / bin_width).floor() as usize).min(nbins - 1)] += 1;
            }
            histogram.extend(counts.into_iter().enumerate().map(|(i, count)| HistogramBin {
                family,
                lower: i as f64 * bin_width,
                upper: (i + 1) as f64 * bin_width,
                count,
            }));
        }
        families.push(FamilySummary {
            family,
            records: ok.len(),
            failed: recs.len() - ok.len(),
            machines: machines.len(),
            distortion_all: DistributionStats::of(ok.iter().map(|r| r.normalized_distortion_pct)),
            distance_all: DistributionStats::of(ok.iter().filter_map(|r| r.normalized_distance)),
            distortion_optimized: DistributionStats::of(best.iter().map(|r| r.normalized_distortion_pct)),
            distance_optimized: DistributionStats::of(best_distances.iter().copied()),
            distortion_at_min_size: size_mean(ok.iter().map(|r| r.size).min()),
            distortion_at_max_size: size_mean(ok.iter().map(|r| r.size).max()),
        });
    }
    let mut regressions = Vec::new();
    let mut regression_notes = Vec::new();
    for (family, target, fit) in complexity_regression(records) {
        match fit {
            Ok(r) => regressions.push(r),
            Err(e) => regression_notes.push(format!("{family} {}: {e}", target.as_str())),
        }
    }
    Ok(SuiteSummary {
        total_records: records.len(),
        families,
        histogram,
        regressions,
        regression_notes,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn stats_cells(s: &Option<DistributionStats>) -> String {
    match s {
        Some(s) => format!("{},{},{},{},{},{}", s.count, s.mean, s.median, s.p10, s.p90, s.max),
        None => ",,,,,".into(),
    }
}

impl SuiteSummary {
    pub fn family(&self, family: Family) -> Option<&FamilySummary> {
        self.families.iter().find(|f| f.family == family)
    }

    /// One row per (family, statistic group).
    pub fn family_csv(&self) -> String {
        let mut out = String::from("family,group,records,failed,machines,count,mean,median,p10,p90,max\n");
        for f in &self.families {
            for (group, s) in [
                ("distortion_all", &f.distortion_all),
                ("distance_all", &f.distance_all),
                ("distortion_optimized", &f.distortion_optimized),
                ("distance_optimized", &f.distance_optimized),
            ] {
                writeln!(out, "{},{group},{},{},{},{}", f.family, f.records, f.failed, f.machines, stats_cells(s)).unwrap();
            }
        }
        out
    }

    pub fn size_trend_csv(&self) -> String {
        let mut out = String::from("family,mean_distortion_smallest_size,mean_distortion_largest_size\n");
        for f in &self.families {
            writeln!(out, "{},{},{}", f.family, opt(f.distortion_at_min_size), opt(f.distortion_at_max_size)).unwrap();
        }
        out
    }

    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("family,lower,upper,count\n");
        for b in &self.histogram {
            writeln!(out, "{},{},{},{}", b.family, b.lower, b.upper, b.count).unwrap();
        }
        out
    }

    pub fn regression_csv(&self) -> String {
        let mut out = String::from("family,target,machines,coef_h_mu,coef_c_mu,intercept,r_squared\n");
        for r in &self.regressions {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.family,
                r.target.as_str(),
                r.machines,
                r.coef_h_mu,
                r.coef_c_mu,
                r.intercept,
                r.r_squared
            )
            .unwrap();
        }
        out
    }
}

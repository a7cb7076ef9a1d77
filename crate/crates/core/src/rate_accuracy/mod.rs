//! Predictive rate-accuracy curves.
//!
//! With causal states standing in for the infinite past, the rate-accuracy
//! function is `R(A) = min I[S; R]` over channels `p(r|σ)` with expected
//! accuracy at least `A`, where the representation `r ∈ {0, 1}` is itself a
//! prediction of the next symbol. Blahut-Arimoto solves the Lagrangian form
//! for a fixed multiplier `β` and converges to the global optimum.

mod metrics;

use std::fmt::Write as _;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pdfa::{OperatingPoint, Pdfa, ProcessSummary};

pub use metrics::{normalized_distance, normalized_distortion, point_to_polyline_distance};

pub const BA_TOLERANCE: f64 = 1e-10;
pub const BA_MAX_ITERATIONS: usize = 10_000;

/// `a(σ, r) = p(x_{t+1} = r | σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyMatrix {
    rows: Vec<[f64; 2]>,
}

impl AccuracyMatrix {
    pub fn new(rows: Vec<[f64; 2]>) -> Self {
        AccuracyMatrix { rows }
    }

    pub fn rows(&self) -> &[[f64; 2]] {
        &self.rows
    }

    /// Expected accuracy of a channel under state weights `pi`.
    pub fn expected_accuracy(&self, pi: &[f64], channel: &[[f64; 2]]) -> f64 {
        pi.iter()
            .zip(&self.rows)
            .zip(channel)
            .map(|((w, a), c)| w * (c[0] * a[0] + c[1] * a[1]))
            .sum()
    }
}

pub fn accuracy_matrix(pdfa: &Pdfa) -> AccuracyMatrix {
    AccuracyMatrix::new(
        (0..pdfa.n_states())
            .map(|s| [pdfa.emission(s, 0), pdfa.emission(s, 1)])
            .collect(),
    )
}

/// Mutual information `I[S; R]` in nats of a channel under state weights `pi`.
pub fn channel_rate(pi: &[f64], channel: &[[f64; 2]]) -> f64 {
    let mut q = [0.0; 2];
    for (w, c) in pi.iter().zip(channel) {
        q[0] += w * c[0];
        q[1] += w * c[1];
    }
    let mut rate = 0.0;
    for (w, c) in pi.iter().zip(channel) {
        for r in 0..2 {
            if c[r] > 0.0 && *w > 0.0 {
                rate += w * c[r] * (c[r] / q[r]).ln();
            }
        }
    }
    rate.max(0.0)
}

/// A converged Blahut-Arimoto solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaPoint {
    pub beta: f64,
    pub rate_nats: f64,
    pub accuracy: f64,
    /// `channel[σ][r] = p(r | σ)`.
    pub channel: Vec<[f64; 2]>,
    pub iterations: usize,
}

impl BaPoint {
    pub fn operating_point(&self) -> OperatingPoint {
        OperatingPoint {
            rate_nats: self.rate_nats,
            accuracy: self.accuracy,
        }
    }
}

/// Solves the rate-accuracy Lagrangian at multiplier `beta`.
///
/// Alternates `p(r|σ) ∝ q(r) exp(β a(σ,r))` and `q(r) = Σ_σ π(σ) p(r|σ)`
/// from `q = (1/2, 1/2)` until the channel moves by less than
/// [`BA_TOLERANCE`]. Returns a numerical error when the iteration cap is
/// reached first.
///
/// At `beta = 0` every state-independent channel is stationary, so the
/// β → 0⁺ limit is returned instead: always report the symbol with the
/// larger marginal accuracy (ties go to `0`).
pub fn ba_solve(pi: &[f64], accuracy: &AccuracyMatrix, beta: f64) -> Result<BaPoint> {
    assert!(beta >= 0.0, "beta must be nonnegative");
    let n = pi.len();
    if beta == 0.0 {
        let mut marginal = [0.0; 2];
        for (w, a) in pi.iter().zip(accuracy.rows()) {
            marginal[0] += w * a[0];
            marginal[1] += w * a[1];
        }
        let row = if marginal[1] > marginal[0] { [0.0, 1.0] } else { [1.0, 0.0] };
        let channel = vec![row; n];
        return Ok(BaPoint {
            beta,
            rate_nats: 0.0,
            accuracy: accuracy.expected_accuracy(pi, &channel),
            channel,
            iterations: 0,
        });
    }
    let mut q: [f64; 2] = [0.5, 0.5];
    let mut channel = vec![[0.0; 2]; n];
    let mut previous: Option<Vec<[f64; 2]>> = None;
    for it in 1..=BA_MAX_ITERATIONS {
        for (row, a) in channel.iter_mut().zip(accuracy.rows()) {
            let logits = [q[0].ln() + beta * a[0], q[1].ln() + beta * a[1]];
            let m = logits[0].max(logits[1]);
            let e = [(logits[0] - m).exp(), (logits[1] - m).exp()];
            let z = e[0] + e[1];
            *row = [e[0] / z, e[1] / z];
        }
        q = [0.0, 0.0];
        for (w, c) in pi.iter().zip(&channel) {
            q[0] += w * c[0];
            q[1] += w * c[1];
        }
        let change = previous.as_ref().map_or(f64::INFINITY, |prev| {
            prev.iter()
                .zip(&channel)
                .flat_map(|(p, c)| [(p[0] - c[0]).abs(), (p[1] - c[1]).abs()])
                .fold(0.0, f64::max)
        });
        if change < BA_TOLERANCE {
            return Ok(BaPoint {
                beta,
                rate_nats: channel_rate(pi, &channel),
                accuracy: accuracy.expected_accuracy(pi, &channel),
                channel,
                iterations: it,
            });
        }
        previous = Some(channel.clone());
    }
    Err(Error::Numerical {
        machine_id: String::new(),
        reason: format!("Blahut-Arimoto did not converge at beta={beta} in {BA_MAX_ITERATIONS} iterations"),
    })
}

/// Multipliers at which the curve is traced: zero plus a log-spaced range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaGrid {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl Default for BetaGrid {
    fn default() -> Self {
        BetaGrid {
            count: 101,
            min: 1e-2,
            max: 1e3,
        }
    }
}

impl BetaGrid {
    pub fn values(&self) -> Vec<f64> {
        let mut betas = vec![0.0];
        let k = self.count.saturating_sub(1);
        let (lo, hi) = (self.min.log10(), self.max.log10());
        for i in 0..k {
            let t = if k == 1 { 0.0 } else { i as f64 / (k - 1) as f64 };
            betas.push(10f64.powf(lo + t * (hi - lo)));
        }
        betas
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateAccuracyCurve {
    /// Non-dominated solutions sorted by accuracy.
    pub points: Vec<BaPoint>,
    /// The exact optimal predictor, appended after the traced points.
    pub augmented_point: OperatingPoint,
    /// Multipliers whose solve hit the iteration cap.
    pub flagged_betas: Vec<f64>,
}

impl RateAccuracyCurve {
    /// Polyline vertices `(rate, accuracy)`: traced points then the optimal point.
    pub fn vertices(&self) -> Vec<OperatingPoint> {
        self.points
            .iter()
            .map(BaPoint::operating_point)
            .chain(std::iter::once(self.augmented_point))
            .collect()
    }

    /// CSV with columns `beta,rate_nats,accuracy,kind`; the last row is the
    /// optimal predictor with `kind=optimal` and an empty beta.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta,rate_nats,accuracy,kind\n");
        for p in &self.points {
            writeln!(out, "{},{},{},ba", p.beta, p.rate_nats, p.accuracy).unwrap();
        }
        writeln!(
            out,
            ",{},{},optimal",
            self.augmented_point.rate_nats, self.augmented_point.accuracy
        )
        .unwrap();
        out
    }
}

/// Solves every multiplier of the grid, keeping failures in place.
pub fn solve_grid(pi: &[f64], accuracy: &AccuracyMatrix, grid: &BetaGrid) -> Vec<(f64, Result<BaPoint>)> {
    grid.values()
        .into_iter()
        .map(|beta| (beta, ba_solve(pi, accuracy, beta)))
        .collect()
}

pub fn trace_curve(pdfa: &Pdfa) -> Result<RateAccuracyCurve> {
    trace_curve_with(pdfa, &ProcessSummary::compute(pdfa)?, &BetaGrid::default())
}

/// Traces the curve over `grid`, removes dominated points and appends the
/// optimal predictor.
pub fn trace_curve_with(pdfa: &Pdfa, summary: &ProcessSummary, grid: &BetaGrid) -> Result<RateAccuracyCurve> {
    let accuracy = accuracy_matrix(pdfa);
    let mut solved = Vec::new();
    let mut flagged = Vec::new();
    for (beta, result) in solve_grid(&summary.pi, &accuracy, grid) {
        match result {
            Ok(p) => solved.push(p),
            Err(e) => {
                debug!("{}: {e}", pdfa.id());
                flagged.push(beta);
            }
        }
    }
    Ok(RateAccuracyCurve {
        points: lower_frontier(solved),
        augmented_point: summary.optimal_point(),
        flagged_betas: flagged,
    })
}

/// Keeps the non-dominated points (no other point is at least as accurate
/// with no more rate) and then the lower convex hull, so that rate
/// increments per accuracy increment never decrease.
fn lower_frontier(mut points: Vec<BaPoint>) -> Vec<BaPoint> {
    const EPS: f64 = 1e-12;
    points.sort_by(|a, b| {
        a.accuracy
            .total_cmp(&b.accuracy)
            .then(a.rate_nats.total_cmp(&b.rate_nats))
            .then(a.beta.total_cmp(&b.beta))
    });
    // Pareto filter, scanning from the most accurate end.
    let mut pareto: Vec<BaPoint> = Vec::new();
    let mut best_rate = f64::INFINITY;
    for p in points.into_iter().rev() {
        if p.rate_nats < best_rate - EPS {
            best_rate = p.rate_nats;
            pareto.push(p);
        }
    }
    pareto.reverse();
    let mut hull: Vec<BaPoint> = Vec::new();
    for p in pareto {
        if hull.last().is_some_and(|l| (p.accuracy - l.accuracy).abs() <= EPS) {
            continue;
        }
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            let cross = (b.accuracy - a.accuracy) * (p.rate_nats - a.rate_nats)
                - (b.rate_nats - a.rate_nats) * (p.accuracy - a.accuracy);
            // b lies on or above the chord a -> p
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::binary_entropy;

    fn even(q: f64) -> (Pdfa, ProcessSummary) {
        let m = Pdfa::even_process(q);
        let s = ProcessSummary::compute(&m).unwrap();
        (m, s)
    }

    #[test]
    fn accuracy_matrices_copy_emissions() {
        assert_eq!(accuracy_matrix(&Pdfa::even_process(0.5)).rows(), &[[0.5, 0.5], [0.0, 1.0]]);
        assert_eq!(accuracy_matrix(&Pdfa::period_two()).rows(), &[[0.0, 1.0], [1.0, 0.0]]);
        let rows = accuracy_matrix(&Pdfa::even_process(0.4)).rows().to_vec();
        assert!((rows[0][0] - 0.6).abs() < 1e-15 && rows[0][1] == 0.4 && rows[1] == [0.0, 1.0]);
    }

    #[test]
    fn zero_beta_gives_state_independent_channel() {
        let (m, s) = even(0.4);
        let p = ba_solve(&s.pi, &accuracy_matrix(&m), 0.0).unwrap();
        assert!(p.rate_nats < 1e-12);
        assert_eq!(p.channel[0], p.channel[1]);
    }

    #[test]
    fn large_beta_approaches_the_argmax_channel() {
        let (m, s) = even(0.4);
        let p = ba_solve(&s.pi, &accuracy_matrix(&m), 200.0).unwrap();
        assert!((p.accuracy - 5.0 / 7.0).abs() < 1e-3, "{p:?}");
        assert!((p.rate_nats - binary_entropy(2.0 / 7.0)).abs() < 1e-3, "{p:?}");
    }

    #[test]
    fn fair_coin_curve_is_a_single_zero_rate_level() {
        let curve = trace_curve(&Pdfa::fair_coin()).unwrap();
        for v in curve.vertices() {
            assert!(v.rate_nats.abs() < 1e-12);
            assert!((v.accuracy - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn even_04_curve_rises_from_best_constant_to_optimum() {
        let curve = trace_curve(&Pdfa::even_process(0.4)).unwrap();
        let first = &curve.points[0];
        assert!(first.rate_nats < 1e-9);
        assert!((first.accuracy - 4.0 / 7.0).abs() < 1e-9, "{first:?}");
        for w in curve.points.windows(2) {
            assert!(w[1].accuracy > w[0].accuracy && w[1].rate_nats > w[0].rate_nats);
        }
        let last = curve.points.last().unwrap();
        assert!((last.accuracy - 5.0 / 7.0).abs() < 1e-3);
        assert!((curve.augmented_point.rate_nats - 0.598270).abs() < 1e-6);
    }

    #[test]
    fn beta_grid_shape() {
        let betas = BetaGrid::default().values();
        assert_eq!(betas.len(), 101);
        assert_eq!(betas[0], 0.0);
        assert!((betas[1] - 1e-2).abs() < 1e-15);
        assert!((betas[100] - 1e3).abs() < 1e-9);
    }

    #[test]
    fn csv_ends_with_the_optimal_row() {
        let csv = trace_curve(&Pdfa::even_process(0.4)).unwrap().to_csv();
        let last = csv.lines().last().unwrap();
        assert!(last.starts_with(',') && last.ends_with(",optimal"));
        assert!(csv.starts_with("beta,rate_nats,accuracy,kind\n"));
    }
}

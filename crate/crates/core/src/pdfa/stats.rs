use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{Pdfa, Symbol, ALPHABET};
use crate::error::{Error, Result};
use crate::info::{binary_entropy, entropy, plogp};

/// Largest tolerated `‖πT − π‖∞` for a returned stationary distribution.
pub const STATIONARY_RESIDUAL_TOL: f64 = 1e-10;

/// A (rate, accuracy) pair: code rate in nats and probability of a correct
/// next-symbol prediction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub rate_nats: f64,
    pub accuracy: f64,
}

/// Exact information-theoretic summary of a machine's process.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessSummary {
    pub pi: Vec<f64>,
    pub entropy_rate_nats: f64,
    pub statistical_complexity_nats: f64,
    pub optimal_accuracy: f64,
    pub optimal_rate_nats: f64,
}

impl ProcessSummary {
    pub fn compute(pdfa: &Pdfa) -> Result<Self> {
        let pi = stationary_distribution(pdfa)?;
        let opt = optimal_predictor_point(pdfa, &pi);
        Ok(ProcessSummary {
            entropy_rate_nats: entropy_rate(pdfa, &pi),
            statistical_complexity_nats: statistical_complexity(&pi),
            optimal_accuracy: opt.accuracy,
            optimal_rate_nats: opt.rate_nats,
            pi,
        })
    }

    pub fn optimal_point(&self) -> OperatingPoint {
        OperatingPoint {
            rate_nats: self.optimal_rate_nats,
            accuracy: self.optimal_accuracy,
        }
    }
}

/// Stationary state distribution of the machine's state chain.
///
/// Solves `π (T − I) = 0` with one balance equation replaced by `Σ π = 1`
/// and then verifies the residual. The state chain of a strongly connected
/// machine is irreducible, so the solution is unique.
pub fn stationary_distribution(pdfa: &Pdfa) -> Result<Vec<f64>> {
    let n = pdfa.n_states();
    let t = pdfa.state_transition_matrix();
    // Row i of the system is the balance equation for state i.
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = t[j][i] - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(n);
    rhs[n - 1] = 1.0;
    let solution = a.lu().solve(&rhs).ok_or_else(|| Error::Numerical {
        machine_id: pdfa.id().to_string(),
        reason: "stationary system is singular (state chain reducible?)".into(),
    })?;
    let mut pi: Vec<f64> = solution.iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= total);

    let residual = (0..n)
        .map(|j| ((0..n).map(|i| pi[i] * t[i][j]).sum::<f64>() - pi[j]).abs())
        .fold(0.0, f64::max);
    if !residual.is_finite() || residual >= STATIONARY_RESIDUAL_TOL {
        return Err(Error::Numerical {
            machine_id: pdfa.id().to_string(),
            reason: format!("stationary residual {residual:e}"),
        });
    }
    Ok(pi)
}

/// `h_μ = −Σ_σ π(σ) Σ_x p(x|σ) ln p(x|σ)`.
pub fn entropy_rate(pdfa: &Pdfa, pi: &[f64]) -> f64 {
    pi.iter()
        .enumerate()
        .map(|(s, &w)| w * ALPHABET.iter().map(|&x| plogp(pdfa.emission(s, x))).sum::<f64>())
        .sum()
}

/// `C_μ = H[π]`.
pub fn statistical_complexity(pi: &[f64]) -> f64 {
    entropy(pi)
}

/// Most likely next symbol from `state`. Exact ties go to 0, the smaller
/// symbol. At a tie any constant prediction is equally accurate, so a
/// zero-rate predictor can match the accuracy of this one.
pub fn optimal_prediction(pdfa: &Pdfa, state: usize) -> Symbol {
    if pdfa.emission(state, 1) > pdfa.emission(state, 0) {
        1
    } else {
        0
    }
}

/// Rate and accuracy of the causal-state argmax predictor, computed exactly.
pub fn optimal_predictor_point(pdfa: &Pdfa, pi: &[f64]) -> OperatingPoint {
    let mut marginal = [0.0; 2];
    let mut accuracy = 0.0;
    for (s, &w) in pi.iter().enumerate() {
        let r = optimal_prediction(pdfa, s);
        marginal[r as usize] += w;
        accuracy += w * pdfa.emission(s, r);
    }
    OperatingPoint {
        rate_nats: binary_entropy(marginal[1] / (marginal[0] + marginal[1])),
        accuracy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    /// Independent oracle: plain (lazy) power iteration.
    fn power_iteration(pdfa: &Pdfa) -> Vec<f64> {
        let t = pdfa.state_transition_matrix();
        let n = t.len();
        let mut pi = vec![1.0 / n as f64; n];
        for _ in 0..1_000_000 {
            let mut next = vec![0.0; n];
            for i in 0..n {
                for j in 0..n {
                    next[j] += pi[i] * 0.5 * (t[i][j] + if i == j { 1.0 } else { 0.0 });
                }
            }
            let change = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            pi = next;
            if change < 1e-15 {
                break;
            }
        }
        pi
    }

    #[test]
    fn even_half_stationary_distribution() {
        let m = Pdfa::even_process(0.5);
        let pi = stationary_distribution(&m).unwrap();
        let oracle = power_iteration(&m);
        assert!((oracle[0] - 2.0 / 3.0).abs() < 1e-13);
        assert!((pi[0] - oracle[0]).abs() < 1e-13 && (pi[1] - oracle[1]).abs() < 1e-13);
    }

    #[test]
    fn trivial_stationary_distributions() {
        assert_eq!(stationary_distribution(&Pdfa::fair_coin()).unwrap(), vec![1.0]);
        let pi = stationary_distribution(&Pdfa::period_two()).unwrap();
        assert!((pi[0] - 0.5).abs() < 1e-15 && (pi[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn entropy_rates() {
        let coin = Pdfa::fair_coin();
        assert!((entropy_rate(&coin, &[1.0]) - LN_2).abs() < 1e-15);
        let p2 = Pdfa::period_two();
        assert_eq!(entropy_rate(&p2, &[0.5, 0.5]), 0.0);
        let even = Pdfa::even_process(0.5);
        let pi = stationary_distribution(&even).unwrap();
        assert!((entropy_rate(&even, &pi) - 2.0 / 3.0 * LN_2).abs() < 1e-12);
        assert!((entropy_rate(&even, &pi) - 0.462098).abs() < 1e-6);
    }

    #[test]
    fn statistical_complexities() {
        assert_eq!(statistical_complexity(&[1.0]), 0.0);
        assert!((statistical_complexity(&[0.5, 0.5]) - LN_2).abs() < 1e-15);
        let even = Pdfa::even_process(0.5);
        let pi = stationary_distribution(&even).unwrap();
        let expected = 3f64.ln() - 2.0 / 3.0 * LN_2;
        assert!((statistical_complexity(&pi) - expected).abs() < 1e-12);
        assert!((expected - 0.636514).abs() < 1e-6);
    }

    #[test]
    fn optimal_predictions_follow_argmax_with_low_tie_break() {
        let half = Pdfa::even_process(0.5);
        assert_eq!(optimal_prediction(&half, 1), 1);
        assert_eq!(optimal_prediction(&half, 0), 0);
        assert_eq!(optimal_prediction(&Pdfa::even_process(0.4), 0), 0);
    }

    #[test]
    fn optimal_points() {
        let half = Pdfa::even_process(0.5);
        let p = optimal_predictor_point(&half, &stationary_distribution(&half).unwrap());
        assert!((p.accuracy - 2.0 / 3.0).abs() < 1e-12);
        assert!((p.rate_nats - binary_entropy(1.0 / 3.0)).abs() < 1e-12);

        let coin = optimal_predictor_point(&Pdfa::fair_coin(), &[1.0]);
        assert_eq!(coin, OperatingPoint { rate_nats: 0.0, accuracy: 0.5 });

        let m = Pdfa::even_process(0.4);
        let p = optimal_predictor_point(&m, &stationary_distribution(&m).unwrap());
        assert!((p.accuracy - 5.0 / 7.0).abs() < 1e-12);
        assert!((p.rate_nats - binary_entropy(2.0 / 7.0)).abs() < 1e-12);
        assert!((p.rate_nats - 0.598270).abs() < 1e-6);
    }

    #[test]
    fn one_sided_predictions_have_exactly_zero_rate() {
        let library = crate::enumeration::build_library(3, 1, 0).unwrap();
        let mut constant = 0;
        for m in &library.machines {
            let pi = stationary_distribution(m).unwrap();
            let symbols: Vec<Symbol> = (0..m.n_states()).map(|s| optimal_prediction(m, s)).collect();
            if symbols.iter().all(|&r| r == symbols[0]) {
                constant += 1;
                assert_eq!(optimal_predictor_point(m, &pi).rate_nats, 0.0, "{}", m.id());
            }
        }
        assert!(constant > 0);
    }
}

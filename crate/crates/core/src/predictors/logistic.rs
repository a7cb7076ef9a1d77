//! L2-regularized logistic regression fitted by damped Newton steps.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{log_sigmoid, sigmoid};
use crate::pdfa::Symbol;

const GRADIENT_TOL: f64 = 1e-8;
const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

/// Linear readout `p(x = 1 | h) = sigmoid(w·h + w0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticReadout {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LogisticReadout {
    pub fn zeros(dim: usize) -> Self {
        LogisticReadout {
            weights: vec![0.0; dim],
            bias: 0.0,
        }
    }

    #[inline]
    pub fn logit(&self, features: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(features).map(|(w, x)| w * x).sum::<f64>()
    }

    #[inline]
    pub fn prob_one(&self, features: &[f64]) -> f64 {
        sigmoid(self.logit(features))
    }
}

#[derive(Clone, Debug)]
pub struct LogisticFit {
    pub readout: LogisticReadout,
    /// Penalized negative log-likelihood after each accepted iterate,
    /// starting with the all-zero initial point.
    pub loss_history: Vec<f64>,
    pub converged: bool,
}

fn penalized_loss(features: &[Vec<f64>], labels: &[Symbol], readout: &LogisticReadout, l2: f64) -> f64 {
    let nll: f64 = features
        .iter()
        .zip(labels)
        .map(|(x, &y)| {
            let z = readout.logit(x);
            if y == 1 {
                -log_sigmoid(z)
            } else {
                -log_sigmoid(-z)
            }
        })
        .sum();
    nll + 0.5 * l2 * readout.weights.iter().map(|w| w * w).sum::<f64>()
}

/// Maximizes `Σ log p(y|x) − (λ/2)‖w‖²` from the zero point. Each Newton
/// direction is backtracked until the objective decreases, so the loss
/// history is nonincreasing. Stops when the gradient's ∞-norm falls below
/// 1e-8, when a Newton step no longer lowers the objective in floating
/// point, or after `max_iter` iterations.
pub fn train_logistic(features: &[Vec<f64>], labels: &[Symbol], l2_strength: f64, max_iter: usize) -> Result<LogisticFit> {
    if features.is_empty() || features.len() != labels.len() {
        return Err(Error::InsufficientData(format!(
            "logistic regression needs matching nonempty rows (got {} rows, {} labels)",
            features.len(),
            labels.len()
        )));
    }
    let dim = features[0].len();
    let p = dim + 1; // last coordinate is the bias
    let mut readout = LogisticReadout::zeros(dim);
    let mut loss = penalized_loss(features, labels, &readout, l2_strength);
    let mut history = vec![loss];
    let mut converged = false;

    for _ in 0..max_iter {
        let mut grad = DVector::<f64>::zeros(p);
        let mut hess = DMatrix::<f64>::zeros(p, p);
        for (x, &y) in features.iter().zip(labels) {
            let mu = readout.prob_one(x);
            let r = mu - y as f64;
            let w = mu * (1.0 - mu);
            for i in 0..dim {
                grad[i] += r * x[i];
                let wi = w * x[i];
                for j in 0..=i {
                    hess[(i, j)] += wi * x[j];
                }
                hess[(dim, i)] += wi;
            }
            grad[dim] += r;
            hess[(dim, dim)] += w;
        }
        for i in 0..dim {
            grad[i] += l2_strength * readout.weights[i];
            hess[(i, i)] += l2_strength;
        }
        for i in 0..p {
            for j in 0..i {
                hess[(j, i)] = hess[(i, j)];
            }
        }
        if grad.amax() < GRADIENT_TOL {
            converged = true;
            break;
        }
        let direction = newton_direction(hess, &grad);
        let slope = grad.dot(&direction);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let candidate = LogisticReadout {
                weights: (0..dim).map(|i| readout.weights[i] + step * direction[i]).collect(),
                bias: readout.bias + step * direction[dim],
            };
            let candidate_loss = penalized_loss(features, labels, &candidate, l2_strength);
            if !candidate_loss.is_finite() {
                return Err(Error::TrainingFailure(format!("non-finite logistic loss {candidate_loss}")));
            }
            if candidate_loss <= loss + ARMIJO * step * slope {
                accepted = Some((candidate, candidate_loss));
                break;
            }
            step *= 0.5;
        }
        let Some((next, next_loss)) = accepted.filter(|(_, l)| *l < loss) else {
            // The objective is flat to rounding along the Newton direction.
            converged = true;
            break;
        };
        readout = next;
        loss = next_loss;
        history.push(loss);
    }
    Ok(LogisticFit {
        readout,
        loss_history: history,
        converged,
    })
}

/// Solves `H d = −g`, adding a small ridge if `H` is numerically singular.
fn newton_direction(hess: DMatrix<f64>, grad: &DVector<f64>) -> DVector<f64> {
    let mut ridge = 0.0;
    loop {
        let mut h = hess.clone();
        if ridge > 0.0 {
            for i in 0..h.nrows() {
                h[(i, i)] += ridge;
            }
        }
        if let Some(chol) = h.cholesky() {
            return -chol.solve(grad);
        }
        ridge = if ridge == 0.0 { 1e-10 } else { ridge * 10.0 };
        if ridge > 1e6 {
            return -grad.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn bias_only_fit_recovers_bernoulli_mle() {
        let mut rng = crate::seed::rng(3);
        let labels: Vec<Symbol> = (0..10_000).map(|_| (rng.gen::<f64>() < 0.8) as Symbol).collect();
        let features = vec![Vec::new(); labels.len()];
        let fit = train_logistic(&features, &labels, 1.0, 100).unwrap();
        let mle = labels.iter().filter(|&&y| y == 1).count() as f64 / labels.len() as f64;
        let p = fit.readout.prob_one(&[]);
        assert!((p - mle).abs() < 1e-9, "p={p} mle={mle}");
        assert!((p - 0.8).abs() < 0.02);
        assert!(fit.converged, "{:?}", fit.loss_history);
    }

    #[test]
    fn separable_period_two_is_fit_perfectly() {
        let symbols: Vec<Symbol> = (0..200).map(|t| (t % 2) as Symbol).collect();
        let features: Vec<Vec<f64>> = symbols[..199].iter().map(|&x| vec![x as f64]).collect();
        let labels = &symbols[1..];
        let fit = train_logistic(&features, labels, 1.0, 100).unwrap();
        let correct = features
            .iter()
            .zip(labels)
            .filter(|(x, &y)| ((fit.readout.prob_one(x) > 0.5) as Symbol) == y)
            .count();
        assert_eq!(correct, labels.len());
    }

    #[test]
    fn empty_input_is_insufficient_data() {
        assert!(matches!(train_logistic(&[], &[], 1.0, 10), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn loss_never_increases() {
        let mut rng = crate::seed::rng(8);
        let features: Vec<Vec<f64>> = (0..500).map(|_| (0..4).map(|_| rng.gen::<f64>() - 0.5).collect()).collect();
        let labels: Vec<Symbol> = features
            .iter()
            .map(|x| (x[0] * 3.0 - x[2] + 0.3 * rng.gen::<f64>() > 0.0) as Symbol)
            .collect();
        for l2 in [0.0, 1.0] {
            let fit = train_logistic(&features, &labels, l2, 50).unwrap();
            for w in fit.loss_history.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "{:?}", fit.loss_history);
            }
        }
    }
}

//! Trainable next-symbol predictors and the shared evaluation contract.
//!
//! Every model maps a symbol stream to `p(x_t = 1 | x_0 .. x_{t-1})` for
//! each `t`. Predictions are the argmax of that probability with ties going
//! to 0, accuracy is the fraction of correct test predictions, and the code
//! rate is the entropy of the empirical distribution of predictions.

pub mod constructions;
mod glm;
mod logistic;
mod lstm;
mod oracle;
mod reservoir;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::entropy;
use crate::pdfa::Symbol;

pub use glm::{glm_features, GlmDataset, GlmModel};
pub use logistic::{train_logistic, LogisticFit, LogisticReadout};
pub use lstm::{
    lstm_forward, lstm_gradient, lstm_train, CellOutput, Gate, LstmForward, LstmModel, LstmParams, LstmTraining,
    Optimizer,
};
pub use oracle::OracleModel;
pub use reservoir::{
    reservoir_init, reservoir_states, reservoir_states_from, scale_to_spectral_radius, spectral_radius,
    InputEncoding, ReservoirModel, ReservoirParams,
};

/// Predictor family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Glm,
    Reservoir,
    Lstm,
    /// Filter to the causal state and predict its argmax; uses the true machine.
    Oracle,
}

impl Family {
    pub const TRAINABLE: [Family; 3] = [Family::Glm, Family::Reservoir, Family::Lstm];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Glm => "glm",
            Family::Reservoir => "reservoir",
            Family::Lstm => "lstm",
            Family::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "glm" => Ok(Family::Glm),
            "reservoir" | "rc" => Ok(Family::Reservoir),
            "lstm" => Ok(Family::Lstm),
            "oracle" => Ok(Family::Oracle),
            other => Err(Error::Config(format!("unknown predictor family {other:?}"))),
        }
    }
}

/// Training knobs shared by the families; each family reads the ones it uses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingParams {
    /// Ridge penalty `λ` on logistic weights (the bias is not penalized).
    pub l2_strength: f64,
    /// Newton iteration cap for logistic fits.
    pub max_iter: usize,
    pub spectral_radius: f64,
    pub input_encoding: InputEncoding,
    pub learning_rate: f64,
    pub epochs: usize,
    /// Truncated backpropagation window length.
    pub window: usize,
    pub optimizer: Optimizer,
    pub cell_output: CellOutput,
}

impl Default for TrainingParams {
    fn default() -> Self {
        TrainingParams {
            l2_strength: 1.0,
            max_iter: 100,
            spectral_radius: 0.95,
            input_encoding: InputEncoding::Unipolar,
            learning_rate: 0.01,
            epochs: 50,
            window: 64,
            optimizer: Optimizer::Adam,
            cell_output: CellOutput::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictorSpec {
    pub family: Family,
    /// GLM order or node count.
    pub size: usize,
    pub seed: u64,
    pub training: TrainingParams,
}

impl PredictorSpec {
    pub fn new(family: Family, size: usize, seed: u64) -> Self {
        PredictorSpec {
            family,
            size,
            seed,
            training: TrainingParams::default(),
        }
    }
}

/// Anything that assigns next-symbol probabilities to a stream.
pub trait Predictor {
    /// `p(x_t = 1 | x_0 .. x_{t-1})` for every position of `symbols`.
    fn prob_one(&self, symbols: &[Symbol]) -> Vec<f64>;
}

/// Keeps probabilities strictly inside (0, 1).
#[inline]
pub(crate) fn clamp_prob(p: f64) -> f64 {
    p.clamp(f64::EPSILON, 1.0 - f64::EPSILON)
}

/// Argmax prediction with ties broken to 0.
#[inline]
pub fn predict(prob_one: f64) -> Symbol {
    (prob_one > 0.5) as Symbol
}

/// A trained model of any family.
#[derive(Clone, Debug)]
pub enum TrainedModel {
    Glm(GlmModel),
    Reservoir(ReservoirModel),
    Lstm(LstmModel),
    Oracle(OracleModel),
}

impl Predictor for TrainedModel {
    fn prob_one(&self, symbols: &[Symbol]) -> Vec<f64> {
        match self {
            TrainedModel::Glm(m) => m.prob_one(symbols),
            TrainedModel::Reservoir(m) => m.prob_one(symbols),
            TrainedModel::Lstm(m) => m.prob_one(symbols),
            TrainedModel::Oracle(m) => m.prob_one(symbols),
        }
    }
}

impl TrainedModel {
    /// Parameter dump for diagnostics: `key = v v v` lines with 17
    /// significant digits. Not a stable interchange format.
    pub fn dump(&self) -> String {
        match self {
            TrainedModel::Glm(m) => m.dump(),
            TrainedModel::Reservoir(m) => m.dump(),
            TrainedModel::Lstm(m) => m.dump(),
            TrainedModel::Oracle(m) => m.dump(),
        }
    }
}

/// Fits a trainable family on `train` (the oracle is built from a machine
/// instead, see [`OracleModel`]).
pub fn fit(spec: &PredictorSpec, train: &[Symbol]) -> Result<TrainedModel> {
    if spec.size == 0 {
        return Err(Error::Config("predictor size must be at least 1".into()));
    }
    let t = &spec.training;
    match spec.family {
        Family::Glm => Ok(TrainedModel::Glm(GlmModel::fit(train, spec.size, t.l2_strength, t.max_iter)?)),
        Family::Reservoir => {
            let params = reservoir_init(spec.size, spec.seed, t.spectral_radius);
            Ok(TrainedModel::Reservoir(ReservoirModel::fit(
                params,
                t.input_encoding,
                train,
                t.l2_strength,
                t.max_iter,
            )?))
        }
        Family::Lstm => Ok(TrainedModel::Lstm(lstm_train(spec, train)?.model)),
        Family::Oracle => Err(Error::Config("the oracle is built from a machine, not trained".into())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StreamEvaluation {
    pub accuracy: f64,
    pub rate_nats: f64,
    /// Predictions for the test positions `train_len..`.
    pub predictions: Vec<Symbol>,
}

/// Accuracy and code rate of a prediction sequence against the truth.
pub fn score_predictions(predictions: &[Symbol], actual: &[Symbol]) -> (f64, f64) {
    assert_eq!(predictions.len(), actual.len());
    if predictions.is_empty() {
        return (0.0, 0.0);
    }
    let n = predictions.len() as f64;
    let correct = predictions.iter().zip(actual).filter(|(p, a)| p == a).count() as f64;
    let ones = predictions.iter().filter(|&&p| p == 1).count() as f64;
    (correct / n, entropy(&[1.0 - ones / n, ones / n]))
}

/// Runs the model over the whole stream (state carries across the split)
/// and scores its predictions on `symbols[train_len..]`.
pub fn evaluate_stream(model: &dyn Predictor, symbols: &[Symbol], train_len: usize) -> StreamEvaluation {
    assert!(train_len < symbols.len(), "test segment must be nonempty");
    let probs = model.prob_one(symbols);
    let predictions: Vec<Symbol> = probs[train_len..].iter().map(|&p| predict(p)).collect();
    let (accuracy, rate_nats) = score_predictions(&predictions, &symbols[train_len..]);
    StreamEvaluation {
        accuracy,
        rate_nats,
        predictions,
    }
}

pub(crate) fn format_values(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

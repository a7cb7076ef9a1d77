//! Echo-state reservoir: fixed random tanh recurrence, trained logistic readout.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::logistic::{train_logistic, LogisticReadout};
use super::{clamp_prob, format_values, Predictor};
use crate::error::Result;
use crate::pdfa::Symbol;
use crate::seed;

/// How a symbol enters the reservoir.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputEncoding {
    /// 0 and 1 as given.
    #[default]
    Unipolar,
    /// 0 -> −1, 1 -> +1.
    Bipolar,
}

impl InputEncoding {
    #[inline]
    pub fn encode(self, x: Symbol) -> f64 {
        match self {
            InputEncoding::Unipolar => x as f64,
            InputEncoding::Bipolar => 2.0 * x as f64 - 1.0,
        }
    }
}

/// `h_{t+1} = tanh(W h_t + v x_t + b)` with `W` stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReservoirParams {
    pub size: usize,
    pub recurrence: Vec<f64>,
    pub input: Vec<f64>,
    pub bias: Vec<f64>,
    pub spectral_radius_target: f64,
}

/// Largest eigenvalue modulus of a row-major square matrix.
pub fn spectral_radius(matrix: &[f64], n: usize) -> f64 {
    let m = DMatrix::from_row_slice(n, n, matrix);
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Rescales `matrix` in place so its spectral radius equals `target`.
/// Returns false (leaving the matrix untouched) when the radius is zero.
pub fn scale_to_spectral_radius(matrix: &mut [f64], n: usize, target: f64) -> bool {
    let rho = spectral_radius(matrix, n);
    if !(rho > 1e-12) || !rho.is_finite() {
        return false;
    }
    let factor = target / rho;
    matrix.iter_mut().for_each(|w| *w *= factor);
    true
}

/// Draws `W`, `v`, `b` with i.i.d. standard normal entries and rescales `W`
/// to the target spectral radius. Deterministic in `(size, seed)`.
pub fn reservoir_init(size: usize, seed: u64, spectral_radius_target: f64) -> ReservoirParams {
    assert!(size >= 1, "reservoir needs at least one node");
    let mut rng = seed::rng(seed);
    let mut normal = |len: usize| -> Vec<f64> { (0..len).map(|_| rng.sample(StandardNormal)).collect() };
    let mut recurrence = normal(size * size);
    while !scale_to_spectral_radius(&mut recurrence, size, spectral_radius_target) {
        recurrence = normal(size * size);
    }
    let input = normal(size);
    let bias = normal(size);
    ReservoirParams {
        size,
        recurrence,
        input,
        bias,
        spectral_radius_target,
    }
}

/// Hidden states from `h_0 = 0`; row `t` is the state before `x_t` arrives.
pub fn reservoir_states(params: &ReservoirParams, symbols: &[Symbol], encoding: InputEncoding) -> Vec<Vec<f64>> {
    reservoir_states_from(params, vec![0.0; params.size], symbols, encoding)
}

pub fn reservoir_states_from(
    params: &ReservoirParams,
    initial: Vec<f64>,
    symbols: &[Symbol],
    encoding: InputEncoding,
) -> Vec<Vec<f64>> {
    let n = params.size;
    let mut rows = Vec::with_capacity(symbols.len());
    let mut h = initial;
    for &x in symbols {
        let u = encoding.encode(x);
        let next: Vec<f64> = (0..n)
            .map(|i| {
                let row = &params.recurrence[i * n..(i + 1) * n];
                let a: f64 = row.iter().zip(&h).map(|(w, h)| w * h).sum();
                (a + params.input[i] * u + params.bias[i]).tanh()
            })
            .collect();
        rows.push(std::mem::replace(&mut h, next));
    }
    rows
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReservoirModel {
    pub params: ReservoirParams,
    pub encoding: InputEncoding,
    pub readout: LogisticReadout,
}

impl ReservoirModel {
    /// Fits the readout on the states visited while reading `train`.
    pub fn fit(
        params: ReservoirParams,
        encoding: InputEncoding,
        train: &[Symbol],
        l2_strength: f64,
        max_iter: usize,
    ) -> Result<Self> {
        let states = reservoir_states(&params, train, encoding);
        let fit = train_logistic(&states, train, l2_strength, max_iter)?;
        Ok(ReservoirModel {
            params,
            encoding,
            readout: fit.readout,
        })
    }

    pub fn dump(&self) -> String {
        format!(
            "family = reservoir\nsize = {}\nspectral_radius_target = {:.16e}\nW = {}\nv = {}\nb = {}\nw = {}\nw0 = {:.16e}\n",
            self.params.size,
            self.params.spectral_radius_target,
            format_values(&self.params.recurrence),
            format_values(&self.params.input),
            format_values(&self.params.bias),
            format_values(&self.readout.weights),
            self.readout.bias
        )
    }
}

impl Predictor for ReservoirModel {
    fn prob_one(&self, symbols: &[Symbol]) -> Vec<f64> {
        reservoir_states(&self.params, symbols, self.encoding)
            .iter()
            .map(|h| clamp_prob(self.readout.prob_one(h)))
            .collect()
    }
}

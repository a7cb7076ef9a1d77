//! Single-layer LSTM with a logistic readout, trained by truncated
//! backpropagation through time.
//!
//! Gates follow the classic formulation without peepholes:
//!
//! ```text
//! f = σ(W_f x + U_f h + b_f)      i = σ(W_i x + U_i h + b_i)
//! o = σ(W_o x + U_o h + b_o)      c' = f ⊙ c + i ⊙ tanh(W_c x + U_c h + b_c)
//! h' = o ⊙ c'            (CellOutput::Linear)
//! h' = o ⊙ tanh(c')      (CellOutput::Tanh)
//! ```
//!
//! The input at each update is the symbol just observed, so the hidden
//! state `h_t` summarizes `x_0 .. x_{t-1}` and predicts `x_t` through
//! `p(x_t = 1 | h_t) = σ(w·h_t + w0)`. `h_0 = c_0 = 0`.

use rand::Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use super::logistic::LogisticReadout;
use super::{clamp_prob, format_values, Predictor, PredictorSpec};
use crate::error::{Error, Result};
use crate::info::{log_sigmoid, sigmoid};
use crate::pdfa::Symbol;
use crate::seed;

const INIT_STD: f64 = 0.1;
const MAX_RESTARTS: usize = 5;
/// Mean per-symbol loss above which an epoch counts as diverged: twice the
/// loss of a fair coin.
const DIVERGED_LOSS: f64 = 2.0 * std::f64::consts::LN_2;
const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Forget = 0,
    Input = 1,
    Output = 2,
    Cell = 3,
}

impl Gate {
    pub const ALL: [Gate; 4] = [Gate::Forget, Gate::Input, Gate::Output, Gate::Cell];
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Optimizer {
    #[default]
    Adam,
    /// Plain gradient ascent.
    Sgd,
}

/// How the cell state reaches the hidden state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellOutput {
    /// `h = o ⊙ c`: the cell is read out linearly, so `h` is unbounded.
    Linear,
    /// `h = o ⊙ tanh(c)`, keeping `h` inside (−1, 1).
    #[default]
    Tanh,
}

impl CellOutput {
    /// The activation and its derivative at `c`.
    #[inline]
    fn apply(self, c: f64) -> (f64, f64) {
        match self {
            CellOutput::Linear => (c, 1.0),
            CellOutput::Tanh => {
                let t = c.tanh();
                (t, 1.0 - t * t)
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CellOutput::Linear => "linear",
            CellOutput::Tanh => "tanh",
        }
    }
}

/// All LSTM parameters in one flat vector. Per gate: `W` (N), `U` (N×N,
/// row-major), `b` (N); then the readout weights (N) and bias.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LstmParams {
    hidden: usize,
    #[serde(default)]
    cell_output: CellOutput,
    values: Vec<f64>,
}

impl LstmParams {
    pub fn zeros(hidden: usize) -> Self {
        let n = hidden;
        LstmParams {
            hidden,
            cell_output: CellOutput::default(),
            values: vec![0.0; 4 * (n * n + 2 * n) + n + 1],
        }
    }

    pub fn with_cell_output(mut self, cell_output: CellOutput) -> Self {
        self.cell_output = cell_output;
        self
    }

    pub fn cell_output(&self) -> CellOutput {
        self.cell_output
    }

    /// Entries drawn i.i.d. from Normal(0, 0.1).
    pub fn random(hidden: usize, seed: u64) -> Self {
        let mut p = Self::zeros(hidden);
        let mut rng = seed::rng(seed);
        let normal = Normal::new(0.0, INIT_STD).expect("valid normal");
        p.values.iter_mut().for_each(|v| *v = rng.sample(normal));
        p
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    fn gate_offset(&self, gate: Gate) -> usize {
        gate as usize * (self.hidden * self.hidden + 2 * self.hidden)
    }

    fn readout_offset(&self) -> usize {
        4 * (self.hidden * self.hidden + 2 * self.hidden)
    }

    pub fn w(&self, gate: Gate) -> &[f64] {
        let o = self.gate_offset(gate);
        &self.values[o..o + self.hidden]
    }

    pub fn u(&self, gate: Gate) -> &[f64] {
        let o = self.gate_offset(gate) + self.hidden;
        &self.values[o..o + self.hidden * self.hidden]
    }

    pub fn b(&self, gate: Gate) -> &[f64] {
        let o = self.gate_offset(gate) + self.hidden + self.hidden * self.hidden;
        &self.values[o..o + self.hidden]
    }

    pub fn w_mut(&mut self, gate: Gate) -> &mut [f64] {
        let o = self.gate_offset(gate);
        let n = self.hidden;
        &mut self.values[o..o + n]
    }

    pub fn u_mut(&mut self, gate: Gate) -> &mut [f64] {
        let n = self.hidden;
        let o = self.gate_offset(gate) + n;
        &mut self.values[o..o + n * n]
    }

    pub fn b_mut(&mut self, gate: Gate) -> &mut [f64] {
        let n = self.hidden;
        let o = self.gate_offset(gate) + n + n * n;
        &mut self.values[o..o + n]
    }

    pub fn readout(&self) -> LogisticReadout {
        let o = self.readout_offset();
        LogisticReadout {
            weights: self.values[o..o + self.hidden].to_vec(),
            bias: self.values[o + self.hidden],
        }
    }

    pub fn set_readout(&mut self, readout: &LogisticReadout) {
        let o = self.readout_offset();
        let n = self.hidden;
        self.values[o..o + n].copy_from_slice(&readout.weights);
        self.values[o + n] = readout.bias;
    }

    fn readout_parts(&self) -> (&[f64], f64) {
        let o = self.readout_offset();
        (&self.values[o..o + self.hidden], self.values[o + self.hidden])
    }
}

/// Scratch buffers for one truncated window.
struct Workspace {
    n: usize,
    /// `h_0 .. h_L`, each N.
    hs: Vec<f64>,
    cs: Vec<f64>,
    /// activated gates per step: f, i, o, g (each N).
    gates: Vec<f64>,
    /// pre-activation gradients per step, same layout as `gates`.
    das: Vec<f64>,
    /// `y − p` per step, the derivative of the log-likelihood w.r.t. the logit.
    dlogit: Vec<f64>,
    pre: Vec<f64>,
    dh: Vec<f64>,
    dc: Vec<f64>,
    dh_prev: Vec<f64>,
}

impl Workspace {
    fn new(n: usize, len: usize) -> Self {
        Workspace {
            n,
            hs: vec![0.0; (len + 1) * n],
            cs: vec![0.0; (len + 1) * n],
            gates: vec![0.0; len * 4 * n],
            das: vec![0.0; len * 4 * n],
            dlogit: vec![0.0; len],
            pre: vec![0.0; 4 * n],
            dh: vec![0.0; n],
            dc: vec![0.0; n],
            dh_prev: vec![0.0; n],
        }
    }

    fn ensure(&mut self, len: usize) {
        let n = self.n;
        if self.dlogit.len() < len {
            self.hs.resize((len + 1) * n, 0.0);
            self.cs.resize((len + 1) * n, 0.0);
            self.gates.resize(len * 4 * n, 0.0);
            self.das.resize(len * 4 * n, 0.0);
            self.dlogit.resize(len, 0.0);
        }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    acc.iter().sum::<f64>() + tail
}

#[inline]
fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yk, xk) in y.iter_mut().zip(x) {
        *yk += alpha * xk;
    }
}

/// One recurrent update from `(h, c)` consuming input `x`.
#[inline]
fn step(p: &LstmParams, x: f64, h: &[f64], c: &[f64], pre: &mut [f64], gates: &mut [f64], c_out: &mut [f64], h_out: &mut [f64]) {
    let n = p.hidden;
    for g in Gate::ALL {
        let w = p.w(g);
        let u = p.u(g);
        let b = p.b(g);
        let block = &mut pre[g as usize * n..(g as usize + 1) * n];
        for r in 0..n {
            block[r] = w[r] * x + dot(&u[r * n..(r + 1) * n], h) + b[r];
        }
    }
    for r in 0..n {
        let f = sigmoid(pre[r]);
        let i = sigmoid(pre[n + r]);
        let o = sigmoid(pre[2 * n + r]);
        let gc = pre[3 * n + r].tanh();
        gates[r] = f;
        gates[n + r] = i;
        gates[2 * n + r] = o;
        gates[3 * n + r] = gc;
        c_out[r] = f * c[r] + i * gc;
        h_out[r] = o * p.cell_output.apply(c_out[r]).0;
    }
}

/// Forward (and optionally backward) pass over one window starting from the
/// carried `(h0, c0)`. Returns the window log-likelihood; `ws.hs[L]` and
/// `ws.cs[L]` hold the state to carry. When `grad` is given the gradient of
/// the log-likelihood is accumulated into it; the carried state is treated
/// as a constant.
fn window_pass(p: &LstmParams, xs: &[Symbol], ws: &mut Workspace, grad: Option<&mut [f64]>) -> f64 {
    let n = p.hidden;
    let len = xs.len();
    ws.ensure(len);
    let (rw, rb) = p.readout_parts();
    let mut ll = 0.0;
    for (j, &x) in xs.iter().enumerate() {
        let (head, tail) = ws.hs.split_at_mut((j + 1) * n);
        let h = &head[j * n..];
        let z = rb + dot(rw, h);
        ll += if x == 1 { log_sigmoid(z) } else { log_sigmoid(-z) };
        ws.dlogit[j] = x as f64 - sigmoid(z);
        let (c_head, c_tail) = ws.cs.split_at_mut((j + 1) * n);
        step(
            p,
            x as f64,
            h,
            &c_head[j * n..],
            &mut ws.pre,
            &mut ws.gates[j * 4 * n..(j + 1) * 4 * n],
            &mut c_tail[..n],
            &mut tail[..n],
        );
    }
    let Some(grad) = grad else { return ll };
    if len == 0 {
        return ll;
    }
    let ro = p.readout_offset();
    let last = len - 1;
    for r in 0..n {
        ws.dh[r] = ws.dlogit[last] * rw[r];
        ws.dc[r] = 0.0;
        grad[ro + r] += ws.dlogit[last] * ws.hs[last * n + r];
    }
    grad[ro + n] += ws.dlogit[last];

    for j in (0..last).rev() {
        let x = xs[j] as f64;
        let gates = &ws.gates[j * 4 * n..(j + 1) * 4 * n];
        let da = &mut ws.das[j * 4 * n..(j + 1) * 4 * n];
        let c_prev = &ws.cs[j * n..(j + 1) * n];
        let c_new = &ws.cs[(j + 1) * n..(j + 2) * n];
        let h_prev = &ws.hs[j * n..(j + 1) * n];
        for r in 0..n {
            let (f, i, o, gc) = (gates[r], gates[n + r], gates[2 * n + r], gates[3 * n + r]);
            let (act, dact) = p.cell_output.apply(c_new[r]);
            let dc = ws.dc[r] + ws.dh[r] * o * dact;
            da[2 * n + r] = ws.dh[r] * act * o * (1.0 - o);
            da[r] = dc * c_prev[r] * f * (1.0 - f);
            da[n + r] = dc * gc * i * (1.0 - i);
            da[3 * n + r] = dc * i * (1.0 - gc * gc);
            ws.dc[r] = dc * f;
        }
        let dlogit = ws.dlogit[j];
        for r in 0..n {
            ws.dh_prev[r] = dlogit * rw[r];
        }
        axpy(&mut grad[ro..ro + n], dlogit, h_prev);
        grad[ro + n] += dlogit;
        for g in Gate::ALL {
            let off = p.gate_offset(g);
            let u = p.u(g);
            let dag = &da[g as usize * n..(g as usize + 1) * n];
            axpy(&mut grad[off..off + n], x, dag);
            for (gb, d) in grad[off + n + n * n..off + 2 * n + n * n].iter_mut().zip(dag) {
                *gb += d;
            }
            for r in 0..n {
                axpy(&mut ws.dh_prev, dag[r], &u[r * n..(r + 1) * n]);
            }
        }
        std::mem::swap(&mut ws.dh, &mut ws.dh_prev);
    }
    // dU_g += Σ_j da_g(j) h_jᵀ over the window, as one product per gate.
    for g in Gate::ALL {
        let off = p.gate_offset(g) + n;
        let a = ws.das[g as usize * n..].as_ptr();
        // SAFETY: every index touched is within the buffers: the `das` view
        // spans rows 0..last with stride 4N, `hs` rows 0..last with stride N,
        // and the destination is the N×N block of `grad` at `off`.
        unsafe {
            matrixmultiply::dgemm(
                n,
                last,
                n,
                1.0,
                a,
                1,
                (4 * n) as isize,
                ws.hs.as_ptr(),
                n as isize,
                1,
                1.0,
                grad[off..off + n * n].as_mut_ptr(),
                n as isize,
                1,
            );
        }
    }
    ll
}

/// Result of running an LSTM over a whole stream from the zero state.
#[derive(Clone, Debug)]
pub struct LstmForward {
    /// `h_t` for every position (the state used to predict `x_t`).
    pub hidden: Vec<Vec<f64>>,
    /// `p(x_t = 1 | h_t)`.
    pub probs: Vec<f64>,
    /// `Σ_t ln p(x_t | h_t)`.
    pub log_likelihood: f64,
}

pub fn lstm_forward(params: &LstmParams, symbols: &[Symbol]) -> LstmForward {
    let n = params.hidden;
    let mut ws = Workspace::new(n, symbols.len());
    let ll = window_pass(params, symbols, &mut ws, None);
    let (rw, rb) = params.readout_parts();
    let hidden: Vec<Vec<f64>> = (0..symbols.len()).map(|t| ws.hs[t * n..(t + 1) * n].to_vec()).collect();
    let probs = hidden
        .iter()
        .map(|h| clamp_prob(sigmoid(rb + rw.iter().zip(h).map(|(a, b)| a * b).sum::<f64>())))
        .collect();
    LstmForward {
        hidden,
        probs,
        log_likelihood: ll,
    }
}

/// Log-likelihood of `symbols` from the zero state and its exact gradient
/// with respect to every parameter (full backpropagation, no truncation).
pub fn lstm_gradient(params: &LstmParams, symbols: &[Symbol]) -> (f64, Vec<f64>) {
    let mut grad = vec![0.0; params.values.len()];
    let mut ws = Workspace::new(params.hidden, symbols.len());
    let ll = window_pass(params, symbols, &mut ws, Some(&mut grad));
    (ll, grad)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LstmModel {
    pub params: LstmParams,
}

impl LstmModel {
    pub fn dump(&self) -> String {
        let p = &self.params;
        let mut out = format!("family = lstm\nsize = {}\ncell_output = {}\n", p.hidden, p.cell_output.as_str());
        for (g, name) in Gate::ALL.iter().zip(["f", "i", "o", "c"]) {
            out += &format!("W_{name} = {}\n", format_values(p.w(*g)));
            out += &format!("U_{name} = {}\n", format_values(p.u(*g)));
            out += &format!("b_{name} = {}\n", format_values(p.b(*g)));
        }
        let r = p.readout();
        out += &format!("w = {}\nw0 = {:.16e}\n", format_values(&r.weights), r.bias);
        out
    }
}

impl Predictor for LstmModel {
    fn prob_one(&self, symbols: &[Symbol]) -> Vec<f64> {
        lstm_forward(&self.params, symbols).probs
    }
}

#[derive(Clone, Debug)]
pub struct LstmTraining {
    pub model: LstmModel,
    /// Summed window log-likelihood seen during each completed epoch.
    pub epoch_log_likelihood: Vec<f64>,
    /// Epoch restarts caused by non-finite or diverged losses.
    pub restarts: usize,
    pub final_learning_rate: f64,
}

type Snapshot = (LstmParams, Vec<f64>, Vec<f64>, i32);

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

/// Trains on `symbols` with truncated BPTT: consecutive windows of
/// `spec.training.window` symbols, state carried between windows and reset
/// at each epoch, one optimizer step per window on the mean window
/// log-likelihood.
///
/// An epoch whose loss is non-finite or above twice the fair-coin loss is
/// undone together with the epoch before it (whose final update may be the
/// culprit, since the state is reset between epochs) and both are repeated
/// with half the step size, at most five times.
pub fn lstm_train(spec: &PredictorSpec, symbols: &[Symbol]) -> Result<LstmTraining> {
    let t = &spec.training;
    if t.window == 0 || symbols.len() < t.window {
        return Err(Error::InsufficientData(format!(
            "LSTM training needs at least one window of {} symbols, got {}",
            t.window,
            symbols.len()
        )));
    }
    let n = spec.size;
    let mut params = LstmParams::random(n, spec.seed).with_cell_output(t.cell_output);
    let len = params.values.len();
    let mut adam = Adam {
        m: vec![0.0; len],
        v: vec![0.0; len],
        t: 0,
    };
    let mut lr = t.learning_rate;
    let mut restarts = 0;
    let mut history = Vec::with_capacity(t.epochs);
    let mut ws = Workspace::new(n, t.window);
    let mut grad = vec![0.0; len];

    let mut previous: Option<Snapshot> = None;
    let mut epoch = 0;
    while epoch < t.epochs {
        let snapshot = (params.clone(), adam.m.clone(), adam.v.clone(), adam.t);
        let mut h = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut total = 0.0;
        for chunk in symbols.chunks(t.window) {
            ws.ensure(chunk.len());
            ws.hs[..n].copy_from_slice(&h);
            ws.cs[..n].copy_from_slice(&c);
            grad.iter_mut().for_each(|g| *g = 0.0);
            let ll = window_pass(&params, chunk, &mut ws, Some(&mut grad));
            total += ll;
            if !ll.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                total = f64::NAN;
                break;
            }
            let scale = 1.0 / chunk.len() as f64;
            match t.optimizer {
                Optimizer::Adam => {
                    adam.t += 1;
                    let bc1 = 1.0 - ADAM_BETA1.powi(adam.t);
                    let bc2 = 1.0 - ADAM_BETA2.powi(adam.t);
                    for k in 0..len {
                        let g = grad[k] * scale;
                        adam.m[k] = ADAM_BETA1 * adam.m[k] + (1.0 - ADAM_BETA1) * g;
                        adam.v[k] = ADAM_BETA2 * adam.v[k] + (1.0 - ADAM_BETA2) * g * g;
                        let mh = adam.m[k] / bc1;
                        let vh = adam.v[k] / bc2;
                        params.values[k] += lr * mh / (vh.sqrt() + ADAM_EPS);
                    }
                }
                Optimizer::Sgd => {
                    for k in 0..len {
                        params.values[k] += lr * grad[k] * scale;
                    }
                }
            }
            let end = chunk.len();
            h.copy_from_slice(&ws.hs[end * n..(end + 1) * n]);
            c.copy_from_slice(&ws.cs[end * n..(end + 1) * n]);
        }
        let diverged = !total.is_finite()
            || params.values.iter().any(|v| !v.is_finite())
            || -total / symbols.len() as f64 > DIVERGED_LOSS;
        if diverged {
            log::debug!("LSTM N={n}: epoch {epoch} diverged (log-likelihood {total}), halving step {lr}");
            restarts += 1;
            if restarts > MAX_RESTARTS {
                return Err(Error::TrainingFailure(format!(
                    "LSTM loss still diverging after {MAX_RESTARTS} step halvings"
                )));
            }
            match previous.take() {
                Some(earlier) => {
                    (params, adam.m, adam.v, adam.t) = earlier;
                    history.pop();
                    epoch -= 1;
                }
                None => (params, adam.m, adam.v, adam.t) = snapshot,
            }
            lr *= 0.5;
            continue;
        }
        previous = Some(snapshot);
        history.push(total);
        epoch += 1;
    }
    Ok(LstmTraining {
        model: LstmModel { params },
        epoch_log_likelihood: history,
        restarts,
        final_learning_rate: lr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictors::{evaluate_stream, Family};
    use std::f64::consts::LN_2;

    #[test]
    fn zero_parameters_predict_one_half() {
        let p = LstmParams::zeros(4);
        let symbols = [1, 0, 0, 1, 1, 1, 0];
        let out = lstm_forward(&p, &symbols);
        assert!(out.probs.iter().all(|&q| q == 0.5));
        assert!((out.log_likelihood - symbols.len() as f64 * 0.5f64.ln()).abs() < 1e-12);
        assert!((out.log_likelihood + 7.0 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn accessors_address_disjoint_blocks() {
        let mut p = LstmParams::zeros(3);
        p.u_mut(Gate::Cell)[4] = 2.0;
        p.b_mut(Gate::Forget)[0] = 1.0;
        p.w_mut(Gate::Output)[2] = 3.0;
        assert_eq!(p.u(Gate::Cell)[4], 2.0);
        assert_eq!(p.b(Gate::Forget)[0], 1.0);
        assert_eq!(p.w(Gate::Output)[2], 3.0);
        assert_eq!(p.values().iter().filter(|&&v| v != 0.0).count(), 3);
        assert_eq!(p.values().len(), 4 * (9 + 6) + 4);
    }

    /// Central differences on every parameter.
    fn finite_difference(params: &LstmParams, symbols: &[Symbol], h: f64) -> Vec<f64> {
        (0..params.values.len())
            .map(|k| {
                let mut plus = params.clone();
                plus.values[k] += h;
                let mut minus = params.clone();
                minus.values[k] -= h;
                (lstm_forward(&plus, symbols).log_likelihood - lstm_forward(&minus, symbols).log_likelihood) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let mut rng = seed::rng(5);
        let symbols: Vec<Symbol> = (0..20).map(|_| rng.gen::<bool>() as Symbol).collect();
        for cell_output in [CellOutput::Tanh, CellOutput::Linear] {
            let params = LstmParams::random(3, 17).with_cell_output(cell_output);
            let (_, analytic) = lstm_gradient(&params, &symbols);
            let numeric = finite_difference(&params, &symbols, 1e-5);
            for (a, f) in analytic.iter().zip(&numeric) {
                let rel = (a - f).abs() / a.abs().max(f.abs()).max(1e-6);
                assert!(rel < 1e-4, "{cell_output:?}: analytic {a} numeric {f}");
            }
        }
    }

    #[test]
    fn tanh_readout_keeps_the_hidden_state_bounded() {
        let mut p = LstmParams::zeros(2);
        p.b_mut(Gate::Forget).fill(10.0);
        p.b_mut(Gate::Input).fill(10.0);
        p.b_mut(Gate::Output).fill(10.0);
        p.b_mut(Gate::Cell).fill(10.0);
        let symbols = [1; 50];
        let linear = lstm_forward(&p.clone().with_cell_output(CellOutput::Linear), &symbols);
        let bounded = lstm_forward(&p.with_cell_output(CellOutput::Tanh), &symbols);
        assert!(linear.hidden[49][0] > 40.0);
        assert!(bounded.hidden.iter().flatten().all(|h| h.abs() < 1.0));
    }

    #[test]
    fn period_two_is_learned() {
        let symbols: Vec<Symbol> = (0..1000).map(|t| (t % 2) as Symbol).collect();
        let mut spec = PredictorSpec::new(Family::Lstm, 2, 3);
        spec.training.epochs = 20;
        let before = lstm_forward(&LstmParams::random(2, 3), &symbols[..500]).log_likelihood;
        let trained = lstm_train(&spec, &symbols[..500]).unwrap();
        let after = lstm_forward(&trained.model.params, &symbols[..500]).log_likelihood;
        assert!(after >= before);
        let eval = evaluate_stream(&trained.model, &symbols, 500);
        assert!(eval.accuracy >= 0.99, "accuracy {}", eval.accuracy);
    }

    #[test]
    fn too_short_input_is_rejected() {
        let spec = PredictorSpec::new(Family::Lstm, 2, 0);
        assert!(matches!(lstm_train(&spec, &[0; 10]), Err(Error::InsufficientData(_))));
    }
}

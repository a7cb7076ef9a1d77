//! Hand-set weights showing what the recurrent families can represent.

use super::glm::GlmModel;
use super::logistic::LogisticReadout;
use super::lstm::{CellOutput, Gate, LstmModel, LstmParams};
use super::reservoir::{InputEncoding, ReservoirModel, ReservoirParams};
use crate::info::sigmoid;

/// A one-node LSTM that tracks the parity of the current run of 1s, the
/// causal state of the Even process, and predicts from it.
///
/// With gain `k` the forget gate is shut (`b_f = −k`), the output and
/// candidate are open (`b_o = b_c = k`), and the input gate
/// `σ(2k·x − 2k·h − k)` opens only on a 1 seen from an even run. The cell
/// therefore holds 1 after an odd run of 1s and 0 otherwise. The readout
/// emits `p(1) = q` in the even state and almost surely 1 in the odd one.
pub fn even_parity_lstm(q: f64, k: f64) -> LstmModel {
    let mut p = LstmParams::zeros(1).with_cell_output(CellOutput::Linear);
    p.b_mut(Gate::Forget)[0] = -k;
    p.b_mut(Gate::Output)[0] = k;
    p.b_mut(Gate::Cell)[0] = k;
    p.w_mut(Gate::Input)[0] = 2.0 * k;
    p.u_mut(Gate::Input)[0] = -2.0 * k;
    p.b_mut(Gate::Input)[0] = -k;
    let w0 = (q / (1.0 - q)).ln();
    p.set_readout(&LogisticReadout {
        weights: vec![2.0 * k],
        bias: w0,
    });
    debug_assert!(sigmoid(w0 + 2.0 * k) > 0.5);
    LstmModel { params: p }
}

/// A reservoir wired as a delay line: node 0 saturates to `±1` on the
/// current input, node `j` copies node `j − 1`. After `k` steps node `j`
/// holds `2·x_{t−1−j} − 1`, so an affine readout reproduces `glm` exactly.
/// At `gain = 20` every activation rounds to exactly `±1`.
pub fn shift_register_reservoir(glm: &GlmModel, gain: f64) -> ReservoirModel {
    let k = glm.order;
    let mut recurrence = vec![0.0; k * k];
    for j in 1..k {
        recurrence[j * k + (j - 1)] = gain;
    }
    let mut input = vec![0.0; k];
    let mut bias = vec![0.0; k];
    input[0] = 2.0 * gain;
    bias[0] = -gain;
    // glm weight i multiplies x_{t-k+i}; reservoir node j holds x_{t-1-j}.
    let w = &glm.readout.weights;
    let weights: Vec<f64> = (0..k).map(|j| w[k - 1 - j] / 2.0).collect();
    let readout = LogisticReadout {
        weights,
        bias: glm.readout.bias + w.iter().sum::<f64>() / 2.0,
    };
    ReservoirModel {
        params: ReservoirParams {
            size: k,
            recurrence,
            input,
            bias,
            spectral_radius_target: 0.0,
        },
        encoding: InputEncoding::Unipolar,
        readout,
    }
}

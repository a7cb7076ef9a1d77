//! Hand-set weights: a one-node LSTM that tracks the Even process's causal
//! state, and a reservoir wired as a delay line that reproduces a GLM.

use pdfa_bench::pdfa::{sample_sequence, Pdfa, ProcessSummary};
use pdfa_bench::predictors::constructions::{even_parity_lstm, shift_register_reservoir};
use pdfa_bench::predictors::{evaluate_stream, GlmModel, Predictor};

fn main() -> pdfa_bench::Result<()> {
    let even = Pdfa::even_process(0.4);
    let a_opt = ProcessSummary::compute(&even)?.optimal_accuracy;
    let seq = sample_sequence(&even, 100_000, 11)?.symbols;

    let lstm = even_parity_lstm(0.4, 20.0);
    let eval = evaluate_stream(&lstm, &seq, 1000);
    println!("one-node LSTM: accuracy {:.4} vs optimal {a_opt:.4}", eval.accuracy);
    println!("{}", lstm.dump());

    let glm = GlmModel::fit(&seq[..5000], 5, 1.0, 100)?;
    let rc = shift_register_reservoir(&glm, 20.0);
    let (pg, pr) = (glm.prob_one(&seq), rc.prob_one(&seq));
    let worst = (glm.order..seq.len()).map(|t| (pg[t] - pr[t]).abs()).fold(0.0, f64::max);
    println!("delay-line reservoir vs order-5 GLM: max |dp| = {worst:e}");
    Ok(())
}

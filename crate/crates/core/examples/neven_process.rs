//! A three-state machine: where its rate-accuracy curve bends, and which
//! state each prediction comes from once the filter synchronizes.

use pdfa_bench::pdfa::{optimal_prediction, state_label, Pdfa, ProcessSummary, StateFilter};
use pdfa_bench::predictors::{predict, OracleModel, Predictor};
use pdfa_bench::rate_accuracy::trace_curve;

fn main() -> pdfa_bench::Result<()> {
    let m = Pdfa::neven_process(0.3, 0.6);
    println!("{m}");
    let s = ProcessSummary::compute(&m)?;
    for (i, p) in s.pi.iter().enumerate() {
        println!(
            "state {}: pi={p:.4} p(1)={:.2} predicts {}",
            state_label(i),
            m.emission(i, 1),
            optimal_prediction(&m, i)
        );
    }
    let curve = trace_curve(&m)?;
    let v = curve.vertices();
    println!("\ncurve: {} vertices from {:?} to {:?}", v.len(), v[0], v[v.len() - 1]);

    let symbols = [1, 1, 0, 1, 0, 0, 1, 1, 0];
    let mut filter = StateFilter::new(&m)?;
    let probs = OracleModel::new(m.clone())?.prob_one(&symbols);
    for (&x, p) in symbols.iter().zip(&probs) {
        let sync = filter.synchronized_state().map(state_label).unwrap_or_else(|| "?".into());
        println!("in {sync:>2}: p(1)={p:.3} predict {} saw {x}", predict(*p));
        filter.observe(x)?;
    }
    Ok(())
}

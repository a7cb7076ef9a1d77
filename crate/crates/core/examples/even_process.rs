//! Closed-form statistics, sampling and causal-state filtering for the
//! Even process.
//!
//! ```text
//! cargo run --example even_process -- 0.4
//! ```

use pdfa_bench::pdfa::{filter_states, sample_sequence, state_label, validate, Pdfa, ProcessSummary};

fn main() -> pdfa_bench::Result<()> {
    let q: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.5);
    let even = Pdfa::even_process(q);
    println!("{even}");
    println!("validation: {}", validate(&even));

    let s = ProcessSummary::compute(&even)?;
    println!("pi        = {:?}", s.pi);
    println!("h_mu      = {:.6} nats/symbol", s.entropy_rate_nats);
    println!("C_mu      = {:.6} nats", s.statistical_complexity_nats);
    println!("A_opt     = {:.6}", s.optimal_accuracy);
    println!("R_opt     = {:.6} nats", s.optimal_rate_nats);

    let sample = sample_sequence(&even, 24, 7)?;
    let beliefs = filter_states(&even, &sample.symbols)?;
    println!("\n t  x  true  belief after x");
    for (t, (x, b)) in sample.symbols.iter().zip(&beliefs).enumerate() {
        let true_next = state_label(sample.states[t + 1]);
        println!("{t:2}  {x}  {true_next:>4}  {b:.3?}");
    }
    Ok(())
}

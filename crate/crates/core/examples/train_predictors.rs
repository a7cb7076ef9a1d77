//! Trains a GLM, a reservoir and an LSTM on the first half of an Even
//! process sample and scores them on the second half.
//!
//! ```text
//! cargo run --release --example train_predictors
//! ```

use pdfa_bench::harness::{run_single, ProtocolConfig};
use pdfa_bench::pdfa::Pdfa;
use pdfa_bench::predictors::Family;

fn main() -> pdfa_bench::Result<()> {
    let machine = Pdfa::even_process(0.4);
    let protocol = ProtocolConfig::default();
    println!("{:>10} {:>5} {:>9} {:>8} {:>12} {:>9}", "family", "size", "accuracy", "rate", "distortion%", "distance");
    for (family, size) in [
        (Family::Glm, 1),
        (Family::Glm, 6),
        (Family::Reservoir, 11),
        (Family::Lstm, 4),
        (Family::Oracle, 2),
    ] {
        let r = run_single(&machine, &protocol.spec(family, size), &protocol, 0)?;
        println!(
            "{:>10} {:>5} {:9.4} {:8.4} {:12.3} {:9.4}",
            family.as_str(),
            size,
            r.accuracy,
            r.rate_nats,
            r.normalized_distortion_pct,
            r.normalized_distance.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

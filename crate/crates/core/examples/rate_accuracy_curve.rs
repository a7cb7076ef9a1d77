//! Traces the predictive rate-accuracy curve of the Even process with
//! Blahut-Arimoto and measures how far a few simple predictors sit from it.
//!
//! ```text
//! cargo run --example rate_accuracy_curve -- 0.4
//! ```

use pdfa_bench::pdfa::{OperatingPoint, Pdfa};
use pdfa_bench::rate_accuracy::{normalized_distance, normalized_distortion, trace_curve};

fn main() -> pdfa_bench::Result<()> {
    let q: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.4);
    let even = Pdfa::even_process(q);
    let curve = trace_curve(&even)?;

    println!("{:>10} {:>10} {:>9}", "beta", "rate", "accuracy");
    for p in curve.points.iter().step_by(5) {
        println!("{:10.4} {:10.6} {:9.6}", p.beta, p.rate_nats, p.accuracy);
    }
    let opt = curve.augmented_point;
    println!("{:>10} {:10.6} {:9.6}", "optimal", opt.rate_nats, opt.accuracy);
    if !curve.flagged_betas.is_empty() {
        println!("unconverged multipliers: {:?}", curve.flagged_betas);
    }

    let candidates = [
        ("always 1", OperatingPoint { rate_nats: 0.0, accuracy: 4.0 / 7.0 }),
        ("optimal", opt),
        ("half rate", OperatingPoint { rate_nats: opt.rate_nats / 2.0, accuracy: 0.62 }),
        ("wasteful", OperatingPoint { rate_nats: opt.rate_nats, accuracy: 0.65 }),
    ];
    println!("\n{:>10} {:>9} {:>12}", "predictor", "distance", "distortion%");
    for (name, p) in candidates {
        let d = normalized_distance(p, &curve)?;
        println!("{name:>10} {d:9.4} {:12.3}", normalized_distortion(p.accuracy, opt.accuracy));
    }
    Ok(())
}

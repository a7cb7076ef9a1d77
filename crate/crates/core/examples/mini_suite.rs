//! Runs a cut-down benchmark over every two-state machine and prints the
//! per-family summary tables.
//!
//! Records go to a JSONL store (default `mini_suite.jsonl` in a temp dir),
//! so a second run with the same path resumes instead of recomputing.
//!
//! ```text
//! cargo run --release --example mini_suite [store.jsonl]
//! ```

use pdfa_bench::enumeration::build_library;
use pdfa_bench::harness::{aggregate, run_suite, ProtocolConfig, RecordStore};

fn main() -> pdfa_bench::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("mini_suite.jsonl"));

    let library = build_library(2, 1, 0)?;
    let mut protocol = ProtocolConfig {
        sequence_length: 2000,
        include_oracle: true,
        ..Default::default()
    };
    protocol.glm.sizes = vec![1, 2, 4];
    protocol.reservoir.sizes = vec![1, 6, 16];
    protocol.lstm.sizes = vec![1, 4];
    protocol.lstm.training.epochs = 10;

    let store = RecordStore::new(&path);
    let outcome = run_suite(&library.machines, &protocol, &store, 1)?;
    println!(
        "{} machines, {} skipped, {} units run, store {}",
        outcome.machines,
        outcome.skipped.len(),
        outcome.units_run,
        path.display()
    );

    let summary = aggregate(&store.load()?, 0.05)?;
    print!("{}\n{}", summary.family_csv(), summary.size_trend_csv());
    Ok(())
}

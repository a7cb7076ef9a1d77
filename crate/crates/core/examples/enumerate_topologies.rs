//! Counts binary-alphabet topological epsilon-machines up to isomorphism
//! and draws a small machine library.
//!
//! ```text
//! cargo run --release --example enumerate_topologies -- 4
//! ```

use std::time::Instant;

use pdfa_bench::enumeration::{build_library, enumerate_topologies};

fn main() -> pdfa_bench::Result<()> {
    let max: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let mut total = 0;
    for n in 1..=max {
        let start = Instant::now();
        let tops = enumerate_topologies(n)?;
        total += tops.len();
        println!("n={n}: {:5} topologies ({:.2?})", tops.len(), start.elapsed());
        if n <= 2 {
            for t in &tops {
                println!("    {}", t.canonical_key());
            }
        }
    }
    println!("total for n <= {max}: {total}");

    let lib = build_library(max.min(2), 1, 0)?;
    println!("\nlibrary with one emission draw per topology (n <= 2):");
    for m in &lib.machines {
        println!("{m}");
    }
    Ok(())
}

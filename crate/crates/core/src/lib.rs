//! Benchmarking time-series predictors against exactly solvable processes.
//!
//! The crate generates probabilistic deterministic finite automata (binary
//! ε-machines), computes their exact entropy rate, statistical complexity
//! and predictive rate-accuracy curve, and scores trained predictors (an
//! order-k logistic GLM, a tanh reservoir computer and an LSTM) against the
//! optimal causal-state predictor.
//!
//! Start with the runnable programs in `examples/`:
//!
//! ```bash
//! cargo run --release --example even_process
//! cargo run --release --example rate_accuracy_curve
//! ```

pub mod cli;
pub mod enumeration;
pub mod error;
pub mod harness;
pub mod info;
pub mod library;
pub mod pdfa;
pub mod predictors;
pub mod rate_accuracy;
pub mod seed;

pub use error::{Error, Result};
pub use pdfa::{Pdfa, ProcessSummary, Symbol};

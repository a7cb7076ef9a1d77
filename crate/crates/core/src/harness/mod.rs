//! The benchmark protocol: sample a sequence from each machine, train every
//! predictor family on its first part, score on the rest against the
//! machine's rate-accuracy curve, and summarize across the library.

mod config;
mod record;
mod run;
mod summary;

pub use config::{FamilyConfig, ProtocolConfig};
pub use record::{EvalRecord, RecordStore, SCHEMA_VERSION};
pub use run::{
    best_record, predictor_seed, protocol_sequence, run_single, run_suite, sequence_seed, sweep_family,
    FamilySweep, MachineContext, SkipEntry, SuiteOutcome,
};
pub use summary::{
    aggregate, complexity_regression, ols, percentile, DistributionStats, FamilySummary, HistogramBin, Regression,
    RegressionTarget, SuiteSummary,
};

use std::collections::BTreeMap;
use std::sync::Mutex;

use log::{debug, info, warn};
use rayon::prelude::*;

use super::config::ProtocolConfig;
use super::record::{EvalRecord, RecordStore, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::pdfa::{sample_sequence, OperatingPoint, Pdfa, ProcessSummary, Symbol};
use crate::predictors::{evaluate_stream, fit, Family, OracleModel, PredictorSpec, TrainedModel};
use crate::rate_accuracy::{normalized_distance, normalized_distortion, trace_curve_with, RateAccuracyCurve};
use crate::seed::derive_seed;

/// A machine with its closed-form statistics and rate-accuracy curve.
#[derive(Clone, Debug)]
pub struct MachineContext {
    pub pdfa: Pdfa,
    pub summary: ProcessSummary,
    pub curve: RateAccuracyCurve,
}

impl MachineContext {
    pub fn new(pdfa: Pdfa, protocol: &ProtocolConfig) -> Result<Self> {
        let summary = ProcessSummary::compute(&pdfa)?;
        let curve = trace_curve_with(&pdfa, &summary, &protocol.beta_grid)?;
        Ok(MachineContext { pdfa, summary, curve })
    }

    pub fn id(&self) -> &str {
        self.pdfa.id()
    }

    pub fn has_zero_rate(&self) -> bool {
        !(self.summary.optimal_rate_nats > 0.0)
    }

    /// The record of a predictor operating at `point`.
    pub fn record(&self, family: Family, size: usize, seed: u64, point: OperatingPoint) -> EvalRecord {
        let s = &self.summary;
        let normalized = (!self.has_zero_rate()).then(|| {
            (
                point.rate_nats / s.optimal_rate_nats,
                point.accuracy / s.optimal_accuracy,
                normalized_distance(point, &self.curve).expect("positive optimal rate"),
            )
        });
        EvalRecord {
            schema_version: SCHEMA_VERSION,
            machine_id: self.id().to_string(),
            family,
            size,
            seed,
            rate_nats: point.rate_nats,
            accuracy: point.accuracy,
            normalized_rate: normalized.map(|n| n.0),
            normalized_accuracy: normalized.map(|n| n.1),
            normalized_distance: normalized.map(|n| n.2),
            normalized_distortion_pct: normalized_distortion(point.accuracy, s.optimal_accuracy),
            h_mu: s.entropy_rate_nats,
            c_mu: s.statistical_complexity_nats,
            a_opt: s.optimal_accuracy,
            r_opt: s.optimal_rate_nats,
            failed: false,
            error: None,
        }
    }
}

pub fn sequence_seed(protocol: &ProtocolConfig, machine_id: &str, seed: u64) -> u64 {
    derive_seed(protocol.global_seed, &["sequence", machine_id, &seed.to_string()])
}

pub fn predictor_seed(protocol: &ProtocolConfig, machine_id: &str, family: Family, size: usize, seed: u64) -> u64 {
    derive_seed(
        protocol.global_seed,
        &["predictor", machine_id, family.as_str(), &size.to_string(), &seed.to_string()],
    )
}

/// The sequence every predictor on `machine` sees for replicate `seed`.
pub fn protocol_sequence(ctx: &MachineContext, protocol: &ProtocolConfig, seed: u64) -> Result<Vec<Symbol>> {
    Ok(sample_sequence(&ctx.pdfa, protocol.sequence_length, sequence_seed(protocol, ctx.id(), seed))?.symbols)
}

/// Trains (or builds) one predictor on the first part of `symbols` and
/// scores it on the rest. Training failures become flagged records.
fn evaluate(ctx: &MachineContext, symbols: &[Symbol], spec: &PredictorSpec, protocol: &ProtocolConfig, seed: u64) -> EvalRecord {
    let train_len = protocol.train_len();
    let model = match spec.family {
        Family::Oracle => OracleModel::new(ctx.pdfa.clone()).map(TrainedModel::Oracle),
        _ => fit(spec, &symbols[..train_len]),
    };
    match model {
        Ok(model) => {
            let eval = evaluate_stream(&model, symbols, train_len);
            let point = OperatingPoint {
                rate_nats: eval.rate_nats,
                accuracy: eval.accuracy,
            };
            ctx.record(spec.family, spec.size, seed, point)
        }
        Err(e) => {
            warn!("{} {} size {}: {e}", ctx.id(), spec.family, spec.size);
            let mut rec = ctx.record(spec.family, spec.size, seed, OperatingPoint::default());
            rec.normalized_rate = None;
            rec.normalized_accuracy = None;
            rec.normalized_distance = None;
            rec.failed = true;
            rec.error = Some(e.to_string());
            rec
        }
    }
}

fn check_included(ctx: &MachineContext, protocol: &ProtocolConfig) -> Result<()> {
    if protocol.exclude_zero_rate && ctx.has_zero_rate() {
        return Err(Error::ExcludedMachine(ctx.id().to_string()));
    }
    Ok(())
}

/// One machine, one predictor configuration, one replicate.
pub fn run_single(pdfa: &Pdfa, spec: &PredictorSpec, protocol: &ProtocolConfig, seed: u64) -> Result<EvalRecord> {
    protocol.validate()?;
    let ctx = MachineContext::new(pdfa.clone(), protocol)?;
    check_included(&ctx, protocol)?;
    let symbols = protocol_sequence(&ctx, protocol, seed)?;
    let mut spec = spec.clone();
    spec.seed = predictor_seed(protocol, ctx.id(), spec.family, spec.size, seed);
    Ok(evaluate(&ctx, &symbols, &spec, protocol, seed))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySweep {
    pub records: Vec<EvalRecord>,
    /// `None` when every grid point failed.
    pub best: Option<EvalRecord>,
}

/// Lowest distortion, then smaller model, then lower rate.
pub fn best_record<'a>(records: impl IntoIterator<Item = &'a EvalRecord>) -> Option<&'a EvalRecord> {
    records.into_iter().filter(|r| !r.failed).min_by(|a, b| {
        a.normalized_distortion_pct
            .total_cmp(&b.normalized_distortion_pct)
            .then(a.size.cmp(&b.size))
            .then(a.rate_nats.total_cmp(&b.rate_nats))
    })
}

/// Every size in `sizes` for every protocol seed; the oracle ignores `sizes`
/// and is recorded with size equal to the machine's state count.
pub fn sweep_family(ctx: &MachineContext, family: Family, sizes: &[usize], protocol: &ProtocolConfig) -> Result<FamilySweep> {
    check_included(ctx, protocol)?;
    let oracle_size = [ctx.pdfa.n_states()];
    let sizes = if family == Family::Oracle { &oracle_size[..] } else { sizes };
    if sizes.is_empty() {
        return Err(Error::Config(format!("empty {family} grid")));
    }
    let mut records = Vec::with_capacity(sizes.len() * protocol.seeds.len());
    for &seed in &protocol.seeds {
        let symbols = protocol_sequence(ctx, protocol, seed)?;
        for &size in sizes {
            let mut spec = protocol.spec(family, size);
            spec.seed = predictor_seed(protocol, ctx.id(), family, size, seed);
            records.push(evaluate(ctx, &symbols, &spec, protocol, seed));
        }
    }
    let best = best_record(&records).cloned();
    if best.is_none() {
        warn!("{}: every {family} grid point failed", ctx.id());
    }
    Ok(FamilySweep { records, best })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkipEntry {
    pub machine_id: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOutcome {
    /// Machines that were swept (including units resumed from the store).
    pub machines: usize,
    pub units_run: usize,
    pub units_already_stored: usize,
    pub skipped: Vec<SkipEntry>,
}

/// Sweeps every family (and the oracle if enabled) over every included
/// machine, appending each finished (machine, family) unit to `store`.
///
/// Units already present in the store are skipped, and units are written
/// in library order whatever order the workers finish in, so an
/// interrupted run that is restarted ends with the same file as an
/// uninterrupted one.
pub fn run_suite(machines: &[Pdfa], protocol: &ProtocolConfig, store: &RecordStore, jobs: usize) -> Result<SuiteOutcome> {
    protocol.validate()?;
    if machines.is_empty() {
        return Err(Error::Config("the machine library is empty".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_suite_inner(machines, protocol, store))
}

fn run_suite_inner(machines: &[Pdfa], protocol: &ProtocolConfig, store: &RecordStore) -> Result<SuiteOutcome> {
    let contexts: Vec<Result<MachineContext>> = machines
        .par_iter()
        .map(|m| MachineContext::new(m.clone(), protocol))
        .collect();
    let mut outcome = SuiteOutcome::default();
    let mut included = Vec::new();
    for (m, ctx) in machines.iter().zip(contexts) {
        match ctx {
            Ok(ctx) if protocol.exclude_zero_rate && ctx.has_zero_rate() => outcome.skipped.push(SkipEntry {
                machine_id: m.id().to_string(),
                reason: "zero-rate optimal predictor".into(),
            }),
            Ok(ctx) => included.push(ctx),
            Err(e) => outcome.skipped.push(SkipEntry {
                machine_id: m.id().to_string(),
                reason: e.to_string(),
            }),
        }
    }
    outcome.machines = included.len();

    let mut families = protocol.families.clone();
    if protocol.include_oracle && !families.contains(&Family::Oracle) {
        families.push(Family::Oracle);
    }
    let done = store.completed_units()?;
    let mut units = Vec::new();
    for (mi, ctx) in included.iter().enumerate() {
        for &family in &families {
            if done.contains(&(ctx.id().to_string(), family)) {
                outcome.units_already_stored += 1;
            } else {
                units.push((mi, family));
            }
        }
    }
    info!(
        "{} machines, {} units to run, {} already stored, {} skipped",
        included.len(),
        units.len(),
        outcome.units_already_stored,
        outcome.skipped.len()
    );

    struct Writer {
        next: usize,
        pending: BTreeMap<usize, Vec<EvalRecord>>,
    }
    let writer = Mutex::new(Writer {
        next: 0,
        pending: BTreeMap::new(),
    });
    units.par_iter().enumerate().try_for_each(|(ui, &(mi, family))| -> Result<()> {
        let ctx = &included[mi];
        let sizes = protocol.family(family).map(|f| f.sizes.as_slice()).unwrap_or(&[]);
        let sweep = sweep_family(ctx, family, sizes, protocol)?;
        debug!("{} {family}: {} records", ctx.id(), sweep.records.len());
        let mut w = writer.lock().expect("writer lock");
        w.pending.insert(ui, sweep.records);
        loop {
            let next = w.next;
            let Some(records) = w.pending.remove(&next) else { break };
            store.append(&records)?;
            w.next += 1;
        }
        Ok(())
    })?;
    outcome.units_run = units.len();
    Ok(outcome)
}

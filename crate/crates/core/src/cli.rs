//! Command-line front end: argument and config-file parsing plus the
//! `enumerate`, `stats`, `curve`, `run`, `suite` and `report` commands.
//!
//! The config file is TOML. Top-level keys mirror the flags, and the
//! `[beta]`, `[glm]`, `[reservoir]` and `[lstm]` tables tune the multiplier
//! grid and each family:
//!
//! ```toml
//! length = 5000
//! train_fraction = 0.5
//! seeds = [0]
//! families = ["glm", "reservoir", "lstm"]
//!
//! [lstm]
//! sizes = [1, 13, 25]
//! epochs = 50
//! cell_output = "tanh"   # or "linear"
//! ```
//!
//! Flags override the file, which overrides the defaults. Unknown keys are
//! rejected.

use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::enumeration::{build_library, enumerate_topologies};
use crate::error::{Error, Result};
use crate::harness::{
    aggregate, run_single, run_suite, sweep_family, MachineContext, ProtocolConfig, RecordStore,
};
use crate::library::{read_library, write_library, write_topologies};
use crate::pdfa::{Pdfa, ProcessSummary};
use crate::predictors::{CellOutput, Family, InputEncoding, Optimizer};
use crate::rate_accuracy::trace_curve_with;

#[derive(Debug, Parser)]
#[command(name = "pdfa-bench", version, about = "Benchmark next-symbol predictors against epsilon-machine rate-accuracy curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Write the topology list and a machine library.
    Enumerate,
    /// Closed-form statistics per machine as CSV.
    Stats,
    /// One rate-accuracy curve CSV per machine.
    Curve,
    /// Sweep the selected families on the selected machines and print the records.
    Run {
        /// Evaluate a single size instead of the family grid.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Run the whole benchmark into the record store (resumable).
    Suite,
    /// Summarize the record store into CSV tables.
    Report,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Enumerate => "enumerate",
            Command::Stats => "stats",
            Command::Curve => "curve",
            Command::Run { .. } => "run",
            Command::Suite => "suite",
            Command::Report => "report",
        })
    }
}

#[derive(Clone, Debug, Default, Args)]
pub struct GlobalOpts {
    /// TOML config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for `suite`.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Global seed from which every other seed is derived.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Machine library (JSON lines).
    #[arg(long, global = true)]
    pub library: Option<PathBuf>,
    /// Record store (JSON lines).
    #[arg(long, global = true)]
    pub store: Option<PathBuf>,
    /// Largest machine size to enumerate.
    #[arg(long, global = true)]
    pub n_states: Option<usize>,
    /// Sequence length per machine.
    #[arg(long, global = true)]
    pub length: Option<usize>,
    /// Comma-separated families (glm, reservoir, lstm, oracle).
    #[arg(long, global = true, value_delimiter = ',')]
    pub families: Option<Vec<String>>,
    /// Built-in machine instead of a library, e.g. `even:0.4`, `coin:0.3`,
    /// `fair-coin`, `period-two`, `neven:0.3,0.6`. Repeatable.
    #[arg(long = "machine", global = true)]
    pub machines: Vec<String>,
    /// More log output (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    length: Option<usize>,
    train_fraction: Option<f64>,
    seed: Option<u64>,
    seeds: Option<Vec<u64>>,
    jobs: Option<usize>,
    n_states: Option<usize>,
    emission_draws: Option<usize>,
    families: Option<Vec<String>>,
    exclude_zero_rate: Option<bool>,
    oracle: Option<bool>,
    library: Option<PathBuf>,
    store: Option<PathBuf>,
    out: Option<PathBuf>,
    histogram_bin_width: Option<f64>,
    verbosity: Option<u8>,
    beta: Option<BetaSection>,
    glm: Option<FamilySection>,
    reservoir: Option<FamilySection>,
    lstm: Option<FamilySection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaSection {
    count: Option<usize>,
    min: Option<f64>,
    max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilySection {
    sizes: Option<Vec<usize>>,
    l2_strength: Option<f64>,
    max_iter: Option<usize>,
    spectral_radius: Option<f64>,
    input_encoding: Option<InputEncoding>,
    learning_rate: Option<f64>,
    epochs: Option<usize>,
    window: Option<usize>,
    optimizer: Option<Optimizer>,
    cell_output: Option<CellOutput>,
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub command: Command,
    pub protocol: ProtocolConfig,
    pub jobs: usize,
    pub n_states: usize,
    pub emission_draws: usize,
    pub out: PathBuf,
    pub library: Option<PathBuf>,
    pub store: PathBuf,
    pub machines: Vec<String>,
    pub histogram_bin_width: f64,
    pub verbosity: u8,
}

fn parse_families(names: &[String]) -> Result<Vec<Family>> {
    let mut out = Vec::new();
    for n in names {
        let f: Family = n.parse()?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err(Error::Config("no families selected".into()));
    }
    Ok(out)
}

fn apply_section(protocol: &mut ProtocolConfig, family: Family, section: FamilySection) {
    let fc = protocol.family_mut(family).expect("trainable family");
    let t = &mut fc.training;
    if let Some(v) = section.sizes {
        fc.sizes = v;
    }
    if let Some(v) = section.l2_strength {
        t.l2_strength = v;
    }
    if let Some(v) = section.max_iter {
        t.max_iter = v;
    }
    if let Some(v) = section.spectral_radius {
        t.spectral_radius = v;
    }
    if let Some(v) = section.input_encoding {
        t.input_encoding = v;
    }
    if let Some(v) = section.learning_rate {
        t.learning_rate = v;
    }
    if let Some(v) = section.epochs {
        t.epochs = v;
    }
    if let Some(v) = section.window {
        t.window = v;
    }
    if let Some(v) = section.optimizer {
        t.optimizer = v;
    }
    if let Some(v) = section.cell_output {
        t.cell_output = v;
    }
}

/// Parses TOML config text (no file access).
fn parse_file_config(text: &str) -> Result<FileConfig> {
    toml::from_str(text).map_err(|e| Error::Config(format!("config: {}", e.message())))
}

/// Merges defaults, the config file and the flags, in increasing priority.
pub fn parse_config(command: Command, opts: &GlobalOpts) -> Result<CliConfig> {
    let file = match &opts.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
            parse_file_config(&text)?
        }
        None => FileConfig::default(),
    };
    resolve(command, file, opts)
}

fn resolve(command: Command, file: FileConfig, opts: &GlobalOpts) -> Result<CliConfig> {
    let mut protocol = ProtocolConfig::default();
    if let Some(v) = file.length {
        protocol.sequence_length = v;
    }
    if let Some(v) = file.train_fraction {
        protocol.train_fraction = v;
    }
    if let Some(v) = file.seed {
        protocol.global_seed = v;
    }
    if let Some(v) = file.seeds {
        protocol.seeds = v;
    }
    if let Some(v) = file.exclude_zero_rate {
        protocol.exclude_zero_rate = v;
    }
    if let Some(v) = file.oracle {
        protocol.include_oracle = v;
    }
    if let Some(b) = file.beta {
        protocol.beta_grid.count = b.count.unwrap_or(protocol.beta_grid.count);
        protocol.beta_grid.min = b.min.unwrap_or(protocol.beta_grid.min);
        protocol.beta_grid.max = b.max.unwrap_or(protocol.beta_grid.max);
    }
    for (family, section) in [(Family::Glm, file.glm), (Family::Reservoir, file.reservoir), (Family::Lstm, file.lstm)] {
        if let Some(s) = section {
            apply_section(&mut protocol, family, s);
        }
    }
    if let Some(names) = opts.families.as_ref().or(file.families.as_ref()) {
        let families = parse_families(names)?;
        protocol.include_oracle |= families.contains(&Family::Oracle);
        protocol.families = families.into_iter().filter(|f| *f != Family::Oracle).collect();
    }
    if let Some(v) = opts.length {
        protocol.sequence_length = v;
    }
    if let Some(v) = opts.seed {
        protocol.global_seed = v;
    }
    protocol.validate()?;
    if !(protocol.beta_grid.min > 0.0 && protocol.beta_grid.max >= protocol.beta_grid.min) {
        return Err(Error::Config("beta grid needs 0 < min <= max".into()));
    }

    let out = opts.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("results"));
    let store = opts.store.clone().or(file.store).unwrap_or_else(|| out.join("records.jsonl"));
    let library = opts.library.clone().or(file.library);
    if let Some(lib) = &library {
        if command != Command::Enumerate && !lib.exists() {
            return Err(Error::Config(format!("library {} does not exist", lib.display())));
        }
    }
    if command == Command::Report && !store.exists() {
        log::info!("store {} does not exist", store.display());
    }
    let n_states = opts.n_states.or(file.n_states).unwrap_or(3);
    if !(1..=crate::enumeration::MAX_STATES).contains(&n_states) {
        return Err(Error::Config(format!("n_states must be in 1..=4, got {n_states}")));
    }
    let jobs = opts.jobs.or(file.jobs).unwrap_or(1);
    if jobs == 0 {
        return Err(Error::Config("jobs must be at least 1".into()));
    }
    let histogram_bin_width = file.histogram_bin_width.unwrap_or(0.05);
    if !(histogram_bin_width > 0.0) {
        return Err(Error::Config("histogram_bin_width must be positive".into()));
    }
    for m in &opts.machines {
        parse_machine(m)?;
    }
    Ok(CliConfig {
        command,
        protocol,
        jobs,
        n_states,
        emission_draws: file.emission_draws.unwrap_or(1).max(1),
        out,
        library,
        store,
        machines: opts.machines.clone(),
        histogram_bin_width,
        verbosity: opts.verbose.max(file.verbosity.unwrap_or(0)),
    })
}

fn parse_prob(s: &str, spec: &str) -> Result<f64> {
    let p: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad probability {s:?} in machine {spec:?}")))?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Config(format!("probability {p} in machine {spec:?} must lie in (0, 1)")));
    }
    Ok(p)
}

/// Builds a catalog machine from a short name such as `even:0.4`.
pub fn parse_machine(spec: &str) -> Result<Pdfa> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let m = match (name, arg) {
        ("even", None) => Pdfa::even_process(0.5),
        ("even", Some(a)) => Pdfa::even_process(parse_prob(a, spec)?),
        ("coin", Some(a)) => Pdfa::biased_coin(parse_prob(a, spec)?),
        ("fair-coin", None) => Pdfa::fair_coin(),
        ("period-two", None) => Pdfa::period_two(),
        ("neven", Some(a)) => {
            let (x, y) = a
                .split_once(',')
                .ok_or_else(|| Error::Config(format!("machine {spec:?} needs two probabilities")))?;
            Pdfa::neven_process(parse_prob(x, spec)?, parse_prob(y, spec)?)
        }
        _ => return Err(Error::Config(format!("unknown machine {spec:?}"))),
    };
    Ok(m.with_id(spec))
}

/// The machines a command works on: `--machine` entries if given, else the
/// library file, else a freshly enumerated library.
pub fn load_machines(config: &CliConfig) -> Result<Vec<Pdfa>> {
    if !config.machines.is_empty() {
        return config.machines.iter().map(|m| parse_machine(m)).collect();
    }
    if let Some(lib) = &config.library {
        return read_library(lib);
    }
    let build = build_library(config.n_states, config.emission_draws, config.protocol.global_seed)?;
    for (id, reason) in &build.skipped {
        log::warn!("{id}: {reason}");
    }
    Ok(build.machines)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Machine ids contain `:` `|` and `#`; file names get a tamer version.
pub fn file_stem(machine_id: &str) -> String {
    machine_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

pub fn stats_csv(machines: &[Pdfa]) -> Result<String> {
    let mut out = String::from("machine_id,n_states,h_mu,C_mu,A_opt,R_opt\n");
    for m in machines {
        let s = ProcessSummary::compute(m)?;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            m.id(),
            m.n_states(),
            s.entropy_rate_nats,
            s.statistical_complexity_nats,
            s.optimal_accuracy,
            s.optimal_rate_nats
        )
        .unwrap();
    }
    Ok(out)
}

/// Runs one command. Progress goes to the log, results to files under
/// `out` and, for small outputs, to stdout.
pub fn execute(config: &CliConfig) -> Result<()> {
    match config.command {
        Command::Enumerate => {
            create_dir(&config.out)?;
            let mut all = Vec::new();
            for n in 1..=config.n_states {
                let tops = enumerate_topologies(n)?;
                println!("n={n}: {} topologies", tops.len());
                all.extend(tops);
            }
            write_topologies(config.out.join("topologies.txt"), &all)?;
            let build = build_library(config.n_states, config.emission_draws, config.protocol.global_seed)?;
            let lib = config.library.clone().unwrap_or_else(|| config.out.join("library.jsonl"));
            write_library(&lib, &build.machines)?;
            println!("{} machines written to {}", build.machines.len(), lib.display());
            if !build.skipped.is_empty() {
                let mut log = String::from("machine_id,reason\n");
                for (id, reason) in &build.skipped {
                    writeln!(log, "{id},{reason}").unwrap();
                }
                write_file(&config.out.join("degenerate.csv"), &log)?;
                println!("{} degenerate topologies skipped", build.skipped.len());
            }
        }
        Command::Stats => {
            let csv = stats_csv(&load_machines(config)?)?;
            create_dir(&config.out)?;
            write_file(&config.out.join("stats.csv"), &csv)?;
            print!("{csv}");
        }
        Command::Curve => {
            let dir = config.out.join("curves");
            create_dir(&dir)?;
            for m in load_machines(config)? {
                let summary = ProcessSummary::compute(&m)?;
                let curve = trace_curve_with(&m, &summary, &config.protocol.beta_grid)?;
                let path = dir.join(format!("{}.csv", file_stem(m.id())));
                write_file(&path, &curve.to_csv())?;
                println!("{}", path.display());
            }
        }
        Command::Run { size } => {
            let p = &config.protocol;
            let mut families = p.families.clone();
            if p.include_oracle {
                families.push(Family::Oracle);
            }
            for m in load_machines(config)? {
                for &family in &families {
                    match size {
                        Some(size) => {
                            for &seed in &p.seeds {
                                println!("{}", run_single(&m, &p.spec(family, size), p, seed)?.to_json());
                            }
                        }
                        None => {
                            let ctx = MachineContext::new(m.clone(), p)?;
                            let sizes = p.family(family).map(|f| f.sizes.clone()).unwrap_or_default();
                            let sweep = sweep_family(&ctx, family, &sizes, p)?;
                            for r in &sweep.records {
                                println!("{}", r.to_json());
                            }
                            match sweep.best {
                                Some(b) => log::info!(
                                    "{} {family}: best size {} distortion {:.3}%",
                                    m.id(),
                                    b.size,
                                    b.normalized_distortion_pct
                                ),
                                None => log::warn!("{} {family}: every grid point failed", m.id()),
                            }
                        }
                    }
                }
            }
        }
        Command::Suite => {
            let machines = load_machines(config)?;
            let store = RecordStore::new(&config.store);
            let outcome = run_suite(&machines, &config.protocol, &store, config.jobs)?;
            create_dir(&config.out)?;
            let mut log = String::from("machine_id,reason\n");
            for s in &outcome.skipped {
                writeln!(log, "{},{}", s.machine_id, s.reason).unwrap();
            }
            write_file(&config.out.join("skipped.csv"), &log)?;
            println!(
                "{} machines: {} units run, {} already stored, {} machines skipped",
                outcome.machines,
                outcome.units_run,
                outcome.units_already_stored,
                outcome.skipped.len()
            );
        }
        Command::Report => {
            let records = RecordStore::new(&config.store).load()?;
            let summary = aggregate(&records, config.histogram_bin_width)?;
            create_dir(&config.out)?;
            write_file(&config.out.join("family_stats.csv"), &summary.family_csv())?;
            write_file(&config.out.join("size_trend.csv"), &summary.size_trend_csv())?;
            write_file(&config.out.join("histogram.csv"), &summary.histogram_csv())?;
            write_file(&config.out.join("regression.csv"), &summary.regression_csv())?;
            let mut points =
                String::from("machine_id,family,size,seed,normalized_rate,normalized_accuracy,normalized_distance,normalized_distortion_pct\n");
            let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            for r in records.iter().filter(|r| !r.failed) {
                writeln!(
                    points,
                    "{},{},{},{},{},{},{},{}",
                    r.machine_id,
                    r.family,
                    r.size,
                    r.seed,
                    cell(r.normalized_rate),
                    cell(r.normalized_accuracy),
                    cell(r.normalized_distance),
                    r.normalized_distortion_pct
                )
                .unwrap();
            }
            write_file(&config.out.join("points.csv"), &points)?;
            for note in &summary.regression_notes {
                log::warn!("{note}");
            }
            print!("{}", summary.family_csv());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> GlobalOpts {
        GlobalOpts::default()
    }

    #[test]
    fn empty_file_gives_defaults() {
        let c = resolve(Command::Stats, parse_file_config("").unwrap(), &opts()).unwrap();
        assert_eq!(c.protocol.sequence_length, 5000);
        assert_eq!(c.protocol.train_fraction, 0.5);
        assert_eq!(c.protocol, ProtocolConfig::default());
    }

    #[test]
    fn flags_override_file() {
        let file = parse_file_config("length = 1000\n").unwrap();
        let flags = GlobalOpts {
            length: Some(200),
            ..opts()
        };
        assert_eq!(resolve(Command::Stats, file, &flags).unwrap().protocol.sequence_length, 200);
        let file = parse_file_config("length = 1000\n").unwrap();
        assert_eq!(resolve(Command::Stats, file, &opts()).unwrap().protocol.sequence_length, 1000);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_file_config("lenght = 5000\n").unwrap_err();
        assert!(err.to_string().contains("lenght"), "{err}");
        assert!(parse_file_config("[lstm]\nepoch = 3\n").is_err());
        assert!(parse_file_config("length = \"long\"\n").is_err());
    }

    #[test]
    fn family_sections_apply() {
        let text = "families = [\"glm\", \"oracle\"]\n[glm]\nsizes = [2, 4]\nl2_strength = 0.5\n[lstm]\noptimizer = \"sgd\"\n";
        let c = resolve(Command::Suite, parse_file_config(text).unwrap(), &opts()).unwrap();
        assert_eq!(c.protocol.families, vec![Family::Glm]);
        assert!(c.protocol.include_oracle);
        assert_eq!(c.protocol.glm.sizes, vec![2, 4]);
        assert_eq!(c.protocol.glm.training.l2_strength, 0.5);
        assert_eq!(c.protocol.lstm.training.optimizer, Optimizer::Sgd);
    }

    #[test]
    fn missing_library_is_a_usage_error() {
        let flags = GlobalOpts {
            library: Some("/nonexistent/lib.jsonl".into()),
            ..opts()
        };
        assert!(matches!(resolve(Command::Stats, FileConfig::default(), &flags), Err(Error::Config(_))));
        assert!(resolve(Command::Enumerate, FileConfig::default(), &flags).is_ok());
    }

    #[test]
    fn machine_specs() {
        assert_eq!(parse_machine("even:0.4").unwrap().emission(0, 1), 0.4);
        assert_eq!(parse_machine("period-two").unwrap().n_states(), 2);
        assert_eq!(parse_machine("neven:0.3,0.6").unwrap().n_states(), 3);
        assert!(parse_machine("even:1.5").is_err());
        assert!(parse_machine("golden-mean").is_err());
        assert_eq!(file_stem("2:0.|1.#0"), "2_0._1._0");
    }

    #[test]
    fn stats_row_for_even_half() {
        let csv = stats_csv(&[parse_machine("even:0.5").unwrap()]).unwrap();
        let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').skip(2).map(|v| v.parse().unwrap()).collect();
        assert!((row[0] - 0.4621).abs() < 1e-4 && (row[1] - 0.6365).abs() < 1e-4 && (row[2] - 0.6667).abs() < 1e-4);
    }
}

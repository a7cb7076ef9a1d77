//! Enumeration of binary topological ε-machines with up to four states.
//!
//! A topology fixes which `(state, symbol)` pairs carry a transition and
//! where they lead, but no probabilities. We keep the topologies that are
//! strongly connected and topologically minimal (no two states accept the
//! same set of futures), identified up to relabeling of states. Symbols are
//! never relabeled: 0 and 1 are distinct observables.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::pdfa::{is_minimal, refine_partition, strongly_connected, Edge, Pdfa, Symbol, DEFAULT_MINIMALITY_TOL};
use crate::seed;

pub const MAX_STATES: usize = 4;

/// Redraws allowed before a topology is declared degenerate.
pub const MAX_EMISSION_ATTEMPTS: usize = 100;

/// Successor table: `targets[state][symbol]`.
pub type TargetTable = Vec<[Option<usize>; 2]>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Topology {
    canonical_key: String,
    targets: TargetTable,
}

impl Topology {
    /// Wraps a successor table, rejecting empty states and tables that are
    /// not strongly connected. Minimality is not required here.
    pub fn new(targets: TargetTable) -> Result<Self> {
        let bad = |reason: String| Error::InvalidMachine {
            machine_id: "topology".into(),
            reason,
        };
        let n = targets.len();
        if n == 0 {
            return Err(bad("no states".into()));
        }
        for (s, row) in targets.iter().enumerate() {
            if row.iter().all(Option::is_none) {
                return Err(bad(format!("state {s} has no outgoing edge")));
            }
            if row.iter().flatten().any(|&t| t >= n) {
                return Err(bad(format!("state {s} targets a missing state")));
            }
        }
        if !strongly_connected(&adjacency(&targets)) {
            return Err(bad("not strongly connected".into()));
        }
        Ok(Topology {
            canonical_key: canonical_form(&targets),
            targets,
        })
    }

    /// Topology of an existing machine (edges with positive probability).
    pub fn of_machine(pdfa: &Pdfa) -> Result<Self> {
        let targets = (0..pdfa.n_states())
            .map(|s| [pdfa.next_state(s, 0), pdfa.next_state(s, 1)])
            .collect();
        Topology::new(targets)
    }

    pub fn n_states(&self) -> usize {
        self.targets.len()
    }

    pub fn canonical_key(&self) -> &str {
        &self.canonical_key
    }

    pub fn targets(&self) -> &TargetTable {
        &self.targets
    }

    /// `(from, symbol, to)` triples in state then symbol order.
    pub fn edges(&self) -> Vec<(usize, Symbol, usize)> {
        self.targets
            .iter()
            .enumerate()
            .flat_map(|(s, row)| {
                row.iter()
                    .enumerate()
                    .filter_map(move |(x, t)| t.map(|t| (s, x as Symbol, t)))
            })
            .collect()
    }

    pub fn is_topologically_minimal(&self) -> bool {
        topologically_minimal(&self.targets)
    }
}

fn adjacency(targets: &TargetTable) -> Vec<Vec<usize>> {
    targets.iter().map(|row| row.iter().flatten().copied().collect()).collect()
}

/// Moore reduction with the set of emitted symbols as each state's output.
fn topologically_minimal(targets: &TargetTable) -> bool {
    let initial: Vec<usize> = targets
        .iter()
        .map(|row| row[0].is_some() as usize | (row[1].is_some() as usize) << 1)
        .collect();
    let blocks = refine_partition(&initial, |s, x| targets[s][x]);
    blocks.iter().max().map_or(0, |m| m + 1) == targets.len()
}

fn encode(targets: &TargetTable) -> String {
    let mut key = format!("{}:", targets.len());
    for (s, row) in targets.iter().enumerate() {
        if s > 0 {
            key.push('|');
        }
        for t in row {
            match t {
                Some(t) => key.push(char::from(b'0' + *t as u8)),
                None => key.push('.'),
            }
        }
    }
    key
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

/// Relabels states: old state `s` becomes `perm[s]`.
fn relabel(targets: &TargetTable, perm: &[usize]) -> TargetTable {
    let mut out = vec![[None, None]; targets.len()];
    for (s, row) in targets.iter().enumerate() {
        out[perm[s]] = [row[0].map(|t| perm[t]), row[1].map(|t| perm[t])];
    }
    out
}

/// Lexicographically smallest encoding over all state relabelings.
/// Two tables share a key exactly when they are isomorphic.
pub fn canonical_form(targets: &TargetTable) -> String {
    permutations(targets.len())
        .iter()
        .map(|perm| encode(&relabel(targets, perm)))
        .min()
        .expect("at least one permutation")
}

/// Every strongly connected, topologically minimal topology on exactly
/// `n_states` states, one per isomorphism class, sorted by canonical key.
pub fn enumerate_topologies(n_states: usize) -> Result<Vec<Topology>> {
    if !(1..=MAX_STATES).contains(&n_states) {
        return Err(Error::UnsupportedSize(n_states));
    }
    // Per-state choices: target-or-absent for each symbol, never both absent.
    let choices: Vec<[Option<usize>; 2]> = {
        let opts: Vec<Option<usize>> = std::iter::once(None).chain((0..n_states).map(Some)).collect();
        opts.iter()
            .flat_map(|&a| opts.iter().map(move |&b| [a, b]))
            .filter(|row| row.iter().any(Option::is_some))
            .collect()
    };
    let radix = choices.len();
    let total = radix.pow(n_states as u32);
    let mut found: BTreeMap<String, TargetTable> = BTreeMap::new();
    let mut table: TargetTable = vec![[None, None]; n_states];
    for code in 0..total {
        let mut c = code;
        for row in table.iter_mut() {
            *row = choices[c % radix];
            c /= radix;
        }
        if !strongly_connected(&adjacency(&table)) || !topologically_minimal(&table) {
            continue;
        }
        let key = canonical_form(&table);
        found.entry(key).or_insert_with(|| table.clone());
    }
    Ok(found
        .into_iter()
        .map(|(canonical_key, targets)| Topology { canonical_key, targets })
        .collect())
}

/// Attaches random emission probabilities to a topology.
///
/// States with both symbols get `p(1|σ) ~ Uniform(0, 1)`; single-symbol
/// states get probability 1. Draws that leave the machine non-minimal are
/// redrawn, up to [`MAX_EMISSION_ATTEMPTS`] times.
pub fn assign_emissions(topology: &Topology, seed: u64) -> Result<Pdfa> {
    let mut rng = seed::rng(seed);
    let id = format!("{}#{seed}", topology.canonical_key);
    for _ in 0..MAX_EMISSION_ATTEMPTS {
        let mut edges = Vec::new();
        for (s, row) in topology.targets.iter().enumerate() {
            match row {
                [Some(t0), Some(t1)] => {
                    let mut p1: f64 = rng.gen();
                    while p1 == 0.0 {
                        p1 = rng.gen();
                    }
                    edges.push(Edge { from: s, symbol: 0, to: *t0, prob: 1.0 - p1 });
                    edges.push(Edge { from: s, symbol: 1, to: *t1, prob: p1 });
                }
                [Some(t0), None] => edges.push(Edge { from: s, symbol: 0, to: *t0, prob: 1.0 }),
                [None, Some(t1)] => edges.push(Edge { from: s, symbol: 1, to: *t1, prob: 1.0 }),
                [None, None] => unreachable!("topologies have no empty states"),
            }
        }
        let pdfa = Pdfa::from_edges(id.clone(), topology.n_states(), &edges)?;
        if is_minimal(&pdfa, DEFAULT_MINIMALITY_TOL) {
            return Ok(pdfa);
        }
    }
    Err(Error::DegenerateTopology {
        key: topology.canonical_key.clone(),
        attempts: MAX_EMISSION_ATTEMPTS,
    })
}

/// Machines generated from every topology up to `max_states` states.
#[derive(Clone, Debug, Default)]
pub struct LibraryBuild {
    pub machines: Vec<Pdfa>,
    /// `(machine id, reason)` for topologies whose emission draws all failed.
    pub skipped: Vec<(String, String)>,
}

/// Enumerates topologies on `1..=max_states` states and draws `draws`
/// emission assignments for each. Machine ids are `<canonical key>#<draw>`
/// and draw `d` of topology `key` uses seed `derive_seed(seed, ["emission", key, d])`.
pub fn build_library(max_states: usize, draws: usize, seed: u64) -> Result<LibraryBuild> {
    let mut build = LibraryBuild::default();
    for n in 1..=max_states {
        for topology in enumerate_topologies(n)? {
            for draw in 0..draws {
                let id = format!("{}#{draw}", topology.canonical_key());
                let s = seed::derive_seed(seed, &["emission", topology.canonical_key(), &draw.to_string()]);
                match assign_emissions(&topology, s) {
                    Ok(m) => build.machines.push(m.with_id(id)),
                    Err(e @ Error::DegenerateTopology { .. }) => build.skipped.push((id, e.to_string())),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(build)
}

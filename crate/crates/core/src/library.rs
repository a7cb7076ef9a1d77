//! Machine library and topology list files.
//!
//! Machine libraries are JSON lines, one machine per line:
//!
//! ```text
//! {"machine_id":"even","n_states":2,"transitions":[{"from":0,"symbol":0,"to":0,"p":0.5},...]}
//! ```
//!
//! Probabilities are written in shortest round-trip form, so reading a file
//! back reproduces every `f64` bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::enumeration::{TargetTable, Topology};
use crate::error::{Error, Result};
use crate::pdfa::{validate, Edge, Pdfa};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MachineLine {
    machine_id: String,
    n_states: usize,
    transitions: Vec<TransitionLine>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionLine {
    from: usize,
    symbol: u8,
    to: usize,
    p: f64,
}

/// One machine as a single JSON line (no trailing newline).
pub fn machine_to_json(pdfa: &Pdfa) -> String {
    let line = MachineLine {
        machine_id: pdfa.id().to_string(),
        n_states: pdfa.n_states(),
        transitions: pdfa
            .edges()
            .map(|e| TransitionLine {
                from: e.from,
                symbol: e.symbol,
                to: e.to,
                p: e.prob,
            })
            .collect(),
    };
    serde_json::to_string(&line).expect("machine lines always serialize")
}

/// Parses one JSON line and validates the machine. `line_no` is reported in errors.
pub fn machine_from_json(text: &str, line_no: usize) -> Result<Pdfa> {
    let line: MachineLine = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: line_no,
        reason: e.to_string(),
    })?;
    let edges: Vec<Edge> = line
        .transitions
        .iter()
        .map(|t| Edge {
            from: t.from,
            symbol: t.symbol,
            to: t.to,
            prob: t.p,
        })
        .collect();
    let pdfa = Pdfa::from_edges(line.machine_id, line.n_states, &edges).map_err(|e| Error::Parse {
        line: line_no,
        reason: e.to_string(),
    })?;
    let report = validate(&pdfa);
    if !report.is_pass() {
        return Err(Error::Validation {
            line: line_no,
            reason: format!("{}: {report}", pdfa.id()),
        });
    }
    Ok(pdfa)
}

pub fn write_library(path: impl AsRef<Path>, machines: &[Pdfa]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for m in machines {
        writeln!(out, "{}", machine_to_json(m)).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Reads a machine library. Blank lines are ignored; line numbers start at 1.
pub fn read_library(path: impl AsRef<Path>) -> Result<Vec<Pdfa>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut machines = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        machines.push(machine_from_json(&line, i + 1)?);
    }
    Ok(machines)
}

/// One topology per line: `<canonical key>\t<from>,<symbol>,<to>;...`.
pub fn write_topologies(path: impl AsRef<Path>, topologies: &[Topology]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for t in topologies {
        let edges: Vec<String> = t
            .edges()
            .iter()
            .map(|(f, x, to)| format!("{f},{x},{to}"))
            .collect();
        writeln!(out, "{}\t{}", t.canonical_key(), edges.join(";")).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_topologies(path: impl AsRef<Path>) -> Result<Vec<Topology>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_topology_line(&line, i + 1)?);
    }
    Ok(out)
}

fn parse_topology_line(line: &str, line_no: usize) -> Result<Topology> {
    let parse_err = |reason: String| Error::Parse { line: line_no, reason };
    let (key, edges) = line
        .split_once('\t')
        .ok_or_else(|| parse_err("expected <key>\\t<edges>".into()))?;
    let n: usize = key
        .split_once(':')
        .and_then(|(n, _)| n.parse().ok())
        .ok_or_else(|| parse_err(format!("bad key {key:?}")))?;
    let mut targets: TargetTable = vec![[None, None]; n];
    for edge in edges.split(';').filter(|e| !e.is_empty()) {
        let parts: Vec<usize> = edge
            .split(',')
            .map(|p| p.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(format!("bad edge {edge:?}: {e}")))?;
        let [from, symbol, to] = parts[..] else {
            return Err(parse_err(format!("bad edge {edge:?}")));
        };
        if from >= n || symbol > 1 {
            return Err(parse_err(format!("bad edge {edge:?}")));
        }
        targets[from][symbol] = Some(to);
    }
    let topology = Topology::new(targets).map_err(|e| parse_err(e.to_string()))?;
    if topology.canonical_key() != key {
        return Err(parse_err(format!(
            "key {key} does not match edges (canonical {})",
            topology.canonical_key()
        )));
    }
    Ok(topology)
}

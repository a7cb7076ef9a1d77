use std::fmt;

use super::{is_minimal, Pdfa, ALPHABET, DEFAULT_MINIMALITY_TOL};

/// Normalization tolerance on per-state emission sums.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Emission probabilities of `state` sum to `total` instead of 1.
    Normalization { state: usize, total: f64 },
    /// `state` has no outgoing transition with positive probability.
    DanglingState { state: usize },
    NotStronglyConnected,
    NonMinimal,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Normalization { state, total } => {
                write!(f, "normalization: state {state} emissions sum to {total}")
            }
            Violation::DanglingState { state } => write!(f, "dangling state {state}"),
            Violation::NotStronglyConnected => write!(f, "not strongly connected"),
            Violation::NonMinimal => write!(f, "non-minimal"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return write!(f, "pass");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate(pdfa: &Pdfa) -> ValidationReport {
    validate_with_tol(pdfa, DEFAULT_MINIMALITY_TOL)
}

/// Collects every violated machine invariant. Never fails.
pub fn validate_with_tol(pdfa: &Pdfa, minimality_tol: f64) -> ValidationReport {
    let n = pdfa.n_states();
    let mut violations = Vec::new();
    for state in 0..n {
        let total: f64 = ALPHABET.iter().map(|&x| pdfa.emission(state, x)).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            violations.push(Violation::Normalization { state, total });
        }
        if ALPHABET.iter().all(|&x| pdfa.next_state(state, x).is_none()) {
            violations.push(Violation::DanglingState { state });
        }
    }
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|s| ALPHABET.iter().filter_map(|&x| pdfa.next_state(s, x)).collect())
        .collect();
    if !strongly_connected(&adjacency) {
        violations.push(Violation::NotStronglyConnected);
    }
    if !is_minimal(pdfa, minimality_tol) {
        violations.push(Violation::NonMinimal);
    }
    ValidationReport { violations }
}

/// True when every node reaches every other node.
pub(crate) fn strongly_connected(adjacency: &[Vec<usize>]) -> bool {
    let n = adjacency.len();
    if n == 0 {
        return false;
    }
    let mut reverse = vec![Vec::new(); n];
    for (from, targets) in adjacency.iter().enumerate() {
        for &to in targets {
            reverse[to].push(from);
        }
    }
    reaches_all(adjacency) && reaches_all(&reverse)
}

fn reaches_all(adjacency: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adjacency.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(s) = stack.pop() {
        for &t in &adjacency[s] {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen.into_iter().all(|v| v)
}

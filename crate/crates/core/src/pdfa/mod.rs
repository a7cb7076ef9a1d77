//! Probabilistic deterministic finite automata over the binary alphabet.
//!
//! A [`Pdfa`] stores, for every state and symbol, at most one outgoing
//! transition `(next state, probability)`. Unifilarity therefore holds by
//! construction; everything else (normalization, connectivity, minimality)
//! is checked by [`validate`].

mod filter;
mod minimal;
mod sample;
mod stats;
mod validate;

use std::fmt;

use crate::error::{Error, Result};

pub use filter::{filter_states, StateFilter};
pub use minimal::{equivalence_classes, is_minimal, DEFAULT_MINIMALITY_TOL};
pub(crate) use minimal::refine_partition;
pub use sample::{sample_sequence, SequenceSample};
pub use stats::{
    entropy_rate, optimal_prediction, optimal_predictor_point, stationary_distribution,
    statistical_complexity, OperatingPoint, ProcessSummary,
};
pub(crate) use validate::strongly_connected;
pub use validate::{validate, validate_with_tol, ValidationReport, Violation};

/// An observed symbol. Only `0` and `1` are valid.
pub type Symbol = u8;

pub const ALPHABET: [Symbol; 2] = [0, 1];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub to: usize,
    pub prob: f64,
}

/// A unifilar binary-alphabet automaton with emission probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct Pdfa {
    id: String,
    transitions: Vec<[Option<Transition>; 2]>,
}

/// One labeled edge `from --symbol, prob--> to`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub symbol: Symbol,
    pub to: usize,
    pub prob: f64,
}

impl Pdfa {
    /// Builds a machine from its transition table, checking only structure:
    /// at least one state, targets in range, probabilities finite and in [0, 1].
    pub fn new(id: impl Into<String>, transitions: Vec<[Option<Transition>; 2]>) -> Result<Self> {
        let id = id.into();
        let n = transitions.len();
        if n == 0 {
            return Err(Error::InvalidMachine {
                machine_id: id,
                reason: "machine has no states".into(),
            });
        }
        for (state, row) in transitions.iter().enumerate() {
            for (symbol, t) in row.iter().enumerate() {
                let Some(t) = t else { continue };
                if t.to >= n {
                    return Err(Error::InvalidMachine {
                        machine_id: id,
                        reason: format!("state {state} symbol {symbol} targets missing state {}", t.to),
                    });
                }
                if !t.prob.is_finite() || !(0.0..=1.0).contains(&t.prob) {
                    return Err(Error::InvalidMachine {
                        machine_id: id,
                        reason: format!("state {state} symbol {symbol} has probability {}", t.prob),
                    });
                }
            }
        }
        Ok(Pdfa { id, transitions })
    }

    /// Builds a machine from an edge list. A repeated `(from, symbol)` pair
    /// would break unifilarity and is rejected.
    pub fn from_edges(id: impl Into<String>, n_states: usize, edges: &[Edge]) -> Result<Self> {
        let id = id.into();
        let mut table = vec![[None, None]; n_states];
        for e in edges {
            if e.symbol > 1 {
                return Err(Error::InvalidMachine {
                    machine_id: id,
                    reason: format!("symbol {} outside the binary alphabet", e.symbol),
                });
            }
            let slot = table.get_mut(e.from).ok_or_else(|| Error::InvalidMachine {
                machine_id: id.clone(),
                reason: format!("edge from missing state {}", e.from),
            })?;
            if slot[e.symbol as usize].is_some() {
                return Err(Error::InvalidMachine {
                    machine_id: id,
                    reason: format!("state {} has two transitions on symbol {}", e.from, e.symbol),
                });
            }
            slot[e.symbol as usize] = Some(Transition { to: e.to, prob: e.prob });
        }
        Pdfa::new(id, table)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn n_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn transition(&self, state: usize, symbol: Symbol) -> Option<Transition> {
        self.transitions[state][symbol as usize]
    }

    /// `p(symbol | state)`, zero when the symbol is not emitted.
    pub fn emission(&self, state: usize, symbol: Symbol) -> f64 {
        self.transition(state, symbol).map_or(0.0, |t| t.prob)
    }

    /// Successor on `symbol`, only when the transition has positive probability.
    pub fn next_state(&self, state: usize, symbol: Symbol) -> Option<usize> {
        self.transition(state, symbol)
            .filter(|t| t.prob > 0.0)
            .map(|t| t.to)
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.transitions.iter().enumerate().flat_map(|(from, row)| {
            row.iter().enumerate().filter_map(move |(symbol, t)| {
                t.map(|t| Edge {
                    from,
                    symbol: symbol as Symbol,
                    to: t.to,
                    prob: t.prob,
                })
            })
        })
    }

    /// State-to-state transition matrix `T[s][s'] = Σ_x p(x|s) [δ(s,x) = s']`.
    pub fn state_transition_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n_states();
        let mut t = vec![vec![0.0; n]; n];
        for e in self.edges() {
            t[e.from][e.to] += e.prob;
        }
        t
    }

    /// Even Process: after a 0 the run of 1s has even length.
    /// State A emits 1 with probability `q` (moving to B) and 0 otherwise;
    /// state B always emits 1 and returns to A.
    pub fn even_process(q: f64) -> Self {
        Pdfa::from_edges(
            format!("even(q={q})"),
            2,
            &[
                Edge { from: 0, symbol: 0, to: 0, prob: 1.0 - q },
                Edge { from: 0, symbol: 1, to: 1, prob: q },
                Edge { from: 1, symbol: 1, to: 0, prob: 1.0 },
            ],
        )
        .expect("even process is structurally valid")
    }

    /// Single-state biased coin emitting 1 with probability `p1`.
    pub fn biased_coin(p1: f64) -> Self {
        Pdfa::from_edges(
            format!("coin(p1={p1})"),
            1,
            &[
                Edge { from: 0, symbol: 0, to: 0, prob: 1.0 - p1 },
                Edge { from: 0, symbol: 1, to: 0, prob: p1 },
            ],
        )
        .expect("coin is structurally valid")
    }

    pub fn fair_coin() -> Self {
        Self::biased_coin(0.5).with_id("fair-coin")
    }

    /// Deterministic alternation: A emits 1 and moves to B, B emits 0 and returns.
    pub fn period_two() -> Self {
        Pdfa::from_edges(
            "period-2",
            2,
            &[
                Edge { from: 0, symbol: 1, to: 1, prob: 1.0 },
                Edge { from: 1, symbol: 0, to: 0, prob: 1.0 },
            ],
        )
        .expect("period-2 is structurally valid")
    }

    /// Three-state machine mixing a noisy period-2 loop (A, B) with an
    /// even-parity loop (A, C). From A a 1 leads to B and a 0 leads to C;
    /// B returns to A on either symbol; C returns to A on 0.
    pub fn neven_process(p1_a: f64, p1_b: f64) -> Self {
        Pdfa::from_edges(
            format!("neven(a={p1_a},b={p1_b})"),
            3,
            &[
                Edge { from: 0, symbol: 0, to: 2, prob: 1.0 - p1_a },
                Edge { from: 0, symbol: 1, to: 1, prob: p1_a },
                Edge { from: 1, symbol: 0, to: 0, prob: 1.0 - p1_b },
                Edge { from: 1, symbol: 1, to: 0, prob: p1_b },
                Edge { from: 2, symbol: 0, to: 0, prob: 1.0 },
            ],
        )
        .expect("neven process is structurally valid")
    }
}

/// Human-readable state name: A, B, C, ...
pub fn state_label(state: usize) -> String {
    if state < 26 {
        char::from(b'A' + state as u8).to_string()
    } else {
        format!("S{state}")
    }
}

impl fmt::Display for Pdfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} states)", self.id, self.n_states())?;
        for e in self.edges() {
            writeln!(
                f,
                "  {} --{}|{:.6}--> {}",
                state_label(e.from),
                e.symbol,
                e.prob,
                state_label(e.to)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_symbol_edges_are_rejected() {
        let err = Pdfa::from_edges(
            "dup",
            1,
            &[
                Edge { from: 0, symbol: 0, to: 0, prob: 0.5 },
                Edge { from: 0, symbol: 0, to: 0, prob: 0.5 },
            ],
        );
        assert!(err.is_err());
    }

    #[test]
    fn out_of_range_target_is_rejected() {
        let err = Pdfa::from_edges("bad", 1, &[Edge { from: 0, symbol: 1, to: 3, prob: 1.0 }]);
        assert!(err.is_err());
    }

    #[test]
    fn transition_matrix_rows_sum_to_one() {
        let t = Pdfa::even_process(0.3).state_transition_matrix();
        assert!((t[0][0] - 0.7).abs() < 1e-15 && (t[0][1] - 0.3).abs() < 1e-15);
        assert_eq!(t[1], vec![1.0, 0.0]);
    }
}

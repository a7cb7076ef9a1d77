use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{stationary_distribution, Pdfa, Symbol};
use crate::error::Result;
use crate::seed;

/// A generated symbol stream together with the hidden state occupied when
/// each symbol was emitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceSample {
    pub symbols: Vec<Symbol>,
    pub states: Vec<usize>,
    pub seed: u64,
}

/// Draws `length` symbols starting from a state drawn from π.
/// The output depends only on `(pdfa, length, seed)`.
pub fn sample_sequence(pdfa: &Pdfa, length: usize, seed: u64) -> Result<SequenceSample> {
    let mut sample = SequenceSample {
        symbols: Vec::with_capacity(length),
        states: Vec::with_capacity(length),
        seed,
    };
    if length == 0 {
        return Ok(sample);
    }
    let pi = stationary_distribution(pdfa)?;
    let mut rng = seed::rng(seed);
    let mut state = draw_index(&pi, rng.gen::<f64>());
    for _ in 0..length {
        let u: f64 = rng.gen();
        let symbol: Symbol = if u < pdfa.emission(state, 0) { 0 } else { 1 };
        sample.symbols.push(symbol);
        sample.states.push(state);
        // The emission check above never picks a zero-probability symbol
        // except through the 1.0 fallback when p(0) rounds below u.
        state = pdfa
            .next_state(state, symbol)
            .or_else(|| pdfa.next_state(state, 1 - symbol))
            .expect("validated machines have an outgoing transition");
    }
    Ok(sample)
}

fn draw_index(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

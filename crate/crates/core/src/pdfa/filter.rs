use super::{stationary_distribution, Pdfa, Symbol};
use crate::error::{Error, Result};

/// Bayesian tracker of the hidden state given observed symbols.
///
/// Starts from π. Each observation reweights the belief by `p(x|σ)` and
/// pushes it through the unifilar transition. A point-mass belief stays a
/// point mass, so after a synchronizing word the state is known exactly.
#[derive(Clone, Debug)]
pub struct StateFilter<'a> {
    pdfa: &'a Pdfa,
    belief: Vec<f64>,
    step: usize,
}

impl<'a> StateFilter<'a> {
    pub fn new(pdfa: &'a Pdfa) -> Result<Self> {
        Ok(StateFilter {
            belief: stationary_distribution(pdfa)?,
            pdfa,
            step: 0,
        })
    }

    pub fn with_belief(pdfa: &'a Pdfa, belief: Vec<f64>) -> Self {
        StateFilter { pdfa, belief, step: 0 }
    }

    pub fn belief(&self) -> &[f64] {
        &self.belief
    }

    /// The single occupied state, once synchronized.
    pub fn synchronized_state(&self) -> Option<usize> {
        let mut support = self.belief.iter().enumerate().filter(|(_, &p)| p > 0.0);
        match (support.next(), support.next()) {
            (Some((s, _)), None) => Some(s),
            _ => None,
        }
    }

    /// Predictive probability that the next symbol is `symbol`.
    pub fn predictive(&self, symbol: Symbol) -> f64 {
        self.belief
            .iter()
            .enumerate()
            .map(|(s, &w)| w * self.pdfa.emission(s, symbol))
            .sum()
    }

    pub fn observe(&mut self, symbol: Symbol) -> Result<()> {
        let n = self.belief.len();
        let mut next = vec![0.0; n];
        let mut total = 0.0;
        for (s, &w) in self.belief.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            if let Some(t) = self.pdfa.transition(s, symbol) {
                let mass = w * t.prob;
                next[t.to] += mass;
                total += mass;
            }
        }
        if !(total > 0.0) {
            return Err(Error::ImpossibleObservation {
                step: self.step,
                symbol,
            });
        }
        next.iter_mut().for_each(|p| *p /= total);
        self.belief = next;
        self.step += 1;
        Ok(())
    }
}

/// Belief over states after each observed symbol; entry `t` conditions on
/// `symbols[..=t]`.
pub fn filter_states(pdfa: &Pdfa, symbols: &[Symbol]) -> Result<Vec<Vec<f64>>> {
    let mut filter = StateFilter::new(pdfa)?;
    symbols
        .iter()
        .map(|&x| {
            filter.observe(x)?;
            Ok(filter.belief().to_vec())
        })
        .collect()
}

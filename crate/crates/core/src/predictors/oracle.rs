use log::warn;

use super::{clamp_prob, Predictor};
use crate::pdfa::{stationary_distribution, Pdfa, StateFilter, Symbol};

/// The optimal predictor: track the causal state with the true machine and
/// predict its most likely symbol.
#[derive(Clone, Debug)]
pub struct OracleModel {
    pub pdfa: Pdfa,
    prior: Vec<f64>,
}

impl OracleModel {
    pub fn new(pdfa: Pdfa) -> crate::Result<Self> {
        let prior = stationary_distribution(&pdfa)?;
        Ok(OracleModel { pdfa, prior })
    }

    pub fn dump(&self) -> String {
        format!("family = oracle\nmachine = {}\n", crate::library::machine_to_json(&self.pdfa))
    }
}

impl Predictor for OracleModel {
    fn prob_one(&self, symbols: &[Symbol]) -> Vec<f64> {
        let mut filter = StateFilter::with_belief(&self.pdfa, self.prior.clone());
        symbols
            .iter()
            .map(|&x| {
                // Exact 0.5 must survive so ties still predict 0.
                let p = clamp_prob(filter.predictive(1));
                if filter.observe(x).is_err() {
                    warn!("{}: impossible symbol, restarting filter from π", self.pdfa.id());
                    filter = StateFilter::with_belief(&self.pdfa, self.prior.clone());
                }
                p
            })
            .collect()
    }
}

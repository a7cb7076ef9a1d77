use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::predictors::{Family, PredictorSpec, TrainingParams};
use crate::rate_accuracy::BetaGrid;

/// Sizes swept for one family and the training settings they share.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub sizes: Vec<usize>,
    pub training: TrainingParams,
}

impl FamilyConfig {
    fn new(sizes: impl IntoIterator<Item = usize>) -> Self {
        FamilyConfig {
            sizes: sizes.into_iter().collect(),
            training: TrainingParams::default(),
        }
    }
}

/// Everything that determines a benchmark run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub sequence_length: usize,
    pub train_fraction: f64,
    /// Replicate seeds; each gets its own sequence and initializations.
    pub seeds: Vec<u64>,
    /// Root of every derived seed.
    pub global_seed: u64,
    pub families: Vec<Family>,
    pub glm: FamilyConfig,
    pub reservoir: FamilyConfig,
    pub lstm: FamilyConfig,
    pub beta_grid: BetaGrid,
    /// Skip machines whose optimal predictor has zero rate.
    pub exclude_zero_rate: bool,
    /// Also evaluate the causal-state oracle on every machine.
    pub include_oracle: bool,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            sequence_length: 5000,
            train_fraction: 0.5,
            seeds: vec![0],
            global_seed: 0,
            families: Family::TRAINABLE.to_vec(),
            glm: FamilyConfig::new(1..=10),
            reservoir: FamilyConfig::new((1..=61).step_by(5)),
            lstm: FamilyConfig::new((1..=121).step_by(12)),
            beta_grid: BetaGrid::default(),
            exclude_zero_rate: true,
            include_oracle: false,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config(format!(
                "train_fraction must lie strictly between 0 and 1, got {}",
                self.train_fraction
            )));
        }
        if (self.sequence_length as f64) < 2.0 / (1.0 - self.train_fraction) {
            return Err(Error::Config(format!(
                "sequence length {} is too short for train fraction {}",
                self.sequence_length, self.train_fraction
            )));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        for family in &self.families {
            if let Some(fc) = self.family(*family) {
                if fc.sizes.is_empty() || fc.sizes.contains(&0) {
                    return Err(Error::Config(format!("{family} sizes must be nonempty and positive")));
                }
            }
        }
        Ok(())
    }

    pub fn train_len(&self) -> usize {
        ((self.sequence_length as f64) * self.train_fraction).floor() as usize
    }

    pub fn family(&self, family: Family) -> Option<&FamilyConfig> {
        match family {
            Family::Glm => Some(&self.glm),
            Family::Reservoir => Some(&self.reservoir),
            Family::Lstm => Some(&self.lstm),
            Family::Oracle => None,
        }
    }

    pub fn family_mut(&mut self, family: Family) -> Option<&mut FamilyConfig> {
        match family {
            Family::Glm => Some(&mut self.glm),
            Family::Reservoir => Some(&mut self.reservoir),
            Family::Lstm => Some(&mut self.lstm),
            Family::Oracle => None,
        }
    }

    /// The `PredictorSpec` for one grid point, with its training seed left at 0.
    pub fn spec(&self, family: Family, size: usize) -> PredictorSpec {
        let mut spec = PredictorSpec::new(family, size, 0);
        if let Some(fc) = self.family(family) {
            spec.training = fc.training.clone();
        }
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_protocol() {
        let c = ProtocolConfig::default();
        assert_eq!(c.sequence_length, 5000);
        assert_eq!(c.train_len(), 2500);
        assert_eq!(c.glm.sizes, (1..=10).collect::<Vec<_>>());
        assert_eq!(c.reservoir.sizes, vec![1, 6, 11, 16, 21, 26, 31, 36, 41, 46, 51, 56, 61]);
        assert_eq!(c.lstm.sizes, vec![1, 13, 25, 37, 49, 61, 73, 85, 97, 109, 121]);
        c.validate().unwrap();
    }

    #[test]
    fn bad_fractions_and_lengths_are_rejected() {
        let mut c = ProtocolConfig { train_fraction: 1.0, ..Default::default() };
        assert!(c.validate().is_err());
        c.train_fraction = 0.5;
        c.sequence_length = 3;
        assert!(c.validate().is_err());
        c.sequence_length = 4;
        assert!(c.validate().is_ok());
    }
}

use super::logistic::{train_logistic, LogisticReadout};
use super::{clamp_prob, format_values, Predictor};
use crate::error::{Error, Result};
use crate::pdfa::Symbol;

/// Sliding-window design: row `i` holds `x_{t-k} .. x_{t-1}` (oldest first)
/// for `t = k + i`, labeled with `x_t`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlmDataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<Symbol>,
}

pub fn glm_features(symbols: &[Symbol], order: usize) -> Result<GlmDataset> {
    if symbols.len() <= order {
        return Err(Error::InsufficientData(format!(
            "order-{order} windows need more than {order} symbols, got {}",
            symbols.len()
        )));
    }
    let features = symbols
        .windows(order + 1)
        .map(|w| w[..order].iter().map(|&x| x as f64).collect())
        .collect();
    let labels = symbols[order..].to_vec();
    Ok(GlmDataset { features, labels })
}

/// Order-k logistic model on the last k symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct GlmModel {
    pub order: usize,
    pub readout: LogisticReadout,
}

impl GlmModel {
    pub fn fit(train: &[Symbol], order: usize, l2_strength: f64, max_iter: usize) -> Result<Self> {
        let data = glm_features(train, order)?;
        let fit = train_logistic(&data.features, &data.labels, l2_strength, max_iter)?;
        Ok(GlmModel {
            order,
            readout: fit.readout,
        })
    }

    pub fn dump(&self) -> String {
        format!(
            "family = glm\norder = {}\nw = {}\nw0 = {:.16e}\n",
            self.order,
            format_values(&self.readout.weights),
            self.readout.bias
        )
    }
}

impl Predictor for GlmModel {
    /// Positions before the first full window see zeros in place of the
    /// missing history.
    fn prob_one(&self, symbols: &[Symbol]) -> Vec<f64> {
        let k = self.order;
        let mut window = vec![0.0; k];
        (0..symbols.len())
            .map(|t| {
                for (j, slot) in window.iter_mut().enumerate() {
                    // slot j holds x_{t-k+j}
                    *slot = (t + j).checked_sub(k).map_or(0.0, |i| symbols[i] as f64);
                }
                clamp_prob(self.readout.prob_one(&window))
            })
            .collect()
    }
}

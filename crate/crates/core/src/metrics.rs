//! Scores of a prediction vector against probabilistic examples.
//!
//! Both metrics are built on the signed loss `predicted - expected`:
//!
//! * `rmse` is the mean of squared losses. Despite the name no square root
//!   is taken; [`rmse_root`] gives the conventional quantity. Ranking is the
//!   same either way since the root is monotone.
//! * `pacc` (probabilistic accuracy) is `1 - mean |loss|`, which equals
//!   `(TP + TN) / |PE|` for the probabilistic confusion counts in
//!   [`confusion`].

use serde::Serialize;

use crate::program::ProbExample;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("value {0} is outside [0,1]")]
    OutOfDomain(f64),
    #[error("no examples to score")]
    Empty,
    #[error("{predictions} predictions for {examples} examples")]
    LengthMismatch { predictions: usize, examples: usize },
}

/// Per-example predicted probabilities, aligned with the example list.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredictionVector(pub Vec<f64>);

impl PredictionVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Confusion {
    pub tp: f64,
    pub tn: f64,
    pub fp: f64,
    pub fn_: f64,
}

impl Confusion {
    pub fn total(&self) -> f64 {
        self.tp + self.tn + self.fp + self.fn_
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Score {
    pub rmse: f64,
    pub pacc: f64,
    pub confusion: Confusion,
}

fn check_unit(x: f64) -> Result<f64, MetricError> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(MetricError::OutOfDomain(x))
    }
}

fn aligned<'a>(
    pred: &'a PredictionVector,
    examples: &'a [ProbExample],
) -> Result<impl Iterator<Item = (f64, f64)> + 'a, MetricError> {
    if pred.len() != examples.len() {
        return Err(MetricError::LengthMismatch { predictions: pred.len(), examples: examples.len() });
    }
    for (p, e) in pred.0.iter().zip(examples) {
        check_unit(*p)?;
        check_unit(e.expected)?;
    }
    Ok(pred.0.iter().copied().zip(examples.iter().map(|e| e.expected)))
}

/// Signed difference `predicted - expected`.
pub fn loss(predicted: f64, expected: f64) -> Result<f64, MetricError> {
    Ok(check_unit(predicted)? - check_unit(expected)?)
}

/// Mean squared loss.
pub fn rmse(pred: &PredictionVector, examples: &[ProbExample]) -> Result<f64, MetricError> {
    if examples.is_empty() {
        return Err(MetricError::Empty);
    }
    let sum: f64 = aligned(pred, examples)?.map(|(p, e)| (p - e) * (p - e)).sum();
    Ok(sum / examples.len() as f64)
}

/// Square root of [`rmse`].
pub fn rmse_root(pred: &PredictionVector, examples: &[ProbExample]) -> Result<f64, MetricError> {
    rmse(pred, examples).map(f64::sqrt)
}

/// One minus the mean absolute loss.
pub fn pacc(pred: &PredictionVector, examples: &[ProbExample]) -> Result<f64, MetricError> {
    if examples.is_empty() {
        return Err(MetricError::Empty);
    }
    let sum: f64 = aligned(pred, examples)?.map(|(p, e)| (p - e).abs()).sum();
    Ok((1.0 - sum / examples.len() as f64).clamp(0.0, 1.0))
}

/// Probabilistic confusion counts: `tp = Σ min(p,e)`, `tn = Σ min(1-p,1-e)`,
/// `fp = Σ max(p-e,0)`, `fn = Σ max(e-p,0)`.
pub fn confusion(pred: &PredictionVector, examples: &[ProbExample]) -> Result<Confusion, MetricError> {
    let mut c = Confusion { tp: 0.0, tn: 0.0, fp: 0.0, fn_: 0.0 };
    for (p, e) in aligned(pred, examples)? {
        c.tp += p.min(e);
        c.tn += (1.0 - p).min(1.0 - e);
        c.fp += (p - e).max(0.0);
        c.fn_ += (e - p).max(0.0);
    }
    Ok(c)
}

impl Score {
    pub fn compute(pred: &PredictionVector, examples: &[ProbExample]) -> Result<Score, MetricError> {
        Ok(Score { rmse: rmse(pred, examples)?, pacc: pacc(pred, examples)?, confusion: confusion(pred, examples)? })
    }
}

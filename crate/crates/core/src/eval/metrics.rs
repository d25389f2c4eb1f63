use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::io::{Prediction, Predictions, Truth};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub n: usize,
    /// Exact integer match.
    pub element: f64,
    /// `|pred| = |truth|`.
    pub magnitude: f64,
    /// Sign match, zero counting as `+`.
    pub sign: f64,
    /// Fraction of `+` among nonzero valid predictions.
    pub sign_balance: Option<f64>,
    /// Fraction of test ids with any prediction line.
    pub coverage: f64,
    pub invalid: usize,
    /// 95% interval on the element accuracy.
    pub interval: f64,
}

/// Two-sigma binomial interval `2 sqrt((1 - a) / n)`.
pub fn confidence_interval(accuracy: f64, n: usize) -> f64 {
    2.0 * ((1.0 - accuracy).max(0.0) / n as f64).sqrt()
}

fn non_negative(c: &Coefficient) -> bool {
    c.value().sign() != num_bigint::Sign::Minus
}

/// Scores the predictions of the examples in `test_ids`. Missing and
/// invalid predictions are wrong in every metric.
pub fn score_predictions(truth: &Truth, predictions: &Predictions, test_ids: &[String]) -> Result<Metrics> {
    if test_ids.is_empty() {
        return Err(Error::Empty("test set"));
    }
    if let Some(id) = predictions.keys().find(|id| !truth.contains_key(*id)) {
        return Err(Error::UnknownId(id.clone()));
    }
    let (mut element, mut magnitude, mut sign) = (0usize, 0usize, 0usize);
    let (mut covered, mut invalid, mut plus, mut nonzero) = (0usize, 0usize, 0usize, 0usize);
    for id in test_ids {
        let t = truth.get(id).ok_or_else(|| Error::UnknownId(id.clone()))?;
        let Some(p) = predictions.get(id) else { continue };
        covered += 1;
        let p = match p {
            Prediction::Value(p) => p,
            Prediction::Invalid(_) => {
                invalid += 1;
                continue;
            }
        };
        element += (p == t) as usize;
        magnitude += (p.magnitude() == t.magnitude()) as usize;
        sign += (non_negative(p) == non_negative(t)) as usize;
        if !p.is_zero() {
            nonzero += 1;
            plus += non_negative(p) as usize;
        }
    }
    let n = test_ids.len();
    let rate = |c: usize| c as f64 / n as f64;
    let element = rate(element);
    Ok(Metrics {
        n,
        element,
        magnitude: rate(magnitude),
        sign: rate(sign),
        sign_balance: (nonzero > 0).then(|| plus as f64 / nonzero as f64),
        coverage: rate(covered),
        invalid,
        interval: confidence_interval(element, n),
    })
}

impl Metrics {
    pub const HEADER: &'static str =
        "n\telement\tmagnitude\tsign\tsign_balance\tcoverage\tinvalid\tinterval";

    pub fn to_row(&self) -> String {
        let balance = self.sign_balance.map_or("nan".to_string(), |b| format!("{b:.6}"));
        format!(
            "{}\t{:.6}\t{:.6}\t{:.6}\t{}\t{:.6}\t{}\t{:.6}",
            self.n, self.element, self.magnitude, self.sign, balance, self.coverage, self.invalid, self.interval
        )
    }
}

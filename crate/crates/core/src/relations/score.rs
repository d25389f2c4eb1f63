use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::key::Key;
use crate::relations::instance::RelationInstance;
use crate::symbol::Symbol;
use crate::zeros::is_trivial_zero;

/// Instance counts behind the four relation metrics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RelationScore {
    pub instances: usize,
    /// Predicted coefficients satisfy the relation.
    pub satisfied: usize,
    /// Satisfied and every magnitude correct.
    pub magnitudes: usize,
    /// Satisfied and every sign correct.
    pub signs: usize,
    /// Satisfied and every coefficient correct.
    pub exact: usize,
}

impl RelationScore {
    fn rate(&self, count: usize) -> f64 {
        count as f64 / self.instances as f64
    }

    pub fn rate1(&self) -> f64 {
        self.rate(self.satisfied)
    }

    pub fn rate2(&self) -> f64 {
        self.rate(self.magnitudes)
    }

    pub fn rate3(&self) -> f64 {
        self.rate(self.signs)
    }

    pub fn rate4(&self) -> f64 {
        self.rate(self.exact)
    }

    pub fn rates(&self) -> [f64; 4] {
        [self.rate1(), self.rate2(), self.rate3(), self.rate4()]
    }

    fn merge(self, other: RelationScore) -> RelationScore {
        RelationScore {
            instances: self.instances + other.instances,
            satisfied: self.satisfied + other.satisfied,
            magnitudes: self.magnitudes + other.magnitudes,
            signs: self.signs + other.signs,
            exact: self.exact + other.exact,
        }
    }
}

/// Scores predicted coefficients on relation instances.
///
/// `predict` returns `None` for an invalid prediction, which fails every
/// metric; absent predictions should be reported as zero. With
/// `force_trivial_zeros`, members that are trivial zeros are predicted as 0.
pub fn score_instances<F>(
    instances: &[RelationInstance],
    truth: &Symbol,
    predict: F,
    force_trivial_zeros: bool,
) -> Result<RelationScore>
where
    F: Fn(&Key) -> Option<Coefficient> + Sync,
{
    if instances.is_empty() {
        return Err(Error::Empty("relation instances"));
    }
    Ok(instances
        .par_iter()
        .map(|inst| {
            let mut predicted = Vec::with_capacity(inst.members().len());
            for (k, _) in inst.members() {
                let p = if force_trivial_zeros && is_trivial_zero(k) {
                    Some(Coefficient::zero())
                } else {
                    predict(k)
                };
                match p {
                    Some(c) => predicted.push(c),
                    None => {
                        return RelationScore {
                            instances: 1,
                            ..Default::default()
                        }
                    }
                }
            }
            let residual: BigInt = inst
                .members()
                .iter()
                .zip(&predicted)
                .map(|((_, w), c)| c.value() * BigInt::from(*w))
                .sum();
            let satisfied = residual.is_zero();
            let truths: Vec<Coefficient> = inst.keys().map(|k| truth.get(&k)).collect();
            let pairs = || predicted.iter().zip(&truths);
            let magnitudes = pairs().all(|(p, t)| p.magnitude() == t.magnitude());
            let signs = pairs().all(|(p, t)| p.sign() == t.sign());
            let exact = pairs().all(|(p, t)| p == t);
            RelationScore {
                instances: 1,
                satisfied: satisfied as usize,
                magnitudes: (satisfied && magnitudes) as usize,
                signs: (satisfied && signs) as usize,
                exact: (satisfied && exact) as usize,
            }
        })
        .reduce(RelationScore::default, RelationScore::merge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_symbol;
    use crate::relations::catalog::relation;
    use crate::relations::generate::generate_instances;

    #[test]
    fn perfect_and_flipped_predictors() {
        let truth = builtin_symbol(2).unwrap();
        let rel = relation("final 16").unwrap();
        let inst = generate_instances(rel, 2, 100, &truth, 11).unwrap();
        let s = score_instances(&inst, &truth, |k| Some(truth.get(k)), false).unwrap();
        assert_eq!(s.rates(), [1.0; 4]);
        let s = score_instances(&inst, &truth, |k| Some(-truth.get(k)), false).unwrap();
        assert_eq!(s.rate1(), 1.0);
        assert_eq!(s.rate2(), 1.0);
        assert_eq!(s.rate4(), 0.0);
        let s = score_instances(&inst, &truth, |_| Some(Coefficient::zero()), false).unwrap();
        assert_eq!(s.rate1(), 1.0);
        assert_eq!(s.rate4(), 0.0);
    }

    #[test]
    fn invalid_predictions_fail_everything() {
        let truth = builtin_symbol(1).unwrap();
        let rel = relation("final 16").unwrap();
        let inst = generate_instances(rel, 1, 5, &truth, 0).unwrap();
        let s = score_instances(&inst, &truth, |_| None, false).unwrap();
        assert_eq!(s.rates(), [0.0; 4]);
        assert!(score_instances(&[], &truth, |_| None, false).is_err());
    }

    #[test]
    fn forcing_trivial_zeros() {
        let truth = builtin_symbol(1).unwrap();
        let rel = relation("final 0").unwrap();
        let inst = generate_instances(rel, 1, 5, &truth, 0).unwrap();
        let wrong = |_: &Key| Some(Coefficient::from(3));
        assert_eq!(score_instances(&inst, &truth, wrong, false).unwrap().rate1(), 0.0);
        assert_eq!(score_instances(&inst, &truth, wrong, true).unwrap().rate4(), 1.0);
    }
}

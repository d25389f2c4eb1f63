use std::sync::OnceLock;

use ffsym_core::io::{Predictions, Truth};
use ffsym_core::relations::{generate_instances, instantiate, score_instances};
use ffsym_core::testing::RelationKernel;
use ffsym_core::{builtin_symbol, catalog, relation, score_predictions, Coefficient, Key, Letter, Prediction, Symbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kernel_symbol() -> &'static Symbol {
    static S: OnceLock<Symbol> = OnceLock::new();
    S.get_or_init(|| RelationKernel::new(3).unwrap().random_symbol(77).unwrap())
}

#[test]
fn sign_flip_keeps_residuals_and_magnitudes() {
    let truth = kernel_symbol();
    let mut tested = 0;
    for rel in catalog().iter().filter(|r| !r.is_one_term()) {
        let Ok(instances) = generate_instances(rel, 3, 100, truth, 9) else { continue };
        let flipped = score_instances(&instances, truth, |k| Some(-truth.get(k)), false).unwrap();
        assert_eq!(flipped.rate1(), 1.0, "{}", rel.name());
        assert_eq!(flipped.rate2(), 1.0, "{}", rel.name());
        assert_eq!(flipped.rate4(), 0.0, "{}", rel.name());
        let zeros = score_instances(&instances, truth, |_| Some(Coefficient::zero()), false).unwrap();
        assert_eq!(zeros.rate1(), 1.0);
        assert_eq!(zeros.rate4(), 0.0);
        let perfect = score_instances(&instances, truth, |k| Some(truth.get(k)), false).unwrap();
        assert_eq!(perfect.rates(), [1.0; 4]);
        tested += 1;
    }
    assert!(tested >= 10);
}

#[test]
fn group_one_relation_flipped_together() {
    let truth = builtin_symbol(2).unwrap();
    let rel = relation("final 16").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut instances = Vec::new();
    while instances.len() < 100 {
        let ctx: Vec<Letter> = (0..4 - rel.pattern_len().unwrap())
            .map(|_| Letter::ALL[rng.gen_range(0..6)])
            .collect();
        let slot = *rel.slots(2).start();
        let inst = instantiate(rel, 2, slot, &ctx).unwrap();
        if inst.has_nonzero_member(&truth) {
            instances.push(inst);
        }
    }
    let s = score_instances(&instances, &truth, |k| Some(-truth.get(k)), false).unwrap();
    assert_eq!((s.rate1(), s.rate4()), (1.0, 0.0));
}

#[test]
fn invalid_members_fail_every_metric() {
    let truth = builtin_symbol(2).unwrap();
    let inst = generate_instances(relation("integ 2").unwrap(), 2, 30, &truth, 1).unwrap();
    let s = score_instances(&inst, &truth, |_| None, false).unwrap();
    assert_eq!(s.rates(), [0.0; 4]);
}

#[test]
fn forcing_trivial_zeros_only_helps() {
    let truth = kernel_symbol();
    let inst = generate_instances(relation("integ 0").unwrap(), 3, 200, truth, 4).unwrap();
    let noisy = |k: &Key| Some(Coefficient::new(truth.get(k).value() + 1));
    let plain = score_instances(&inst, truth, noisy, false).unwrap();
    let forced = score_instances(&inst, truth, noisy, true).unwrap();
    assert!(forced.exact >= plain.exact);
}

#[test]
fn element_metrics_on_global_sign_flip() {
    let truth_symbol = kernel_symbol();
    let truth: Truth = truth_symbol.iter().map(|(k, c)| (k.to_string(), c)).collect();
    let preds: Predictions = truth.iter().map(|(id, c)| (id.clone(), Prediction::Value(-c.clone()))).collect();
    let ids: Vec<String> = truth.keys().cloned().collect();
    let m = score_predictions(&truth, &preds, &ids).unwrap();
    assert_eq!(m.element, 0.0);
    assert_eq!(m.magnitude, 1.0);
    assert_eq!(m.sign, 0.0);
    assert!(m.interval > 0.0);
}

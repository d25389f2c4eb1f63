use std::collections::HashSet;

use rand::seq::index;

use crate::datasets::sampling::{sample_zeros, ZeroPolicy};
use crate::datasets::zero_nonzero::label_example;
use crate::datasets::{split_balanced, Dataset, Example, SplitSpec};
use crate::error::{Error, Result};
use crate::key::Key;
use crate::rng::stream_rng;
use crate::symbol::Symbol;

/// Per-loop, merged and size-matched control datasets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedLoopDatasets {
    pub lower: Dataset,
    pub upper: Dataset,
    pub merged: Dataset,
    /// Upper-loop only, with a training split as large as `merged`'s and the
    /// same test split as `upper`.
    pub control: Dataset,
}

/// Zero/nonzero data from two loops in equal proportion.
///
/// The lower loop contributes every nonzero element, the upper loop an
/// equally large uniform sample of its nonzero elements; both are balanced
/// with uniformly drawn zeros and split separately.
pub fn make_mixed_loop(
    lower: &Symbol,
    upper: &Symbol,
    test_per_loop: usize,
    seed: u64,
) -> Result<MixedLoopDatasets> {
    let n = lower.len();
    if upper.len() < n {
        return Err(Error::InsufficientPool {
            requested: n,
            available: upper.len(),
        });
    }
    let spec = SplitSpec::new(None, test_per_loop);
    let label = format!("{}+{}", lower.loop_order(), upper.loop_order());
    let dataset = |loop_label: String, variant: &str, train, test| Dataset {
        task: "mixed".into(),
        loop_label,
        seed,
        variant: variant.into(),
        train,
        test,
    };

    let mut rng = stream_rng(seed, 0x400);
    let zeros = sample_zeros(lower, n, ZeroPolicy::Uniform, &HashSet::new(), &mut rng)?;
    let (lower_train, lower_test) = split_balanced(
        lower.keys().map(|k| label_example(k, true)).collect(),
        zeros.into_iter().map(|k| label_example(k, false)).collect(),
        spec,
        &mut rng,
    )?;

    let mut rng = stream_rng(seed, 0x401);
    let mut picked: Vec<Key> = index::sample(&mut rng, upper.len(), n)
        .into_iter()
        .map(|i| upper.key_at(i))
        .collect();
    picked.sort();
    let zeros = sample_zeros(upper, n, ZeroPolicy::Uniform, &HashSet::new(), &mut rng)?;
    let (upper_train, upper_test) = split_balanced(
        picked.into_iter().map(|k| label_example(k, true)).collect(),
        zeros.into_iter().map(|k| label_example(k, false)).collect(),
        spec,
        &mut rng,
    )?;

    let merged_train = merge(&lower_train, &upper_train);
    let merged_test = merge(&lower_test, &upper_test);

    let mut rng = stream_rng(seed, 0x402);
    let held: HashSet<Key> = upper_test
        .iter()
        .map(|e| e.id.parse().expect("ids are keys"))
        .collect();
    let want = merged_train.len();
    let (want_nonzero, want_zero) = (want.div_ceil(2), want / 2);
    let candidates: Vec<Key> = upper.keys().filter(|k| !held.contains(k)).collect();
    if candidates.len() < want_nonzero {
        return Err(Error::InsufficientPool {
            requested: want_nonzero,
            available: candidates.len(),
        });
    }
    let mut control_nonzero: Vec<Key> = index::sample(&mut rng, candidates.len(), want_nonzero)
        .into_iter()
        .map(|i| candidates[i])
        .collect();
    control_nonzero.sort();
    let control_zero = sample_zeros(upper, want_zero, ZeroPolicy::Uniform, &held, &mut rng)?;
    let mut control_train: Vec<Example> = control_nonzero
        .into_iter()
        .map(|k| label_example(k, true))
        .chain(control_zero.into_iter().map(|k| label_example(k, false)))
        .collect();
    control_train.sort_by(|a, b| a.id.cmp(&b.id));

    Ok(MixedLoopDatasets {
        lower: dataset(lower.loop_order().to_string(), "lower", lower_train, lower_test),
        upper: dataset(
            upper.loop_order().to_string(),
            "upper",
            upper_train,
            upper_test.clone(),
        ),
        merged: dataset(label, "merged", merged_train, merged_test),
        control: dataset(upper.loop_order().to_string(), "control", control_train, upper_test),
    })
}

fn merge(a: &[Example], b: &[Example]) -> Vec<Example> {
    let mut v = [a, b].concat();
    v.sort_by(|x, y| x.id.cmp(&y.id));
    v
}

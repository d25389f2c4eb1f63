use std::collections::HashSet;

use crate::coefficient::Coefficient;
use crate::datasets::sampling::{sample_zeros, ZeroPolicy};
use crate::datasets::{split_balanced, Dataset, Example, SplitSpec};
use crate::error::Result;
use crate::key::Key;
use crate::rng::stream_rng;
use crate::symbol::Symbol;
use crate::tokens::{encode_coefficient, encode_key, SignPosition};

pub(crate) fn label_example(key: Key, nonzero: bool) -> Example {
    let value = Coefficient::from(nonzero as i64);
    Example {
        id: key.to_string(),
        loop_order: key.loop_order(),
        input: encode_key(&key),
        target: encode_coefficient(&value, SignPosition::First),
        value,
    }
}

/// Every nonzero element plus as many zeros, labelled `+ 1` / `+ 0`.
pub fn make_zero_nonzero(
    symbol: &Symbol,
    policy: ZeroPolicy,
    spec: SplitSpec,
    seed: u64,
) -> Result<Dataset> {
    let mut rng = stream_rng(seed, 0x200 | symbol.loop_order() as u64);
    let zeros = sample_zeros(symbol, symbol.len(), policy, &HashSet::new(), &mut rng)?;
    let nonzero: Vec<Example> = symbol.keys().map(|k| label_example(k, true)).collect();
    let zero: Vec<Example> = zeros.into_iter().map(|k| label_example(k, false)).collect();
    let (train, test) = split_balanced(nonzero, zero, spec, &mut rng)?;
    Ok(Dataset {
        task: "zero-nonzero".into(),
        loop_label: symbol.loop_order().to_string(),
        seed,
        variant: match policy {
            ZeroPolicy::Uniform => "uniform",
            ZeroPolicy::NontrivialBiased => "nontrivial-biased",
        }
        .into(),
        train,
        test,
    })
}

use rayon::prelude::*;

use crate::coefficient::{Coefficient, Sign};
use crate::datasets::{split, Dataset, Example, SplitSpec};
use crate::error::Result;
use crate::key::Key;
use crate::quad::to_quad;
use crate::rng::stream_rng;
use crate::symbol::Symbol;
use crate::tokens::{encode_coefficient, encode_key, encode_quad_key, SignPosition};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Representation {
    #[default]
    Full,
    Quad,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TargetKind {
    #[default]
    Coefficient,
    /// Every sign set to `+`.
    MagnitudeOnly,
    /// `±1`.
    SignOnly,
}

impl TargetKind {
    fn apply(self, c: &Coefficient) -> Coefficient {
        match self {
            TargetKind::Coefficient => c.clone(),
            TargetKind::MagnitudeOnly => c.abs(),
            TargetKind::SignOnly => Coefficient::from(match c.sign() {
                Sign::Plus => 1,
                Sign::Minus => -1,
            }),
        }
    }

    fn name(self) -> &'static str {
        match self {
            TargetKind::Coefficient => "coefficient",
            TargetKind::MagnitudeOnly => "magnitude",
            TargetKind::SignOnly => "sign",
        }
    }
}

/// Nonzero elements as key → coefficient pairs, in full or quad form.
pub fn make_coeff_from_key(
    symbol: &Symbol,
    representation: Representation,
    target: TargetKind,
    sign_position: SignPosition,
    spec: SplitSpec,
    seed: u64,
) -> Result<Dataset> {
    let quad;
    let source = match representation {
        Representation::Full => symbol,
        Representation::Quad => {
            quad = to_quad(symbol)?;
            quad.as_symbol()
        }
    };
    let examples: Vec<Example> = (0..source.len())
        .into_par_iter()
        .map(|i| {
            let key: Key = source.key_at(i);
            let value = target.apply(&source.coefficient_at(i));
            let input = match representation {
                Representation::Full => encode_key(&key),
                Representation::Quad => encode_quad_key(&key)?,
            };
            Ok(Example {
                id: key.to_string(),
                loop_order: key.loop_order(),
                input,
                target: encode_coefficient(&value, sign_position),
                value,
            })
        })
        .collect::<Result<_>>()?;
    let mut rng = stream_rng(seed, 0x300 | symbol.loop_order() as u64);
    let (train, test) = split(examples, spec, &mut rng)?;
    let repr = match representation {
        Representation::Full => "full",
        Representation::Quad => "quad",
    };
    let mut variant = format!("{repr}-{}", target.name());
    if sign_position == SignPosition::Last {
        variant.push_str("-sign-last");
    }
    Ok(Dataset {
        task: "coeff".into(),
        loop_label: symbol.loop_order().to_string(),
        seed,
        variant,
        train,
        test,
    })
}

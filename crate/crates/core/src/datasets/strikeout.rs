use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use num_traits::Signed;
use sha2::{Digest, Sha256};

use crate::coefficient::Coefficient;
use crate::datasets::{split, Dataset, Example, SplitSpec};
use crate::error::{Error, Result};
use crate::key::Key;
use crate::letter::Letter;
use crate::rng::stream_rng;
use crate::symbol::Symbol;
use crate::tokens::{encode_coefficient, format_tokens, SignPosition, Token};

/// Which position pairs are struck.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrikeDistance {
    Full,
    /// Pairs `(i, j)` with `j − i ≤ k`.
    Max(usize),
}

impl fmt::Display for StrikeDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrikeDistance::Full => f.write_str("full"),
            StrikeDistance::Max(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for StrikeDistance {
    type Err = Error;

    fn from_str(s: &str) -> Result<StrikeDistance> {
        if s == "full" {
            return Ok(StrikeDistance::Full);
        }
        s.parse()
            .map(StrikeDistance::Max)
            .map_err(|_| Error::InvalidArgument(format!("strike distance {s:?}")))
    }
}

fn strike_pairs(len: usize, k: StrikeDistance) -> Result<Vec<(usize, usize)>> {
    if len < 4 {
        return Err(Error::InvalidArgument(format!(
            "strike parents need keys of length at least 4, got {len}"
        )));
    }
    let max = match k {
        StrikeDistance::Full => len - 1,
        StrikeDistance::Max(k) if (1..len).contains(&k) => k,
        StrikeDistance::Max(k) => {
            return Err(Error::StrikeDistance {
                k,
                loop_order: len / 2,
            })
        }
    };
    Ok((0..len)
        .flat_map(|i| (i + 1..len).map(move |j| (i, j)))
        .filter(|(i, j)| j - i <= max)
        .collect())
}

/// `2kL − k(k+1)/2`; the full set is `L(2L − 1)`.
pub fn parent_count(loop_order: usize, k: StrikeDistance) -> usize {
    let k = match k {
        StrikeDistance::Full => 2 * loop_order - 1,
        StrikeDistance::Max(k) => k,
    };
    2 * k * loop_order - k * (k + 1) / 2
}

/// Keys one loop lower obtained by deleting two letters, in strikeout
/// order: deleted positions `(i, j)` ascending lexicographically.
pub fn strike_parents(key: &Key, k: StrikeDistance) -> Result<Vec<Key>> {
    let letters = key.to_letters();
    strike_pairs(letters.len(), k)?
        .into_iter()
        .map(|(i, j)| {
            let parent: Vec<Letter> = letters
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != i && *p != j)
                .map(|(_, l)| *l)
                .collect();
            Key::from_letters(&parent)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ValueTransform {
    #[default]
    Plain,
    /// `−1`, `+0` or `+1`.
    SignsOnly,
    MagnitudesOnly,
    /// `1` for nonzero, `0` for zero.
    ZeroNonzero,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ParentOrder {
    #[default]
    Strikeout,
    /// Independently shuffled per example.
    Shuffled,
    Sorted,
    /// Sorted with repeated values removed.
    SortedUnique,
}

/// A value transform combined with a parent ordering.
///
/// Parsed from a preset name (`plain`, `shuffled`, `sorted`,
/// `sorted-unique`, `signs-only`, `magnitudes-only`, `zero-nonzero`) or a
/// `+`-joined combination such as `signs-only+shuffled`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StrikeVariant {
    pub values: ValueTransform,
    pub order: ParentOrder,
}

impl FromStr for StrikeVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<StrikeVariant> {
        let mut v = StrikeVariant::default();
        for part in s.split('+') {
            match part {
                "plain" => {}
                "shuffled" => v.order = ParentOrder::Shuffled,
                "sorted" => v.order = ParentOrder::Sorted,
                "sorted-unique" => v.order = ParentOrder::SortedUnique,
                "signs-only" => v.values = ValueTransform::SignsOnly,
                "magnitudes-only" => v.values = ValueTransform::MagnitudesOnly,
                "zero-nonzero" => v.values = ValueTransform::ZeroNonzero,
                _ => return Err(Error::UnknownVariant(s.to_string())),
            }
        }
        Ok(v)
    }
}

impl fmt::Display for StrikeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let values = match self.values {
            ValueTransform::Plain => None,
            ValueTransform::SignsOnly => Some("signs-only"),
            ValueTransform::MagnitudesOnly => Some("magnitudes-only"),
            ValueTransform::ZeroNonzero => Some("zero-nonzero"),
        };
        let order = match self.order {
            ParentOrder::Strikeout => None,
            ParentOrder::Shuffled => Some("shuffled"),
            ParentOrder::Sorted => Some("sorted"),
            ParentOrder::SortedUnique => Some("sorted-unique"),
        };
        match (values, order) {
            (None, None) => f.write_str("plain"),
            (Some(v), None) => f.write_str(v),
            (None, Some(o)) => f.write_str(o),
            (Some(v), Some(o)) => write!(f, "{v}+{o}"),
        }
    }
}

impl StrikeVariant {
    fn transform(&self, parents: Vec<Coefficient>, child: &Key, seed: u64) -> Vec<Token> {
        let mut values: Vec<Coefficient> = parents
            .into_iter()
            .map(|c| match self.values {
                ValueTransform::Plain => c,
                ValueTransform::MagnitudesOnly => c.abs(),
                ValueTransform::SignsOnly | ValueTransform::ZeroNonzero => {
                    Coefficient::from(c.value().signum())
                }
            })
            .collect();
        match self.order {
            ParentOrder::Strikeout => {}
            ParentOrder::Shuffled => {
                let mut rng = stream_rng(seed ^ SHUFFLE_SALT, child.packed() ^ ((child.len() as u64) << 56));
                values.shuffle(&mut rng);
            }
            ParentOrder::Sorted => values.sort_by(|a, b| a.value().cmp(b.value())),
            ParentOrder::SortedUnique => {
                values.sort_by(|a, b| a.value().cmp(b.value()));
                values.dedup();
            }
        }
        values
            .iter()
            .flat_map(|c| match self.values {
                ValueTransform::ZeroNonzero => vec![Token::Num(!c.is_zero() as u16)],
                _ => encode_coefficient(c, SignPosition::First),
            })
            .collect()
    }
}

const SHUFFLE_SALT: u64 = 0x7374_7269_6b65;

fn fingerprint(input: &[Token], target: &[Token]) -> [u8; 16] {
    let mut h = Sha256::new();
    h.update(format_tokens(input).as_bytes());
    h.update(b"\t");
    h.update(format_tokens(target).as_bytes());
    let d = h.finalize();
    let mut out = [0u8; 16];
    out.copy_from_slice(&d[..16]);
    out
}

/// Removes examples whose (input, target) pair repeats, keeping the one
/// with the smallest id. Output sorted by id.
pub fn dedup_examples(examples: Vec<Example>) -> Vec<Example> {
    let mut v = examples;
    v.sort_by(|a, b| (&a.input, &a.target, &a.id).cmp(&(&b.input, &b.target, &b.id)));
    v.dedup_by(|b, a| a.input == b.input && a.target == b.target);
    v.sort_by(|a, b| a.id.cmp(&b.id));
    v
}

/// Children are the nonzero elements of `child`; inputs are their
/// strike-two parent coefficients in `parent` after the variant transform.
/// Duplicate (input, target) pairs are removed before splitting.
pub fn make_strikeout(
    child: &Symbol,
    parent: &Symbol,
    k: StrikeDistance,
    variant: StrikeVariant,
    spec: SplitSpec,
    seed: u64,
) -> Result<Dataset> {
    if parent.loop_order() + 1 != child.loop_order() {
        return Err(Error::InvalidArgument(format!(
            "parent loop {} must be one below child loop {}",
            parent.loop_order(),
            child.loop_order()
        )));
    }
    strike_pairs(2 * child.loop_order(), k)?;
    let build = |i: usize| -> Result<(Key, Vec<Token>, Vec<Token>)> {
        let key = child.key_at(i);
        let parents: Vec<Coefficient> = strike_parents(&key, k)?
            .iter()
            .map(|p| parent.get(p))
            .collect();
        let input = variant.transform(parents, &key, seed);
        let target = encode_coefficient(&child.coefficient_at(i), SignPosition::First);
        Ok((key, input, target))
    };
    let mut prints: Vec<([u8; 16], Key, usize)> = (0..child.len())
        .into_par_iter()
        .map(|i| {
            let (key, input, target) = build(i)?;
            Ok((fingerprint(&input, &target), key, i))
        })
        .collect::<Result<_>>()?;
    prints.par_sort_unstable();
    prints.dedup_by(|b, a| a.0 == b.0);
    let examples: Vec<Example> = prints
        .par_iter()
        .map(|&(_, _, i)| {
            let (key, input, target) = build(i)?;
            Ok(Example {
                id: key.to_string(),
                loop_order: key.loop_order(),
                input,
                target,
                value: child.coefficient_at(i),
            })
        })
        .collect::<Result<_>>()?;
    let mut rng = stream_rng(seed, 0x500 | child.loop_order() as u64);
    let (train, test) = split(examples, spec, &mut rng)?;
    let variant_label = match k {
        StrikeDistance::Full => variant.to_string(),
        StrikeDistance::Max(k) => format!("{variant} k={k}"),
    };
    Ok(Dataset {
        task: "strikeout".into(),
        loop_label: child.loop_order().to_string(),
        seed,
        variant: variant_label,
        train,
        test,
    })
}

use std::io::{BufRead, Write};

use num_bigint::BigInt;

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::key::{Key, MAX_LOOP};
use crate::letter::Letter;
use crate::relations::catalog::{relation, Anchor, Relation};
use crate::symbol::Symbol;

/// Instance spaces larger than this are refused by exhaustive enumeration.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

/// A relation spliced into a concrete context at loop `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInstance {
    relation: &'static Relation,
    loop_order: usize,
    slot: usize,
    context: Vec<Letter>,
    members: Vec<(Key, i64)>,
}

/// Builds the instance of `rel` whose window starts at 1-based `slot`.
///
/// For image relations the context is the whole key and the slot is 1.
pub fn instantiate(
    rel: &'static Relation,
    loop_order: usize,
    slot: usize,
    context: &[Letter],
) -> Result<RelationInstance> {
    if !(1..=MAX_LOOP).contains(&loop_order) {
        return Err(Error::LoopOutOfRange(loop_order));
    }
    if !rel.slots(loop_order).contains(&slot) {
        return Err(Error::SlotOutOfRange {
            relation: rel.name().to_string(),
            slot,
            loop_order,
        });
    }
    let expected = match rel.anchor() {
        Anchor::Image(_) => 2 * loop_order,
        _ => 2 * loop_order - rel.window_len(loop_order),
    };
    if context.len() != expected {
        return Err(Error::ContextLength {
            expected,
            got: context.len(),
        });
    }
    let members = match rel.anchor() {
        Anchor::Image(g) => {
            let k = Key::from_letters(context)?;
            vec![(k, 1), (g.apply(&k), -1)]
        }
        _ => rel
            .terms()
            .iter()
            .map(|t| {
                let mut letters = Vec::with_capacity(2 * loop_order);
                letters.extend_from_slice(&context[..slot - 1]);
                letters.extend_from_slice(&t.pattern);
                letters.extend_from_slice(&context[slot - 1..]);
                Ok((Key::from_letters(&letters)?, t.weight))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(RelationInstance {
        relation: rel,
        loop_order,
        slot,
        context: context.to_vec(),
        members,
    })
}

impl RelationInstance {
    pub fn relation(&self) -> &'static Relation {
        self.relation
    }

    pub fn loop_order(&self) -> usize {
        self.loop_order
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    pub fn context(&self) -> &[Letter] {
        &self.context
    }

    /// `(key, weight)` pairs in catalog term order.
    pub fn members(&self) -> &[(Key, i64)] {
        &self.members
    }

    pub fn keys(&self) -> impl Iterator<Item = Key> + '_ {
        self.members.iter().map(|m| m.0)
    }

    /// `Σ weight_i · coeff(key_i)`, exact.
    pub fn residual_with<F>(&self, mut coeff: F) -> BigInt
    where
        F: FnMut(&Key) -> Coefficient,
    {
        self.members
            .iter()
            .map(|(k, w)| coeff(k).into_value() * BigInt::from(*w))
            .sum()
    }

    pub fn residual(&self, symbol: &Symbol) -> BigInt {
        self.residual_with(|k| symbol.get(k))
    }

    pub fn has_nonzero_member(&self, symbol: &Symbol) -> bool {
        self.keys().any(|k| symbol.contains(&k))
    }

    /// One line of the instance file, without the newline.
    pub fn to_line(&self) -> String {
        let keys: Vec<String> = self.keys().map(|k| k.to_string()).collect();
        format!("{}\t{}\t{}", self.relation.name(), self.slot, keys.join(","))
    }

    /// Parses and re-derives an instance from one line of an instance file.
    pub fn from_line(line: &str, line_no: usize) -> Result<RelationInstance> {
        let bad = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let mut fields = line.split('\t');
        let (Some(name), Some(slot), Some(keys), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(bad("expected three tab-separated fields".into()));
        };
        let rel = relation(name)?;
        let slot: usize = slot
            .parse()
            .map_err(|_| bad(format!("slot {slot:?} is not an integer")))?;
        let keys: Vec<Key> = keys
            .split(',')
            .map(|k| k.parse())
            .collect::<Result<_>>()?;
        let first = keys.first().ok_or_else(|| bad("no member keys".into()))?;
        let loop_order = first.loop_order();
        let mut context = first.to_letters();
        if !matches!(rel.anchor(), Anchor::Image(_)) {
            let w = rel.window_len(loop_order);
            if slot == 0 || slot - 1 + w > context.len() {
                return Err(Error::SlotOutOfRange {
                    relation: rel.name().to_string(),
                    slot,
                    loop_order,
                });
            }
            context.drain(slot - 1..slot - 1 + w);
        }
        let inst = instantiate(rel, loop_order, slot, &context)?;
        if !inst.keys().eq(keys.iter().copied()) {
            return Err(bad(format!("member keys do not form an instance of {name}")));
        }
        Ok(inst)
    }
}

pub fn write_instances<W: Write>(mut w: W, instances: &[RelationInstance]) -> Result<()> {
    for inst in instances {
        writeln!(w, "{}", inst.to_line())?;
    }
    Ok(())
}

/// Reads an instance file; blank lines and `#` comments are skipped.
pub fn read_instances<R: BufRead>(r: R) -> Result<Vec<RelationInstance>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(RelationInstance::from_line(line, i + 1)?);
    }
    Ok(out)
}

pub(crate) fn context_len(rel: &Relation, loop_order: usize) -> usize {
    match rel.anchor() {
        Anchor::Image(_) => 2 * loop_order,
        _ => (2 * loop_order).saturating_sub(rel.window_len(loop_order)),
    }
}

/// Letters of the `index`-th context in lexicographic order.
pub(crate) fn context_at(mut index: u64, len: usize) -> Vec<Letter> {
    let mut letters = vec![Letter::A; len];
    for slot in letters.iter_mut().rev() {
        *slot = Letter::ALL[(index % 6) as usize];
        index /= 6;
    }
    letters
}

/// Number of distinct `(slot, context)` pairs of `rel` at loop `L`.
pub fn instance_space_size(rel: &Relation, loop_order: usize) -> u128 {
    let slots = rel.slots(loop_order).count() as u128;
    slots * 6u128.pow(context_len(rel, loop_order) as u32)
}

/// Every instance of `rel` at loop `L`, slot-major, contexts in lexicographic
/// order.
pub fn enumerate_instances(
    rel: &'static Relation,
    loop_order: usize,
    limit: u128,
) -> Result<impl Iterator<Item = RelationInstance>> {
    if !(1..=MAX_LOOP).contains(&loop_order) {
        return Err(Error::LoopOutOfRange(loop_order));
    }
    let size = instance_space_size(rel, loop_order);
    if size > limit {
        return Err(Error::InstanceSpaceTooLarge { size, limit });
    }
    let len = context_len(rel, loop_order);
    let per_slot = 6u64.pow(len as u32);
    Ok(rel.slots(loop_order).flat_map(move |slot| {
        (0..per_slot).map(move |i| {
            instantiate(rel, loop_order, slot, &context_at(i, len))
                .expect("enumerated slots and contexts are valid")
        })
    }))
}

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::coefficient::Coefficient;
use crate::dihedral::Dihedral;
use crate::error::{Error, Result};
use crate::key::{Key, MAX_LOOP};
use crate::zeros::is_trivial_zero;

/// Marks a coefficient that lives in the overflow table.
const OVERFLOW: i64 = i64::MIN;

/// Immutable sparse map from keys of length `2L` to nonzero coefficients.
///
/// Keys are stored packed and sorted; coefficients that fit in an `i64` are
/// stored inline, larger ones in a side table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    loop_order: usize,
    keys: Vec<u64>,
    small: Vec<i64>,
    big: HashMap<u32, BigInt>,
}

/// What normalization did while building a symbol.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub zeros_dropped: usize,
    pub duplicates_merged: usize,
}

impl Symbol {
    pub fn empty(loop_order: usize) -> Symbol {
        Symbol {
            loop_order,
            keys: Vec::new(),
            small: Vec::new(),
            big: HashMap::new(),
        }
    }

    pub fn builder(loop_order: usize) -> Result<SymbolBuilder> {
        SymbolBuilder::new(loop_order)
    }

    /// Convenience for tests and built-ins: strict, no duplicates or zeros
    /// expected but tolerated the same way as the builder.
    pub fn from_entries<I>(loop_order: usize, entries: I) -> Result<Symbol>
    where
        I: IntoIterator<Item = (Key, Coefficient)>,
    {
        let mut b = SymbolBuilder::new(loop_order)?;
        for (k, c) in entries {
            b.insert(k, c)?;
        }
        Ok(b.build()?.0)
    }

    pub fn loop_order(&self) -> usize {
        self.loop_order
    }

    pub fn key_len(&self) -> usize {
        2 * self.loop_order
    }

    /// Number of stored (nonzero) elements.
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    fn position(&self, key: &Key) -> Option<usize> {
        self.keys.binary_search(&key.packed()).ok()
    }

    fn value_at(&self, i: usize) -> Coefficient {
        match self.small[i] {
            OVERFLOW => Coefficient::new(self.big[&(i as u32)].clone()),
            v => Coefficient::from(v),
        }
    }

    /// Coefficient of `key`, zero when absent.
    pub fn lookup(&self, key: &Key) -> Result<Coefficient> {
        if key.len() != self.key_len() {
            return Err(Error::KeyLength {
                key_len: key.len(),
                loop_order: self.loop_order,
            });
        }
        Ok(self.get(key))
    }

    /// Like [`Symbol::lookup`] but treats a length mismatch as an absent key.
    pub fn get(&self, key: &Key) -> Coefficient {
        if key.len() != self.key_len() {
            return Coefficient::zero();
        }
        self.position(key)
            .map(|i| self.value_at(i))
            .unwrap_or_else(Coefficient::zero)
    }

    pub fn contains(&self, key: &Key) -> bool {
        key.len() == self.key_len() && self.position(key).is_some()
    }

    pub fn key_at(&self, i: usize) -> Key {
        Key::from_packed(self.keys[i], self.key_len()).expect("stored keys are valid")
    }

    pub fn coefficient_at(&self, i: usize) -> Coefficient {
        self.value_at(i)
    }

    /// Elements in ascending key order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = (Key, Coefficient)> + '_ {
        (0..self.len()).map(move |i| (self.key_at(i), self.value_at(i)))
    }

    pub fn keys(&self) -> impl ExactSizeIterator<Item = Key> + '_ {
        (0..self.len()).map(move |i| self.key_at(i))
    }

    /// First stored key whose coefficient differs from one of its dihedral
    /// images, if any.
    pub fn dihedral_violation(&self) -> Option<Key> {
        (0..self.len())
            .into_par_iter()
            .find_first(|&i| {
                let k = self.key_at(i);
                let c = self.value_at(i);
                Dihedral::elements()
                    .iter()
                    .any(|g| self.get(&g.apply(&k)) != c)
            })
            .map(|i| self.key_at(i))
    }

    /// First stored key that the trivial-zero rules say must vanish.
    pub fn trivial_zero_violation(&self) -> Option<Key> {
        (0..self.len())
            .into_par_iter()
            .find_first(|&i| is_trivial_zero(&self.key_at(i)))
            .map(|i| self.key_at(i))
    }
}

/// Collects elements, then sorts, checks duplicates and drops zeros.
#[derive(Debug)]
pub struct SymbolBuilder {
    loop_order: usize,
    entries: Vec<(u64, Coefficient)>,
}

impl SymbolBuilder {
    pub fn new(loop_order: usize) -> Result<SymbolBuilder> {
        if !(1..=MAX_LOOP).contains(&loop_order) {
            return Err(Error::LoopOutOfRange(loop_order));
        }
        Ok(SymbolBuilder {
            loop_order,
            entries: Vec::new(),
        })
    }

    pub fn loop_order(&self) -> usize {
        self.loop_order
    }

    pub fn insert(&mut self, key: Key, coefficient: Coefficient) -> Result<()> {
        if key.len() != 2 * self.loop_order {
            return Err(Error::KeyLength {
                key_len: key.len(),
                loop_order: self.loop_order,
            });
        }
        self.entries.push((key.packed(), coefficient));
        Ok(())
    }

    pub fn build(mut self) -> Result<(Symbol, BuildReport)> {
        let len = 2 * self.loop_order;
        self.entries.par_sort_by_key(|e| e.0);
        let mut report = BuildReport::default();
        let mut symbol = Symbol::empty(self.loop_order);
        let mut prev: Option<(u64, Coefficient)> = None;
        for (packed, c) in self.entries {
            if let Some((pk, pc)) = &prev {
                if *pk == packed {
                    if *pc != c {
                        return Err(Error::ConflictingDuplicate {
                            key: Key::from_packed(packed, len)?.to_string(),
                            first: pc.to_string(),
                            second: c.to_string(),
                        });
                    }
                    report.duplicates_merged += 1;
                    continue;
                }
            }
            if c.is_zero() {
                report.zeros_dropped += 1;
            } else {
                let i = symbol.keys.len();
                symbol.keys.push(packed);
                match c.value().to_i64() {
                    Some(v) if v != OVERFLOW => symbol.small.push(v),
                    _ => {
                        symbol.small.push(OVERFLOW);
                        symbol.big.insert(i as u32, c.value().clone());
                    }
                }
            }
            prev = Some((packed, c));
        }
        Ok((symbol, report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::key::parse_key;

    fn k(s: &str) -> Key {
        parse_key(s).unwrap()
    }

    #[test]
    fn absent_keys_are_zero_and_lengths_checked() {
        let s = Symbol::from_entries(1, [(k("bd"), Coefficient::from(-2))]).unwrap();
        assert_eq!(s.lookup(&k("bd")).unwrap(), Coefficient::from(-2));
        assert_eq!(s.lookup(&k("aa")).unwrap(), Coefficient::zero());
        assert!(matches!(
            s.lookup(&k("bddd")),
            Err(Error::KeyLength { .. })
        ));
    }

    #[test]
    fn builder_normalizes() {
        let mut b = Symbol::builder(1).unwrap();
        b.insert(k("cd"), Coefficient::from(-2)).unwrap();
        b.insert(k("bd"), Coefficient::from(-2)).unwrap();
        b.insert(k("bd"), Coefficient::from(-2)).unwrap();
        b.insert(k("ae"), Coefficient::zero()).unwrap();
        let (s, report) = b.build().unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(report.duplicates_merged, 1);
        assert_eq!(report.zeros_dropped, 1);
        let keys: Vec<String> = s.keys().map(|k| k.to_string()).collect();
        assert_eq!(keys, ["bd", "cd"]);
    }

    #[test]
    fn conflicting_duplicates_rejected() {
        let mut b = Symbol::builder(1).unwrap();
        b.insert(k("bd"), Coefficient::from(-2)).unwrap();
        b.insert(k("bd"), Coefficient::from(2)).unwrap();
        assert!(matches!(b.build(), Err(Error::ConflictingDuplicate { .. })));
    }

    #[test]
    fn large_coefficients_survive() {
        let huge: Coefficient = "-98765432109876543210987654321".parse().unwrap();
        let edge = Coefficient::from(i64::MIN);
        let s = Symbol::from_entries(
            1,
            [
                (k("bd"), huge.clone()),
                (k("ce"), edge.clone()),
                (k("af"), Coefficient::from(5)),
            ],
        )
        .unwrap();
        assert_eq!(s.get(&k("bd")), huge);
        assert_eq!(s.get(&k("ce")), edge);
        assert_eq!(s.get(&k("af")), Coefficient::from(5));
    }
}

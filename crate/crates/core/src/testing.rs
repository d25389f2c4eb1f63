//! Synthetic symbols for tests and benchmarks.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::coefficient::Coefficient;
use crate::dihedral::{canonical, Dihedral};
use crate::error::Result;
use crate::key::Key;
use crate::relations::{catalog, enumerate_instances, Anchor, EXHAUSTIVE_LIMIT};
use crate::rng::stream_rng;
use crate::symbol::{Symbol, SymbolBuilder};
use crate::zeros::{is_trivial_zero, valid_keys, ValidKeySampler};

type Row = BTreeMap<usize, BigRational>;

/// Integer basis of the symbols at loop `L` that are dihedral invariant,
/// free of trivial zeros and satisfy every catalog relation.
///
/// Each vector assigns a coefficient to every orbit representative in
/// `orbits`. Intended for `L ≤ 3`.
pub struct RelationKernel {
    pub loop_order: usize,
    pub orbits: Vec<Key>,
    pub basis: Vec<Vec<BigInt>>,
}

impl RelationKernel {
    pub fn new(loop_order: usize) -> Result<RelationKernel> {
        let mut orbits: Vec<Key> = valid_keys(loop_order)?
            .iter()
            .map(canonical)
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        orbits.sort();
        let index: HashMap<Key, usize> = orbits.iter().enumerate().map(|(i, k)| (*k, i)).collect();

        let mut rows: HashSet<Vec<(usize, i64)>> = HashSet::new();
        for rel in catalog() {
            if matches!(rel.anchor(), Anchor::Image(_)) {
                continue;
            }
            for inst in enumerate_instances(rel, loop_order, EXHAUSTIVE_LIMIT)? {
                for g in Dihedral::elements() {
                    let mut row: BTreeMap<usize, i64> = BTreeMap::new();
                    for (k, w) in inst.members() {
                        let k = g.apply(k);
                        if is_trivial_zero(&k) {
                            continue;
                        }
                        *row.entry(index[&canonical(&k)]).or_default() += w;
                    }
                    let row: Vec<(usize, i64)> = row.into_iter().filter(|e| e.1 != 0).collect();
                    if !row.is_empty() {
                        rows.insert(row);
                    }
                }
            }
        }
        let mut rows: Vec<_> = rows.into_iter().collect();
        rows.sort();

        let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
        for row in rows {
            let mut v: Row = row
                .into_iter()
                .map(|(c, w)| (c, BigRational::from_integer(BigInt::from(w))))
                .collect();
            for (c, p) in &pivots {
                if let Some(f) = v.get(c).cloned() {
                    for (k, x) in p {
                        let e = v.entry(*k).or_insert_with(BigRational::zero);
                        *e -= &f * x;
                    }
                    v.retain(|_, x| !x.is_zero());
                }
            }
            let Some((&c, lead)) = v.iter().next() else {
                continue;
            };
            let inv = lead.recip();
            for x in v.values_mut() {
                *x *= &inv;
            }
            for p in pivots.values_mut() {
                if let Some(f) = p.get(&c).cloned() {
                    for (k, x) in &v {
                        let e = p.entry(*k).or_insert_with(BigRational::zero);
                        *e -= &f * x;
                    }
                    p.retain(|_, x| !x.is_zero());
                }
            }
            pivots.insert(c, v);
        }

        let free: Vec<usize> = (0..orbits.len()).filter(|c| !pivots.contains_key(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut x = vec![BigRational::zero(); orbits.len()];
                x[f] = BigRational::one();
                for (c, p) in &pivots {
                    if let Some(w) = p.get(&f) {
                        x[*c] = -w.clone();
                    }
                }
                primitive(&x)
            })
            .collect();
        Ok(RelationKernel {
            loop_order,
            orbits,
            basis,
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Builds the symbol whose orbit coefficients are `vector`.
    pub fn symbol(&self, vector: &[BigInt]) -> Result<Symbol> {
        let value: HashMap<Key, &BigInt> = self.orbits.iter().copied().zip(vector).collect();
        let mut b = SymbolBuilder::new(self.loop_order)?;
        for k in valid_keys(self.loop_order)? {
            let v = value[&canonical(&k)];
            if !v.is_zero() {
                b.insert(k, Coefficient::new(v.clone()))?;
            }
        }
        Ok(b.build()?.0)
    }

    /// A seeded random integer combination of the basis.
    pub fn random_symbol(&self, seed: u64) -> Result<Symbol> {
        let mut rng = stream_rng(seed, 0);
        let mut v = vec![BigInt::zero(); self.orbits.len()];
        for b in &self.basis {
            let f = BigInt::from(rng.gen_range(-5i64..=5));
            for (x, y) in v.iter_mut().zip(b) {
                *x += &f * y;
            }
        }
        self.symbol(&v)
    }
}

fn primitive(x: &[BigRational]) -> Vec<BigInt> {
    let lcm = x
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = x.iter().map(|r| (r * &lcm).to_integer()).collect();
    let gcd = ints
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
        .abs();
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &gcd).collect()
}

/// A symbol with exactly `nonzero` distinct non-trivially-zero keys and
/// random coefficients. It satisfies no relations and only stands in where
/// sizes matter.
pub fn size_standin(loop_order: usize, nonzero: usize, seed: u64) -> Result<Symbol> {
    let sampler = ValidKeySampler::new(loop_order)?;
    let mut rng = stream_rng(seed, loop_order as u64);
    let mut keys: HashSet<Key> = HashSet::with_capacity(nonzero);
    let mut out = Vec::with_capacity(nonzero);
    while out.len() < nonzero {
        let k = sampler.sample(&mut rng);
        if keys.insert(k) {
            let mag = rng.gen_range(1i64..=1000);
            let v = if rng.gen_bool(0.5) { mag } else { -mag };
            out.push((k, Coefficient::from(v)));
        }
    }
    Symbol::from_entries(loop_order, out)
}

use std::collections::HashSet;

use num_traits::ToPrimitive;
use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::key::{all_keys, Key};
use crate::letter::Letter;
use crate::symbol::Symbol;
use crate::zeros::{count_valid_keys, is_trivial_zero, valid_keys, ValidKeySampler};

/// Share of trivial zeros under [`ZeroPolicy::NontrivialBiased`].
pub const TRIVIAL_ZERO_PERCENT: usize = 5;

/// Key spaces up to this size are enumerated instead of rejection-sampled.
const ENUMERATE_LIMIT: u64 = 4_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ZeroPolicy {
    /// Uniform over all zero-coefficient keys.
    #[default]
    Uniform,
    /// At most [`TRIVIAL_ZERO_PERCENT`] percent trivial zeros, the rest
    /// nontrivial.
    NontrivialBiased,
}

/// Draws `count` distinct zero-coefficient keys of `symbol`, avoiding
/// `exclude`. Output is sorted.
pub fn sample_zeros<R: Rng>(
    symbol: &Symbol,
    count: usize,
    policy: ZeroPolicy,
    exclude: &HashSet<Key>,
    rng: &mut R,
) -> Result<Vec<Key>> {
    let l = symbol.loop_order();
    let mut out = match policy {
        ZeroPolicy::Uniform => draw(symbol, count, exclude, rng, Pool::All)?,
        ZeroPolicy::NontrivialBiased => {
            let trivial = count * TRIVIAL_ZERO_PERCENT / 100;
            let mut keys = draw(symbol, trivial, exclude, rng, Pool::Trivial)?;
            keys.extend(draw(symbol, count - trivial, exclude, rng, Pool::Nontrivial)?);
            keys
        }
    };
    debug_assert!(out.iter().all(|k| k.loop_order() == l));
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pool {
    All,
    Trivial,
    Nontrivial,
}

impl Pool {
    fn admits(self, key: &Key) -> bool {
        match self {
            Pool::All => true,
            Pool::Trivial => is_trivial_zero(key),
            Pool::Nontrivial => !is_trivial_zero(key),
        }
    }
}

fn draw<R: Rng>(
    symbol: &Symbol,
    count: usize,
    exclude: &HashSet<Key>,
    rng: &mut R,
    pool: Pool,
) -> Result<Vec<Key>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let l = symbol.loop_order();
    let total = 6u64.pow(2 * l as u32);
    let valid = count_valid_keys(l)?.to_u64().expect("fits in u64 for L <= 8");
    let space = match pool {
        Pool::Nontrivial => valid,
        _ => total,
    };
    let usable = |k: &Key| pool.admits(k) && !symbol.contains(k) && !exclude.contains(k);
    if space <= ENUMERATE_LIMIT {
        let candidates: Vec<Key> = match pool {
            Pool::Nontrivial => valid_keys(l)?,
            _ => all_keys(2 * l).collect(),
        };
        let candidates: Vec<Key> = candidates.into_iter().filter(|k| usable(k)).collect();
        if count > candidates.len() {
            return Err(Error::InsufficientPool {
                requested: count,
                available: candidates.len(),
            });
        }
        return Ok(index::sample(rng, candidates.len(), count)
            .into_iter()
            .map(|i| candidates[i])
            .collect());
    }
    let excluded_here = exclude.iter().filter(|k| pool.admits(k) && !symbol.contains(k)).count();
    let nonzero_here = symbol.keys().filter(|k| pool.admits(k)).count();
    let pool_size = match pool {
        Pool::All => total,
        Pool::Trivial => total - valid,
        Pool::Nontrivial => valid,
    } as usize;
    let available = pool_size.saturating_sub(nonzero_here + excluded_here);
    if count > available {
        return Err(Error::InsufficientPool {
            requested: count,
            available,
        });
    }
    let sampler = match pool {
        Pool::Nontrivial => Some(ValidKeySampler::new(l)?),
        _ => None,
    };
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = match &sampler {
            Some(s) => s.sample(rng),
            None => {
                let letters: Vec<Letter> = (0..2 * l).map(|_| Letter::ALL[rng.gen_range(0..6)]).collect();
                Key::from_letters(&letters)?
            }
        };
        if usable(&k) && seen.insert(k) {
            out.push(k);
        }
    }
    Ok(out)
}

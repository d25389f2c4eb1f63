//! Trivial-zero rules and exact counting of the keys that survive them.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use crate::dihedral::Dihedral;
use crate::error::{Error, Result};
use crate::key::{Key, MAX_LOOP};
use crate::letter::Letter;

const SEED_PAIRS: [(Letter, Letter); 3] = [
    (Letter::A, Letter::D),
    (Letter::D, Letter::A),
    (Letter::D, Letter::E),
];

struct PairTable {
    pairs: Vec<(Letter, Letter)>,
    forbidden: [[bool; 6]; 6],
}

fn pair_table() -> &'static PairTable {
    static TABLE: OnceLock<PairTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut pairs: Vec<(Letter, Letter)> = SEED_PAIRS.to_vec();
        let mut i = 0;
        while i < pairs.len() {
            let (x, y) = pairs[i];
            for gen in [Dihedral::CYCLE, Dihedral::FLIP] {
                let image = (gen.apply_letter(x), gen.apply_letter(y));
                if !pairs.contains(&image) {
                    pairs.push(image);
                }
            }
            i += 1;
        }
        pairs.sort();
        let mut forbidden = [[false; 6]; 6];
        for &(x, y) in &pairs {
            forbidden[x.code() as usize][y.code() as usize] = true;
        }
        PairTable { pairs, forbidden }
    })
}

/// Ordered letter pairs that may never be adjacent: the dihedral closure of
/// `ad`, `da`, `de`.
pub fn forbidden_pairs() -> &'static [(Letter, Letter)] {
    &pair_table().pairs
}

#[inline]
pub fn is_forbidden_pair(x: Letter, y: Letter) -> bool {
    pair_table().forbidden[x.code() as usize][y.code() as usize]
}

#[inline]
pub fn can_start(l: Letter) -> bool {
    l.is_first_half()
}

#[inline]
pub fn can_end(l: Letter) -> bool {
    !l.is_first_half()
}

/// True when the adjacency or prefix/suffix rule forces the coefficient to zero.
pub fn is_trivial_zero(key: &Key) -> bool {
    is_trivial_zero_letters(&key.to_letters())
}

pub fn is_trivial_zero_letters(letters: &[Letter]) -> bool {
    match (letters.first(), letters.last()) {
        (Some(&first), Some(&last)) if can_start(first) && can_end(last) => letters
            .windows(2)
            .any(|w| is_forbidden_pair(w[0], w[1])),
        _ => true,
    }
}

fn check_loop(loop_order: usize) -> Result<()> {
    if (1..=MAX_LOOP).contains(&loop_order) {
        Ok(())
    } else {
        Err(Error::LoopOutOfRange(loop_order))
    }
}

/// Number of length-`2L` keys that are not trivial zeros, by transfer-matrix
/// path counting: start states `{a,b,c}`, end states `{d,e,f}`, one step per
/// allowed adjacent pair.
pub fn count_valid_keys(loop_order: usize) -> Result<BigUint> {
    check_loop(loop_order)?;
    let mut paths: [BigUint; 6] = Letter::ALL.map(|l| {
        if can_start(l) {
            BigUint::one()
        } else {
            BigUint::zero()
        }
    });
    for _ in 1..2 * loop_order {
        let mut next: [BigUint; 6] = Default::default();
        for x in Letter::ALL {
            for y in Letter::ALL {
                if !is_forbidden_pair(x, y) {
                    next[y.code() as usize] += &paths[x.code() as usize];
                }
            }
        }
        paths = next;
    }
    Ok(Letter::ALL
        .iter()
        .filter(|l| can_end(**l))
        .map(|l| &paths[l.code() as usize])
        .sum())
}

/// Draws keys uniformly from the non-trivially-zero keys of a fixed length.
#[derive(Debug, Clone)]
pub struct ValidKeySampler {
    len: usize,
    /// `completions[i][l]`: valid ways to finish a key with letter `l` at
    /// position `i`.
    completions: Vec<[u128; 6]>,
}

impl ValidKeySampler {
    pub fn new(loop_order: usize) -> Result<ValidKeySampler> {
        check_loop(loop_order)?;
        let len = 2 * loop_order;
        let mut completions = vec![[0u128; 6]; len];
        for l in Letter::ALL {
            completions[len - 1][l.code() as usize] = can_end(l) as u128;
        }
        for i in (0..len - 1).rev() {
            for x in Letter::ALL {
                completions[i][x.code() as usize] = Letter::ALL
                    .iter()
                    .filter(|&&y| !is_forbidden_pair(x, y))
                    .map(|y| completions[i + 1][y.code() as usize])
                    .sum();
            }
        }
        Ok(ValidKeySampler { len, completions })
    }

    pub fn total(&self) -> u128 {
        Letter::ALL
            .iter()
            .filter(|l| can_start(**l))
            .map(|l| self.completions[0][l.code() as usize])
            .sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Key {
        let mut letters = Vec::with_capacity(self.len);
        let mut weights: [u128; 6] = [0; 6];
        for i in 0..self.len {
            for l in Letter::ALL {
                let allowed = match letters.last() {
                    None => can_start(l),
                    Some(&prev) => !is_forbidden_pair(prev, l),
                };
                weights[l.code() as usize] = if allowed {
                    self.completions[i][l.code() as usize]
                } else {
                    0
                };
            }
            let total: u128 = weights.iter().sum();
            let mut pick = rng.gen_range(0..total);
            let chosen = Letter::ALL
                .iter()
                .copied()
                .find(|l| {
                    let w = weights[l.code() as usize];
                    if pick < w {
                        true
                    } else {
                        pick -= w;
                        false
                    }
                })
                .expect("weights sum to total");
            letters.push(chosen);
        }
        Key::pack(&letters)
    }
}

/// Every non-trivially-zero key of loop order `L`, ascending.
pub fn valid_keys(loop_order: usize) -> Result<Vec<Key>> {
    check_loop(loop_order)?;
    let len = 2 * loop_order;
    let mut out = Vec::new();
    let mut letters = Vec::with_capacity(len);
    fn walk(len: usize, letters: &mut Vec<Letter>, out: &mut Vec<Key>) {
        if letters.len() == len {
            if can_end(*letters.last().expect("nonempty")) {
                out.push(Key::pack(letters));
            }
            return;
        }
        for l in Letter::ALL {
            let ok = match letters.last() {
                None => can_start(l),
                Some(&prev) => !is_forbidden_pair(prev, l),
            };
            if ok {
                letters.push(l);
                walk(len, letters, out);
                letters.pop();
            }
        }
    }
    walk(len, &mut letters, &mut out);
    Ok(out)
}

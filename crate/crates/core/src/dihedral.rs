//! The order-6 dihedral group acting on the alphabet.
//!
//! Both generators preserve the two halves `{a,b,c}` and `{d,e,f}` and act on
//! the position inside a half, so every element is a permutation of
//! `{0,1,2}` applied simultaneously to both halves.

use std::sync::OnceLock;

use crate::key::Key;
use crate::letter::Letter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dihedral {
    perm: [u8; 3],
}

impl Dihedral {
    pub const IDENTITY: Dihedral = Dihedral { perm: [0, 1, 2] };
    /// `{a,b,c,d,e,f} -> {b,c,a,e,f,d}`
    pub const CYCLE: Dihedral = Dihedral { perm: [1, 2, 0] };
    /// `{a,b,c,d,e,f} -> {b,a,c,e,d,f}`
    pub const FLIP: Dihedral = Dihedral { perm: [1, 0, 2] };

    /// All six elements, identity first, in breadth-first order from the
    /// generators.
    pub fn elements() -> &'static [Dihedral] {
        static ELEMENTS: OnceLock<Vec<Dihedral>> = OnceLock::new();
        ELEMENTS.get_or_init(|| {
            let mut out = vec![Dihedral::IDENTITY];
            let mut i = 0;
            while i < out.len() {
                let g = out[i];
                for gen in [Dihedral::CYCLE, Dihedral::FLIP] {
                    let h = gen.compose(&g);
                    if !out.contains(&h) {
                        out.push(h);
                    }
                }
                i += 1;
            }
            out
        })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Dihedral) -> Dihedral {
        let mut perm = [0u8; 3];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = self.perm[other.perm[i] as usize];
        }
        Dihedral { perm }
    }

    pub fn inverse(&self) -> Dihedral {
        let mut perm = [0u8; 3];
        for i in 0..3 {
            perm[self.perm[i] as usize] = i as u8;
        }
        Dihedral { perm }
    }

    #[inline]
    pub fn apply_letter(&self, l: Letter) -> Letter {
        Letter::from_parts(l.is_first_half(), self.perm[l.index() as usize])
    }

    pub fn table(&self) -> [Letter; 6] {
        Letter::ALL.map(|l| self.apply_letter(l))
    }

    pub fn apply(&self, key: &Key) -> Key {
        key.map(&self.table())
    }

    pub fn apply_letters(&self, letters: &[Letter]) -> Vec<Letter> {
        letters.iter().map(|&l| self.apply_letter(l)).collect()
    }
}

pub fn cycle(key: &Key) -> Key {
    Dihedral::CYCLE.apply(key)
}

pub fn flip(key: &Key) -> Key {
    Dihedral::FLIP.apply(key)
}

/// Images of `key` under the whole group, sorted and deduplicated.
pub fn dihedral_orbit(key: &Key) -> Vec<Key> {
    let mut orbit: Vec<Key> = Dihedral::elements().iter().map(|g| g.apply(key)).collect();
    orbit.sort_unstable();
    orbit.dedup();
    orbit
}

/// Lexicographically smallest member of the orbit.
pub fn canonical(key: &Key) -> Key {
    Dihedral::elements()
        .iter()
        .map(|g| g.apply(key))
        .min()
        .expect("group is nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::key::{all_keys, format_key, parse_key};

    fn k(s: &str) -> Key {
        parse_key(s).unwrap()
    }

    #[test]
    fn generators_match_substitution_tables() {
        assert_eq!(cycle(&k("bd")), k("ce"));
        assert_eq!(flip(&k("bd")), k("ae"));
        assert_eq!(cycle(&k("abcdef")), k("bcaefd"));
        assert_eq!(flip(&k("abcdef")), k("bacedf"));
    }

    #[test]
    fn group_has_six_elements_and_is_closed() {
        let els = Dihedral::elements();
        assert_eq!(els.len(), 6);
        for a in els {
            assert!(els.contains(&a.inverse()));
            assert_eq!(a.compose(&a.inverse()), Dihedral::IDENTITY);
            for b in els {
                assert!(els.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn generator_orders() {
        for key in all_keys(4) {
            assert_eq!(cycle(&cycle(&cycle(&key))), key);
            assert_eq!(flip(&flip(&key)), key);
        }
    }

    #[test]
    fn orbit_of_bd_matches_closure() {
        // closure by repeated application of the two generators
        let mut closure = vec![k("bd")];
        let mut i = 0;
        while i < closure.len() {
            for next in [cycle(&closure[i]), flip(&closure[i])] {
                if !closure.contains(&next) {
                    closure.push(next);
                }
            }
            i += 1;
        }
        closure.sort();
        let names: Vec<String> = closure.iter().map(format_key).collect();
        assert_eq!(names, ["ae", "af", "bd", "bf", "cd", "ce"]);
        assert_eq!(dihedral_orbit(&k("bd")), closure);
        assert_eq!(canonical(&k("ce")), k("ae"));
    }

    #[test]
    fn stabilized_orbits_are_smaller() {
        // dddd-type suffixes are fixed by the transposition of b and c
        assert_eq!(dihedral_orbit(&k("aadd")).len(), 3);
        assert!(dihedral_orbit(&k("abcdef")).len() <= 6);
        assert_eq!(dihedral_orbit(&k("abcdef")).len(), 6);
    }
}

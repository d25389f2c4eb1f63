use crate::coefficient::Coefficient;
use crate::dihedral::dihedral_orbit;
use crate::error::{Error, Result};
use crate::key::parse_key;
use crate::symbol::Symbol;

/// Orbit generators and coefficients of the one- and two-loop symbols.
const ONE_LOOP: &[(&str, i64)] = &[("bd", -2)];
const TWO_LOOP: &[(&str, i64)] = &[("bddd", 8), ("bbbd", 16)];

/// The explicitly known symbols at `L = 1` and `L = 2`.
pub fn builtin_symbol(loop_order: usize) -> Result<Symbol> {
    let generators = match loop_order {
        1 => ONE_LOOP,
        2 => TWO_LOOP,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "no built-in symbol at loop {loop_order}; only 1 and 2 are available"
            )))
        }
    };
    let mut entries = Vec::new();
    for &(text, value) in generators {
        let key = parse_key(text)?;
        for k in dihedral_orbit(&key) {
            entries.push((k, Coefficient::from(value)));
        }
    }
    Symbol::from_entries(loop_order, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dihedral::Dihedral;
    use crate::key::all_keys;
    use crate::zeros::is_trivial_zero;

    fn at(s: &Symbol, k: &str) -> Coefficient {
        s.lookup(&parse_key(k).unwrap()).unwrap()
    }

    #[test]
    fn one_loop_matches_written_form() {
        let s = builtin_symbol(1).unwrap();
        assert_eq!(s.len(), 6);
        for k in ["bd", "ce", "af", "bf", "cd", "ae"] {
            assert_eq!(at(&s, k), Coefficient::from(-2), "{k}");
        }
        assert_eq!(at(&s, "ab"), Coefficient::zero());
    }

    #[test]
    fn two_loop_matches_written_form() {
        let s = builtin_symbol(2).unwrap();
        assert_eq!(s.len(), 12);
        for k in ["bddd", "ceee", "afff", "bfff", "cddd", "aeee"] {
            assert_eq!(at(&s, k), Coefficient::from(8), "{k}");
        }
        for k in ["bbbd", "ccce", "aaaf", "bbbf", "cccd", "aaae"] {
            assert_eq!(at(&s, k), Coefficient::from(16), "{k}");
        }
    }

    #[test]
    fn invariant_and_free_of_trivial_zeros() {
        for l in 1..=2 {
            let s = builtin_symbol(l).unwrap();
            assert_eq!(s.dihedral_violation(), None);
            for k in all_keys(2 * l) {
                if is_trivial_zero(&k) {
                    assert!(s.get(&k).is_zero());
                }
                for g in Dihedral::elements() {
                    assert_eq!(s.get(&g.apply(&k)), s.get(&k));
                }
            }
        }
    }

    #[test]
    fn other_loops_rejected() {
        assert!(builtin_symbol(3).is_err());
        assert!(builtin_symbol(0).is_err());
    }
}

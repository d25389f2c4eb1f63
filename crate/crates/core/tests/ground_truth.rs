use ffsym_core::relations::{enumerate_instances, generate_instances, EXHAUSTIVE_LIMIT};
use ffsym_core::{builtin_symbol, catalog, count_valid_keys, dihedral_orbit, Coefficient, Key};
use num_bigint::BigUint;

const FORBIDDEN: [&str; 12] = ["ad", "be", "cf", "da", "eb", "fc", "de", "ef", "fd", "ed", "df", "fe"];

fn oracle_trivial_zero(word: &str) -> bool {
    let b = word.as_bytes();
    !b"abc".contains(&b[0])
        || !b"def".contains(&b[b.len() - 1])
        || b.windows(2).any(|w| FORBIDDEN.contains(&std::str::from_utf8(w).unwrap()))
}

fn all_words(len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| "abcdef".chars().map(move |c| format!("{w}{c}")))
            .collect();
    }
    out
}

#[test]
fn counts_match_brute_force() {
    for l in 1..=3 {
        let brute = all_words(2 * l).iter().filter(|w| !oracle_trivial_zero(w)).count();
        assert_eq!(count_valid_keys(l).unwrap(), BigUint::from(brute), "L={l}");
    }
}

#[test]
fn counts_match_published_table() {
    for (l, n) in [(1, 6u64), (2, 102), (3, 1830), (4, 32838), (5, 589254)] {
        assert_eq!(count_valid_keys(l).unwrap(), BigUint::from(n));
    }
}

#[test]
fn builtins_are_the_published_symbols() {
    let one = builtin_symbol(1).unwrap();
    let words: Vec<String> = one.keys().map(|k| k.to_string()).collect();
    assert_eq!(words, ["ae", "af", "bd", "bf", "cd", "ce"]);
    assert!(one.iter().all(|(_, c)| c == Coefficient::from(-2)));

    let two = builtin_symbol(2).unwrap();
    assert_eq!(two.len(), 12);
    let orbit = |w: &str| dihedral_orbit(&w.parse::<Key>().unwrap());
    for k in orbit("bddd") {
        assert_eq!(two.get(&k), Coefficient::from(8));
    }
    for k in orbit("bbbd") {
        assert_eq!(two.get(&k), Coefficient::from(16));
    }
    assert!(two.dihedral_violation().is_none());
    assert!(two.trivial_zero_violation().is_none());
}

#[test]
fn builtins_satisfy_every_relation_exhaustively() {
    for l in [1, 2] {
        let truth = builtin_symbol(l).unwrap();
        for rel in catalog() {
            let mut checked = 0usize;
            for inst in enumerate_instances(rel, l, EXHAUSTIVE_LIMIT).unwrap() {
                assert_eq!(inst.residual(&truth), 0.into(), "{} at L={l}: {}", rel.name(), inst.to_line());
                checked += 1;
            }
            if !rel.slots(l).is_empty() {
                assert!(checked > 0);
            }
        }
    }
}

#[test]
fn generated_instances_hold_on_builtins() {
    let truth = builtin_symbol(2).unwrap();
    let mut generated = 0;
    for rel in catalog() {
        match generate_instances(rel, 2, 500, &truth, 11) {
            Ok(instances) => {
                assert_eq!(instances.len(), 500);
                for inst in &instances {
                    assert_eq!(inst.residual(&truth), 0.into());
                    if !rel.is_one_term() {
                        assert!(inst.has_nonzero_member(&truth));
                    }
                }
                generated += 1;
            }
            Err(e) => assert!(
                !rel.is_one_term(),
                "one-term relation {} failed: {e}",
                rel.name()
            ),
        }
    }
    assert!(generated > 16);
}

use std::fmt;
use std::sync::OnceLock;

use crate::dihedral::Dihedral;
use crate::error::{Error, Result};
use crate::key::parse_letters;
use crate::letter::Letter;

/// Where the pattern window of a relation may sit inside a key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// Any run of adjacent positions.
    Sliding,
    /// Only the last positions of the key.
    Suffix,
    /// The whole key, paired with its image under a group element.
    Image(Dihedral),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub pattern: Vec<Letter>,
    pub weight: i64,
}

/// A named homogeneous linear constraint on symbol coefficients.
///
/// Weights are integers: relations with half-integer weights are stored
/// multiplied by `scale`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    name: String,
    anchor: Anchor,
    terms: Vec<Term>,
    scale: u32,
}

impl Relation {
    fn pattern(name: &str, anchor: Anchor, scale: u32, terms: &[(&str, i64)]) -> Relation {
        let terms: Vec<Term> = terms
            .iter()
            .map(|&(p, w)| Term {
                pattern: parse_letters(p).expect("catalog patterns are valid"),
                weight: w,
            })
            .collect();
        debug_assert!(terms.iter().all(|t| t.pattern.len() == terms[0].pattern.len()));
        Relation {
            name: name.to_string(),
            anchor,
            terms,
            scale,
        }
    }

    fn image(name: &str, g: Dihedral) -> Relation {
        Relation {
            name: name.to_string(),
            anchor: Anchor::Image(g),
            terms: Vec::new(),
            scale: 1,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn anchor(&self) -> Anchor {
        self.anchor
    }

    /// Pattern terms; empty for image relations.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Number of keys in every instance.
    pub fn term_count(&self) -> usize {
        match self.anchor {
            Anchor::Image(_) => 2,
            _ => self.terms.len(),
        }
    }

    /// Weight of each member, in member order.
    pub fn weights(&self) -> Vec<i64> {
        match self.anchor {
            Anchor::Image(_) => vec![1, -1],
            _ => self.terms.iter().map(|t| t.weight).collect(),
        }
    }

    /// Window length, or `None` when the relation spans the whole key.
    pub fn pattern_len(&self) -> Option<usize> {
        match self.anchor {
            Anchor::Image(_) => None,
            _ => Some(self.terms[0].pattern.len()),
        }
    }

    /// Window length at loop `L`.
    pub fn window_len(&self, loop_order: usize) -> usize {
        self.pattern_len().unwrap_or(2 * loop_order)
    }

    /// Valid 1-based slots at loop `L`, empty when the pattern does not fit.
    pub fn slots(&self, loop_order: usize) -> std::ops::RangeInclusive<usize> {
        let n = 2 * loop_order;
        let w = self.window_len(loop_order);
        if w > n {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        match self.anchor {
            Anchor::Sliding => 1..=n - w + 1,
            Anchor::Suffix => n - w + 1..=n - w + 1,
            Anchor::Image(_) => 1..=1,
        }
    }

    pub fn is_one_term(&self) -> bool {
        self.term_count() == 1
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn build() -> Vec<Relation> {
    use Anchor::{Sliding, Suffix};
    let mut out = vec![
        Relation::pattern("triple 0", Sliding, 1, &[("aab", 1), ("abb", 1), ("acb", 1)]),
        Relation::pattern("integ 0", Sliding, 1, &[("ab", 1), ("ac", 1), ("ba", -1), ("ca", -1)]),
        Relation::pattern("integ 1", Sliding, 1, &[("ca", 1), ("cb", 1), ("ac", -1), ("bc", -1)]),
        Relation::pattern(
            "integ 2",
            Sliding,
            1,
            &[
                ("db", 1),
                ("dc", -1),
                ("bd", -1),
                ("cd", 1),
                ("ec", 1),
                ("ea", -1),
                ("ce", -1),
                ("ae", 1),
                ("fa", 1),
                ("fb", -1),
                ("af", -1),
                ("bf", 1),
                ("cb", 2),
                ("bc", -2),
            ],
        ),
    ];
    let vanishing = [
        "ad", "ed", "add", "abd", "ace", "ebd", "edd", "addd", "abbd", "adbd", "cbbd", "ebbd",
        "ebdd", "edbd", "eddd", "fdbd",
    ];
    for (i, p) in vanishing.iter().enumerate() {
        out.push(Relation::pattern(&format!("final {i}"), Suffix, 1, &[(p, 1)]));
    }
    let multi: [(u32, &[(&str, i64)]); 10] = [
        (1, &[("bf", 1), ("bd", -1)]),
        (1, &[("cdd", 1), ("cee", 1)]),
        (1, &[("ddbd", 1), ("dbdd", -1)]),
        (1, &[("cbdd", 1), ("cdbd", -1)]),
        (1, &[("fbd", 1), ("dbd", -1), ("bdd", 1)]),
        (
            1,
            &[
                ("bddd", 1),
                ("faff", 1),
                ("dbdd", -1),
                ("eaff", -1),
                ("fbdd", 1),
                ("aeee", -1),
            ],
        ),
        (
            2,
            &[
                ("abdd", 2),
                ("cddd", -1),
                ("dcee", -1),
                ("aeee", 1),
                ("eaff", 1),
                ("faff", -1),
                ("ecee", 1),
            ],
        ),
        (
            2,
            &[
                ("cbdd", 2),
                ("bfff", -1),
                ("dcee", 1),
                ("ecee", -1),
                ("cddd", 1),
                ("dbdd", 1),
                ("fbdd", -1),
            ],
        ),
        (
            2,
            &[
                ("cdbd", 2),
                ("bfff", -1),
                ("dcee", 1),
                ("ecee", -1),
                ("cddd", 1),
                ("dbdd", 1),
                ("fbdd", -1),
            ],
        ),
        (
            2,
            &[
                ("fbbd", 2),
                ("dbbd", -2),
                ("bbdd", 2),
                ("faff", -1),
                ("dbdd", 1),
                ("fbdd", -1),
                ("eaff", 1),
                ("aeee", 1),
                ("bfff", -1),
            ],
        ),
    ];
    for (i, (scale, terms)) in multi.iter().enumerate() {
        out.push(Relation::pattern(&format!("final {}", 16 + i), Suffix, *scale, terms));
    }
    out.push(Relation::image("cycle", Dihedral::CYCLE));
    out.push(Relation::image("flip", Dihedral::FLIP));
    out
}

/// The 32 relations checked against every symbol, in a fixed order.
pub fn catalog() -> &'static [Relation] {
    static CATALOG: OnceLock<Vec<Relation>> = OnceLock::new();
    CATALOG.get_or_init(build)
}

/// Looks a relation up by name; `final16` and `final 16` are both accepted.
pub fn relation(name: &str) -> Result<&'static Relation> {
    let normalized: String = name.split_whitespace().collect::<Vec<_>>().join(" ");
    catalog()
        .iter()
        .find(|r| r.name == normalized || r.name.replace(' ', "") == normalized)
        .ok_or_else(|| Error::UnknownRelation(name.to_string()))
}

/// Position of a relation in [`catalog`].
pub fn relation_index(rel: &Relation) -> usize {
    catalog()
        .iter()
        .position(|r| r.name == rel.name)
        .expect("relation from catalog")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shape() {
        let c = catalog();
        assert_eq!(c.len(), 32);
        let names: Vec<&str> = c.iter().map(|r| r.name()).collect();
        assert_eq!(names[0], "triple 0");
        assert_eq!(&names[1..4], ["integ 0", "integ 1", "integ 2"]);
        for i in 0..26 {
            assert_eq!(names[4 + i], format!("final {i}"));
        }
        assert_eq!(&names[30..], ["cycle", "flip"]);
        for r in c {
            assert!(r.weights().iter().any(|&w| w != 0));
            if let Some(p) = r.pattern_len() {
                assert!(r.terms().iter().all(|t| t.pattern.len() == p));
                assert!((1..=4).contains(&p));
            }
        }
    }

    #[test]
    fn named_entries() {
        let r = relation("integ 0").unwrap();
        assert_eq!(r.anchor(), Anchor::Sliding);
        assert_eq!(r.weights(), [1, 1, -1, -1]);
        let r = relation("final 16").unwrap();
        assert_eq!(r.anchor(), Anchor::Suffix);
        assert_eq!(r.weights(), [1, -1]);
        let r = relation("final 0").unwrap();
        assert!(r.is_one_term());
        let r = relation("integ 2").unwrap();
        assert_eq!(r.term_count(), 14);
        assert_eq!(r.weights().iter().filter(|w| w.abs() == 2).count(), 2);
        for i in 22..=25 {
            let r = relation(&format!("final {i}")).unwrap();
            assert_eq!(r.scale(), 2);
            assert!(r.weights().iter().all(|w| [1, 2].contains(&w.abs())));
        }
        assert_eq!(relation("cycle").unwrap().term_count(), 2);
        assert!(relation("final 26").is_err());
        assert_eq!(relation("final16").unwrap().name(), "final 16");
    }

    #[test]
    fn slot_ranges() {
        let r = relation("integ 0").unwrap();
        assert_eq!(r.slots(5), 1..=9);
        let r = relation("final 21").unwrap();
        assert_eq!(r.slots(2), 1..=1);
        assert!(r.slots(1).is_empty());
    }
}

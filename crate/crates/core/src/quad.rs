//! Quad representation: every nonzero coefficient at loop `L ≥ 3` is carried
//! by keys ending in one of eight four-letter suffixes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::coefficient::Coefficient;
use crate::dihedral::{canonical, Dihedral};
use crate::error::{Error, Result};
use crate::key::{parse_letters, Key};
use crate::letter::Letter;
use crate::relations::{catalog, Anchor};
use crate::symbol::{Symbol, SymbolBuilder};
use crate::zeros::{can_end, is_forbidden_pair, is_trivial_zero};

const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuadSuffix {
    Dddd,
    Bbbd,
    Bdbd,
    Bbdd,
    Dbdd,
    Fbdd,
    Dbbd,
    Cddd,
}

impl QuadSuffix {
    pub const ALL: [QuadSuffix; 8] = [
        QuadSuffix::Dddd,
        QuadSuffix::Bbbd,
        QuadSuffix::Bdbd,
        QuadSuffix::Bbdd,
        QuadSuffix::Dbdd,
        QuadSuffix::Fbdd,
        QuadSuffix::Dbbd,
        QuadSuffix::Cddd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QuadSuffix::Dddd => "dddd",
            QuadSuffix::Bbbd => "bbbd",
            QuadSuffix::Bdbd => "bdbd",
            QuadSuffix::Bbdd => "bbdd",
            QuadSuffix::Dbdd => "dbdd",
            QuadSuffix::Fbdd => "fbdd",
            QuadSuffix::Dbbd => "dbbd",
            QuadSuffix::Cddd => "cddd",
        }
    }

    pub fn letters(self) -> [Letter; 4] {
        let v = parse_letters(self.as_str()).expect("quad suffixes are valid");
        [v[0], v[1], v[2], v[3]]
    }

    /// Token spelling, `Q:dddd` … `Q:cddd`.
    pub fn token(self) -> String {
        format!("Q:{}", self.as_str())
    }

    pub fn from_token(token: &str) -> Option<QuadSuffix> {
        let s = token.strip_prefix("Q:")?;
        QuadSuffix::ALL.into_iter().find(|q| q.as_str() == s)
    }

    pub fn from_letters(letters: &[Letter]) -> Option<QuadSuffix> {
        QuadSuffix::ALL.into_iter().find(|q| q.letters() == letters)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for QuadSuffix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

type Suffix = [Letter; 4];
type Expr = BTreeMap<(Dihedral, QuadSuffix), BigRational>;

fn suffix_of(key: &Key) -> Suffix {
    let n = key.len();
    [key.letter(n - 4), key.letter(n - 3), key.letter(n - 2), key.letter(n - 1)]
}

fn suffix_index(s: &Suffix) -> usize {
    s.iter().fold(0, |acc, l| acc * 6 + l.code() as usize)
}

fn is_quad_key(key: &Key) -> bool {
    key.len() >= 4 && QuadSuffix::from_letters(&suffix_of(key)).is_some()
}

/// Lexicographically smallest quad-suffixed member of the orbit of `key`.
pub fn quad_representative(key: &Key) -> Option<Key> {
    if key.len() < 4 {
        return None;
    }
    Dihedral::elements()
        .iter()
        .map(|g| g.apply(key))
        .filter(is_quad_key)
        .min()
}

/// How the coefficient of `prefix · s` follows from quad-suffixed keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    /// Vanishes for every prefix.
    Zero,
    /// `C(p·s) = Σ c · C(g(p)·q)`.
    Terms(Vec<(Dihedral, QuadSuffix, BigRational)>),
    /// The rewrite rules do not reach a quad suffix.
    Undetermined,
}

fn suffix_is_zero(s: &Suffix) -> bool {
    if !can_end(s[3]) || s.windows(2).any(|w| is_forbidden_pair(w[0], w[1])) {
        return true;
    }
    vanishing_suffixes().iter().any(|p| s.ends_with(p))
}

/// Dihedral images of the one-term suffix relations.
fn vanishing_suffixes() -> &'static [Vec<Letter>] {
    static CACHE: OnceLock<Vec<Vec<Letter>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out: Vec<Vec<Letter>> = catalog()
            .iter()
            .filter(|r| r.anchor() == Anchor::Suffix && r.is_one_term())
            .flat_map(|r| {
                let p = r.terms()[0].pattern.clone();
                Dihedral::elements().iter().map(move |g| g.apply_letters(&p))
            })
            .collect();
        out.sort();
        out.dedup();
        out
    })
}

fn quad_image(s: &Suffix) -> Option<(Dihedral, QuadSuffix)> {
    Dihedral::elements()
        .iter()
        .filter_map(|g| QuadSuffix::from_letters(&g.apply_letters(s)).map(|q| (*g, q)))
        .min_by_key(|(_, q)| q.letters())
}

struct Reducer {
    memo: HashMap<Suffix, Expr>,
}

impl Reducer {
    fn reduce(&mut self, s: Suffix, depth: usize, stack: &mut Vec<Suffix>) -> Option<Expr> {
        if suffix_is_zero(&s) {
            return Some(Expr::new());
        }
        if let Some((h, q)) = quad_image(&s) {
            return Some(Expr::from([((h, q), BigRational::one())]));
        }
        if let Some(e) = self.memo.get(&s) {
            return Some(e.clone());
        }
        if depth > MAX_DEPTH || stack.contains(&s) {
            return None;
        }
        let mut members: Vec<(Suffix, Dihedral)> = Vec::new();
        for g in Dihedral::elements() {
            let m = g.apply_letters(&s);
            let m = [m[0], m[1], m[2], m[3]];
            if !members.iter().any(|(x, _)| *x == m) {
                members.push((m, *g));
            }
        }
        members.sort_by_key(|(m, _)| *m);
        stack.push(s);
        let rules = catalog()
            .iter()
            .filter(|r| r.anchor() == Anchor::Suffix && !r.is_one_term());
        for rule in rules {
            let terms = rule.terms();
            let head = &terms[0];
            let n = head.pattern.len();
            for (m, h) in &members {
                if !m.ends_with(&head.pattern) {
                    continue;
                }
                let ctx = &m[..4 - n];
                let mut acc = Expr::new();
                let mut ok = true;
                for t in &terms[1..] {
                    let mut next = [Letter::A; 4];
                    next[..4 - n].copy_from_slice(ctx);
                    next[4 - n..].copy_from_slice(&t.pattern);
                    let Some(e) = self.reduce(next, depth + 1, stack) else {
                        ok = false;
                        break;
                    };
                    let factor = BigRational::new(BigInt::from(-t.weight), BigInt::from(head.weight));
                    for ((h2, q), c) in e {
                        *acc.entry((h2.compose(h), q)).or_insert_with(BigRational::zero) +=
                            c * &factor;
                    }
                }
                if ok {
                    acc.retain(|_, c| !c.is_zero());
                    stack.pop();
                    self.memo.insert(s, acc.clone());
                    return Some(acc);
                }
            }
        }
        stack.pop();
        None
    }
}

/// Reduction of every four-letter suffix, indexed in base 6.
fn reductions() -> &'static [Reduction] {
    static TABLE: OnceLock<Vec<Reduction>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut reducer = Reducer {
            memo: HashMap::new(),
        };
        (0..1296usize)
            .map(|mut i| {
                let mut s = [Letter::A; 4];
                for slot in s.iter_mut().rev() {
                    *slot = Letter::ALL[i % 6];
                    i /= 6;
                }
                match reducer.reduce(s, 0, &mut Vec::new()) {
                    None => Reduction::Undetermined,
                    Some(e) if e.is_empty() => Reduction::Zero,
                    Some(e) => Reduction::Terms(e.into_iter().map(|((g, q), c)| (g, q, c)).collect()),
                }
            })
            .collect()
    })
}

/// Reduction of keys ending in `suffix`.
pub fn suffix_reduction(suffix: &[Letter]) -> Result<&'static Reduction> {
    let s: Suffix = suffix
        .try_into()
        .map_err(|_| Error::InvalidArgument("suffix must have four letters".into()))?;
    Ok(&reductions()[suffix_index(&s)])
}

/// A symbol stored only on quad-suffixed orbit representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSymbol {
    inner: Symbol,
}

/// Nonzero entries per quad suffix.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QuadStats {
    pub counts: [usize; 8],
}

impl QuadStats {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Result of reconstructing one coefficient from a quad symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    Determined(Coefficient),
    Undetermined,
}

impl QuadSymbol {
    pub fn loop_order(&self) -> usize {
        self.inner.loop_order()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    /// `(prefix, suffix, coefficient)` sorted by prefix, then suffix letters.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<Letter>, QuadSuffix, Coefficient)> + '_ {
        self.inner.iter().map(|(k, c)| {
            let (prefix, suffix) = k.split_suffix(4);
            let q = QuadSuffix::from_letters(&suffix).expect("stored keys end in a quad suffix");
            (prefix, q, c)
        })
    }

    /// Stored keys in full, prefix followed by suffix letters.
    pub fn as_symbol(&self) -> &Symbol {
        &self.inner
    }

    pub fn stats(&self) -> QuadStats {
        let mut stats = QuadStats::default();
        for (_, q, _) in self.iter() {
            stats.counts[q.index()] += 1;
        }
        stats
    }

    fn stored(&self, key: &Key) -> Coefficient {
        match quad_representative(key) {
            Some(rep) => self.inner.get(&rep),
            None => Coefficient::zero(),
        }
    }

    /// Reconstructs the coefficient of a full key.
    pub fn expand(&self, key: &Key) -> Expansion {
        if key.len() != 2 * self.loop_order() {
            return Expansion::Undetermined;
        }
        if is_trivial_zero(key) {
            return Expansion::Determined(Coefficient::zero());
        }
        if quad_representative(key).is_some() {
            return Expansion::Determined(self.stored(key));
        }
        let suffix = suffix_of(key);
        match &reductions()[suffix_index(&suffix)] {
            Reduction::Zero => Expansion::Determined(Coefficient::zero()),
            Reduction::Undetermined => Expansion::Undetermined,
            Reduction::Terms(terms) => {
                let (prefix, _) = key.split_suffix(4);
                let mut sum = BigRational::zero();
                for (g, q, c) in terms {
                    let mut letters = g.apply_letters(&prefix);
                    letters.extend_from_slice(&q.letters());
                    let k = Key::from_letters(&letters).expect("same length as target");
                    sum += c * BigRational::from_integer(self.stored(&k).into_value());
                }
                if sum.is_integer() {
                    Expansion::Determined(Coefficient::new(sum.to_integer()))
                } else {
                    Expansion::Undetermined
                }
            }
        }
    }
}

fn check_quad_loop(loop_order: usize) -> Result<()> {
    if loop_order < 3 {
        return Err(Error::InvalidArgument(format!(
            "quad representation needs loop order at least 3, got {loop_order}"
        )));
    }
    Ok(())
}

/// Compresses a full symbol to its quad representatives.
pub fn to_quad(symbol: &Symbol) -> Result<QuadSymbol> {
    check_quad_loop(symbol.loop_order())?;
    let picked: Vec<Option<(Key, Coefficient)>> = (0..symbol.len())
        .into_par_iter()
        .map(|i| {
            let k = symbol.key_at(i);
            match quad_representative(&k) {
                Some(rep) if rep == k => Ok(Some((k, symbol.coefficient_at(i)))),
                Some(_) => Ok(None),
                None => {
                    let s = suffix_of(&k);
                    if reductions()[suffix_index(&s)] == Reduction::Undetermined {
                        let class = canonical(&Key::from_letters(&s).expect("four letters"));
                        Err(Error::IrreducibleSuffix(class.to_string()))
                    } else {
                        Ok(None)
                    }
                }
            }
        })
        .collect::<Result<_>>()?;
    let mut b = SymbolBuilder::new(symbol.loop_order())?;
    for (k, c) in picked.into_iter().flatten() {
        b.insert(k, c)?;
    }
    Ok(QuadSymbol { inner: b.build()?.0 })
}

/// Reconstructs coefficients of `targets`, in order.
pub fn expand_quad(quad: &QuadSymbol, targets: &[Key]) -> Vec<Expansion> {
    targets.par_iter().map(|k| quad.expand(k)).collect()
}

pub fn quad_stats(quad: &QuadSymbol) -> QuadStats {
    quad.stats()
}

/// Writes `<prefix>\t<token>\t<coefficient>` lines.
pub fn write_quad<W: Write>(mut w: W, quad: &QuadSymbol) -> Result<()> {
    for (prefix, q, c) in quad.iter() {
        let p: String = prefix.iter().map(|l| l.as_char()).collect();
        writeln!(w, "{p}\t{}\t{c}", q.token())?;
    }
    Ok(())
}

/// Reads the quad text format; every prefix must have length `2L − 4`
/// and each entry must be its own orbit representative.
pub fn read_quad<R: BufRead>(r: R, loop_order: usize) -> Result<QuadSymbol> {
    check_quad_loop(loop_order)?;
    let mut b = SymbolBuilder::new(loop_order)?;
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [prefix, token, coef] = fields[..] else {
            return Err(bad("expected prefix, quad token and coefficient".into()));
        };
        let mut letters = parse_letters(prefix)?;
        if letters.len() != 2 * loop_order - 4 {
            return Err(bad(format!("prefix {prefix:?} has wrong length for loop {loop_order}")));
        }
        let q = QuadSuffix::from_token(token).ok_or_else(|| bad(format!("unknown quad token {token:?}")))?;
        letters.extend_from_slice(&q.letters());
        let key = Key::from_letters(&letters)?;
        if quad_representative(&key) != Some(key) {
            return Err(bad(format!("{key} is not its orbit's quad representative")));
        }
        let c: Coefficient = coef.parse().map_err(|_| bad(format!("bad coefficient {coef:?}")))?;
        b.insert(key, c)?;
    }
    Ok(QuadSymbol { inner: b.build()?.0 })
}

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, KeyErrorKind, Result};
use crate::letter::Letter;

/// Longest supported key (loop order 8).
pub const MAX_KEY_LEN: usize = 16;
pub const MAX_LOOP: usize = MAX_KEY_LEN / 2;

/// A word of even length over the six-letter alphabet, packed 3 bits per
/// letter with the first letter in the most significant position. For keys of
/// equal length the packed value orders exactly like the letter sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key {
    len: u8,
    packed: u64,
}

impl Key {
    pub fn from_letters(letters: &[Letter]) -> Result<Key> {
        check_len(letters.len())?;
        Ok(Key::pack(letters))
    }

    /// Caller guarantees a valid length.
    pub(crate) fn pack(letters: &[Letter]) -> Key {
        debug_assert!(letters.len() <= MAX_KEY_LEN);
        let packed = letters
            .iter()
            .fold(0u64, |acc, l| (acc << 3) | l.code() as u64);
        Key {
            len: letters.len() as u8,
            packed,
        }
    }

    /// Rebuilds a key from its packed form; rejects codes outside `0..6`.
    pub fn from_packed(packed: u64, len: usize) -> Result<Key> {
        check_len(len)?;
        if packed >> (3 * len) != 0 {
            return Err(Error::InvalidArgument(format!(
                "packed value {packed:#x} wider than {len} letters"
            )));
        }
        for i in 0..len {
            let code = (packed >> (3 * (len - 1 - i))) & 7;
            if code >= 6 {
                return Err(Error::Key {
                    kind: KeyErrorKind::IllegalCharacter('?'),
                    position: i,
                });
            }
        }
        Ok(Key {
            len: len as u8,
            packed,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Loop order `L` for a key of length `2L`.
    #[inline]
    pub fn loop_order(&self) -> usize {
        self.len() / 2
    }

    #[inline]
    pub fn packed(&self) -> u64 {
        self.packed
    }

    #[inline]
    pub fn letter(&self, i: usize) -> Letter {
        debug_assert!(i < self.len());
        let code = (self.packed >> (3 * (self.len() - 1 - i))) & 7;
        Letter::ALL[code as usize]
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + '_ {
        (0..self.len()).map(move |i| self.letter(i))
    }

    pub fn to_letters(&self) -> Vec<Letter> {
        self.letters().collect()
    }

    pub fn first(&self) -> Letter {
        self.letter(0)
    }

    pub fn last(&self) -> Letter {
        self.letter(self.len() - 1)
    }

    /// Applies a letter substitution to every position.
    pub fn map(&self, table: &[Letter; 6]) -> Key {
        let mut packed = 0u64;
        for i in 0..self.len() {
            let shift = 3 * (self.len() - 1 - i);
            let code = (self.packed >> shift) & 7;
            packed |= (table[code as usize].code() as u64) << shift;
        }
        Key {
            len: self.len,
            packed,
        }
    }

    /// Packed value of the last `n` letters.
    #[inline]
    pub fn suffix_code(&self, n: usize) -> u64 {
        debug_assert!(n <= self.len());
        self.packed & ((1u64 << (3 * n)) - 1)
    }

    /// Whether the key ends with `pattern`.
    pub fn ends_with(&self, pattern: &[Letter]) -> bool {
        pattern.len() <= self.len()
            && self.suffix_code(pattern.len()) == Key::pack(pattern).packed
    }

    /// Splits into the first `self.len() - n` letters and the last `n`.
    pub fn split_suffix(&self, n: usize) -> (Vec<Letter>, Vec<Letter>) {
        let letters = self.to_letters();
        let (head, tail) = letters.split_at(self.len() - n);
        (head.to_vec(), tail.to_vec())
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 {
        return Err(Error::Key {
            kind: KeyErrorKind::Empty,
            position: 0,
        });
    }
    if len > MAX_KEY_LEN {
        return Err(Error::Key {
            kind: KeyErrorKind::TooLong,
            position: MAX_KEY_LEN,
        });
    }
    if len % 2 == 1 {
        return Err(Error::Key {
            kind: KeyErrorKind::OddLength,
            position: len - 1,
        });
    }
    Ok(())
}

/// Parses a lowercase key such as `"aacf"`.
pub fn parse_key(text: &str) -> Result<Key> {
    let mut letters = Vec::with_capacity(text.len());
    for (position, c) in text.chars().enumerate() {
        match Letter::from_char(c) {
            Some(l) => letters.push(l),
            None => {
                return Err(Error::Key {
                    kind: KeyErrorKind::IllegalCharacter(c),
                    position,
                })
            }
        }
    }
    Key::from_letters(&letters)
}

pub fn format_key(key: &Key) -> String {
    key.letters().map(Letter::as_char).collect()
}

/// Parses a letter word of any length (relation patterns, contexts).
pub fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    text.chars()
        .enumerate()
        .map(|(position, c)| {
            Letter::from_char(c).ok_or(Error::Key {
                kind: KeyErrorKind::IllegalCharacter(c),
                position,
            })
        })
        .collect()
}

impl FromStr for Key {
    type Err = Error;

    fn from_str(s: &str) -> Result<Key> {
        parse_key(s)
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Key({self})")
    }
}

/// Iterates over every key of length `len` in ascending order.
pub fn all_keys(len: usize) -> impl Iterator<Item = Key> {
    let total = 6u64.pow(len as u32);
    (0..total).map(move |mut n| {
        let mut letters = vec![Letter::A; len];
        for slot in letters.iter_mut().rev() {
            *slot = Letter::ALL[(n % 6) as usize];
            n /= 6;
        }
        Key::pack(&letters)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn round_trips_short_keys() {
        let k = parse_key("bd").unwrap();
        assert_eq!(k.len(), 2);
        assert_eq!(format_key(&k), "bd");
        assert_eq!(parse_key("aacf").unwrap().len(), 4);
    }

    #[test]
    fn rejects_bad_input_with_position() {
        match parse_key("bdg") {
            Err(Error::Key {
                kind: KeyErrorKind::IllegalCharacter('g'),
                position: 2,
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_key("abc"),
            Err(Error::Key {
                kind: KeyErrorKind::OddLength,
                position: 2
            })
        ));
        assert!(matches!(
            parse_key(&"a".repeat(18)),
            Err(Error::Key {
                kind: KeyErrorKind::TooLong,
                position: 16
            })
        ));
        assert!(matches!(
            parse_key(""),
            Err(Error::Key {
                kind: KeyErrorKind::Empty,
                ..
            })
        ));
        assert!(matches!(
            parse_key("aB"),
            Err(Error::Key {
                kind: KeyErrorKind::IllegalCharacter('B'),
                position: 1
            })
        ));
    }

    #[test]
    fn packed_order_is_lexicographic() {
        let keys: Vec<Key> = all_keys(4).collect();
        let strings: Vec<String> = keys.iter().map(format_key).collect();
        let mut sorted = strings.clone();
        sorted.sort();
        assert_eq!(strings, sorted);
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn exhaustive_round_trip_up_to_loop_two() {
        for len in [2usize, 4] {
            let mut n = 0;
            for k in all_keys(len) {
                let back = Key::from_packed(k.packed(), len).unwrap();
                assert_eq!(back, k);
                assert_eq!(parse_key(&format_key(&k)).unwrap(), k);
                n += 1;
            }
            assert_eq!(n, 6usize.pow(len as u32));
        }
    }

    #[test]
    fn million_random_loop_eight_keys_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let mut letters = [Letter::A; 16];
        for _ in 0..1_000_000 {
            for l in letters.iter_mut() {
                *l = Letter::ALL[rng.gen_range(0..6)];
            }
            let k = Key::from_letters(&letters).unwrap();
            assert_eq!(k.to_letters(), letters);
            assert_eq!(Key::from_packed(k.packed(), 16).unwrap(), k);
        }
    }

    #[test]
    fn suffix_helpers() {
        let k = parse_key("cabcabdccd").unwrap();
        assert!(k.ends_with(&parse_letters("ccd").unwrap()));
        assert!(!k.ends_with(&parse_letters("bcd").unwrap()));
        let (head, tail) = k.split_suffix(4);
        assert_eq!(head.len(), 6);
        assert_eq!(tail, parse_letters("dccd").unwrap());
    }

    proptest! {
        #[test]
        fn text_round_trip(s in "([a-f][a-f]){1,8}") {
            let k = parse_key(&s).unwrap();
            prop_assert_eq!(format_key(&k), s);
        }
    }
}

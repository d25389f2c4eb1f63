//! Token vocabulary and the base-1000 coefficient encoding.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::coefficient::{Coefficient, Sign};
use crate::error::{Error, Result};
use crate::key::Key;
use crate::letter::Letter;
use crate::quad::QuadSuffix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Letter(Letter),
    Quad(QuadSuffix),
    Plus,
    Minus,
    /// One base-1000 digit.
    Num(u16),
}

impl Token {
    /// Parses one token. Numbers must be below 1000 without leading zeros;
    /// `−` is accepted for minus.
    pub fn parse(text: &str) -> Option<Token> {
        match text {
            "+" => return Some(Token::Plus),
            "-" | "−" => return Some(Token::Minus),
            _ => {}
        }
        if let Some(q) = QuadSuffix::from_token(text) {
            return Some(Token::Quad(q));
        }
        let mut chars = text.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            if let Some(l) = Letter::from_char(c) {
                return Some(Token::Letter(l));
            }
        }
        if text.is_empty() || text.len() > 3 || !text.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if text.len() > 1 && text.starts_with('0') {
            return None;
        }
        text.parse().ok().map(Token::Num)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Letter(l) => write!(f, "{l}"),
            Token::Quad(q) => write!(f, "{}", q.token()),
            Token::Plus => f.write_str("+"),
            Token::Minus => f.write_str("-"),
            Token::Num(n) => write!(f, "{n}"),
        }
    }
}

/// Every token, letters first, then quad tokens, signs and digits.
pub fn vocabulary() -> Vec<Token> {
    let mut v: Vec<Token> = Letter::ALL.iter().map(|&l| Token::Letter(l)).collect();
    v.extend(QuadSuffix::ALL.iter().map(|&q| Token::Quad(q)));
    v.push(Token::Plus);
    v.push(Token::Minus);
    v.extend((0..1000).map(Token::Num));
    v
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SignPosition {
    #[default]
    First,
    Last,
}

/// Sign token plus big-endian base-1000 digits; zero is `+ 0`.
pub fn encode_coefficient(c: &Coefficient, position: SignPosition) -> Vec<Token> {
    let sign = match c.sign() {
        Sign::Plus => Token::Plus,
        Sign::Minus => Token::Minus,
    };
    let digits = base1000(&c.magnitude());
    let mut out = Vec::with_capacity(digits.len() + 1);
    if position == SignPosition::First {
        out.push(sign);
    }
    out.extend(digits.into_iter().map(Token::Num));
    if position == SignPosition::Last {
        out.push(sign);
    }
    out
}

fn base1000(m: &BigUint) -> Vec<u16> {
    if m.is_zero() {
        return vec![0];
    }
    let thousand = BigUint::from(1000u32);
    let mut rest = m.clone();
    let mut digits = Vec::new();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&thousand);
        digits.push(r.to_u16().expect("remainder below 1000"));
        rest = q;
    }
    digits.reverse();
    digits
}

/// Decodes either sign position.
pub fn decode_coefficient(tokens: &[Token]) -> Result<Coefficient> {
    let bad = |m: &str| Error::Token(format!("{m}: {}", format_tokens(tokens)));
    let (sign, digits) = match (tokens.first(), tokens.last()) {
        (None, _) | (_, None) => return Err(bad("empty sequence")),
        (Some(s @ (Token::Plus | Token::Minus)), _) => (*s, &tokens[1..]),
        (_, Some(s @ (Token::Plus | Token::Minus))) => (*s, &tokens[..tokens.len() - 1]),
        _ => return Err(bad("missing sign")),
    };
    if digits.is_empty() {
        return Err(bad("no digits"));
    }
    let mut chunks = Vec::with_capacity(digits.len());
    for t in digits {
        match t {
            Token::Num(n) if *n < 1000 => chunks.push(*n),
            Token::Num(_) => return Err(bad("digit out of range")),
            _ => return Err(bad("unexpected token among digits")),
        }
    }
    if chunks.len() > 1 && chunks[0] == 0 {
        return Err(bad("leading zero digit"));
    }
    let magnitude = chunks
        .iter()
        .fold(BigUint::zero(), |acc, &d| acc * 1000u32 + BigUint::from(d));
    let sign = if sign == Token::Minus {
        if magnitude.is_zero() {
            return Err(bad("negative zero"));
        }
        Sign::Minus
    } else {
        Sign::Plus
    };
    Ok(Coefficient::from_parts(sign, magnitude))
}

pub fn encode_key(key: &Key) -> Vec<Token> {
    key.letters().map(Token::Letter).collect()
}

/// Prefix letters followed by the quad token.
pub fn encode_quad_key(key: &Key) -> Result<Vec<Token>> {
    let (prefix, suffix) = key.split_suffix(4.min(key.len()));
    let q = QuadSuffix::from_letters(&suffix)
        .ok_or_else(|| Error::InvalidArgument(format!("{key} does not end in a quad suffix")))?;
    let mut out: Vec<Token> = prefix.into_iter().map(Token::Letter).collect();
    out.push(Token::Quad(q));
    Ok(out)
}

pub fn format_tokens(tokens: &[Token]) -> String {
    let parts: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
    parts.join(" ")
}

/// Splits on whitespace and commas.
pub fn parse_tokens(text: &str) -> Result<Vec<Token>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| Token::parse(s).ok_or_else(|| Error::Token(format!("unknown token {s:?}"))))
        .collect()
}

/// Small integers as tokens, used for parent lists.
pub fn encode_small(v: i64, position: SignPosition) -> Vec<Token> {
    encode_coefficient(&Coefficient::from(v), position)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<Token> {
        parse_tokens(s).unwrap()
    }

    #[test]
    fn examples() {
        let enc = |v: i64| format_tokens(&encode_coefficient(&Coefficient::from(v), SignPosition::First));
        assert_eq!(enc(12334), "+ 12 334");
        assert_eq!(enc(0), "+ 0");
        assert_eq!(enc(-1_000_000), "- 1 0 0");
        assert_eq!(enc(999), "+ 999");
        assert_eq!(enc(-1000), "- 1 0");
        let last = encode_coefficient(&Coefficient::from(-5), SignPosition::Last);
        assert_eq!(format_tokens(&last), "5 -");
    }

    #[test]
    fn decoding_accepts_both_positions() {
        assert_eq!(decode_coefficient(&toks("+, 12, 334")).unwrap(), Coefficient::from(12334));
        assert_eq!(decode_coefficient(&toks("12 334 -")).unwrap(), Coefficient::from(-12334));
        assert_eq!(decode_coefficient(&toks("− 7")).unwrap(), Coefficient::from(-7));
    }

    #[test]
    fn decoding_rejects_malformed() {
        for s in ["", "+", "+ + +", "12", "+ 0 12", "- 0", "+ 12 -", "+ a", "+ 12 +"] {
            let t = parse_tokens(s).unwrap();
            assert!(decode_coefficient(&t).is_err(), "{s:?}");
        }
        assert!(parse_tokens("+ 1000").is_err());
        assert!(parse_tokens("+ 012").is_err());
        assert!(parse_tokens("+ x").is_err());
    }

    #[test]
    fn key_tokens() {
        let k: Key = "abdddd".parse().unwrap();
        assert_eq!(format_tokens(&encode_key(&k)), "a b d d d d");
        assert_eq!(format_tokens(&encode_quad_key(&k).unwrap()), "a b Q:dddd");
        assert!(encode_quad_key(&"abcdef".parse().unwrap()).is_err());
    }

    #[test]
    fn vocabulary_is_disjoint() {
        let v = vocabulary();
        let mut text: Vec<String> = v.iter().map(|t| t.to_string()).collect();
        let n = text.len();
        text.sort();
        text.dedup();
        assert_eq!(text.len(), n);
        assert_eq!(n, 6 + 8 + 2 + 1000);
    }

    proptest! {
        #[test]
        fn round_trip(v in any::<i128>(), last in any::<bool>()) {
            let pos = if last { SignPosition::Last } else { SignPosition::First };
            let c = Coefficient::new(BigInt::from(v));
            let t = encode_coefficient(&c, pos);
            prop_assert_eq!(decode_coefficient(&t).unwrap(), c.clone());
            prop_assert_eq!(decode_coefficient(&parse_tokens(&format_tokens(&t)).unwrap()).unwrap(), c);
        }
    }
}

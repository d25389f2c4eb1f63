use std::fmt;

/// One of the six alphabet letters. The discriminant doubles as the 3-bit
/// packed code, so `a < b < ... < f` everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    B = 1,
    C = 2,
    D = 3,
    E = 4,
    F = 5,
}

impl Letter {
    pub const ALL: [Letter; 6] = [
        Letter::A,
        Letter::B,
        Letter::C,
        Letter::D,
        Letter::E,
        Letter::F,
    ];

    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn from_code(code: u8) -> Option<Letter> {
        Letter::ALL.get(code as usize).copied()
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'c' => Some(Letter::C),
            'd' => Some(Letter::D),
            'e' => Some(Letter::E),
            'f' => Some(Letter::F),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        (b'a' + self.code()) as char
    }

    /// `a`, `b`, `c` are the square-root letters; `d`, `e`, `f` the others.
    #[inline]
    pub fn is_first_half(self) -> bool {
        self.code() < 3
    }

    /// Position within its half (a,d -> 0; b,e -> 1; c,f -> 2).
    #[inline]
    pub fn index(self) -> u8 {
        self.code() % 3
    }

    #[inline]
    pub(crate) fn from_parts(first_half: bool, index: u8) -> Letter {
        let code = if first_half { index } else { index + 3 };
        Letter::ALL[code as usize]
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

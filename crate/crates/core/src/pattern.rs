//! Bit-packed head/tail strings.
//!
//! A string `a_1 a_2 ... a_n` is stored in a single `u64` with `H = 1`,
//! `T = 0` and the first character in the most significant of the `n` used
//! bits (bit `n - i` holds `a_i`). Game strings have length 3..=64; shorter
//! fragments exist only as construction intermediates and as Markov-chain
//! states.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Shortest legal game string. The game is defined for `n >= 3`.
pub const MIN_LEN: usize = 3;
/// Longest legal game string; a string and a Conway number each fit one word.
pub const MAX_LEN: usize = 64;

/// One coin face. `Tails` is the zero bit so that the all-T string packs to 0.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coin {
    Tails = 0,
    Heads = 1,
}

impl Coin {
    pub fn from_char(c: char) -> Option<Coin> {
        match c {
            'H' | 'h' => Some(Coin::Heads),
            'T' | 't' => Some(Coin::Tails),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Coin::Heads => 'H',
            Coin::Tails => 'T',
        }
    }

    pub fn bit(self) -> u64 {
        self as u64
    }

    pub fn from_bit(bit: u64) -> Coin {
        if bit & 1 == 1 {
            Coin::Heads
        } else {
            Coin::Tails
        }
    }

    pub fn flipped(self) -> Coin {
        match self {
            Coin::Heads => Coin::Tails,
            Coin::Tails => Coin::Heads,
        }
    }
}

/// All `2^len` bit patterns fit below this mask.
fn mask(len: usize) -> u64 {
    debug_assert!(len <= 64);
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A head/tail game string of length 3..=64.
///
/// Ordering is by length, then by packed bits; within one length this is the
/// canonical "ascending bits" order used for all reproducible output.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternString {
    len: u8,
    bits: u64,
}

impl PatternString {
    /// Parse an H/T string (case-insensitive, canonicalized to uppercase).
    pub fn parse(text: &str) -> Result<PatternString> {
        let chars: Vec<char> = text.chars().collect();
        if chars.len() < MIN_LEN || chars.len() > MAX_LEN {
            return Err(Error::bad_length(chars.len(), "game strings have length 3..=64"));
        }
        let mut bits = 0u64;
        for (i, &c) in chars.iter().enumerate() {
            let coin = Coin::from_char(c).ok_or(Error::IllegalCharacter { ch: c, pos: i + 1 })?;
            bits = (bits << 1) | coin.bit();
        }
        Ok(PatternString { len: chars.len() as u8, bits })
    }

    /// Build from a packed word; `bits` must fit in `len` bits.
    pub fn from_bits(len: usize, bits: u64) -> Result<PatternString> {
        if !(MIN_LEN..=MAX_LEN).contains(&len) {
            return Err(Error::bad_length(len, "game strings have length 3..=64"));
        }
        if bits & !mask(len) != 0 {
            return Err(Error::bad_length(len, "packed bits exceed the stated length"));
        }
        Ok(PatternString { len: len as u8, bits })
    }

    /// The uniform string `c^n`.
    pub fn repeated(coin: Coin, len: usize) -> Result<PatternString> {
        let bits = if coin == Coin::Heads { mask(len.min(64)) } else { 0 };
        PatternString::from_bits(len, bits)
    }

    /// String length; game strings are never empty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Character `a_{i+1}` (0-based index from the left).
    pub fn coin(&self, i: usize) -> Coin {
        debug_assert!(i < self.len());
        Coin::from_bit(self.bits >> (self.len() - 1 - i))
    }

    /// Flip every character. An involution.
    pub fn complement(&self) -> PatternString {
        PatternString { len: self.len, bits: self.bits ^ mask(self.len()) }
    }

    /// First `k` characters, `1 <= k <= n`. Fragments shorter than 3 are
    /// legal here; they are construction material, not game strings.
    pub fn prefix(&self, k: usize) -> Result<Fragment> {
        if k < 1 || k > self.len() {
            return Err(Error::bad_length(k, "prefix length must be in 1..=n"));
        }
        Ok(Fragment { len: k as u8, bits: self.bits >> (self.len() - k) })
    }

    /// Last `k` characters, `1 <= k <= n`.
    pub fn suffix(&self, k: usize) -> Result<Fragment> {
        if k < 1 || k > self.len() {
            return Err(Error::bad_length(k, "suffix length must be in 1..=n"));
        }
        Ok(Fragment { len: k as u8, bits: self.bits & mask(k) })
    }

    pub fn as_fragment(&self) -> Fragment {
        Fragment { len: self.len, bits: self.bits }
    }

    pub fn starts_with(&self, frag: &Fragment) -> bool {
        frag.len() <= self.len() && self.bits >> (self.len() - frag.len()) == frag.bits()
    }

    pub fn ends_with(&self, frag: &Fragment) -> bool {
        frag.len() <= self.len() && self.bits & mask(frag.len()) == frag.bits()
    }

    /// All `2^n` strings of length `n` in ascending `bits` order
    /// (first `T^n`, last `H^n`). Callers are expected to keep full scans
    /// to n small enough to enumerate; the iterator itself is lazy.
    pub fn enumerate(n: usize) -> Result<Enumerate> {
        if !(MIN_LEN..=MAX_LEN).contains(&n) {
            return Err(Error::bad_length(n, "game strings have length 3..=64"));
        }
        Ok(Enumerate { len: n as u8, next: 0, done: false })
    }
}

impl fmt::Display for PatternString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.coin(i).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PatternString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternString({self})")
    }
}

impl FromStr for PatternString {
    type Err = Error;

    fn from_str(s: &str) -> Result<PatternString> {
        PatternString::parse(s)
    }
}

// Wire format: {"n": 5, "s": "HHTHT"}.
impl Serialize for PatternString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            n: usize,
            s: &'a str,
        }
        Wire { n: self.len(), s: &self.to_string() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PatternString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            n: usize,
            s: String,
        }
        let wire = Wire::deserialize(deserializer)?;
        let parsed = PatternString::parse(&wire.s).map_err(D::Error::custom)?;
        if parsed.len() != wire.n {
            return Err(D::Error::custom(format!(
                "declared length {} does not match string of length {}",
                wire.n,
                parsed.len()
            )));
        }
        Ok(parsed)
    }
}

/// Iterator over all strings of one length in ascending `bits` order.
pub struct Enumerate {
    len: u8,
    next: u64,
    done: bool,
}

impl Iterator for Enumerate {
    type Item = PatternString;

    fn next(&mut self) -> Option<PatternString> {
        if self.done {
            return None;
        }
        let item = PatternString { len: self.len, bits: self.next };
        if self.next == mask(self.len as usize) {
            self.done = true;
        } else {
            self.next += 1;
        }
        Some(item)
    }
}

/// A raw H/T fragment of length 0..=64, the unvalidated building block
/// behind `PatternString`. Used for prefixes/suffixes during construction
/// and as the state label of the absorbing chain (where the empty fragment
/// is the start state).
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fragment {
    len: u8,
    bits: u64,
}

impl Fragment {
    pub fn empty() -> Fragment {
        Fragment { len: 0, bits: 0 }
    }

    pub fn single(coin: Coin) -> Fragment {
        Fragment { len: 1, bits: coin.bit() }
    }

    /// Build from raw parts. Panics if `bits` does not fit in `len` bits.
    pub fn new(len: usize, bits: u64) -> Fragment {
        assert!(len <= MAX_LEN, "fragment length must be at most 64");
        assert!(bits & !mask(len) == 0, "fragment bits exceed the stated length");
        Fragment { len: len as u8, bits }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Append one character on the right. Panics past length 64.
    pub fn push(&self, coin: Coin) -> Fragment {
        assert!(self.len() < MAX_LEN, "fragment length must stay at most 64");
        Fragment { len: self.len + 1, bits: (self.bits << 1) | coin.bit() }
    }

    /// `self` followed by `other`. Panics past length 64.
    pub fn concat(&self, other: &Fragment) -> Fragment {
        assert!(self.len() + other.len() <= MAX_LEN, "fragment length must stay at most 64");
        Fragment {
            len: self.len + other.len,
            bits: (self.bits << other.len()) | other.bits,
        }
    }

    /// Last `k` characters, `k <= len`.
    pub fn suffix(&self, k: usize) -> Fragment {
        assert!(k <= self.len());
        Fragment { len: k as u8, bits: self.bits & mask(k) }
    }

    pub fn is_prefix_of(&self, p: &PatternString) -> bool {
        p.starts_with(self)
    }

    /// Promote to a game string; fails for fragments shorter than 3.
    pub fn to_pattern(&self) -> Result<PatternString> {
        PatternString::from_bits(self.len(), self.bits)
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", Coin::from_bit(self.bits >> (self.len() - 1 - i)).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "Fragment(<empty>)")
        } else {
            write!(f, "Fragment({self})")
        }
    }
}

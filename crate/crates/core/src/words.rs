//! Finite words over an ordered alphabet.
//!
//! Letters are single ASCII alphabetic symbols. A [`Word`] is just the byte
//! sequence of its letters; the [`Alphabet`] carries the letter order used by
//! every lexicographic comparison (Lyndon tests, rotations).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A finite word. The empty word is representable; operations whose natural
/// domain is `A⁺` reject it.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<u8>>) -> Self {
        Word(letters.into())
    }

    /// Parses a plain string of letters. `"1"` and `""` denote the empty word.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::empty());
        }
        for (pos, ch) in text.char_indices() {
            if !is_letter_symbol(ch) {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("'{ch}' is not a letter"),
                });
            }
        }
        Ok(Word(text.as_bytes().to_vec()))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// `w_α`: the prefix of length `|w|-1`.
    pub fn alpha(&self) -> Word {
        Word(self.0[..self.len().saturating_sub(1)].to_vec())
    }

    /// `w_ω`: the suffix of length `|w|-1`.
    pub fn omega(&self) -> Word {
        Word(self.0[self.len().min(1)..].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    pub fn is_factor_of(&self, other: &Word) -> bool {
        self.is_empty()
            || other
                .0
                .windows(self.len())
                .any(|win| win == self.0.as_slice())
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }
}

impl From<&[u8]> for Word {
    fn from(s: &[u8]) -> Self {
        Word(s.to_vec())
    }
}

impl std::borrow::Borrow<[u8]> for Word {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        f.write_str(std::str::from_utf8(&self.0).expect("letters are ASCII"))
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(std::str::from_utf8(&self.0).expect("letters are ASCII"))
    }
}

impl<'de> serde::Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

pub fn is_letter_symbol(ch: char) -> bool {
    ch.is_ascii_alphabetic()
}

/// An ordered, duplicate-free set of letters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<u8>,
    rank: [u8; 128],
}

const NO_RANK: u8 = u8::MAX;

impl Alphabet {
    /// Builds an alphabet whose order is the order of `letters`.
    pub fn new(letters: impl IntoIterator<Item = u8>) -> Result<Self> {
        let letters: Vec<u8> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        if letters.len() >= NO_RANK as usize {
            return Err(Error::InvalidAlphabet("too many letters".into()));
        }
        let mut rank = [NO_RANK; 128];
        for (i, &l) in letters.iter().enumerate() {
            if !l.is_ascii() || !is_letter_symbol(l as char) {
                return Err(Error::InvalidAlphabet(format!(
                    "'{}' is not an ASCII letter",
                    l as char
                )));
            }
            if rank[l as usize] != NO_RANK {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate letter '{}'",
                    l as char
                )));
            }
            rank[l as usize] = i as u8;
        }
        Ok(Alphabet { letters, rank })
    }

    /// Alphabet of the given symbols in their natural (byte) order.
    pub fn natural(letters: impl IntoIterator<Item = u8>) -> Result<Self> {
        let mut v: Vec<u8> = letters.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Alphabet::new(v)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Alphabet::new(
            text.bytes()
                .filter(|b| !b.is_ascii_whitespace() && *b != b','),
        )
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, letter: u8) -> bool {
        letter < 128 && self.rank[letter as usize] != NO_RANK
    }

    /// Position of `letter` in the order. Panics on foreign letters.
    pub fn rank(&self, letter: u8) -> usize {
        let r = self.rank[letter as usize];
        assert!(r != NO_RANK, "letter '{}' not in alphabet", letter as char);
        r as usize
    }

    pub fn check_word(&self, w: &[u8]) -> Result<()> {
        match w.iter().find(|&&l| !self.contains(l)) {
            Some(&l) => Err(Error::ForeignLetter(l as char)),
            None => Ok(()),
        }
    }

    /// Lexicographic comparison induced by the letter order.
    pub fn compare(&self, a: &[u8], b: &[u8]) -> Ordering {
        for (&x, &y) in a.iter().zip(b) {
            match self.rank(x).cmp(&self.rank(y)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }

    /// All words of length exactly `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|w| {
                    self.letters.iter().map(move |&l| {
                        let mut v = w.0.clone();
                        v.push(l);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }

    /// All non-empty words of length at most `n` (shortlex order).
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        (1..=n).flat_map(|k| self.words_of_length(k)).collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({})", String::from_utf8_lossy(&self.letters))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Head,
    Tail,
}

/// `i_k(w)` (head) or `t_k(w)` (tail): the longest prefix/suffix of length at most `k`.
pub fn truncate(w: &[u8], k: usize, side: Side) -> Word {
    let n = w.len().min(k);
    match side {
        Side::Head => Word::from(&w[..n]),
        Side::Tail => Word::from(&w[w.len() - n..]),
    }
}

/// Returns `(p, n)` with `w = pⁿ`, `p` primitive and `n` maximal.
pub fn primitive_root(w: &[u8]) -> Result<(Word, usize)> {
    if w.is_empty() {
        return Err(Error::EmptyWord("primitive_root"));
    }
    let n = w.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| w[i] == w[i - d]) {
            return Ok((Word::from(&w[..d]), n / d));
        }
    }
    unreachable!("d = n always divides")
}

pub fn is_primitive(w: &[u8]) -> Result<bool> {
    Ok(primitive_root(w)?.1 == 1)
}

/// Conjugate `w[i..] w[..i]`.
pub fn rotate(w: &[u8], i: usize) -> Word {
    let mut v = Vec::with_capacity(w.len());
    v.extend_from_slice(&w[i..]);
    v.extend_from_slice(&w[..i]);
    Word(v)
}

/// Primitive and strictly smaller than every other conjugate.
pub fn is_lyndon(w: &[u8], alphabet: &Alphabet) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::EmptyWord("is_lyndon"));
    }
    Ok((1..w.len()).all(|i| alphabet.compare(w, rotate(w, i).letters()) == Ordering::Less))
}

/// For primitive `x`, the shortest prefix `u` such that `x = uv` and `vu` is Lyndon.
pub fn lyndon_split(x: &[u8], alphabet: &Alphabet) -> Result<(Word, Word)> {
    if x.is_empty() {
        return Err(Error::EmptyWord("lyndon_split"));
    }
    if !is_primitive(x)? {
        return Err(Error::NotPrimitive(Word::from(x)));
    }
    for i in 0..x.len() {
        if is_lyndon(rotate(x, i).letters(), alphabet)? {
            return Ok((Word::from(&x[..i]), Word::from(&x[i..])));
        }
    }
    unreachable!("a primitive word has a Lyndon conjugate")
}

/// Ascending 1-based start positions of occurrences of `u` in `w`.
pub fn occurrences(u: &[u8], w: &[u8]) -> Result<Vec<usize>> {
    if u.is_empty() {
        return Err(Error::EmptyWord("occurrences"));
    }
    if u.len() > w.len() {
        return Ok(Vec::new());
    }
    Ok(w.windows(u.len())
        .enumerate()
        .filter(|(_, win)| *win == u)
        .map(|(i, _)| i + 1)
        .collect())
}

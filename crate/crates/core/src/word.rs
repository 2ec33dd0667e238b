//! Reduced words in finitely generated free groups.
//!
//! A [`Word`] is always freely reduced; every constructor and operation
//! reduces its result, so structural equality is equality in the free group.

use std::fmt;
use std::ops::Mul;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{is_valid_name, Gen};

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: Gen, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    #[inline]
    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }

    /// Sign as `+1` / `-1`.
    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Text token: `name` or `name-`.
    pub fn token(self) -> String {
        if self.inverse {
            format!("{}-", self.gen.name())
        } else {
            self.gen.name().to_owned()
        }
    }

    fn from_token(token: &str) -> Result<Letter> {
        let (name, inverse) = match token.strip_suffix('-') {
            Some(name) => (name, true),
            None => (token, false),
        };
        if !is_valid_name(name) {
            return Err(Error::ParseError(format!("malformed token `{token}`")));
        }
        Ok(Letter::new(Gen::intern(name), inverse))
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Pushes `letter` onto a reduced stack, cancelling against the top.
#[inline]
fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    match stack.last() {
        Some(&top) if top.cancels(letter) => {
            stack.pop();
        }
        _ => stack.push(letter),
    }
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn generator(gen: Gen) -> Word {
        Word {
            letters: vec![Letter::new(gen, false)],
        }
    }

    /// Single generator by name. Panics on an invalid name; meant for literals.
    pub fn gen(name: &str) -> Word {
        Word::generator(Gen::new(name).expect("invalid generator name"))
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let iter = letters.into_iter();
        let mut stack = Vec::with_capacity(iter.size_hint().0);
        for letter in iter {
            push_reduced(&mut stack, letter);
        }
        Word { letters: stack }
    }

    /// Parses whitespace-separated `name` / `name-` tokens.
    pub fn parse(text: &str) -> Result<Word> {
        parse_word(text, None)
    }

    /// Compact notation: lowercase letter is a generator, uppercase its inverse.
    pub fn parse_compact(text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for c in text.chars().filter(|c| !c.is_whitespace()) {
            if !c.is_ascii_alphabetic() {
                return Err(Error::ParseError(format!("`{c}` is not a compact letter")));
            }
            let name = c.to_ascii_lowercase().to_string();
            letters.push(Letter::new(Gen::intern(&name), c.is_ascii_uppercase()));
        }
        Ok(Word::from_letters(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Generators occurring in the word, in order of first appearance.
    pub fn generators(&self) -> Vec<Gen> {
        let mut seen = Vec::new();
        for l in &self.letters {
            if !seen.contains(&l.gen) {
                seen.push(l.gen);
            }
        }
        seen
    }

    pub fn multiply(&self, other: &Word) -> Word {
        // Only the junction can cancel: both halves are already reduced.
        let mut k = 0;
        let n = self.letters.len();
        while k < n.min(other.letters.len()) && self.letters[n - 1 - k].cancels(other.letters[k]) {
            k += 1;
        }
        let mut letters = Vec::with_capacity(n - k + other.letters.len() - k);
        letters.extend_from_slice(&self.letters[..n - k]);
        letters.extend_from_slice(&other.letters[k..]);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// `g · self · g⁻¹`
    pub fn conjugate(&self, g: &Word) -> Word {
        g.multiply(self).multiply(&g.inverse())
    }

    /// `self · v · self⁻¹ · v⁻¹`
    pub fn commutator(&self, v: &Word) -> Word {
        self.multiply(v)
            .multiply(&self.inverse())
            .multiply(&v.inverse())
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core` cyclically
    /// reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k].cancels(self.letters[n - 1 - k]) {
            k += 1;
        }
        (
            Word {
                letters: self.letters[k..n - k].to_vec(),
            },
            Word {
                letters: self.letters[..k].to_vec(),
            },
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&a), Some(&b)) if self.letters.len() > 1 => !a.cancels(b),
            _ => true,
        }
    }

    /// `uv = vu` in the free group.
    pub fn commutes(&self, v: &Word) -> bool {
        self.multiply(v) == v.multiply(self)
    }

    /// `selfⁿ` for any integer `n`, via the cyclic decomposition so that the
    /// cost is linear in the output length.
    pub fn pow(&self, n: i64) -> Word {
        if n == 0 || self.is_identity() {
            return Word::identity();
        }
        let (core, conj) = self.cyclic_reduce();
        let block = if n > 0 { core } else { core.inverse() };
        let reps = n.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(2 * conj.len() + reps * block.len());
        letters.extend_from_slice(&conj.letters);
        for _ in 0..reps {
            letters.extend_from_slice(&block.letters);
        }
        letters.extend(conj.letters.iter().rev().map(|l| l.inv()));
        Word::from_letters(letters)
    }

    /// Replaces every letter through `image`, reducing the result.
    pub fn substitute<F>(&self, mut image: F) -> Result<Word>
    where
        F: FnMut(Gen) -> Result<Word>,
    {
        let mut stack = Vec::new();
        for l in &self.letters {
            let w = image(l.gen)?;
            if l.inverse {
                for &x in w.letters.iter().rev() {
                    push_reduced(&mut stack, x.inv());
                }
            } else {
                for &x in &w.letters {
                    push_reduced(&mut stack, x);
                }
            }
        }
        Ok(Word { letters: stack })
    }

    pub fn tokens(&self) -> Vec<String> {
        self.letters.iter().map(|l| l.token()).collect()
    }
}

/// Parses a word, optionally against a fixed alphabet.
///
/// With an alphabet made only of single lowercase letters, tokens that are
/// not themselves generator names are read in compact notation, so `abAB`
/// and `a b a- b-` denote the same word.
pub fn parse_word(text: &str, alphabet: Option<&[&str]>) -> Result<Word> {
    let compact_ok = alphabet.is_some_and(|names| {
        names.len() <= 26
            && names
                .iter()
                .all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()))
    });
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let name = token.strip_suffix('-').unwrap_or(token);
        match alphabet {
            Some(names) if names.contains(&name) => letters.push(Letter::from_token(token)?),
            Some(names) if compact_ok && token.chars().all(|c| c.is_ascii_alphabetic()) => {
                let expanded = Word::parse_compact(token)?;
                if let Some(bad) = expanded
                    .generators()
                    .into_iter()
                    .find(|g| !names.contains(&g.name()))
                {
                    return Err(Error::UnknownGenerator(bad.name().to_owned()));
                }
                letters.extend_from_slice(expanded.letters());
            }
            Some(_) => {
                let letter = Letter::from_token(token)?;
                return Err(Error::UnknownGenerator(letter.gen.name().to_owned()));
            }
            None => letters.push(Letter::from_token(token)?),
        }
    }
    Ok(Word::from_letters(letters))
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        self.multiply(&rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(l.gen.name())?;
            if l.inverse {
                f.write_str("-")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.letters.len()))?;
        for l in &self.letters {
            seq.serialize_element(&l.token())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Word, D::Error> {
        struct TokenVisitor;
        impl<'de> Visitor<'de> for TokenVisitor {
            type Value = Word;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of generator tokens")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Word, A::Error> {
                let mut letters = Vec::new();
                while let Some(token) = seq.next_element::<String>()? {
                    letters.push(Letter::from_token(&token).map_err(de::Error::custom)?);
                }
                Ok(Word::from_letters(letters))
            }
        }
        deserializer.deserialize_seq(TokenVisitor)
    }
}

//! Words over a generating set: signed letters, parsing and printing, free
//! reduction and the basic first/last/prefix/suffix accessors.

use std::fmt;

use thiserror::Error;

use crate::presentation::{Gen, Presentation};

/// A signed generator. The *name* of a letter is its generator; two letters
/// are essentially different when their names differ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    gen: Gen,
    positive: bool,
}

impl Letter {
    pub fn new(gen: Gen, positive: bool) -> Self {
        Letter { gen, positive }
    }

    pub fn positive(gen: Gen) -> Self {
        Letter::new(gen, true)
    }

    pub fn negative(gen: Gen) -> Self {
        Letter::new(gen, false)
    }

    pub fn name(self) -> Gen {
        self.gen
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            positive: !self.positive,
        }
    }

    pub fn same_name(self, other: Letter) -> bool {
        self.gen == other.gen
    }

    pub fn essentially_different(self, other: Letter) -> bool {
        self.gen != other.gen
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("zero power in token `{0}`")]
    ZeroPower(String),
    #[error("malformed token `{0}`")]
    Malformed(String),
}

/// A finite sequence of letters. Words are immutable values; every operation
/// returns a fresh word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// Parses whitespace-separated tokens `name` or `name^k` with nonzero
    /// integer `k`; a negative `k` contributes `|k|` inverted letters.
    pub fn parse(p: &Presentation, text: &str) -> Result<Self, WordError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, power): (&str, i64) = match tok.find('^') {
                None => (tok, 1),
                Some(pos) => {
                    let (name, rest) = tok.split_at(pos);
                    let power = rest[1..]
                        .parse::<i64>()
                        .map_err(|_| WordError::Malformed(tok.to_string()))?;
                    (name, power)
                }
            };
            let gen = p
                .generator(name)
                .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))?;
            if power == 0 {
                return Err(WordError::ZeroPower(tok.to_string()));
            }
            let letter = Letter::new(gen, power > 0);
            for _ in 0..power.unsigned_abs() {
                letters.push(letter);
            }
        }
        Ok(Word { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> Letter {
        self.letters[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters.iter().copied()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// The word without its last letter; `None` on the empty word.
    pub fn drop_last(&self) -> Option<Word> {
        if self.is_empty() {
            None
        } else {
            Some(Word::from_letters(
                self.letters[..self.len() - 1].to_vec(),
            ))
        }
    }

    /// The word without its first letter; `None` on the empty word.
    pub fn drop_first(&self) -> Option<Word> {
        if self.is_empty() {
            None
        } else {
            Some(Word::from_letters(self.letters[1..].to_vec()))
        }
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word::from_letters(self.letters[start..end].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn push(&self, letter: Letter) -> Word {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Word { letters }
    }

    /// Reverses the word and flips every sign.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| l.inverse())
                .collect(),
        }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters
            .windows(2)
            .all(|w| w[0] != w[1].inverse())
    }

    /// Iterated cancellation of adjacent inverse pairs. The result is the
    /// unique freely reduced word equivalent to `self`; cancellation order
    /// does not matter.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    /// Printable form using the token grammar; needs the presentation for
    /// generator names.
    pub fn display<'a>(&'a self, p: &'a Presentation) -> WordDisplay<'a> {
        WordDisplay { word: self, p }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word {
            letters: iter.into_iter().collect(),
        }
    }
}

/// Run-length display: `a a a` prints as `a^3`, single negatives as `a^-1`.
pub struct WordDisplay<'a> {
    word: &'a Word,
    p: &'a Presentation,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = self.p.name(l.name());
            let exp = if l.is_positive() {
                run as i64
            } else {
                -(run as i64)
            };
            if exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i += run;
        }
        Ok(())
    }
}

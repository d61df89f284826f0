use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A generator `g_i` or its inverse. Generators are numbered from 0
/// internally and printed from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(generator: usize) -> Self {
        Letter {
            generator,
            inverse: false,
        }
    }

    pub fn inv(generator: usize) -> Self {
        Letter {
            generator,
            inverse: true,
        }
    }

    pub fn inverted(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Position in the alphabet `g1, g1^-1, g2, g2^-1, …`.
    pub fn index(self) -> usize {
        2 * self.generator + self.inverse as usize
    }

    pub fn from_index(k: usize) -> Self {
        Letter {
            generator: k / 2,
            inverse: k % 2 == 1,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.generator + 1)?;
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse("word", format!("bad letter {s:?}"));
        let body = s.trim().strip_prefix('g').ok_or_else(bad)?;
        let (num, inverse) = match body.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (body, false),
        };
        let k: usize = num.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(Letter {
            generator: k - 1,
            inverse,
        })
    }
}

/// A reduced word; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if let Some(i) = letters.windows(2).position(|w| w[0] == w[1].inverted()) {
            return Err(Error::NotReduced(i + 1));
        }
        Ok(Word(letters))
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// Free reduction of the concatenation.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// `ℓ · self` when that is reduced.
    pub fn prepend(&self, l: Letter) -> Option<Word> {
        if self.first() == Some(l.inverted()) {
            return None;
        }
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(l);
        v.extend_from_slice(&self.0);
        Some(Word(v))
    }

    /// `self · ℓ` when that is reduced.
    pub fn append(&self, l: Letter) -> Option<Word> {
        if self.last() == Some(l.inverted()) {
            return None;
        }
        let mut v = self.0.clone();
        v.push(l);
        Some(Word(v))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn tail(&self) -> Word {
        Word(self.0.get(1..).unwrap_or_default().to_vec())
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Words made of generators only (no inverses).
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|l| !l.inverse)
    }

    pub fn pow(&self, n: usize) -> Word {
        (0..n).fold(Word::identity(), |acc, _| acc.mul(self))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("id");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "id" || s.is_empty() {
            return Ok(Word::identity());
        }
        let letters = s.split('*').map(str::parse).collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }
}

/// Number of reduced words of length `n` in a free group of rank `rank`.
pub fn reduced_word_count(rank: usize, n: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    let k = 2 * rank as u128;
    k * (k - 1).pow(n as u32 - 1)
}

/// All reduced words of a given length in lexicographic order of the
/// alphabet `g1 < g1^-1 < g2 < …`.
#[derive(Clone, Debug)]
pub struct ReducedWords {
    alphabet: usize,
    current: Option<Vec<usize>>,
    fresh: bool,
}

impl ReducedWords {
    pub fn new(rank: usize, length: usize) -> Self {
        let alphabet = 2 * rank;
        let current = if length > 0 && alphabet == 0 {
            None
        } else {
            let mut v = Vec::with_capacity(length);
            for i in 0..length {
                v.push(Self::smallest_after(i.checked_sub(1).map(|j| v[j])));
            }
            Some(v)
        };
        ReducedWords {
            alphabet,
            current,
            fresh: true,
        }
    }

    fn smallest_after(prev: Option<usize>) -> usize {
        match prev {
            Some(1) => 1,
            _ => 0,
        }
    }

    fn advance(&mut self) {
        let Some(v) = self.current.as_mut() else { return };
        let n = v.len();
        let mut pos = n;
        while pos > 0 {
            let i = pos - 1;
            let prev = i.checked_sub(1).map(|j| v[j]);
            let mut next = v[i] + 1;
            if prev.is_some_and(|p| next == p ^ 1) {
                next += 1;
            }
            if next < self.alphabet {
                v[i] = next;
                for j in i + 1..n {
                    v[j] = Self::smallest_after(Some(v[j - 1]));
                }
                return;
            }
            pos -= 1;
        }
        self.current = None;
    }
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.fresh {
            self.fresh = false;
        } else {
            self.advance();
        }
        self.current
            .as_ref()
            .map(|v| Word(v.iter().map(|&k| Letter::from_index(k)).collect()))
    }
}

/// All reduced words of length `<= max_len`, shortest first.
pub fn words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|n| ReducedWords::new(rank, n)).collect()
}

/// All positive words of a given length (`rank^length` of them).
pub fn positive_words(rank: usize, length: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    for _ in 0..length {
        out = out
            .iter()
            .flat_map(|w| (0..rank).map(move |g| Word({
                let mut v = w.0.clone();
                v.push(Letter::gen(g));
                v
            })))
            .collect();
    }
    out
}

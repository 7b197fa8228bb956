//! Alphabets with opaque symbols.
//!
//! Regular languages over `{a,b,c}`, derived alphabets whose letters are
//! whole words (the length-s blocks of a stable stamp), and trace alphabets
//! whose letters are monoid elements all share one representation: an indexed
//! list of distinct symbol names. Words are sequences of letter ids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type LetterId = usize;
pub type Word = Vec<LetterId>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new(symbols: Vec<String>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::input("alphabet must be nonempty"));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::input("alphabet symbols must be nonempty"));
            }
            if symbols[..i].contains(s) {
                return Err(Error::input(format!("duplicate alphabet symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn of_chars(chars: impl IntoIterator<Item = char>) -> Self {
        let symbols: Vec<String> = chars.into_iter().map(String::from).collect();
        Alphabet::new(symbols).expect("char alphabets are built from distinct letters")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, id: LetterId) -> &str {
        &self.symbols[id]
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|s| s.as_str())
    }

    pub fn id_of(&self, symbol: &str) -> Option<LetterId> {
        self.symbols.iter().position(|s| s == symbol)
    }

    /// True when every symbol is a single character, so words can be written
    /// without separators.
    pub fn is_char_alphabet(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Tokenize `text` into letter ids. Whitespace always separates tokens;
    /// between whitespace the longest symbol matching the remaining input is
    /// taken, which covers both plain char alphabets ("abacc") and derived
    /// ones ("T2T1" or "aa ab").
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut word = Word::new();
        let mut rest = text;
        let total = text.len();
        loop {
            rest = rest.trim_start();
            if rest.is_empty() {
                return Ok(word);
            }
            let pos = total - rest.len();
            let best = self
                .symbols
                .iter()
                .enumerate()
                .filter(|(_, s)| rest.starts_with(s.as_str()))
                .max_by_key(|(_, s)| s.len());
            match best {
                Some((id, s)) => {
                    word.push(id);
                    rest = &rest[s.len()..];
                }
                None => {
                    return Err(Error::Syntax {
                        pos,
                        msg: format!("no alphabet symbol matches {:?}", rest.chars().take(8).collect::<String>()),
                    })
                }
            }
        }
    }

    /// Render a word. Single-char alphabets concatenate the letters; derived
    /// alphabets parenthesize each token so block boundaries stay visible.
    pub fn format_word(&self, word: &[LetterId]) -> String {
        if self.is_char_alphabet() {
            word.iter().map(|&id| self.symbols[id].as_str()).collect()
        } else {
            word.iter().map(|&id| format!("({})", self.symbols[id])).collect()
        }
    }

    /// All words of the given length, in lexicographic order of letter ids.
    pub fn words_of_length(&self, len: usize) -> WordsIter<'_> {
        WordsIter { alphabet: self, next: Some(vec![0; len]), len }
    }

    pub fn check_letter(&self, id: LetterId) -> Result<()> {
        if id < self.symbols.len() {
            Ok(())
        } else {
            Err(Error::input(format!("letter id {id} out of range for alphabet of size {}", self.symbols.len())))
        }
    }
}

pub struct WordsIter<'a> {
    alphabet: &'a Alphabet,
    next: Option<Word>,
    len: usize,
}

impl Iterator for WordsIter<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let base = self.alphabet.len();
        let mut i = self.len;
        loop {
            if i == 0 {
                break; // odometer overflow: this was the last word
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < base {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

//! Regular expressions: union `+`, juxtaposition for concatenation, postfix
//! `*` and `~` (iteration and nonempty iteration), parentheses, single
//! alphanumeric letters, and the constants `∅` and `ε`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Epsilon,
    Letter(char),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
}

impl Regex {
    pub fn parse(text: &str) -> Result<Regex> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut p = Parser { chars: &chars, pos: 0, len: text.len() };
        let re = p.union()?;
        if p.pos < p.chars.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(re)
    }

    /// Letters occurring in the expression, sorted.
    pub fn letters(&self) -> BTreeSet<char> {
        let mut set = BTreeSet::new();
        self.collect_letters(&mut set);
        set
    }

    fn collect_letters(&self, set: &mut BTreeSet<char>) {
        match self {
            Regex::Empty | Regex::Epsilon => {}
            Regex::Letter(c) => {
                set.insert(*c);
            }
            Regex::Union(a, b) | Regex::Concat(a, b) => {
                a.collect_letters(set);
                b.collect_letters(set);
            }
            Regex::Star(a) | Regex::Plus(a) => a.collect_letters(set),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Regex::Union(..) => 1,
            Regex::Concat(..) => 2,
            Regex::Star(..) | Regex::Plus(..) => 3,
            Regex::Empty | Regex::Epsilon | Regex::Letter(_) => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.prec() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Regex::Empty => f.write_str("∅")?,
            Regex::Epsilon => f.write_str("ε")?,
            Regex::Letter(c) => write!(f, "{c}")?,
            Regex::Union(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str("+")?;
                b.fmt_prec(f, 1)?;
            }
            Regex::Concat(a, b) => {
                a.fmt_prec(f, 2)?;
                b.fmt_prec(f, 2)?;
            }
            Regex::Star(a) => {
                a.fmt_prec(f, 3)?;
                f.write_str("*")?;
            }
            Regex::Plus(a) => {
                a.fmt_prec(f, 3)?;
                f.write_str("~")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

struct Parser<'a> {
    chars: &'a [(usize, char)],
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(o, _)| o)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.offset(), msg: msg.to_string() }
    }

    fn union(&mut self) -> Result<Regex> {
        let mut acc = self.concat()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            let rhs = self.concat()?;
            acc = Regex::Union(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut acc = self.postfix()?;
        while matches!(self.peek(), Some(c) if c == '(' || c == '∅' || c == 'ε' || c.is_alphanumeric()) {
            let rhs = self.postfix()?;
            acc = Regex::Concat(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Regex> {
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = Regex::Star(Box::new(acc));
                }
                Some('~') => {
                    self.pos += 1;
                    acc = Regex::Plus(Box::new(acc));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn atom(&mut self) -> Result<Regex> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('∅') => {
                self.pos += 1;
                Ok(Regex::Empty)
            }
            Some('ε') => {
                self.pos += 1;
                Ok(Regex::Epsilon)
            }
            Some(c) if c.is_alphanumeric() => {
                self.pos += 1;
                Ok(Regex::Letter(c))
            }
            Some(_) => Err(self.err("expected a letter, '(', '∅', or 'ε'")),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

//! Strongly unambiguous monomials.
//!
//! A SUM expression denotes either `A*` for an alphabet subset `A`, or a
//! marked concatenation `L1 a L2` in which the marker letter `a` is banned
//! from one side. The ban makes the marker occurrence in any word locatable
//! without search (first occurrence when the left side avoids it, last when
//! the right side does), which is what the closure constructions and the
//! program compression exploit.
//!
//! Levels: `A*` has level 0, a split of levels i and j has level i + j + 1.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::alphabet::{Alphabet, LetterId};
use crate::error::{Error, Result};
use crate::reglang::{Dfa, Nfa};

mod closure;
mod compress;
mod zk;

pub use closure::{sum_inverse_morphism, sum_quotient, QuotientSide};
pub use compress::{
    compress_for_sum, compress_program, derive_mk_certificate, BoolCombo,
};
pub use zk::{count_bound, k_language, k_member, mk_stamp, random_kset, y_alphabet, zk_expr, KSet};

/// Which side of a split is banned from containing the marker letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Avoidance {
    LeftAvoids,
    RightAvoids,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SumExpr {
    Star(BTreeSet<LetterId>),
    Split { left: Box<SumExpr>, marker: LetterId, right: Box<SumExpr>, side: Avoidance },
}

impl SumExpr {
    pub fn star(letters: impl IntoIterator<Item = LetterId>) -> SumExpr {
        SumExpr::Star(letters.into_iter().collect())
    }

    /// Checked split constructor: rejects a marker that occurs in the letters
    /// of the avoiding side. The check is structural (letter occurrence in
    /// the expression), which is the invariant every operation here relies on.
    pub fn split(left: SumExpr, marker: LetterId, right: SumExpr, side: Avoidance) -> Result<SumExpr> {
        let banned = match side {
            Avoidance::LeftAvoids => left.letters(),
            Avoidance::RightAvoids => right.letters(),
        };
        if banned.contains(&marker) {
            return Err(Error::input(format!(
                "marker letter {marker} occurs on the side that must avoid it"
            )));
        }
        Ok(SumExpr::Split { left: Box::new(left), marker, right: Box::new(right), side })
    }

    /// Level of this tree shape: stars are 0, a split is left + right + 1.
    pub fn level(&self) -> usize {
        match self {
            SumExpr::Star(_) => 0,
            SumExpr::Split { left, right, .. } => left.level() + right.level() + 1,
        }
    }

    /// Letters occurring anywhere in the expression.
    pub fn letters(&self) -> BTreeSet<LetterId> {
        let mut set = BTreeSet::new();
        self.collect_letters(&mut set);
        set
    }

    fn collect_letters(&self, set: &mut BTreeSet<LetterId>) {
        match self {
            SumExpr::Star(a) => set.extend(a.iter().copied()),
            SumExpr::Split { left, marker, right, .. } => {
                left.collect_letters(set);
                set.insert(*marker);
                right.collect_letters(set);
            }
        }
    }

    /// Reversal: the mirror denotes { reverse(w) | w in the language } and
    /// swaps the avoidance tags. Used to derive right-sided constructions
    /// from left-sided ones.
    pub fn mirror(&self) -> SumExpr {
        match self {
            SumExpr::Star(a) => SumExpr::Star(a.clone()),
            SumExpr::Split { left, marker, right, side } => {
                let flipped = match side {
                    Avoidance::LeftAvoids => Avoidance::RightAvoids,
                    Avoidance::RightAvoids => Avoidance::LeftAvoids,
                };
                SumExpr::Split {
                    left: Box::new(right.mirror()),
                    marker: *marker,
                    right: Box::new(left.mirror()),
                    side: flipped,
                }
            }
        }
    }

    /// Checks the avoidance invariant on every split and that all letters fit
    /// inside an alphabet of `letters` symbols.
    pub fn validate(&self, letters: usize) -> Result<()> {
        if let Some(&max) = self.letters().iter().max() {
            if max >= letters {
                return Err(Error::input(format!(
                    "expression uses letter id {max}, alphabet has {letters} symbols"
                )));
            }
        }
        self.validate_splits()
    }

    fn validate_splits(&self) -> Result<()> {
        match self {
            SumExpr::Star(_) => Ok(()),
            SumExpr::Split { left, marker, right, side } => {
                let banned = match side {
                    Avoidance::LeftAvoids => left.letters(),
                    Avoidance::RightAvoids => right.letters(),
                };
                if banned.contains(marker) {
                    return Err(Error::input(format!(
                        "marker letter {marker} occurs on the side that must avoid it"
                    )));
                }
                left.validate_splits()?;
                right.validate_splits()
            }
        }
    }
}

pub fn sum_level(e: &SumExpr) -> usize {
    e.level()
}

/// Compile to a minimal DFA over the given alphabet.
pub fn compile_sum(e: &SumExpr, alphabet: &Alphabet) -> Result<Dfa> {
    e.validate(alphabet.len())?;
    let mut nfa = Nfa::new(alphabet.clone());
    let start = nfa.add_state(false);
    let end = nfa.add_state(true);
    nfa.initials.push(start);
    build_nfa(&mut nfa, e, start, end);
    Ok(nfa.determinize().minimize())
}

fn build_nfa(nfa: &mut Nfa, e: &SumExpr, from: usize, to: usize) {
    match e {
        SumExpr::Star(letters) => {
            let hub = nfa.add_state(false);
            nfa.eps[from].push(hub);
            nfa.eps[hub].push(to);
            for &a in letters {
                nfa.edges[hub].push((a, hub));
            }
        }
        SumExpr::Split { left, marker, right, .. } => {
            let mid1 = nfa.add_state(false);
            let mid2 = nfa.add_state(false);
            build_nfa(nfa, left, from, mid1);
            nfa.edges[mid1].push((*marker, mid2));
            build_nfa(nfa, right, mid2, to);
        }
    }
}

pub fn sum_member(e: &SumExpr, alphabet: &Alphabet, w: &[LetterId]) -> Result<bool> {
    for &a in w {
        alphabet.check_letter(a)?;
    }
    Ok(compile_sum(e, alphabet)?.accepts(w))
}

/// Render in the textual format `STAR{a,b}` / `SPLIT(left, 'a', right, L|R)`,
/// with `L` meaning the left side avoids the marker.
pub fn format_sum(e: &SumExpr, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    write_sum(&mut out, e, alphabet);
    out
}

fn write_sum(out: &mut String, e: &SumExpr, alphabet: &Alphabet) {
    match e {
        SumExpr::Star(letters) => {
            out.push_str("STAR{");
            for (i, &a) in letters.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(alphabet.symbol(a));
            }
            out.push('}');
        }
        SumExpr::Split { left, marker, right, side } => {
            out.push_str("SPLIT(");
            write_sum(out, left, alphabet);
            let _ = write!(out, ", '{}', ", alphabet.symbol(*marker));
            write_sum(out, right, alphabet);
            out.push_str(match side {
                Avoidance::LeftAvoids => ", L)",
                Avoidance::RightAvoids => ", R)",
            });
        }
    }
}

pub fn parse_sum(text: &str, alphabet: &Alphabet) -> Result<SumExpr> {
    let mut p = SumParser { text, pos: 0, alphabet };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    e.validate(alphabet.len())?;
    Ok(e)
}

struct SumParser<'a> {
    text: &'a str,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl SumParser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.err(format!("expected {token:?}")))
        }
    }

    fn expr(&mut self) -> Result<SumExpr> {
        self.skip_ws();
        if self.text[self.pos..].starts_with("STAR") {
            self.eat("STAR")?;
            self.eat("{")?;
            let mut letters = BTreeSet::new();
            self.skip_ws();
            if !self.text[self.pos..].starts_with('}') {
                loop {
                    letters.insert(self.letter_until(&[',', '}'])?);
                    self.skip_ws();
                    if self.text[self.pos..].starts_with(',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.eat("}")?;
            Ok(SumExpr::Star(letters))
        } else if self.text[self.pos..].starts_with("SPLIT") {
            self.eat("SPLIT")?;
            self.eat("(")?;
            let left = self.expr()?;
            self.eat(",")?;
            self.eat("'")?;
            let marker = self.letter_until(&['\''])?;
            self.eat("'")?;
            self.eat(",")?;
            let right = self.expr()?;
            self.eat(",")?;
            self.skip_ws();
            let side = if self.text[self.pos..].starts_with('L') {
                Avoidance::LeftAvoids
            } else if self.text[self.pos..].starts_with('R') {
                Avoidance::RightAvoids
            } else {
                return Err(self.err("expected avoidance tag L or R"));
            };
            self.pos += 1;
            self.eat(")")?;
            SumExpr::split(left, marker, right, side)
        } else {
            Err(self.err("expected STAR or SPLIT"))
        }
    }

    fn letter_until(&mut self, stops: &[char]) -> Result<LetterId> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest
            .char_indices()
            .find(|(_, c)| stops.contains(c))
            .map(|(i, _)| i)
            .ok_or_else(|| self.err("unterminated letter"))?;
        let symbol = rest[..end].trim();
        let id = self
            .alphabet
            .id_of(symbol)
            .ok_or_else(|| self.err(format!("unknown letter {symbol:?}")))?;
        self.pos += end;
        Ok(id)
    }
}

/// Shorthand used throughout the tests: b*a(a+b)* as a level-1 split.
#[cfg(test)]
pub(crate) fn b_star_a_any() -> SumExpr {
    SumExpr::split(SumExpr::star([1]), 0, SumExpr::star([0, 1]), Avoidance::LeftAvoids).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reglang::compile_regex;

    fn ab() -> Alphabet {
        Alphabet::of_chars("ab".chars())
    }

    #[test]
    fn star_and_split_membership() {
        let e = SumExpr::star([0, 1]);
        assert!(sum_member(&e, &ab(), &[0, 1, 1, 0]).unwrap());
        assert_eq!(e.level(), 0);

        let e = b_star_a_any();
        assert_eq!(e.level(), 1);
        let dfa = compile_sum(&e, &ab()).unwrap();
        let oracle = compile_regex("b*a(a+b)*").unwrap();
        assert!(dfa.equivalent(&oracle).unwrap());
        assert!(sum_member(&e, &ab(), &[1, 0]).unwrap());
        assert!(!sum_member(&e, &ab(), &[1, 1]).unwrap());
    }

    #[test]
    fn empty_star_is_epsilon() {
        let e = SumExpr::star([]);
        assert!(sum_member(&e, &ab(), &[]).unwrap());
        assert!(!sum_member(&e, &ab(), &[0]).unwrap());
    }

    #[test]
    fn split_constructor_enforces_avoidance() {
        assert!(SumExpr::split(
            SumExpr::star([0]),
            0,
            SumExpr::star([1]),
            Avoidance::LeftAvoids
        )
        .is_err());
        // the same marker is fine when the other side carries it
        assert!(SumExpr::split(
            SumExpr::star([0]),
            0,
            SumExpr::star([1]),
            Avoidance::RightAvoids
        )
        .is_ok());
    }

    #[test]
    fn mirror_reverses_the_language() {
        let e = b_star_a_any();
        let m = e.mirror();
        let dfa = compile_sum(&m, &ab()).unwrap();
        let oracle = compile_regex("(a+b)*ab*").unwrap();
        assert!(dfa.equivalent(&oracle).unwrap());
        assert_eq!(m.mirror(), e);
    }

    #[test]
    fn levels_add_up_across_splits() {
        let inner = b_star_a_any();
        let e = SumExpr::split(SumExpr::star([1]), 0, inner.mirror(), Avoidance::LeftAvoids);
        // marker a occurs in the mirrored right side only
        let e = e.unwrap();
        assert_eq!(e.level(), 2);
    }

    #[test]
    fn text_format_round_trips() {
        let ab = ab();
        let e = b_star_a_any();
        let text = format_sum(&e, &ab);
        assert_eq!(text, "SPLIT(STAR{b}, 'a', STAR{a,b}, L)");
        assert_eq!(parse_sum(&text, &ab).unwrap(), e);

        let star = parse_sum("STAR{}", &ab).unwrap();
        assert_eq!(star, SumExpr::star([]));
        assert!(parse_sum("SPLIT(STAR{a}, 'a', STAR{b}, L)", &ab).is_err());
    }
}

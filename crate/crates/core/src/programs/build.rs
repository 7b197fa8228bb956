//! Program constructions: the single-position checks and middle scans that
//! assemble into a recognizer for any language of an essentially-V stamp,
//! and the out-of-order trick recognizing (a+b)*ac+ over a subword monoid.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{FiniteMonoid, VarietyId};
use crate::alphabet::{Alphabet, LetterId, Word};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::reglang::{compile_regex, is_essentially_v, syntactic_stamp, Stamp};

use super::{Instruction, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Prefix,
    Suffix,
}

/// One instruction checking whether position k from the chosen end carries
/// the letter `a`: a match emits a fixed non-identity element z, anything
/// else the identity, and F = {z} accepts exactly the matches.
pub fn build_position_check(
    alphabet: &Alphabet,
    n: usize,
    k: usize,
    a: LetterId,
    side: Side,
    monoid: Option<Arc<FiniteMonoid>>,
) -> Result<(Program, BTreeSet<usize>)> {
    if k == 0 {
        return Err(Error::input("positions are 1-based"));
    }
    alphabet.check_letter(a)?;
    let monoid = monoid.unwrap_or_else(|| Arc::new(FiniteMonoid::u1()));
    if monoid.size() < 2 {
        return Err(Error::input("a position check needs a nontrivial monoid"));
    }
    if n < k {
        // no length-n word has a k-th position from either end
        return Ok((Program::empty(n, alphabet.clone(), monoid), BTreeSet::new()));
    }
    let z = (0..monoid.size()).find(|&x| x != monoid.identity()).unwrap();
    let position = match side {
        Side::Prefix => k,
        Side::Suffix => n + 1 - k,
    };
    let map = (0..alphabet.len()).map(|b| if b == a { z } else { monoid.identity() }).collect();
    let program =
        Program::new(n, alphabet.clone(), monoid, vec![Instruction { position, map }])?;
    Ok((program, BTreeSet::from([z])))
}

/// Reads positions s+1 .. n-s through the stamp, skipping both length-s
/// windows; empty when no middle exists.
pub fn build_middle_scan(mu: &Stamp, s: usize, n: usize) -> Program {
    if n <= 2 * s {
        return Program::empty(n, mu.alphabet().clone(), Arc::clone(mu.monoid()));
    }
    let map = mu.images().to_vec();
    let instructions =
        (s + 1..=n - s).map(|p| Instruction { position: p, map: map.clone() }).collect();
    Program { range: n, alphabet: mu.alphabet().clone(), monoid: Arc::clone(mu.monoid()), instructions }
}

/// A U_1 program that stays at the identity exactly when the input agrees
/// with `word` on positions offset+1 .. offset+|word|.
fn exact_window(alphabet: &Alphabet, n: usize, offset: usize, word: &[LetterId]) -> Program {
    let monoid = Arc::new(FiniteMonoid::u1());
    let instructions = word
        .iter()
        .enumerate()
        .map(|(j, &a)| Instruction {
            position: offset + j + 1,
            map: (0..alphabet.len()).map(|b| usize::from(b != a)).collect(),
        })
        .collect();
    Program { range: n, alphabet: alphabet.clone(), monoid, instructions }
}

/// Mixed-radix decoding of an element of a left-folded direct product.
fn decode(mut index: usize, sizes: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; sizes.len()];
    for (d, &size) in digits.iter_mut().zip(sizes).rev() {
        *d = index % size;
        index /= size;
    }
    digits
}

/// For an essentially-V stamp, membership of xuy in the language depends
/// only on the windows x, y and the class of u in the canonical quotient N.
/// The program pairs one U_1 window detector per useful (x, y) with a single
/// scan of the middle through N; the acceptance set reads off the matching
/// triple. Below the window threshold the language is a finite set of words,
/// each detected by its own U_1 coordinate.
pub fn build_essentially_v_program(
    phi: &Stamp,
    variety: VarietyId,
    accept: &BTreeSet<usize>,
    n: usize,
    cfg: &Config,
) -> Result<(Program, BTreeSet<usize>)> {
    for &x in accept {
        phi.monoid().check_element(x)?;
    }
    let decision = is_essentially_v(phi, variety, cfg)?;
    if !decision.holds {
        return Err(Error::input(format!(
            "stamp is not essentially {}, no decomposition exists",
            variety.name()
        )));
    }
    let s = decision.stability_index;
    let alphabet = phi.alphabet();

    if n < 2 * s {
        // all of Sigma^n is at most |Sigma|^(2s-1) words; detect each member
        let cap_check = (alphabet.len() as u64).checked_pow(n as u32);
        if cap_check.map_or(true, |c| c > cfg.enumeration_cap) {
            return Err(Error::resource("short-word enumeration exceeds the cap"));
        }
        let members: Vec<Word> =
            alphabet.words_of_length(n).filter(|w| accept.contains(&phi.eval(w))).collect();
        let mut program =
            Program::empty(n, alphabet.clone(), Arc::new(FiniteMonoid::trivial()));
        let mut sizes = vec![1];
        for w in &members {
            program = program.product_combine(&exact_window(alphabet, n, 0, w), cfg)?;
            sizes.push(2);
        }
        let accepted = (0..program.monoid().size())
            .filter(|&t| decode(t, &sizes).iter().skip(1).any(|&d| d == 0))
            .collect();
        return Ok((program, accepted));
    }

    let quotient = &decision.quotient;
    let nq = &quotient.monoid;
    // one representative element per class lifts the membership test
    let mut rep = vec![usize::MAX; nq.size()];
    for (e, &c) in quotient.projection.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = e;
        }
    }
    let window_count = (alphabet.len() as u64).checked_pow(s as u32);
    if window_count.map_or(true, |c| c > cfg.enumeration_cap) {
        return Err(Error::resource("window enumeration exceeds the cap"));
    }
    let windows: Vec<Word> = alphabet.words_of_length(s).collect();
    // triples (x, m, y) whose words belong to the language
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    for (xi, x) in windows.iter().enumerate() {
        let px = phi.eval(x);
        for (yi, y) in windows.iter().enumerate() {
            let py = phi.eval(y);
            let mut any = false;
            for m in 0..nq.size() {
                if accept.contains(&phi.monoid().mul(phi.monoid().mul(px, rep[m]), py)) {
                    triples.push((xi, m, yi));
                    any = true;
                }
            }
            if any {
                pairs.push((xi, yi));
            }
        }
    }

    let mut program = Program::empty(n, alphabet.clone(), Arc::new(FiniteMonoid::trivial()));
    let mut sizes = vec![1];
    for &(xi, yi) in &pairs {
        let mut window = exact_window(alphabet, n, 0, &windows[xi]);
        window
            .instructions
            .extend(exact_window(alphabet, n, n - s, &windows[yi]).instructions);
        program = program.product_combine(&window, cfg)?;
        sizes.push(2);
    }
    program = program.product_combine(&build_middle_scan(&quotient.stamp, s, n), cfg)?;
    sizes.push(nq.size());

    let pair_slot =
        |xi: usize, yi: usize| 1 + pairs.iter().position(|&p| p == (xi, yi)).unwrap();
    let accepted = (0..program.monoid().size())
        .filter(|&t| {
            let digits = decode(t, &sizes);
            let m = *digits.last().unwrap();
            triples
                .iter()
                .any(|&(xi, tm, yi)| tm == m && digits[pair_slot(xi, yi)] == 0)
        })
        .collect();
    Ok((program, accepted))
}

/// The program (2,phi)(1,phi)(3,phi)(2,phi)...(n,phi)(n-1,phi) over the
/// syntactic monoid of L = "has ca as a subword, but neither cca, caa nor
/// cb". Reading neighbours swapped turns the length-n slice of (a+b)*ac+
/// into membership in L, a language a subword-defined (hence J) monoid
/// recognizes — even though no morphism over J recognizes (a+b)*ac+ itself.
pub fn build_j_trick(n: usize, cfg: &Config) -> Result<(Program, BTreeSet<usize>)> {
    if n < 2 {
        return Err(Error::input("the swap trick needs range at least 2"));
    }
    let (stamp, accept) = j_trick_stamp(cfg)?;
    let map = stamp.images().to_vec();
    let mut instructions = Vec::with_capacity(2 * (n - 1));
    for i in 2..=n {
        instructions.push(Instruction { position: i, map: map.clone() });
        instructions.push(Instruction { position: i - 1, map: map.clone() });
    }
    let program = Program {
        range: n,
        alphabet: stamp.alphabet().clone(),
        monoid: Arc::clone(stamp.monoid()),
        instructions,
    };
    Ok((program, accept))
}

/// Syntactic stamp of the subword-defined target language of the trick.
pub fn j_trick_stamp(cfg: &Config) -> Result<(Stamp, BTreeSet<usize>)> {
    let has = |w: &str| -> Result<crate::reglang::Dfa> {
        let mut pattern = String::from("(a+b+c)*");
        for ch in w.chars() {
            pattern.push(ch);
            pattern.push_str("(a+b+c)*");
        }
        compile_regex(&pattern)
    };
    let mut dfa = has("ca")?;
    for forbidden in ["cca", "caa", "cb"] {
        let without = has(forbidden)?.complement();
        dfa = dfa.product(&without, |x, y| x && y)?;
    }
    syntactic_stamp(&dfa.minimize(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reglang::syntactic_stamp_of_regex;

    #[test]
    fn position_check_detects_one_letter() {
        let cfg = Config::default();
        let alphabet = Alphabet::of_chars(['a', 'b']);
        let a = alphabet.id_of("a").unwrap();
        let (p, f) = build_position_check(&alphabet, 3, 1, a, Side::Prefix, None).unwrap();
        let reference = compile_regex("a(a+b)(a+b)").unwrap();
        assert!(p.recognizes_exhaustive(&f, &reference, &cfg).unwrap().ok);

        let (p, f) = build_position_check(&alphabet, 3, 1, a, Side::Suffix, None).unwrap();
        let reference = compile_regex("(a+b)(a+b)a").unwrap();
        assert!(p.recognizes_exhaustive(&f, &reference, &cfg).unwrap().ok);

        // n < k: empty program, empty acceptance set, empty language
        let (p, f) = build_position_check(&alphabet, 2, 3, a, Side::Prefix, None).unwrap();
        assert!(p.is_empty() && f.is_empty());
    }

    #[test]
    fn middle_scan_reads_the_middle() {
        let (stamp, _) = syntactic_stamp_of_regex("(c+ab)*", &Config::default()).unwrap();
        assert!(build_middle_scan(&stamp, 2, 4).is_empty());
        let p = build_middle_scan(&stamp, 1, 5);
        assert_eq!(p.len(), 3);
        for w in stamp.alphabet().words_of_length(5) {
            assert_eq!(p.eval(&w).unwrap(), stamp.eval(&w[1..4]));
        }
    }

    #[test]
    fn essentially_v_program_recognizes_a_prefix_language() {
        let cfg = Config::default();
        let dfa = compile_regex("a(a+b)*").unwrap();
        let (stamp, accept) = syntactic_stamp(&dfa, &cfg).unwrap();
        for n in 0..=4 {
            let (p, f) = build_essentially_v_program(&stamp, VarietyId::TrivialI, &accept, n, &cfg).unwrap();
            let check = p.recognizes_exhaustive(&f, &dfa, &cfg).unwrap();
            assert!(check.ok, "length {n}: {:?}", check.counterexample);
        }
    }

    #[test]
    fn essentially_v_program_full_and_empty_sets() {
        let cfg = Config::default();
        let dfa = compile_regex("a(a+b)*").unwrap();
        let (stamp, _) = syntactic_stamp(&dfa, &cfg).unwrap();
        let empty: BTreeSet<usize> = BTreeSet::new();
        let every: BTreeSet<usize> = (0..stamp.monoid().size()).collect();
        let (p, f) = build_essentially_v_program(&stamp, VarietyId::TrivialI, &empty, 3, &cfg).unwrap();
        for w in stamp.alphabet().words_of_length(3) {
            assert!(!f.contains(&p.eval(&w).unwrap()));
        }
        let (p, f) = build_essentially_v_program(&stamp, VarietyId::TrivialI, &every, 3, &cfg).unwrap();
        for w in stamp.alphabet().words_of_length(3) {
            assert!(f.contains(&p.eval(&w).unwrap()));
        }
    }

    #[test]
    fn essentially_v_program_needs_the_property() {
        let cfg = Config::default();
        let (stamp, accept) = syntactic_stamp_of_regex("(a+b)*b(a+b)*a(a+b)*", &cfg).unwrap();
        assert!(build_essentially_v_program(&stamp, VarietyId::TrivialI, &accept, 3, &cfg).is_err());
    }

    #[test]
    fn j_trick_matches_the_worked_inputs() {
        let cfg = Config::default();
        let (p, f) = build_j_trick(5, &cfg).unwrap();
        assert_eq!(p.len(), 8);
        assert!(f.contains(&p.eval_str("abacc").unwrap()));
        assert!(!f.contains(&p.eval_str("abbcc").unwrap()));
        let (p, f) = build_j_trick(6, &cfg).unwrap();
        assert!(!f.contains(&p.eval_str("abacca").unwrap()));
        assert!(build_j_trick(1, &cfg).is_err());
    }

    #[test]
    fn j_trick_recognizes_ac_plus_at_every_small_length() {
        let cfg = Config::default();
        let reference = compile_regex("(a+b)*ac~").unwrap();
        for n in 2..=8 {
            let (p, f) = build_j_trick(n, &cfg).unwrap();
            let check = p.recognizes_exhaustive(&f, &reference, &cfg).unwrap();
            assert!(check.ok, "length {n}: {:?}", check.counterexample);
        }
    }

    #[test]
    fn j_trick_monoid_is_in_j() {
        let cfg = Config::default();
        let (stamp, _) = j_trick_stamp(&cfg).unwrap();
        assert!(stamp.monoid().satisfies_variety(VarietyId::J));
    }
}

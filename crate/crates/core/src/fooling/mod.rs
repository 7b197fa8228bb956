//! Masks and fooling pairs for programs over monoids in DA.
//!
//! A mask leaves some input positions free; the fixing procedure in
//! [`fix_output`] pins enough of them that a program's output becomes
//! constant over all safe completions, while the mask still completes
//! inside `delta*`. Two completions that the target language separates
//! then certify that the program does not recognize it.
//!
//! Position distances use virtual anchors just outside the word: a
//! position is dangerous when it lies within `2l - 2` of a fixed
//! position or of the cells bordering the ends (positions 0 and n+1).
//! This is the convention the worked examples pin down; safe positions
//! are exactly the free positions far from everything.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, LetterId, Word};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::reglang::{Dfa, Nfa};

mod fix;

pub use fix::{
    fix_output, fooling_pair, mask_growth_bound, FixResult, FoolingCertificate, FoolingOutcome,
};

/// A word over the alphabet extended with a blank. `None` slots are free,
/// `Some(a)` slots are fixed to the letter `a`. Positions are 1-based in
/// the public accessors, matching program instructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    slots: Vec<Option<LetterId>>,
}

impl Mask {
    /// The all-free mask of length `n`.
    pub fn free(n: usize) -> Mask {
        Mask { slots: vec![None; n] }
    }

    pub fn from_slots(slots: Vec<Option<LetterId>>) -> Mask {
        Mask { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[Option<LetterId>] {
        &self.slots
    }

    /// Slot at 1-based position `p`.
    pub fn at(&self, p: usize) -> Option<LetterId> {
        self.slots[p - 1]
    }

    /// Number of fixed positions, written |λ|_Σ in the analyses.
    pub fn fixed_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// 1-based fixed positions in order.
    pub fn fixed_positions(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&p| self.at(p).is_some()).collect()
    }

    /// A submask refines the other mask: it keeps every fixed letter and may
    /// fix some of the free slots.
    pub fn is_submask_of(&self, other: &Mask) -> bool {
        self.len() == other.len()
            && self
                .slots
                .iter()
                .zip(&other.slots)
                .all(|(mine, theirs)| theirs.is_none() || mine == theirs)
    }

    /// Fix 1-based position `p` to `letter`. Re-fixing to the same letter is
    /// a no-op; changing a fixed letter is an error.
    pub fn fix(&self, p: usize, letter: LetterId) -> Result<Mask> {
        if p == 0 || p > self.len() {
            return Err(Error::input(format!(
                "position {p} is outside the mask of length {}",
                self.len()
            )));
        }
        match self.at(p) {
            Some(b) if b != letter => Err(Error::input(format!(
                "position {p} is already fixed to a different letter"
            ))),
            _ => {
                let mut slots = self.slots.clone();
                slots[p - 1] = Some(letter);
                Ok(Mask { slots })
            }
        }
    }

    /// Does `w` agree with every fixed slot?
    pub fn admits(&self, w: &[LetterId]) -> bool {
        w.len() == self.len()
            && self
                .slots
                .iter()
                .zip(w)
                .all(|(slot, &x)| slot.map_or(true, |a| a == x))
    }

    /// Parse a mask over a single-character alphabet; `⊥` or `_` mark free
    /// positions.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Mask> {
        if !alphabet.is_char_alphabet() {
            return Err(Error::input("mask text needs a single-character alphabet"));
        }
        let mut slots = Vec::new();
        for c in text.chars() {
            if c == '⊥' || c == '_' {
                slots.push(None);
            } else {
                let id = alphabet
                    .id_of(&c.to_string())
                    .ok_or_else(|| Error::input(format!("unknown mask letter {c:?}")))?;
                slots.push(Some(id));
            }
        }
        Ok(Mask { slots })
    }

    /// Render over a single-character alphabet, free slots as `⊥`.
    pub fn format(&self, alphabet: &Alphabet) -> Result<String> {
        if !alphabet.is_char_alphabet() {
            return Err(Error::input("mask text needs a single-character alphabet"));
        }
        let mut out = String::new();
        for slot in &self.slots {
            match slot {
                None => out.push('⊥'),
                Some(a) => {
                    alphabet.check_letter(*a)?;
                    out.push_str(alphabet.symbol(*a));
                }
            }
        }
        Ok(out)
    }

    fn check_letters(&self, alphabet: &Alphabet) -> Result<()> {
        for slot in self.slots.iter().flatten() {
            alphabet.check_letter(*slot)?;
        }
        Ok(())
    }
}

/// A finite set of nonempty words `delta` together with its alphabet and the
/// minimal automaton of `delta*`. The longest word length `l` drives the
/// dangerous-position windows.
#[derive(Clone, Debug)]
pub struct FoolingConfig {
    alphabet: Alphabet,
    delta: Vec<Word>,
    max_len: usize,
    star: Dfa,
}

impl FoolingConfig {
    pub fn new(alphabet: Alphabet, delta: Vec<Word>) -> Result<FoolingConfig> {
        if delta.is_empty() {
            return Err(Error::input("delta must contain at least one word"));
        }
        let mut max_len = 0;
        for w in &delta {
            if w.is_empty() {
                return Err(Error::input("delta words must be nonempty"));
            }
            for &a in w {
                alphabet.check_letter(a)?;
            }
            max_len = max_len.max(w.len());
        }
        let star = star_dfa(&alphabet, &delta);
        if star.num_states() > 64 {
            return Err(Error::resource(
                "the automaton of delta* exceeds 64 states; the mask searches use bitsets",
            ));
        }
        Ok(FoolingConfig { alphabet, delta, max_len, star })
    }

    /// Parse words like `["c", "ab"]` over the alphabet.
    pub fn parse(alphabet: Alphabet, words: &[&str]) -> Result<FoolingConfig> {
        let delta = words
            .iter()
            .map(|w| alphabet.parse_word(w))
            .collect::<Result<Vec<_>>>()?;
        FoolingConfig::new(alphabet, delta)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn delta(&self) -> &[Word] {
        &self.delta
    }

    /// Maximal word length in delta, the `l` of the distance windows.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Minimal automaton of `delta*`.
    pub fn star_dfa(&self) -> &Dfa {
        &self.star
    }
}

/// Hub construction: one state that every delta word loops on.
fn star_dfa(alphabet: &Alphabet, delta: &[Word]) -> Dfa {
    let mut nfa = Nfa::new(alphabet.clone());
    let hub = nfa.add_state(true);
    nfa.initials.push(hub);
    for w in delta {
        let mut from = hub;
        for (i, &a) in w.iter().enumerate() {
            let to = if i + 1 == w.len() { hub } else { nfa.add_state(false) };
            nfa.edges[from].push((a, to));
            from = to;
        }
    }
    nfa.determinize().minimize()
}

/// Positions within `2l - 2` of a fixed position or of the virtual anchors
/// just outside the word. The complement (the safe positions) is necessarily
/// free. 1-based.
pub fn dangerous_positions(mask: &Mask, fool: &FoolingConfig) -> BTreeSet<usize> {
    let n = mask.len();
    let window = 2 * fool.max_len() - 2;
    // dist[p] = distance to the nearest anchor; anchors are the fixed
    // positions and the cells 0 and n+1 flanking the word.
    let mut dist = vec![usize::MAX; n + 2];
    dist[0] = 0;
    dist[n + 1] = 0;
    for p in mask.fixed_positions() {
        dist[p] = 0;
    }
    for p in 1..=n + 1 {
        dist[p] = dist[p].min(dist[p - 1].saturating_add(1));
    }
    for p in (0..=n).rev() {
        dist[p] = dist[p].min(dist[p + 1].saturating_add(1));
    }
    (1..=n).filter(|&p| dist[p] <= window).collect()
}

type StateSet = u64;

fn bit(q: usize) -> StateSet {
    1 << q
}

fn step_set(dfa: &Dfa, set: StateSet, constraint: Option<LetterId>) -> StateSet {
    let mut out = 0;
    let mut rest = set;
    while rest != 0 {
        let q = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        match constraint {
            Some(a) => out |= bit(dfa.step(q, a)),
            None => {
                for a in 0..dfa.alphabet.len() {
                    out |= bit(dfa.step(q, a));
                }
            }
        }
    }
    out
}

/// States at each cut that can still reach the wanted verdict through the
/// constrained suffix; `sets[p]` covers the suffix starting after `p` letters.
pub(crate) fn backward_sets(
    dfa: &Dfa,
    constraints: &[Option<LetterId>],
    want_accept: bool,
) -> Vec<StateSet> {
    let n = constraints.len();
    let mut sets = vec![0; n + 1];
    for q in 0..dfa.num_states() {
        if dfa.accepting[q] == want_accept {
            sets[n] |= bit(q);
        }
    }
    for p in (0..n).rev() {
        for q in 0..dfa.num_states() {
            let hit = match constraints[p] {
                Some(a) => sets[p + 1] & bit(dfa.step(q, a)) != 0,
                None => (0..dfa.alphabet.len()).any(|a| sets[p + 1] & bit(dfa.step(q, a)) != 0),
            };
            if hit {
                sets[p] |= bit(q);
            }
        }
    }
    sets
}

/// Least constrained word (by letter id, position by position) that the
/// automaton maps to the wanted verdict, or None if there is none.
pub(crate) fn least_constrained(
    dfa: &Dfa,
    constraints: &[Option<LetterId>],
    want_accept: bool,
) -> Option<Word> {
    let sets = backward_sets(dfa, constraints, want_accept);
    if sets[0] & bit(dfa.initial) == 0 {
        return None;
    }
    let mut q = dfa.initial;
    let mut word = Vec::with_capacity(constraints.len());
    for (p, constraint) in constraints.iter().enumerate() {
        let choices: Vec<LetterId> = match constraint {
            Some(a) => vec![*a],
            None => (0..dfa.alphabet.len()).collect(),
        };
        let a = choices
            .into_iter()
            .find(|&a| sets[p + 1] & bit(dfa.step(q, a)) != 0)
            .expect("a backward-live state always has a live successor");
        word.push(a);
        q = dfa.step(q, a);
    }
    Some(word)
}

/// Does the mask have a completion in `delta*`?
pub fn delta_compatible(mask: &Mask, fool: &FoolingConfig) -> bool {
    if mask.check_letters(fool.alphabet()).is_err() {
        return false;
    }
    let sets = backward_sets(fool.star_dfa(), mask.slots(), true);
    sets[0] & bit(fool.star_dfa().initial) != 0
}

/// Is `w` a safe completion of the mask: a completion that some `delta*`
/// completion matches on every dangerous position?
pub fn is_safe_completion(mask: &Mask, w: &[LetterId], fool: &FoolingConfig) -> bool {
    if !mask.admits(w) || w.iter().any(|&a| a >= fool.alphabet().len()) {
        return false;
    }
    let dangerous = dangerous_positions(mask, fool);
    let constraints: Vec<Option<LetterId>> = (1..=mask.len())
        .map(|p| if dangerous.contains(&p) { Some(w[p - 1]) } else { None })
        .collect();
    let sets = backward_sets(fool.star_dfa(), &constraints, true);
    sets[0] & bit(fool.star_dfa().initial) != 0
}

/// Outcome of [`check_safe_delta`]: whether fixing any safe position of any
/// compatible mask preserves compatibility, up to the checked length.
#[derive(Clone, Debug)]
pub struct SafetyReport {
    pub safe: bool,
    /// True when every mask up to `n_max` was visited; false when the run
    /// fell back to seeded sampling (length cap or visit budget exceeded).
    pub exhaustive: bool,
    /// Compatible masks audited.
    pub checked: u64,
    pub witness: Option<SafetyWitness>,
}

/// A compatible mask with a safe position whose fixing kills compatibility.
#[derive(Clone, Debug)]
pub struct SafetyWitness {
    pub mask: Mask,
    pub position: usize,
    pub letter: LetterId,
}

/// Scan one compatible mask for a safety violation.
fn find_unsafe_fix(fool: &FoolingConfig, mask: &Mask) -> Option<(usize, LetterId)> {
    let dfa = fool.star_dfa();
    let n = mask.len();
    let mut forward = vec![0; n + 1];
    forward[0] = bit(dfa.initial);
    for p in 0..n {
        forward[p + 1] = step_set(dfa, forward[p], mask.slots()[p]);
    }
    let backward = backward_sets(dfa, mask.slots(), true);
    let dangerous = dangerous_positions(mask, fool);
    for p in 1..=n {
        if dangerous.contains(&p) {
            continue;
        }
        for a in 0..fool.alphabet().len() {
            // fixing a at p stays compatible iff some constrained path
            // crosses the cut through the letter a
            let mut live = false;
            let mut rest = forward[p - 1];
            while rest != 0 {
                let q = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if backward[p] & bit(dfa.step(q, a)) != 0 {
                    live = true;
                    break;
                }
            }
            if !live {
                return Some((p, a));
            }
        }
    }
    None
}

enum Search {
    Clean,
    Witness(SafetyWitness),
    Budget,
}

struct SafetySearch<'a> {
    fool: &'a FoolingConfig,
    cfg: &'a Config,
    slots: Vec<Option<LetterId>>,
    forward: Vec<StateSet>,
    accepting: StateSet,
    checked: u64,
    budget: u64,
}

impl SafetySearch<'_> {
    fn run(&mut self, depth: usize) -> Result<Search> {
        if depth == self.slots.len() {
            return self.leaf();
        }
        let fs = self.forward[depth];
        let mut choices: Vec<Option<LetterId>> = vec![None];
        choices.extend((0..self.fool.alphabet().len()).map(Some));
        for choice in choices {
            let next = step_set(self.fool.star_dfa(), fs, choice);
            if next == 0 {
                // no completion of this prefix exists, whatever the suffix
                continue;
            }
            self.slots[depth] = choice;
            self.forward[depth + 1] = next;
            match self.run(depth + 1)? {
                Search::Clean => {}
                other => return Ok(other),
            }
        }
        Ok(Search::Clean)
    }

    fn leaf(&mut self) -> Result<Search> {
        if self.forward[self.slots.len()] & self.accepting == 0 {
            return Ok(Search::Clean);
        }
        self.checked += 1;
        if self.checked % 4096 == 0 {
            self.cfg.check_cancelled()?;
        }
        if self.checked > self.budget {
            return Ok(Search::Budget);
        }
        let mask = Mask::from_slots(self.slots.clone());
        if let Some((position, letter)) = find_unsafe_fix(self.fool, &mask) {
            return Ok(Search::Witness(SafetyWitness { mask, position, letter }));
        }
        Ok(Search::Clean)
    }
}

/// Verify the safety property of delta over every compatible mask of length
/// at most `n_max`. Lengths beyond `cfg.safety_cap`, or a blown visit budget,
/// switch the run to seeded sampling and clear the `exhaustive` flag.
pub fn check_safe_delta(fool: &FoolingConfig, n_max: usize, cfg: &Config) -> Result<SafetyReport> {
    let mut checked = 0;
    if n_max <= cfg.safety_cap {
        let dfa = fool.star_dfa();
        let accepting =
            (0..dfa.num_states()).filter(|&q| dfa.accepting[q]).fold(0, |acc, q| acc | bit(q));
        let mut overflowed = false;
        for n in 0..=n_max {
            let mut search = SafetySearch {
                fool,
                cfg,
                slots: vec![None; n],
                forward: vec![0; n + 1],
                accepting,
                checked,
                budget: cfg.enumeration_cap,
            };
            search.forward[0] = bit(dfa.initial);
            let outcome = search.run(0)?;
            checked = search.checked;
            match outcome {
                Search::Clean => {}
                Search::Witness(witness) => {
                    return Ok(SafetyReport {
                        safe: false,
                        exhaustive: true,
                        checked,
                        witness: Some(witness),
                    })
                }
                Search::Budget => {
                    overflowed = true;
                    break;
                }
            }
        }
        if !overflowed {
            return Ok(SafetyReport { safe: true, exhaustive: true, checked, witness: None });
        }
    }

    // Sampling fallback: seeded random masks, rejection-filtered to the
    // compatible ones.
    const SAMPLES_PER_LENGTH: u32 = 512;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let k = fool.alphabet().len();
    for n in 1..=n_max {
        let mut accepted = 0;
        let mut attempts = 0;
        while accepted < SAMPLES_PER_LENGTH && attempts < 16 * SAMPLES_PER_LENGTH {
            attempts += 1;
            cfg.check_cancelled()?;
            let slots: Vec<Option<LetterId>> = (0..n)
                .map(|_| if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(0..k)) })
                .collect();
            let mask = Mask::from_slots(slots);
            if !delta_compatible(&mask, fool) {
                continue;
            }
            accepted += 1;
            checked += 1;
            if let Some((position, letter)) = find_unsafe_fix(fool, &mask) {
                return Ok(SafetyReport {
                    safe: false,
                    exhaustive: false,
                    checked,
                    witness: Some(SafetyWitness { mask, position, letter }),
                });
            }
        }
    }
    Ok(SafetyReport { safe: true, exhaustive: false, checked, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reglang::compile_regex;

    fn abc() -> Alphabet {
        Alphabet::of_chars("abc".chars())
    }

    fn c_ab() -> FoolingConfig {
        FoolingConfig::parse(abc(), &["c", "ab"]).unwrap()
    }

    #[test]
    fn star_automaton_matches_the_regex_oracle() {
        let oracle = compile_regex("(c+ab)*").unwrap();
        assert!(c_ab().star_dfa().equivalent(&oracle).unwrap());
        let ab = FoolingConfig::parse(Alphabet::of_chars("ab".chars()), &["ab"]).unwrap();
        let oracle = compile_regex("(ab)*").unwrap();
        assert!(ab.star_dfa().equivalent(&oracle).unwrap());
    }

    #[test]
    fn dangerous_windows_follow_the_frozen_convention() {
        let unit = FoolingConfig::parse(Alphabet::of_chars("ab".chars()), &["a", "b"]).unwrap();
        assert_eq!(unit.max_len(), 1);
        // l = 1: the window is 0, so an all-free mask has no dangerous spot
        assert!(dangerous_positions(&Mask::free(6), &unit).is_empty());

        let fool = c_ab();
        assert_eq!(fool.max_len(), 2);
        let boundary: Vec<usize> =
            dangerous_positions(&Mask::free(10), &fool).into_iter().collect();
        assert_eq!(boundary, vec![1, 2, 9, 10]);

        // a fixed position radiates the same window into the interior
        let mask = Mask::free(10).fix(5, 2).unwrap();
        let spread: Vec<usize> = dangerous_positions(&mask, &fool).into_iter().collect();
        assert_eq!(spread, vec![1, 2, 3, 4, 5, 6, 7, 9, 10]);

        // fixed positions are never safe, free interior ones are
        let unit_mask = Mask::free(6).fix(3, 0).unwrap();
        let spots = dangerous_positions(&unit_mask, &unit);
        assert_eq!(spots.into_iter().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn compatibility_pins_the_worked_masks() {
        let fool = c_ab();
        assert!(delta_compatible(&Mask::free(8), &fool));
        assert!(delta_compatible(&Mask::free(7), &fool));
        assert!(delta_compatible(&Mask::parse("⊥b⊥", &abc()).unwrap(), &fool));
        assert!(!delta_compatible(&Mask::parse("b⊥⊥", &abc()).unwrap(), &fool));
        // bb never appears as a factor of (c+ab)*
        assert!(!delta_compatible(&Mask::parse("⊥bb⊥", &abc()).unwrap(), &fool));
    }

    #[test]
    fn compatibility_agrees_with_completion_enumeration() {
        let fool = c_ab();
        let alphabet = abc();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 0..=6 {
            for _ in 0..40 {
                let slots: Vec<Option<LetterId>> = (0..n)
                    .map(|_| if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(0..3)) })
                    .collect();
                let mask = Mask::from_slots(slots);
                let brute = alphabet
                    .words_of_length(n)
                    .any(|w| mask.admits(&w) && fool.star_dfa().accepts(&w));
                assert_eq!(delta_compatible(&mask, &fool), brute, "mask {:?}", mask);
            }
        }
    }

    #[test]
    fn safe_completions_match_the_quantifier_chase() {
        let fool = c_ab();
        let alphabet = abc();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 1..=6 {
            for _ in 0..25 {
                let slots: Vec<Option<LetterId>> = (0..n)
                    .map(|_| if rng.gen_bool(0.6) { None } else { Some(rng.gen_range(0..3)) })
                    .collect();
                let mask = Mask::from_slots(slots);
                let dangerous = dangerous_positions(&mask, &fool);
                for w in alphabet.words_of_length(n) {
                    // the definition: some delta* completion of the mask
                    // agrees with w on every dangerous position
                    let brute = mask.admits(&w)
                        && alphabet.words_of_length(n).any(|w0| {
                            mask.admits(&w0)
                                && fool.star_dfa().accepts(&w0)
                                && dangerous.iter().all(|&p| w0[p - 1] == w[p - 1])
                        });
                    assert_eq!(is_safe_completion(&mask, &w, &fool), brute);
                }
            }
        }
    }

    #[test]
    fn lex_least_search_is_minimal() {
        let fool = c_ab();
        let mask = Mask::parse("⊥⊥⊥b⊥⊥", &abc()).unwrap();
        let w = least_constrained(fool.star_dfa(), mask.slots(), true).unwrap();
        let all: Vec<Word> = abc()
            .words_of_length(6)
            .filter(|w| mask.admits(w) && fool.star_dfa().accepts(w))
            .collect();
        assert_eq!(w, all[0]);
        assert!(all.contains(&w));
    }

    #[test]
    fn single_word_delta_is_unsafe_with_a_witness() {
        let ab = FoolingConfig::parse(Alphabet::of_chars("ab".chars()), &["ab"]).unwrap();
        let report = check_safe_delta(&ab, 8, &Config::default()).unwrap();
        assert!(!report.safe);
        assert!(report.exhaustive);
        let witness = report.witness.unwrap();
        assert!(delta_compatible(&witness.mask, &ab));
        assert!(!dangerous_positions(&witness.mask, &ab).contains(&witness.position));
        let broken = witness.mask.fix(witness.position, witness.letter).unwrap();
        assert!(!delta_compatible(&broken, &ab));
    }

    #[test]
    fn the_paper_deltas_are_safe_at_small_lengths() {
        let cases: Vec<FoolingConfig> = vec![
            FoolingConfig::parse(Alphabet::of_chars("ab".chars()), &["a", "b"]).unwrap(),
            c_ab(),
            FoolingConfig::parse(Alphabet::of_chars("ab".chars()), &["b", "ab"]).unwrap(),
        ];
        for fool in cases {
            let report = check_safe_delta(&fool, 8, &Config::default()).unwrap();
            assert!(report.safe, "delta {:?}", fool.delta());
            assert!(report.exhaustive);
            assert!(report.checked > 0);
        }
    }

    #[test]
    fn oversized_lengths_fall_back_to_sampling() {
        let fool = c_ab();
        let cfg = Config { safety_cap: 6, ..Config::default() };
        let report = check_safe_delta(&fool, 9, &cfg).unwrap();
        assert!(report.safe);
        assert!(!report.exhaustive);
    }

    #[test]
    fn mask_text_round_trips() {
        let alphabet = abc();
        let mask = Mask::parse("⊥ab_c", &alphabet).unwrap();
        assert_eq!(mask.slots(), &[None, Some(0), Some(1), None, Some(2)]);
        assert_eq!(mask.format(&alphabet).unwrap(), "⊥ab⊥c");
        assert_eq!(mask.fixed_count(), 3);
        assert!(Mask::parse("xy", &alphabet).is_err());
    }

    #[test]
    fn submask_and_fixing_behave() {
        let free = Mask::free(4);
        let once = free.fix(2, 1).unwrap();
        assert!(once.is_submask_of(&free));
        assert!(!free.is_submask_of(&once));
        assert!(once.is_submask_of(&once));
        assert_eq!(once.fix(2, 1).unwrap(), once);
        assert!(once.fix(2, 0).is_err());
        assert!(once.fix(9, 0).is_err());
        assert!(once.admits(&[0, 1, 0, 0]));
        assert!(!once.admits(&[0, 0, 0, 0]));
    }
}

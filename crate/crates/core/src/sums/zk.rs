//! The witness family for the program-length hierarchy: languages Z_k of
//! level exactly k, their syntactic monoids M_k, and the k-sets whose
//! position languages K_{n,S} programs over M_k capture in length O(n^k).

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, LetterId};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::reglang::{syntactic_stamp, Dfa, Stamp};

use super::{compile_sum, Avoidance, SumExpr};

/// Y_k = {bottom_l, top_l | 1 <= l <= k}, rendered Bl / Tl. The ids interleave:
/// bottom_l = 2(l-1), top_l = 2(l-1)+1.
pub fn y_alphabet(k: usize) -> Result<Alphabet> {
    if k == 0 {
        return Err(Error::input("the Y_k family starts at k = 1"));
    }
    let mut symbols = Vec::with_capacity(2 * k);
    for l in 1..=k {
        symbols.push(format!("B{l}"));
        symbols.push(format!("T{l}"));
    }
    Alphabet::new(symbols)
}

pub(crate) fn top(l: usize) -> LetterId {
    2 * (l - 1) + 1
}

/// Z_k as a level-k expression over Y_k:
/// Y_{k-1}* top_k Y_{k-2}* top_{k-1} ... Y_1* top_2 top_1 Y_k*,
/// bracketed from the right so each split's left side is a plain star. The
/// degenerate head Y_0* is read as the empty star {epsilon}, so Z_1 is the
/// words starting with top_1.
pub fn zk_expr(k: usize) -> Result<SumExpr> {
    if k == 0 {
        return Err(Error::input("Z_0 is the trivial language; the family starts at k = 1"));
    }
    let all: Vec<LetterId> = (0..2 * k).collect();
    let mut e = SumExpr::Split {
        left: Box::new(SumExpr::star([])),
        marker: top(1),
        right: Box::new(SumExpr::star(all)),
        side: Avoidance::LeftAvoids,
    };
    for l in 2..=k {
        e = SumExpr::Split {
            left: Box::new(SumExpr::star(0..2 * (l - 1))),
            marker: top(l),
            right: Box::new(e),
            side: Avoidance::LeftAvoids,
        };
    }
    Ok(e)
}

/// Syntactic stamp of Z_k together with its accepting classes. The monoid
/// M_k is reachable as `stamp.monoid()`.
pub fn mk_stamp(k: usize, cfg: &Config) -> Result<(Stamp, BTreeSet<usize>)> {
    let alphabet = y_alphabet(k)?;
    let dfa = compile_sum(&zk_expr(k)?, &alphabet)?;
    syntactic_stamp(&dfa, cfg)
}

/// A k-set over n: ordered k-tuples of distinct positions in [1, n].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSet {
    n: usize,
    k: usize,
    tuples: BTreeSet<Vec<usize>>,
}

impl KSet {
    pub fn new(n: usize, k: usize, tuples: impl IntoIterator<Item = Vec<usize>>) -> Result<KSet> {
        let tuples: BTreeSet<Vec<usize>> = tuples.into_iter().collect();
        for t in &tuples {
            if t.len() != k {
                return Err(Error::input(format!(
                    "tuple {t:?} has {} entries, expected {k}",
                    t.len()
                )));
            }
            for (i, &p) in t.iter().enumerate() {
                if p == 0 || p > n {
                    return Err(Error::input(format!("tuple {t:?}: position {p} outside [1, {n}]")));
                }
                if t[..i].contains(&p) {
                    return Err(Error::input(format!("tuple {t:?} repeats position {p}")));
                }
            }
        }
        Ok(KSet { n, k, tuples })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<usize>> {
        &self.tuples
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.tuples.contains(t)
    }

    /// S|j: the (k-1)-set of tails of tuples whose first entry is j.
    pub fn restrict(&self, j: usize) -> Result<KSet> {
        if self.k == 0 {
            return Err(Error::input("cannot restrict a 0-set"));
        }
        let tuples = self
            .tuples
            .iter()
            .filter(|t| t.first() == Some(&j))
            .map(|t| t[1..].to_vec())
            .collect();
        Ok(KSet { n: self.n, k: self.k - 1, tuples })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "tuples": self.tuples.iter().collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<KSet> {
        let n = v["n"].as_u64().ok_or_else(|| Error::input("k-set JSON needs a numeric \"n\""))?;
        let k = v["k"].as_u64().ok_or_else(|| Error::input("k-set JSON needs a numeric \"k\""))?;
        let tuples: Vec<Vec<usize>> = serde_json::from_value(v["tuples"].clone())
            .map_err(|e| Error::input(format!("k-set JSON tuples: {e}")))?;
        KSet::new(n as usize, k as usize, tuples)
    }
}

/// Every ordered k-tuple of distinct positions kept with probability 1/2.
pub fn random_kset(n: usize, k: usize, seed: u64) -> Result<KSet> {
    if k > n {
        return Err(Error::input(format!("no {k}-tuples of distinct positions exist in [1, {n}]")));
    }
    let mut count = 1u64;
    for i in 0..k {
        count = count.saturating_mul((n - i) as u64);
    }
    if count > 1 << 20 {
        return Err(Error::resource(format!("too many candidate {k}-tuples over [1, {n}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuples = Vec::new();
    let mut current = Vec::new();
    all_tuples(n, k, &mut current, &mut |t| {
        if rng.gen_bool(0.5) {
            tuples.push(t.to_vec());
        }
    });
    KSet::new(n, k, tuples)
}

fn all_tuples(n: usize, k: usize, current: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if current.len() == k {
        emit(current);
        return;
    }
    for p in 1..=n {
        if !current.contains(&p) {
            current.push(p);
            all_tuples(n, k, current, emit);
            current.pop();
        }
    }
}

/// Membership in K_{n,S}: w is a length-n word over {0,1} (letter id 1 = one)
/// whose first k ones sit at a tuple of S.
pub fn k_member(s: &KSet, w: &[LetterId]) -> bool {
    if w.len() != s.n() {
        return false;
    }
    let ones: Vec<usize> =
        w.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i + 1).take(s.k()).collect();
    ones.len() == s.k() && s.contains(&ones)
}

/// DFA for K_{n,S} over the alphabet {0,1}, built as a prefix tree and
/// minimized; an oracle, not a construction the bounds care about.
pub fn k_language(s: &KSet) -> Result<Dfa> {
    let n = s.n();
    if n > 16 {
        return Err(Error::resource(format!("k_language builds a 2^(n+1)-state tree; n = {n} is too deep")));
    }
    let alphabet = Alphabet::of_chars("01".chars());
    let offset = |d: usize| (1usize << d) - 1;
    let states = offset(n + 1);
    let sink = states;
    let mut delta = vec![vec![sink, sink]; states + 1];
    let mut accepting = vec![false; states + 1];
    let mut word = vec![0; n];
    for d in 0..n {
        for v in 0..1usize << d {
            let q = offset(d) + v;
            delta[q][0] = offset(d + 1) + 2 * v;
            delta[q][1] = offset(d + 1) + 2 * v + 1;
        }
    }
    for v in 0..1usize << n {
        for (i, b) in word.iter_mut().enumerate() {
            *b = (v >> (n - 1 - i)) & 1;
        }
        accepting[offset(n) + v] = k_member(s, &word);
    }
    Ok(Dfa { alphabet, initial: 0, accepting, delta }.minimize())
}

/// The counting bound i^(i^2) * 2^i * (n * i^2)^l on the number of length-n
/// languages recognized by programs of at most l instructions over a monoid
/// of size i.
pub fn count_bound(i: usize, n: usize, l: usize) -> BigUint {
    let i_big = BigUint::from(i);
    i_big.pow((i * i) as u32)
        * BigUint::from(2u32).pow(i as u32)
        * BigUint::from(n * i * i).pow(l as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VarietyId;
    use crate::sums::sum_member;

    #[test]
    fn z1_is_the_words_starting_with_top1() {
        let y = y_alphabet(1).unwrap();
        let e = zk_expr(1).unwrap();
        assert_eq!(e.level(), 1);
        for (text, expect) in [("T1", true), ("T1B1T1", true), ("B1T1", false), ("", false)] {
            let w = y.parse_word(text).unwrap();
            assert_eq!(sum_member(&e, &y, &w).unwrap(), expect, "{text}");
        }
    }

    #[test]
    fn z2_pins_the_paper_shape() {
        let y = y_alphabet(2).unwrap();
        let e = zk_expr(2).unwrap();
        assert_eq!(e.level(), 2);
        for (text, expect) in [
            ("T2T1", true),
            ("B1T1T2T1B2T2", true),
            ("T2B1T1", false),
            ("B2T2T1", false),
            ("T1", false),
        ] {
            let w = y.parse_word(text).unwrap();
            assert_eq!(sum_member(&e, &y, &w).unwrap(), expect, "{text}");
        }
    }

    #[test]
    fn m1_is_the_three_element_choice_monoid() {
        let (stamp, accept) = mk_stamp(1, &Config::default()).unwrap();
        assert_eq!(stamp.monoid().size(), 3);
        assert!(stamp.monoid().satisfies_variety(VarietyId::DA));
        let y = y_alphabet(1).unwrap();
        let w = y.parse_word("T1B1").unwrap();
        assert!(stamp.recognizes(&accept, &w));
        let w = y.parse_word("B1T1").unwrap();
        assert!(!stamp.recognizes(&accept, &w));
    }

    #[test]
    fn mk_monoids_satisfy_da_up_to_three() {
        let cfg = Config { monoid_cap: 4096, ..Config::default() };
        for k in 1..=3 {
            let (stamp, _) = mk_stamp(k, &cfg).unwrap();
            assert!(
                stamp.monoid().satisfies_variety(VarietyId::DA),
                "M_{k} (size {}) must lie in DA",
                stamp.monoid().size()
            );
        }
    }

    #[test]
    fn kset_validation_and_restriction() {
        assert!(KSet::new(3, 2, [vec![1, 1]]).is_err());
        assert!(KSet::new(3, 2, [vec![0, 2]]).is_err());
        assert!(KSet::new(3, 2, [vec![1]]).is_err());
        let s = KSet::new(3, 2, [vec![1, 3], vec![2, 1], vec![2, 3]]).unwrap();
        let s2 = s.restrict(2).unwrap();
        assert_eq!(s2.k(), 1);
        assert!(s2.contains(&[1]) && s2.contains(&[3]) && !s2.contains(&[2]));
        assert!(s.restrict(2).unwrap().restrict(1).unwrap().restrict(9).is_err());

        let round = KSet::from_json(&s.to_json()).unwrap();
        assert_eq!(round, s);
    }

    #[test]
    fn k_language_of_a_singleton() {
        // S = {(2)} over n = 3: exactly 010 and 011
        let s = KSet::new(3, 1, [vec![2]]).unwrap();
        let dfa = k_language(&s).unwrap();
        let alphabet = Alphabet::of_chars("01".chars());
        let accepted: Vec<String> = alphabet
            .words_of_length(3)
            .filter(|w| dfa.accepts(w))
            .map(|w| alphabet.format_word(&w))
            .collect();
        assert_eq!(accepted, vec!["010", "011"]);
        assert!(!dfa.accepts(&[0, 1]));
    }

    #[test]
    fn k_language_agrees_with_the_predicate() {
        let alphabet = Alphabet::of_chars("01".chars());
        for seed in 0..4 {
            let s = random_kset(5, 2, seed).unwrap();
            let dfa = k_language(&s).unwrap();
            for len in 0..=6 {
                for w in alphabet.words_of_length(len) {
                    assert_eq!(dfa.accepts(&w), k_member(&s, &w));
                }
            }
        }
    }

    #[test]
    fn zero_sets_watch_the_empty_tuple() {
        let none = KSet::new(2, 0, []).unwrap();
        let all = KSet::new(2, 0, [vec![]]).unwrap();
        assert!(!k_member(&none, &[0, 0]));
        assert!(k_member(&all, &[0, 0]));
        assert!(!k_member(&all, &[0]));
    }

    #[test]
    fn counting_formula_instances() {
        assert_eq!(count_bound(1, 5, 3), BigUint::from(2u32 * 125));
        assert_eq!(count_bound(2, 3, 2), BigUint::from(9216u32));
        assert_eq!(count_bound(1, 0, 0), BigUint::from(2u32));
    }
}

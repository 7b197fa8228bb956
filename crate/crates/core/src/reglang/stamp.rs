//! Stamps: surjective morphisms from a free monoid onto a finite monoid,
//! including the syntactic stamp of a language given by a minimal DFA.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteMonoid;
use crate::alphabet::{Alphabet, LetterId, Word};
use crate::config::Config;
use crate::error::{Error, Result};

use super::dfa::Dfa;

/// Morphism Σ* → M given by one image per letter. Always surjective: the
/// letter images generate the whole monoid.
#[derive(Clone, Debug)]
pub struct Stamp {
    alphabet: Alphabet,
    monoid: Arc<FiniteMonoid>,
    images: Vec<usize>,
}

impl Stamp {
    pub fn new(alphabet: Alphabet, monoid: Arc<FiniteMonoid>, images: Vec<usize>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::input("need exactly one image per letter"));
        }
        for &x in &images {
            monoid.check_element(x)?;
        }
        let (generated, _) = monoid.generated_submonoid(&images)?;
        if generated.size() != monoid.size() {
            return Err(Error::input(format!(
                "letter images generate only {} of {} elements; stamps must be surjective",
                generated.size(),
                monoid.size()
            )));
        }
        Ok(Stamp { alphabet, monoid, images })
    }

    /// Build a stamp from arbitrary letter images by shrinking the codomain
    /// to the generated submonoid. Returns the stamp together with the
    /// embedding of the new monoid's elements back into `monoid`.
    pub fn onto_generated(
        alphabet: Alphabet,
        monoid: &FiniteMonoid,
        images: &[usize],
    ) -> Result<(Self, Vec<usize>)> {
        if images.len() != alphabet.len() {
            return Err(Error::input("need exactly one image per letter"));
        }
        let (sub, embedding) = monoid.generated_submonoid(images)?;
        let back: HashMap<usize, usize> =
            embedding.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let new_images = images.iter().map(|x| back[x]).collect();
        Ok((Stamp { alphabet, monoid: Arc::new(sub), images: new_images }, embedding))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        &self.monoid
    }

    pub fn image(&self, a: LetterId) -> usize {
        self.images[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn eval(&self, word: &[LetterId]) -> usize {
        self.monoid.product(word.iter().map(|&a| self.images[a]))
    }

    pub fn eval_str(&self, text: &str) -> Result<usize> {
        Ok(self.eval(&self.alphabet.parse_word(text)?))
    }

    /// Membership in the language φ^{-1}(accept).
    pub fn recognizes(&self, accept: &BTreeSet<usize>, word: &[LetterId]) -> bool {
        accept.contains(&self.eval(word))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let file = StampFile {
            alphabet: self.alphabet.clone(),
            monoid: self.monoid.to_json(),
            images: self
                .alphabet
                .symbols()
                .zip(&self.images)
                .map(|(s, &x)| (s.to_string(), x))
                .collect(),
        };
        serde_json::to_value(file).expect("stamp serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let file: StampFile =
            serde_json::from_value(v.clone()).map_err(|e| Error::input(format!("bad stamp JSON: {e}")))?;
        let monoid = FiniteMonoid::from_json(&file.monoid)?;
        let mut images = Vec::with_capacity(file.alphabet.len());
        for symbol in file.alphabet.symbols() {
            let &x = file
                .images
                .get(symbol)
                .ok_or_else(|| Error::input(format!("no image for letter {symbol:?}")))?;
            images.push(x);
        }
        Stamp::new(file.alphabet, Arc::new(monoid), images)
    }
}

#[derive(Serialize, Deserialize)]
struct StampFile {
    alphabet: Alphabet,
    monoid: serde_json::Value,
    images: std::collections::BTreeMap<String, usize>,
}

/// Syntactic stamp of the language of a *minimal complete* DFA, together
/// with the accepting set F: the language is exactly φ^{-1}(F).
///
/// Elements of the transition monoid are functions on states; each is named
/// by the breadth-first-least word inducing it, the identity by "1".
pub fn syntactic_stamp(dfa: &Dfa, cfg: &Config) -> Result<(Stamp, BTreeSet<usize>)> {
    let n = dfa.num_states();
    let k = dfa.alphabet.len();
    let letter_fn: Vec<Vec<usize>> =
        (0..k).map(|a| (0..n).map(|q| dfa.step(q, a)).collect()).collect();

    let identity: Vec<usize> = (0..n).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elems: Vec<Vec<usize>> = vec![identity];
    let mut words: Vec<Word> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        cfg.check_cancelled()?;
        for a in 0..k {
            let f = &elems[i];
            let g: Vec<usize> = (0..n).map(|q| letter_fn[a][f[q]]).collect();
            if !index.contains_key(&g) {
                if elems.len() >= cfg.monoid_cap {
                    return Err(Error::resource(format!(
                        "transition monoid exceeds the cap of {} elements",
                        cfg.monoid_cap
                    )));
                }
                let id = elems.len();
                index.insert(g.clone(), id);
                elems.push(g);
                let mut w = words[i].clone();
                w.push(a);
                words.push(w);
                queue.push_back(id);
            }
        }
    }

    let size = elems.len();
    let mut table = vec![vec![0usize; size]; size];
    for x in 0..size {
        for y in 0..size {
            let g: Vec<usize> = (0..n).map(|q| elems[y][elems[x][q]]).collect();
            table[x][y] = index[&g];
        }
    }

    let id_name = if dfa.alphabet.symbols().any(|s| s == "1") { "ε" } else { "1" };
    let names: Vec<String> = words
        .iter()
        .map(|w| if w.is_empty() { id_name.to_string() } else { dfa.alphabet.format_word(w) })
        .collect();
    let monoid = FiniteMonoid::new(table, 0, Some(names))?;

    let accept: BTreeSet<usize> =
        (0..size).filter(|&i| dfa.accepting[elems[i][dfa.initial]]).collect();
    let images: Vec<usize> = (0..k).map(|a| index[&letter_fn[a]]).collect();
    let stamp = Stamp::new(dfa.alphabet.clone(), Arc::new(monoid), images)?;
    Ok((stamp, accept))
}

#[cfg(test)]
mod tests {
    use super::super::dfa::compile_regex;
    use super::*;
    use crate::algebra::testutil;

    #[test]
    fn syntactic_monoid_of_b2_language_is_b2_plus_a_second_unit() {
        let dfa = compile_regex("(c*ac*bc*)*").unwrap();
        let (stamp, accept) = syntactic_stamp(&dfa, &Config::default()).unwrap();
        // "c" is not in the language (a block cannot be empty of a and b), so
        // the class of c is a unit for nonempty classes yet distinct from the
        // class of the empty word: seven elements, B2 once the extra unit goes.
        assert_eq!(stamp.monoid().size(), 7);
        let (nonempty_part, _) = stamp.monoid().generated_subsemigroup(stamp.images()).unwrap();
        assert!(crate::algebra::is_isomorphic(&nonempty_part, &testutil::b2_by_hand()));
        for (w, want) in
            [("", true), ("ab", true), ("cacbc", true), ("c", false), ("ba", false), ("aabb", false), ("a", false)]
        {
            let word = stamp.alphabet().parse_word(w).unwrap();
            assert_eq!(stamp.recognizes(&accept, &word), want, "word {w:?}");
        }
    }

    #[test]
    fn recognition_matches_the_dfa_on_all_short_words() {
        let dfa = compile_regex("(a+b)*ab(a+b)*").unwrap();
        let (stamp, accept) = syntactic_stamp(&dfa, &Config::default()).unwrap();
        for len in 0..=6 {
            for w in stamp.alphabet().words_of_length(len) {
                assert_eq!(stamp.recognizes(&accept, &w), dfa.accepts(&w));
            }
        }
    }

    #[test]
    fn stamps_must_be_surjective() {
        let m = Arc::new(testutil::cyclic(4));
        let alphabet = Alphabet::of_chars(['a']);
        // 2 generates only {0, 2}
        assert!(Stamp::new(alphabet.clone(), Arc::clone(&m), vec![2]).is_err());
        let (stamp, embedding) = Stamp::onto_generated(alphabet, &m, &[2]).unwrap();
        assert_eq!(stamp.monoid().size(), 2);
        assert_eq!(embedding, vec![0, 2]);
    }

    #[test]
    fn json_round_trip() {
        let dfa = compile_regex("(c+ab)*").unwrap();
        let (stamp, _) = syntactic_stamp(&dfa, &Config::default()).unwrap();
        let back = Stamp::from_json(&stamp.to_json()).unwrap();
        assert_eq!(back.images(), stamp.images());
        assert_eq!(back.monoid().size(), stamp.monoid().size());
        for w in stamp.alphabet().words_of_length(3) {
            assert_eq!(back.eval(&w), stamp.eval(&w));
        }
    }
}

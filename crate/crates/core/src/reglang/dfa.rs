//! NFAs (for construction) and complete DFAs (for everything else):
//! subset construction, Moore minimization, Boolean operations, quotients,
//! and inverse images under word-substituting morphisms.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{Alphabet, LetterId, Word};
use crate::error::{Error, Result};

use super::regex::Regex;

/// Nondeterministic automaton with epsilon moves. Only a construction
/// intermediate; determinize before using a language.
#[derive(Clone, Debug)]
pub struct Nfa {
    pub alphabet: Alphabet,
    pub states: usize,
    pub initials: Vec<usize>,
    pub accepting: Vec<bool>,
    pub edges: Vec<Vec<(LetterId, usize)>>,
    pub eps: Vec<Vec<usize>>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet) -> Self {
        Nfa { alphabet, states: 0, initials: Vec::new(), accepting: Vec::new(), edges: Vec::new(), eps: Vec::new() }
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.states += 1;
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        self.eps.push(Vec::new());
        self.states - 1
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &r in &self.eps[q] {
                if set.insert(r) {
                    stack.push(r);
                }
            }
        }
    }

    /// Subset construction; the result is complete (the empty subset is the
    /// sink) but not minimized.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut initial: BTreeSet<usize> = self.initials.iter().copied().collect();
        self.closure(&mut initial);
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut subsets: Vec<BTreeSet<usize>> = vec![initial.clone()];
        index.insert(initial, 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let current = subsets[i].clone();
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let mut next: BTreeSet<usize> = BTreeSet::new();
                for &q in &current {
                    for &(l, r) in &self.edges[q] {
                        if l == a {
                            next.insert(r);
                        }
                    }
                }
                self.closure(&mut next);
                let id = *index.entry(next.clone()).or_insert_with(|| {
                    subsets.push(next);
                    subsets.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let accepting = subsets.iter().map(|s| s.iter().any(|&q| self.accepting[q])).collect();
        Dfa { alphabet: self.alphabet.clone(), initial: 0, accepting, delta }
    }
}

/// Complete deterministic automaton. Every state has a transition on every
/// letter; minimization never drops the sink, so the transition monoid of a
/// minimized DFA is the syntactic monoid of its language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Alphabet,
    pub initial: usize,
    pub accepting: Vec<bool>,
    pub delta: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn step(&self, q: usize, a: LetterId) -> usize {
        self.delta[q][a]
    }

    pub fn run(&self, from: usize, word: &[LetterId]) -> usize {
        word.iter().fold(from, |q, &a| self.delta[q][a])
    }

    pub fn accepts(&self, word: &[LetterId]) -> bool {
        self.accepting[self.run(self.initial, word)]
    }

    pub fn accepts_str(&self, text: &str) -> Result<bool> {
        Ok(self.accepts(&self.alphabet.parse_word(text)?))
    }

    /// Single-state automaton over `alphabet` accepting everything or nothing.
    pub fn constant(alphabet: Alphabet, accept: bool) -> Dfa {
        let k = alphabet.len();
        Dfa { alphabet, initial: 0, accepting: vec![accept], delta: vec![vec![0; k]] }
    }

    /// Remove unreachable states, then merge Moore-equivalent ones. States of
    /// the result are numbered by breadth-first discovery from the initial
    /// state, letters in order.
    pub fn minimize(&self) -> Dfa {
        let n = self.num_states();
        let k = self.alphabet.len();

        // reachable restriction
        let mut order: Vec<usize> = vec![self.initial];
        let mut seen = vec![false; n];
        seen[self.initial] = true;
        let mut qi = 0;
        while qi < order.len() {
            let q = order[qi];
            qi += 1;
            for a in 0..k {
                let r = self.delta[q][a];
                if !seen[r] {
                    seen[r] = true;
                    order.push(r);
                }
            }
        }
        let mut remap = vec![usize::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let m = order.len();
        let delta: Vec<Vec<usize>> = order
            .iter()
            .map(|&old| (0..k).map(|a| remap[self.delta[old][a]]).collect())
            .collect();
        let accepting: Vec<bool> = order.iter().map(|&old| self.accepting[old]).collect();

        // Moore refinement
        let mut block: Vec<usize> = accepting.iter().map(|&b| usize::from(b)).collect();
        loop {
            let old_count = block.iter().collect::<BTreeSet<_>>().len();
            let mut sig_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next_block = vec![0usize; m];
            for q in 0..m {
                let sig = (block[q], (0..k).map(|a| block[delta[q][a]]).collect::<Vec<_>>());
                let next_id = sig_index.len();
                next_block[q] = *sig_index.entry(sig).or_insert(next_id);
            }
            // signatures include the old block, so the new partition refines
            // the old one; equal counts means it stopped splitting
            let stable = sig_index.len() == old_count;
            block = next_block;
            if stable {
                break;
            }
        }

        // canonical numbering of blocks by BFS from the initial block
        let rep_delta = |b: usize, a: usize| -> usize {
            let q = (0..m).find(|&q| block[q] == b).unwrap();
            block[delta[q][a]]
        };
        let init_block = block[0];
        let mut block_order = vec![init_block];
        let mut placed: HashMap<usize, usize> = HashMap::from([(init_block, 0)]);
        let mut bi = 0;
        while bi < block_order.len() {
            let b = block_order[bi];
            bi += 1;
            for a in 0..k {
                let nb = rep_delta(b, a);
                if !placed.contains_key(&nb) {
                    placed.insert(nb, block_order.len());
                    block_order.push(nb);
                }
            }
        }
        let out_delta: Vec<Vec<usize>> = block_order
            .iter()
            .map(|&b| (0..k).map(|a| placed[&rep_delta(b, a)]).collect())
            .collect();
        let out_accepting: Vec<bool> = block_order
            .iter()
            .map(|&b| {
                let q = (0..m).find(|&q| block[q] == b).unwrap();
                accepting[q]
            })
            .collect();
        Dfa { alphabet: self.alphabet.clone(), initial: 0, accepting: out_accepting, delta: out_delta }
    }

    fn check_same_alphabet(&self, other: &Dfa) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::input("automata have different alphabets"));
        }
        Ok(())
    }

    /// Product automaton combining acceptance with `combine`.
    pub fn product(&self, other: &Dfa, combine: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        self.check_same_alphabet(other)?;
        let k = self.alphabet.len();
        let cols = other.num_states();
        let pair = |a: usize, b: usize| a * cols + b;
        let mut delta = Vec::new();
        let mut accepting = Vec::new();
        for a in 0..self.num_states() {
            for b in 0..cols {
                delta.push((0..k).map(|x| pair(self.delta[a][x], other.delta[b][x])).collect());
                accepting.push(combine(self.accepting[a], other.accepting[b]));
            }
        }
        Ok(Dfa {
            alphabet: self.alphabet.clone(),
            initial: pair(self.initial, other.initial),
            accepting,
            delta,
        })
    }

    pub fn complement(&self) -> Dfa {
        let mut out = self.clone();
        for b in &mut out.accepting {
            *b = !*b;
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    /// Lexicographically least accepted word among the shortest ones.
    pub fn shortest_accepted(&self) -> Option<Word> {
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut parent: Vec<Option<(usize, LetterId)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = parent[cur] {
                    word.push(a);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for a in 0..k {
                let r = self.delta[q][a];
                if !seen[r] {
                    seen[r] = true;
                    parent[r] = Some((q, a));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        let diff = self.product(other, |a, b| a != b)?;
        Ok(diff.is_empty())
    }

    /// u^{-1} L
    pub fn left_quotient(&self, u: &[LetterId]) -> Dfa {
        let mut out = self.clone();
        out.initial = self.run(self.initial, u);
        out
    }

    /// L u^{-1}
    pub fn right_quotient(&self, u: &[LetterId]) -> Dfa {
        let mut out = self.clone();
        for q in 0..self.num_states() {
            out.accepting[q] = self.accepting[self.run(q, u)];
        }
        out
    }

    /// Preimage under the morphism sending letter `b` of `source` to
    /// `images[b]` (a word over this automaton's alphabet).
    pub fn inverse_morphism(&self, source: Alphabet, images: &[Word]) -> Result<Dfa> {
        if images.len() != source.len() {
            return Err(Error::input("morphism must map every source letter"));
        }
        for w in images {
            for &a in w {
                self.alphabet.check_letter(a)?;
            }
        }
        let delta: Vec<Vec<usize>> = (0..self.num_states())
            .map(|q| images.iter().map(|w| self.run(q, w)).collect())
            .collect();
        Ok(Dfa { alphabet: source, initial: self.initial, accepting: self.accepting.clone(), delta })
    }
}

/// Thompson construction. The automaton's alphabet is the set of letters in
/// the expression unless `alphabet` widens it; `∅` and `ε` alone get the
/// one-letter alphabet `{a}` so the automaton stays well-formed.
pub fn regex_to_nfa(re: &Regex, alphabet: Option<Alphabet>) -> Result<Nfa> {
    let alphabet = match alphabet {
        Some(a) => {
            for c in re.letters() {
                if a.id_of(&c.to_string()).is_none() {
                    return Err(Error::input(format!("letter {c:?} missing from supplied alphabet")));
                }
            }
            a
        }
        None => {
            let letters = re.letters();
            if letters.is_empty() {
                Alphabet::of_chars(['a'])
            } else {
                Alphabet::of_chars(letters)
            }
        }
    };
    let mut nfa = Nfa::new(alphabet);
    let start = nfa.add_state(false);
    let end = nfa.add_state(true);
    nfa.initials.push(start);
    build(&mut nfa, re, start, end)?;
    Ok(nfa)
}

fn build(nfa: &mut Nfa, re: &Regex, from: usize, to: usize) -> Result<()> {
    match re {
        Regex::Empty => {}
        Regex::Epsilon => nfa.eps[from].push(to),
        Regex::Letter(c) => {
            let id = nfa
                .alphabet
                .id_of(&c.to_string())
                .ok_or_else(|| Error::input(format!("letter {c:?} not in alphabet")))?;
            nfa.edges[from].push((id, to));
        }
        Regex::Union(a, b) => {
            build(nfa, a, from, to)?;
            build(nfa, b, from, to)?;
        }
        Regex::Concat(a, b) => {
            let mid = nfa.add_state(false);
            build(nfa, a, from, mid)?;
            build(nfa, b, mid, to)?;
        }
        Regex::Star(a) => {
            let hub = nfa.add_state(false);
            nfa.eps[from].push(hub);
            nfa.eps[hub].push(to);
            build(nfa, a, hub, hub)?;
        }
        Regex::Plus(a) => {
            let hub = nfa.add_state(false);
            build(nfa, a, from, hub)?;
            nfa.eps[hub].push(to);
            build(nfa, a, hub, hub)?;
        }
    }
    Ok(())
}

/// Parse, build, determinize, minimize.
pub fn compile_regex(pattern: &str) -> Result<Dfa> {
    let re = Regex::parse(pattern)?;
    Ok(regex_to_nfa(&re, None)?.determinize().minimize())
}

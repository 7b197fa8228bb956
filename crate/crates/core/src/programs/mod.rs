//! Programs over finite monoids: a range-n program is a sequence of
//! instructions (p, f) that each read one input position and emit a monoid
//! element; the program's output on a word is the ordered product. Unlike a
//! morphism, a program may visit positions repeatedly and out of order, which
//! is the whole point.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::FiniteMonoid;
use crate::alphabet::{Alphabet, LetterId, Word};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::reglang::{Dfa, Stamp};

mod build;
mod pk;
mod transform;

pub use build::{
    build_essentially_v_program, build_j_trick, build_middle_scan, build_position_check,
    j_trick_stamp, Side,
};
pub use pk::build_pk;

/// One instruction: read position `position` (1-based) and emit `map[letter]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instruction {
    pub position: usize,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Program {
    range: usize,
    alphabet: Alphabet,
    monoid: Arc<FiniteMonoid>,
    instructions: Vec<Instruction>,
}

impl Program {
    pub fn new(
        range: usize,
        alphabet: Alphabet,
        monoid: Arc<FiniteMonoid>,
        instructions: Vec<Instruction>,
    ) -> Result<Program> {
        for (k, ins) in instructions.iter().enumerate() {
            if ins.position == 0 || ins.position > range {
                return Err(Error::input(format!(
                    "instruction {k}: position {} outside [1, {range}]",
                    ins.position
                )));
            }
            if ins.map.len() != alphabet.len() {
                return Err(Error::input(format!(
                    "instruction {k}: map covers {} letters, alphabet has {}",
                    ins.map.len(),
                    alphabet.len()
                )));
            }
            for &x in &ins.map {
                monoid.check_element(x)?;
            }
        }
        Ok(Program { range, alphabet, monoid, instructions })
    }

    pub fn empty(range: usize, alphabet: Alphabet, monoid: Arc<FiniteMonoid>) -> Program {
        Program { range, alphabet, monoid, instructions: Vec::new() }
    }

    /// The morphism as a program: read positions 1..n left to right through
    /// the stamp's letter images.
    pub fn from_stamp(stamp: &Stamp, n: usize) -> Program {
        let map = stamp.images().to_vec();
        let instructions = (1..=n).map(|p| Instruction { position: p, map: map.clone() }).collect();
        Program {
            range: n,
            alphabet: stamp.alphabet().clone(),
            monoid: Arc::clone(stamp.monoid()),
            instructions,
        }
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        &self.monoid
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    fn check_input(&self, w: &[LetterId]) -> Result<()> {
        if w.len() != self.range {
            return Err(Error::input(format!(
                "input length {} does not match program range {}",
                w.len(),
                self.range
            )));
        }
        for &a in w {
            self.alphabet.check_letter(a)?;
        }
        Ok(())
    }

    pub fn eval(&self, w: &[LetterId]) -> Result<usize> {
        self.check_input(w)?;
        Ok(self.monoid.product(self.instructions.iter().map(|ins| ins.map[w[ins.position - 1]])))
    }

    pub fn eval_str(&self, text: &str) -> Result<usize> {
        let w = self.alphabet.parse_word(text)?;
        self.eval(&w)
    }

    /// The execution word: one monoid element per instruction, in program
    /// order. Its product is `eval`.
    pub fn trace(&self, w: &[LetterId]) -> Result<Vec<usize>> {
        self.check_input(w)?;
        Ok(self.instructions.iter().map(|ins| ins.map[w[ins.position - 1]]).collect())
    }

    /// Subsequence of instructions selected by 1-based indices, in original
    /// order; duplicates collapse.
    pub fn subprogram(&self, indices: &[usize]) -> Result<Program> {
        let mut picked: Vec<usize> = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 || i > self.instructions.len() {
                return Err(Error::input(format!(
                    "instruction index {i} outside [1, {}]",
                    self.instructions.len()
                )));
            }
            picked.push(i - 1);
        }
        picked.sort_unstable();
        picked.dedup();
        let instructions = picked.iter().map(|&i| self.instructions[i].clone()).collect();
        Ok(Program {
            range: self.range,
            alphabet: self.alphabet.clone(),
            monoid: Arc::clone(&self.monoid),
            instructions,
        })
    }

    /// Checks p-recognition at this one length by enumerating every input:
    /// eval lands in `accept` exactly for the words the reference DFA
    /// accepts. A failure reports the first offending word.
    pub fn recognizes_exhaustive(
        &self,
        accept: &BTreeSet<usize>,
        reference: &Dfa,
        cfg: &Config,
    ) -> Result<RecognitionCheck> {
        if reference.alphabet != self.alphabet {
            return Err(Error::input("program and reference DFA use different alphabets"));
        }
        for &x in accept {
            self.monoid.check_element(x)?;
        }
        let total = (self.alphabet.len() as u64)
            .checked_pow(self.range.try_into().map_err(|_| Error::resource("range too large"))?)
            .ok_or_else(|| Error::resource("enumeration size overflows"))?;
        if total > cfg.enumeration_cap {
            return Err(Error::resource(format!(
                "{total} words to enumerate, cap is {}",
                cfg.enumeration_cap
            )));
        }
        for (i, w) in self.alphabet.words_of_length(self.range).enumerate() {
            if i % 4096 == 0 {
                cfg.check_cancelled()?;
            }
            let got = accept.contains(&self.eval(&w)?);
            if got != reference.accepts(&w) {
                return Ok(RecognitionCheck { ok: false, counterexample: Some(w) });
            }
        }
        Ok(RecognitionCheck { ok: true, counterexample: None })
    }

    pub fn to_json(&self, accept: Option<&BTreeSet<usize>>) -> serde_json::Value {
        let instructions = self
            .instructions
            .iter()
            .map(|ins| {
                let map: BTreeMap<String, usize> = self
                    .alphabet
                    .symbols()
                    .zip(&ins.map)
                    .map(|(s, &x)| (s.to_string(), x))
                    .collect();
                (ins.position, map)
            })
            .collect();
        serde_json::to_value(ProgramFile {
            range: self.range,
            alphabet: self.alphabet.symbols().map(String::from).collect(),
            monoid: self.monoid.to_json(),
            instructions,
            accept: accept.map(|f| f.iter().copied().collect()),
        })
        .expect("program serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<(Program, Option<BTreeSet<usize>>)> {
        let file: ProgramFile =
            serde_json::from_value(v.clone()).map_err(|e| Error::input(format!("bad program JSON: {e}")))?;
        let alphabet = Alphabet::new(file.alphabet)?;
        let monoid = match &file.monoid {
            serde_json::Value::String(name) => crate::reglang::named_monoid(name)
                .ok_or_else(|| Error::input(format!("unknown monoid name {name:?}")))?,
            inline => FiniteMonoid::from_json(inline)?,
        };
        let monoid = Arc::new(monoid);
        let mut instructions = Vec::with_capacity(file.instructions.len());
        for (position, named_map) in file.instructions {
            let mut map = vec![usize::MAX; alphabet.len()];
            for (symbol, x) in &named_map {
                let id = alphabet
                    .id_of(symbol)
                    .ok_or_else(|| Error::input(format!("instruction letter {symbol:?} not in alphabet")))?;
                map[id] = *x;
            }
            if map.contains(&usize::MAX) {
                return Err(Error::input(format!("instruction at {position} misses a letter")));
            }
            instructions.push(Instruction { position, map });
        }
        let accept = match file.accept {
            Some(xs) => {
                for &x in &xs {
                    monoid.check_element(x)?;
                }
                Some(xs.into_iter().collect())
            }
            None => None,
        };
        let program = Program::new(file.range, alphabet, monoid, instructions)?;
        Ok((program, accept))
    }
}

#[derive(Clone, Debug)]
pub struct RecognitionCheck {
    pub ok: bool,
    pub counterexample: Option<Word>,
}

#[derive(Serialize, Deserialize)]
struct ProgramFile {
    range: usize,
    alphabet: Vec<String>,
    monoid: serde_json::Value,
    instructions: Vec<(usize, BTreeMap<String, usize>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    accept: Option<Vec<usize>>,
}

/// Seeded sampler for property tests and fuzz-style comparisons.
pub fn random_program(
    alphabet: &Alphabet,
    range: usize,
    monoid: &Arc<FiniteMonoid>,
    length: usize,
    seed: u64,
) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if range == 0 {
        return Program::empty(0, alphabet.clone(), Arc::clone(monoid));
    }
    let instructions = (0..length)
        .map(|_| Instruction {
            position: rng.gen_range(1..=range),
            map: (0..alphabet.len()).map(|_| rng.gen_range(0..monoid.size())).collect(),
        })
        .collect();
    Program { range, alphabet: alphabet.clone(), monoid: Arc::clone(monoid), instructions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reglang::{compile_regex, syntactic_stamp};

    fn ac_plus_stamp() -> (Stamp, BTreeSet<usize>) {
        let dfa = compile_regex("(a+b)*ac~").unwrap();
        syntactic_stamp(&dfa, &Config::default()).unwrap()
    }

    #[test]
    fn empty_program_outputs_identity() {
        let (stamp, _) = ac_plus_stamp();
        let p = Program::empty(0, stamp.alphabet().clone(), Arc::clone(stamp.monoid()));
        assert_eq!(p.eval(&[]).unwrap(), stamp.monoid().identity());
        assert_eq!(p.trace(&[]).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn single_instruction_reads_its_letter() {
        let (stamp, _) = ac_plus_stamp();
        let p = Program::new(
            1,
            stamp.alphabet().clone(),
            Arc::clone(stamp.monoid()),
            vec![Instruction { position: 1, map: stamp.images().to_vec() }],
        )
        .unwrap();
        let a = stamp.alphabet().id_of("a").unwrap();
        assert_eq!(p.eval(&[a]).unwrap(), stamp.image(a));
    }

    #[test]
    fn eval_is_product_of_trace() {
        let (stamp, _) = ac_plus_stamp();
        let p = random_program(stamp.alphabet(), 4, stamp.monoid(), 9, 7);
        for w in stamp.alphabet().words_of_length(4) {
            let trace = p.trace(&w).unwrap();
            assert_eq!(p.eval(&w).unwrap(), stamp.monoid().product(trace));
        }
    }

    #[test]
    fn trace_concatenates_over_program_concatenation() {
        let (stamp, _) = ac_plus_stamp();
        let p1 = random_program(stamp.alphabet(), 3, stamp.monoid(), 4, 1);
        let p2 = random_program(stamp.alphabet(), 3, stamp.monoid(), 5, 2);
        let mut joined = p1.instructions().to_vec();
        joined.extend(p2.instructions().iter().cloned());
        let p12 = Program::new(3, stamp.alphabet().clone(), Arc::clone(stamp.monoid()), joined).unwrap();
        for w in stamp.alphabet().words_of_length(3) {
            let mut want = p1.trace(&w).unwrap();
            want.extend(p2.trace(&w).unwrap());
            assert_eq!(p12.trace(&w).unwrap(), want);
        }
    }

    #[test]
    fn subprogram_selects_in_order() {
        let (stamp, _) = ac_plus_stamp();
        let p = random_program(stamp.alphabet(), 4, stamp.monoid(), 6, 11);
        assert_eq!(p.subprogram(&[1, 2, 3, 4, 5, 6]).unwrap().instructions(), p.instructions());
        assert!(p.subprogram(&[]).unwrap().is_empty());
        let q = p.subprogram(&[5, 2, 2]).unwrap();
        assert_eq!(q.instructions().len(), 2);
        assert_eq!(q.instructions()[0], p.instructions()[1]);
        assert_eq!(q.instructions()[1], p.instructions()[4]);
        assert!(p.subprogram(&[0]).is_err());
        assert!(p.subprogram(&[7]).is_err());
    }

    #[test]
    fn from_stamp_agrees_with_the_stamp() {
        let dfa = compile_regex("(c+ab)*").unwrap();
        let (stamp, accept) = syntactic_stamp(&dfa, &Config::default()).unwrap();
        for n in 0..=6 {
            let p = Program::from_stamp(&stamp, n);
            assert_eq!(p.len(), n);
            for w in stamp.alphabet().words_of_length(n) {
                assert_eq!(p.eval(&w).unwrap(), stamp.eval(&w));
            }
            let check = p.recognizes_exhaustive(&accept, &dfa, &Config::default()).unwrap();
            assert!(check.ok);
        }
    }

    #[test]
    fn recognition_failure_reports_a_witness() {
        let dfa = compile_regex("(a+b)*ac~").unwrap();
        let (stamp, accept) = syntactic_stamp(&dfa, &Config::default()).unwrap();
        let p = Program::from_stamp(&stamp, 3);
        // drop one accepting element: some accepted word now evaluates outside
        let mut wrong = accept.clone();
        let lost = *wrong.iter().next().unwrap();
        wrong.remove(&lost);
        let check = p.recognizes_exhaustive(&wrong, &dfa, &Config::default()).unwrap();
        assert!(!check.ok);
        let w = check.counterexample.unwrap();
        assert_eq!(stamp.eval(&w), lost);
        assert!(dfa.accepts(&w));
    }

    #[test]
    fn json_round_trip_with_accept_set() {
        let (stamp, accept) = ac_plus_stamp();
        let p = random_program(stamp.alphabet(), 5, stamp.monoid(), 7, 3);
        let v = p.to_json(Some(&accept));
        let (q, back) = Program::from_json(&v).unwrap();
        assert_eq!(back.as_ref(), Some(&accept));
        assert_eq!(q.range(), p.range());
        assert_eq!(q.instructions(), p.instructions());
        for w in stamp.alphabet().words_of_length(5).take(50) {
            assert_eq!(p.eval(&w).unwrap(), q.eval(&w).unwrap());
        }
    }

    #[test]
    fn json_accepts_named_monoids() {
        let v = serde_json::json!({
            "range": 2,
            "alphabet": ["x", "y"],
            "monoid": "b2",
            "instructions": [[1, {"x": 1, "y": 2}], [2, {"x": 2, "y": 1}]],
        });
        let (p, accept) = Program::from_json(&v).unwrap();
        assert!(accept.is_none());
        assert_eq!(p.monoid().size(), 6);
        // the word xx reads element 1 at position 1 and element 2 at position 2
        let w = vec![0, 0];
        assert_eq!(p.eval(&w).unwrap(), p.monoid().mul(1, 2));
    }

    #[test]
    fn bad_programs_are_rejected() {
        let (stamp, _) = ac_plus_stamp();
        let alphabet = stamp.alphabet().clone();
        let m = Arc::clone(stamp.monoid());
        let full = vec![0; alphabet.len()];
        let bad_pos = vec![Instruction { position: 3, map: full.clone() }];
        assert!(Program::new(2, alphabet.clone(), Arc::clone(&m), bad_pos).is_err());
        let bad_map = vec![Instruction { position: 1, map: vec![0] }];
        assert!(Program::new(2, alphabet.clone(), Arc::clone(&m), bad_map).is_err());
        let bad_elem = vec![Instruction { position: 1, map: vec![m.size(); alphabet.len()] }];
        assert!(Program::new(2, alphabet, m, bad_elem).is_err());
    }
}

//! Compression of programs whose acceptance is certified by a Boolean
//! combination of SUM languages over the monoid: keep just enough
//! instructions that the trace word's membership in every leaf is immune to
//! deleting the rest, no matter which other instructions survive.
//!
//! The index selection mirrors the level of the leaf. For a star, only the
//! first instruction per (position, letter, element) matters: any later
//! offender has an earlier witness. At level one the first and last such
//! instruction bracket the marker. At higher levels the candidates for the
//! marker instruction are pinned (first per (position, letter) able to emit
//! it when the left side avoids the marker, last when the right side does)
//! and the two flanks recurse.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::alphabet::{Alphabet, LetterId, Word};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::programs::{Instruction, Program};
use crate::reglang::{evaluation_stamp, Dfa, Stamp};

use super::{compile_sum, mk_stamp, sum_inverse_morphism, zk_expr, Avoidance, SumExpr};

/// Boolean formula over SUM leaves. `And([])` is true, `Or([])` false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoolCombo {
    Leaf(SumExpr),
    Not(Box<BoolCombo>),
    And(Vec<BoolCombo>),
    Or(Vec<BoolCombo>),
}

impl BoolCombo {
    pub fn leaves(&self) -> Vec<&SumExpr> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a SumExpr>) {
        match self {
            BoolCombo::Leaf(e) => out.push(e),
            BoolCombo::Not(b) => b.collect_leaves(out),
            BoolCombo::And(v) | BoolCombo::Or(v) => {
                for b in v {
                    b.collect_leaves(out);
                }
            }
        }
    }

    fn eval_with(&self, holds: &mut impl FnMut(&SumExpr) -> bool) -> bool {
        match self {
            BoolCombo::Leaf(e) => holds(e),
            BoolCombo::Not(b) => !b.eval_with(holds),
            BoolCombo::And(v) => v.iter().all(|b| b.eval_with(holds)),
            BoolCombo::Or(v) => v.iter().any(|b| b.eval_with(holds)),
        }
    }

    /// Truth value on one word, compiling each distinct leaf once.
    pub fn satisfied_by(&self, alphabet: &Alphabet, w: &[LetterId]) -> Result<bool> {
        let compiled = CompiledCombo::new(self, alphabet)?;
        Ok(compiled.satisfied_by(w))
    }
}

/// A combo with its leaf automata, for evaluation in a loop.
pub(crate) struct CompiledCombo<'a> {
    combo: &'a BoolCombo,
    dfas: BTreeMap<&'a SumExpr, Dfa>,
}

impl<'a> CompiledCombo<'a> {
    pub(crate) fn new(combo: &'a BoolCombo, alphabet: &Alphabet) -> Result<Self> {
        let mut dfas = BTreeMap::new();
        for leaf in combo.leaves() {
            if !dfas.contains_key(leaf) {
                dfas.insert(leaf, compile_sum(leaf, alphabet)?);
            }
        }
        Ok(CompiledCombo { combo, dfas })
    }

    pub(crate) fn satisfied_by(&self, w: &[LetterId]) -> bool {
        self.combo.eval_with(&mut |e| self.dfas[e].accepts(w))
    }
}

/// Indices (1-based, sorted) of the instructions of `p` that pin membership
/// of the trace word in `k`: for every superset I' of the result and every
/// input w, trace(p, w) is in the language iff trace(p[I'], w) is.
pub fn compress_for_sum(p: &Program, k: &SumExpr) -> Result<Vec<usize>> {
    k.validate(p.monoid().size())?;
    Ok(indices(p.instructions(), k).into_iter().collect())
}

fn indices(instrs: &[Instruction], e: &SumExpr) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    match e {
        SumExpr::Star(_) => {
            let mut seen = BTreeSet::new();
            for (idx, ins) in instrs.iter().enumerate() {
                for (a, &alpha) in ins.map.iter().enumerate() {
                    if seen.insert((ins.position, a, alpha)) {
                        out.insert(idx + 1);
                    }
                }
            }
        }
        SumExpr::Split { left, right, .. } if left.level() == 0 && right.level() == 0 => {
            let mut first = BTreeMap::new();
            let mut last = BTreeMap::new();
            for (idx, ins) in instrs.iter().enumerate() {
                for (a, &alpha) in ins.map.iter().enumerate() {
                    first.entry((ins.position, a, alpha)).or_insert(idx + 1);
                    last.insert((ins.position, a, alpha), idx + 1);
                }
            }
            out.extend(first.into_values());
            out.extend(last.into_values());
        }
        SumExpr::Split { left, marker, right, side } => {
            let mut pivots: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for (idx, ins) in instrs.iter().enumerate() {
                for (a, &alpha) in ins.map.iter().enumerate() {
                    if alpha == *marker {
                        match side {
                            Avoidance::LeftAvoids => {
                                pivots.entry((ins.position, a)).or_insert(idx + 1);
                            }
                            Avoidance::RightAvoids => {
                                pivots.insert((ins.position, a), idx + 1);
                            }
                        }
                    }
                }
            }
            let pivot_set: BTreeSet<usize> = pivots.into_values().collect();
            for &i in &pivot_set {
                out.insert(i);
                out.extend(indices(&instrs[..i - 1], left));
                out.extend(indices(&instrs[i..], right).iter().map(|j| j + i));
            }
        }
    }
    out
}

/// Compress `p` against a certificate that characterizes its acceptance:
/// for every input, eval in `accept` must equal the certificate's verdict on
/// the trace word. The returned subprogram keeps the union of the leaf index
/// sets, and the whole contract is checked by exhausting the inputs (so the
/// range must fit under the enumeration cap). After compression, acceptance
/// is read through the certificate on the shorter trace, not through eval.
pub fn compress_program(
    p: &Program,
    accept: &BTreeSet<usize>,
    certificate: &BoolCombo,
    cfg: &Config,
) -> Result<Program> {
    for &m in accept {
        p.monoid().check_element(m)?;
    }
    let trace_alphabet = evaluation_stamp(p.monoid())?.alphabet().clone();
    let compiled = CompiledCombo::new(certificate, &trace_alphabet)?;

    let mut keep = BTreeSet::new();
    for leaf in certificate.leaves() {
        keep.extend(compress_for_sum(p, leaf)?);
    }
    let keep: Vec<usize> = keep.into_iter().collect();
    let q = p.subprogram(&keep)?;

    let total = (p.alphabet().len() as u64)
        .checked_pow(p.range().try_into().map_err(|_| Error::resource("range too large"))?)
        .ok_or_else(|| Error::resource("enumeration size overflows"))?;
    if total > cfg.enumeration_cap {
        return Err(Error::resource(format!(
            "{total} inputs to verify, cap is {}",
            cfg.enumeration_cap
        )));
    }
    for (i, w) in p.alphabet().words_of_length(p.range()).enumerate() {
        if i % 4096 == 0 {
            cfg.check_cancelled()?;
        }
        let accepted = accept.contains(&p.eval(&w)?);
        if compiled.satisfied_by(&p.trace(&w)?) != accepted {
            return Err(Error::Certificate(format!(
                "certificate disagrees with acceptance on input {}",
                p.alphabet().format_word(&w)
            )));
        }
        if compiled.satisfied_by(&q.trace(&w)?) != accepted {
            return Err(Error::Certificate(format!(
                "compressed trace flips the certificate on input {}",
                p.alphabet().format_word(&w)
            )));
        }
    }
    Ok(q)
}

/// A word over the stamp's alphabet evaluating to each monoid element.
fn element_words(stamp: &Stamp) -> Result<Vec<Word>> {
    let m = stamp.monoid();
    let mut words: Vec<Option<Word>> = vec![None; m.size()];
    words[m.identity()] = Some(Vec::new());
    let mut queue = VecDeque::from([m.identity()]);
    while let Some(x) = queue.pop_front() {
        for a in 0..stamp.alphabet().len() {
            let y = m.mul(x, stamp.image(a));
            if words[y].is_none() {
                let mut w = words[x].clone().expect("queued elements carry a word");
                w.push(a);
                words[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    words
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            w.ok_or_else(|| Error::input(format!("element {i} is not a product of letter images")))
        })
        .collect()
}

/// The shipped certificate family: for programs over M_k accepted on the
/// classes of Z_k, the trace word is equivalent to its image under the
/// substitution element -> representative word, so the preimage of the Z_k
/// expression under that substitution characterizes acceptance. Returns the
/// syntactic stamp of Z_k, its accepting classes, and the certificate over
/// the trace alphabet of M_k.
pub fn derive_mk_certificate(k: usize, cfg: &Config) -> Result<(Stamp, BTreeSet<usize>, BoolCombo)> {
    let (stamp, accept) = mk_stamp(k, cfg)?;
    let reps = element_words(&stamp)?;
    let trace_alphabet = evaluation_stamp(stamp.monoid())?.alphabet().clone();
    let pieces =
        sum_inverse_morphism(&zk_expr(k)?, stamp.alphabet(), &trace_alphabet, &reps)?;
    let combo = BoolCombo::Or(pieces.into_iter().map(BoolCombo::Leaf).collect());
    Ok((stamp, accept, combo))
}

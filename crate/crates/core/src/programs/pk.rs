//! The P_k construction: a program over M_k of length at most 4 n^k that
//! recognizes K_{n,S}, the words over {0,1} whose first k ones sit at a
//! tuple of the k-set S.
//!
//! The program walks every candidate position j for the next one. Reading a
//! one at j emits top_k when j can start a tuple of S and bottom_k when it
//! cannot; the recursion for the remaining k-1 ones runs between that
//! instruction and a closing guard that emits bottom_k on a one again. On an
//! actual input, the first one hit settles the top_k/bottom_k choice and
//! every later one trips a guard, so the trace word spells out membership in
//! Z_k. Reading a zero always emits the identity.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::reglang::Stamp;
use crate::sums::{mk_stamp, KSet};

use super::{Instruction, Program};

/// Returns the program over M_k and its acceptance set (the classes of Z_k).
pub fn build_pk(s: &KSet, cfg: &Config) -> Result<(Program, BTreeSet<usize>)> {
    let k = s.k();
    if k == 0 {
        return Err(Error::input("the P_k construction starts at k = 1"));
    }
    let n = s.n();
    let budget = (n as u64)
        .checked_pow(k as u32)
        .and_then(|t| t.checked_mul(4))
        .ok_or_else(|| Error::resource("program length 4 n^k overflows"))?;
    if budget > cfg.enumeration_cap {
        return Err(Error::resource(format!(
            "P_{k} would have up to {budget} instructions, cap is {}",
            cfg.enumeration_cap
        )));
    }
    let (stamp, accept) = mk_stamp(k, cfg)?;
    let mut instructions = Vec::new();
    emit(&stamp, s, k, 1, &mut instructions)?;
    let program =
        Program::new(n, Alphabet::of_chars("01".chars()), Arc::clone(stamp.monoid()), instructions)?;
    Ok((program, accept))
}

fn emit(
    stamp: &Stamp,
    s: &KSet,
    level: usize,
    from: usize,
    out: &mut Vec<Instruction>,
) -> Result<()> {
    if level == 0 {
        return Ok(());
    }
    let top = image(stamp, 'T', level);
    let bottom = image(stamp, 'B', level);
    let one = stamp.monoid().identity();
    for j in from..=s.n() {
        let tails = s.restrict(j)?;
        let mark = if tails.is_empty() { bottom } else { top };
        out.push(Instruction { position: j, map: vec![one, mark] });
        emit(stamp, &tails, level - 1, j + 1, out)?;
        out.push(Instruction { position: j, map: vec![one, bottom] });
    }
    Ok(())
}

fn image(stamp: &Stamp, kind: char, level: usize) -> usize {
    let id = stamp
        .alphabet()
        .id_of(&format!("{kind}{level}"))
        .expect("Y_k alphabets carry Tl and Bl for every level l <= k");
    stamp.image(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sums::{k_language, random_kset};

    #[test]
    fn p1_walks_the_worked_example() {
        let cfg = Config::default();
        let s = KSet::new(2, 1, [vec![2]]).unwrap();
        let (p, accept) = build_pk(&s, &cfg).unwrap();
        // blocks (j, f) (j, g) for j = 1, 2
        let positions: Vec<usize> = p.instructions().iter().map(|i| i.position).collect();
        assert_eq!(positions, vec![1, 1, 2, 2]);
        assert!(accept.contains(&p.eval_str("01").unwrap()));
        assert!(!accept.contains(&p.eval_str("10").unwrap()));
        assert!(!accept.contains(&p.eval_str("11").unwrap()));
        assert!(!accept.contains(&p.eval_str("00").unwrap()));
    }

    #[test]
    fn pk_recognizes_the_position_language() {
        let cfg = Config::default();
        for k in 1..=2 {
            for n in 0..=5 {
                for seed in 0..3 {
                    let s = match random_kset(n, k, 100 * k as u64 + seed) {
                        Ok(s) => s,
                        Err(_) => continue, // k > n: no tuples to sample
                    };
                    let (p, accept) = build_pk(&s, &cfg).unwrap();
                    let oracle = k_language(&s).unwrap();
                    let check = p.recognizes_exhaustive(&accept, &oracle, &cfg).unwrap();
                    assert!(check.ok, "k={k} n={n} seed={seed}: {:?}", check.counterexample);
                }
            }
        }
    }

    #[test]
    fn pk_length_stays_under_four_n_to_the_k() {
        let cfg = Config::default();
        for (k, n) in [(1, 8), (2, 6), (2, 8)] {
            let s = random_kset(n, k, 42).unwrap();
            let (p, _) = build_pk(&s, &cfg).unwrap();
            assert!(p.len() <= 4 * n.pow(k as u32), "k={k} n={n}: {}", p.len());
        }
    }

    #[test]
    fn arity_zero_is_rejected() {
        let cfg = Config::default();
        let s = KSet::new(3, 0, [vec![]]).unwrap();
        assert!(build_pk(&s, &cfg).is_err());
    }

    #[test]
    fn empty_range_rejects_the_empty_word() {
        let cfg = Config::default();
        let s = KSet::new(0, 1, []).unwrap();
        let (p, accept) = build_pk(&s, &cfg).unwrap();
        assert!(p.is_empty());
        assert!(!accept.contains(&p.eval(&[]).unwrap()));
    }
}

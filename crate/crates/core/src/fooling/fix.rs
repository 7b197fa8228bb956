//! The output-fixing recursion and the fooling pairs built from it.
//!
//! Over a monoid in DA, the recursion pins a few more positions of a
//! compatible mask until the sandwiched product u·P(w)·v is one constant
//! element for every safe completion w. Case analysis: while some
//! instruction can emit an element that strictly drops u's R-class (or v's
//! L-class) under a compatible fix, split the program there and recurse on
//! both halves; when nothing can move either class, the product is trapped
//! in one H-class and aperiodicity makes it a single element, computed from
//! one completion inside delta*.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::algebra::{FiniteMonoid, GreenData, VarietyId};
use crate::alphabet::Word;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::programs::{Instruction, Program};
use crate::reglang::Dfa;

use super::{
    dangerous_positions, delta_compatible, is_safe_completion, least_constrained, FoolingConfig,
    Mask,
};

/// Result of [`fix_output`]: the refined mask, the constant output, and the
/// measured recursion height for the growth audit.
#[derive(Clone, Debug)]
pub struct FixResult {
    pub mask: Mask,
    /// The constant value of u·P(w)·v over all safe completions w.
    pub output: usize,
    /// Height of the case recursion; 0 means the closing case applied
    /// immediately.
    pub height: usize,
    /// Fixed positions of the input mask, for the growth formula.
    pub initial_fixed: usize,
    /// Longest delta word, the `l` of the growth formula.
    pub max_len: usize,
}

impl FixResult {
    pub fn fixed(&self) -> usize {
        self.mask.fixed_count()
    }

    /// The growth allowance for the measured height.
    pub fn bound(&self) -> Option<BigUint> {
        mask_growth_bound(self.height, self.max_len, self.initial_fixed)
    }

    /// Does the fixed count respect the allowance? Heights too large to
    /// materialize the bound trivially pass.
    pub fn within_bound(&self) -> bool {
        match self.bound() {
            Some(b) => BigUint::from(self.fixed()) <= b,
            None => true,
        }
    }
}

/// (2^h · 6l)^(2^h) · max(initial_fixed, 1). None once 2^h makes the value
/// too large to be worth materializing; any feasible mask is then far below
/// it anyway.
pub fn mask_growth_bound(height: usize, max_len: usize, initial_fixed: usize) -> Option<BigUint> {
    if height > 16 {
        return None;
    }
    let doubling = 1u64 << height;
    let base = BigUint::from(doubling) * BigUint::from(6 * max_len as u64);
    Some(base.pow(doubling as u32) * BigUint::from(initial_fixed.max(1)))
}

struct FixCtx<'a> {
    fool: &'a FoolingConfig,
    cfg: &'a Config,
    monoid: &'a FiniteMonoid,
    green: GreenData,
    letters: usize,
    depth_cap: usize,
}

/// Fix the candidate position if the mask allows it: free slots are fixed,
/// a matching fixed slot is kept, a clashing one rules the candidate out.
fn try_fix(mask: &Mask, position: usize, letter: usize) -> Option<Mask> {
    match mask.at(position) {
        None => Some(mask.fix(position, letter).expect("free slot accepts any letter")),
        Some(b) if b == letter => Some(mask.clone()),
        Some(_) => None,
    }
}

fn eval_slice(m: &FiniteMonoid, instrs: &[Instruction], w: &[usize]) -> usize {
    instrs.iter().fold(m.identity(), |acc, ins| m.mul(acc, ins.map[w[ins.position - 1]]))
}

fn fix_rec(
    ctx: &FixCtx,
    mask: Mask,
    instrs: &[Instruction],
    u: usize,
    v: usize,
    depth: usize,
) -> Result<(Mask, usize, usize)> {
    ctx.cfg.check_cancelled()?;
    if depth > ctx.depth_cap {
        return Err(Error::Certificate(
            "the fixing recursion exceeded its depth bound; the monoid does not behave like DA"
                .into(),
        ));
    }
    let one = ctx.monoid.identity();

    // Case 1: some instruction can emit an element R-bad for u under a
    // compatible fix. Smallest instruction index, then smallest letter.
    for (i, ins) in instrs.iter().enumerate() {
        for a in 0..ctx.letters {
            if !ctx.monoid.is_r_bad(&ctx.green, u, ins.map[a]) {
                continue;
            }
            let Some(candidate) = try_fix(&mask, ins.position, a) else { continue };
            if !delta_compatible(&candidate, ctx.fool) {
                continue;
            }
            // prefix first: before i nothing is R-bad for u, so u·P'(w)
            // stays in u's R-class and the first recursion pins it
            let (m1, t1, h1) = fix_rec(ctx, candidate, &instrs[..i], u, one, depth + 1)?;
            let lifted = ctx.monoid.mul(t1, ins.map[a]);
            let (m2, t, h2) = fix_rec(ctx, m1, &instrs[i + 1..], lifted, v, depth + 1)?;
            return Ok((m2, t, 1 + h1.max(h2)));
        }
    }

    // Case 2: no instruction moves u, but v itself does.
    if ctx.monoid.is_r_bad(&ctx.green, u, v) {
        let (m1, t1, h1) = fix_rec(ctx, mask, instrs, u, one, depth + 1)?;
        return Ok((m1, ctx.monoid.mul(t1, v), 1 + h1));
    }

    // Case 3: mirror of Case 1 on the L side. Largest instruction index:
    // after it nothing is L-bad for v, so the suffix recursion goes first.
    for (i, ins) in instrs.iter().enumerate().rev() {
        for a in 0..ctx.letters {
            if !ctx.monoid.is_l_bad(&ctx.green, v, ins.map[a]) {
                continue;
            }
            let Some(candidate) = try_fix(&mask, ins.position, a) else { continue };
            if !delta_compatible(&candidate, ctx.fool) {
                continue;
            }
            let (m1, t1, h1) = fix_rec(ctx, candidate, &instrs[i + 1..], one, v, depth + 1)?;
            let lifted = ctx.monoid.mul(ins.map[a], t1);
            let (m2, t, h2) = fix_rec(ctx, m1, &instrs[..i], u, lifted, depth + 1)?;
            return Ok((m2, t, 1 + h1.max(h2)));
        }
    }

    // Case 4: mirror of Case 2.
    if ctx.monoid.is_l_bad(&ctx.green, v, u) {
        let (m1, t1, h1) = fix_rec(ctx, mask, instrs, one, v, depth + 1)?;
        return Ok((m1, ctx.monoid.mul(u, t1), 1 + h1));
    }

    // Case 5: nothing can leave u's R-class or v's L-class, so u·P(w)·v sits
    // in one H-class; aperiodicity collapses it to a single element. Close
    // the mask around one delta* completion.
    let w0 = least_constrained(ctx.fool.star_dfa(), mask.slots(), true).ok_or_else(|| {
        Error::Certificate("a mask lost delta-compatibility during fixing".into())
    })?;
    let mut closed = mask;
    for p in dangerous_positions(&closed, ctx.fool) {
        if closed.at(p).is_none() {
            closed = closed.fix(p, w0[p - 1])?;
        }
    }
    let t = ctx.monoid.mul(ctx.monoid.mul(u, eval_slice(ctx.monoid, instrs, &w0)), v);
    Ok((closed, t, 0))
}

/// Refine `mask` so that u·P(w)·v is the same element for every safe
/// completion w of the refined mask. Needs the program's monoid in DA and a
/// delta-compatible mask of the program's range.
pub fn fix_output(
    mask: &Mask,
    p: &Program,
    u: usize,
    v: usize,
    fool: &FoolingConfig,
    cfg: &Config,
) -> Result<FixResult> {
    if p.alphabet() != fool.alphabet() {
        return Err(Error::input("program and delta use different alphabets"));
    }
    if mask.len() != p.range() {
        return Err(Error::input(format!(
            "mask length {} does not match program range {}",
            mask.len(),
            p.range()
        )));
    }
    let monoid = p.monoid().as_ref();
    monoid.check_element(u)?;
    monoid.check_element(v)?;
    if !monoid.satisfies_variety(VarietyId::DA) {
        return Err(Error::input("output fixing needs a monoid in DA"));
    }
    if !delta_compatible(mask, fool) {
        return Err(Error::input("the mask has no completion in delta*"));
    }
    let ctx = FixCtx {
        fool,
        cfg,
        monoid,
        green: monoid.green(),
        letters: fool.alphabet().len(),
        depth_cap: 2 * monoid.size() * monoid.size() + 4,
    };
    let (fixed, output, height) = fix_rec(&ctx, mask.clone(), p.instructions(), u, v, 0)?;
    debug_assert!(fixed.is_submask_of(mask));
    Ok(FixResult {
        mask: fixed,
        output,
        height,
        initial_fixed: mask.fixed_count(),
        max_len: fool.max_len(),
    })
}

/// A machine-checked fooling pair: two safe completions of the fixed mask
/// that evaluate to the same element but land on opposite sides of the
/// target language.
#[derive(Clone, Debug)]
pub struct FoolingCertificate {
    pub mask: Mask,
    /// The constant program output over safe completions.
    pub output: usize,
    pub height: usize,
    pub w0: Word,
    pub w1: Word,
    /// Program evaluations on w0 and w1; both equal `output`.
    pub outputs: [usize; 2],
    /// Target membership of w0 and w1; always opposite.
    pub memberships: [bool; 2],
    /// Whether the acceptance set contains the constant output, i.e. the one
    /// verdict the program gives to both words.
    pub program_accepts: bool,
}

/// Either a verified pair or a structured explanation why the range is too
/// small for one.
#[derive(Clone, Debug)]
pub enum FoolingOutcome {
    Pair(FoolingCertificate),
    Insufficient { reason: String },
}

/// Run the fixing lemma on the all-free mask and extract two safe
/// completions the target separates. The pair certifies that `p` with
/// acceptance set `accept` does not recognize `target` at this range.
pub fn fooling_pair(
    p: &Program,
    accept: &BTreeSet<usize>,
    fool: &FoolingConfig,
    target: &Dfa,
    cfg: &Config,
) -> Result<FoolingOutcome> {
    if &target.alphabet != fool.alphabet() {
        return Err(Error::input("target language and delta use different alphabets"));
    }
    if target.num_states() > 64 {
        return Err(Error::resource("the target automaton exceeds 64 states"));
    }
    for &e in accept {
        p.monoid().check_element(e)?;
    }
    let n = p.range();
    let free = Mask::free(n);
    if !delta_compatible(&free, fool) {
        return Ok(FoolingOutcome::Insufficient {
            reason: format!("delta* contains no word of length {n}"),
        });
    }
    let one = p.monoid().identity();
    let fix = fix_output(&free, p, one, one, fool, cfg)?;

    let dangerous = dangerous_positions(&fix.mask, fool);
    if (1..=n).all(|q| dangerous.contains(&q)) {
        return Ok(FoolingOutcome::Insufficient {
            reason: format!("no safe position is left at range {n}; increase the range"),
        });
    }
    let w0 = least_constrained(fool.star_dfa(), fix.mask.slots(), true).ok_or_else(|| {
        Error::Certificate("the fixed mask lost delta-compatibility".into())
    })?;

    // Any word agreeing with w0 on the dangerous positions is a safe
    // completion; search the target automaton for one on the other side.
    let constraints: Vec<Option<usize>> = (1..=n)
        .map(|q| if dangerous.contains(&q) { Some(w0[q - 1]) } else { None })
        .collect();
    let m0 = target.accepts(&w0);
    let Some(w1) = least_constrained(target, &constraints, !m0) else {
        return Ok(FoolingOutcome::Insufficient {
            reason: "every safe completion falls on the same side of the target".into(),
        });
    };

    let outputs = [p.eval(&w0)?, p.eval(&w1)?];
    let memberships = [m0, target.accepts(&w1)];
    if outputs != [fix.output; 2] {
        return Err(Error::Certificate(format!(
            "a safe completion escaped the fixed output: {:?}",
            outputs
        )));
    }
    if !is_safe_completion(&fix.mask, &w0, fool) || !is_safe_completion(&fix.mask, &w1, fool) {
        return Err(Error::Certificate("a candidate completion is not safe".into()));
    }
    debug_assert_ne!(memberships[0], memberships[1]);
    Ok(FoolingOutcome::Pair(FoolingCertificate {
        mask: fix.mask,
        output: fix.output,
        height: fix.height,
        w0,
        w1,
        outputs,
        memberships,
        program_accepts: accept.contains(&fix.output),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::alphabet::Alphabet;
    use crate::programs::random_program;
    use crate::reglang::{compile_regex, regex_to_nfa, syntactic_stamp, Regex, Stamp};

    fn abc() -> Alphabet {
        Alphabet::of_chars("abc".chars())
    }

    fn c_ab() -> FoolingConfig {
        FoolingConfig::parse(abc(), &["c", "ab"]).unwrap()
    }

    /// Contains-an-a over {a,b,c}: a three-element monoid in DA (identity,
    /// an idempotent for a, a zero for c).
    fn three_element_da_stamp() -> (Stamp, BTreeSet<usize>) {
        let re = Regex::parse("b*a(a+b)*").unwrap();
        let dfa = regex_to_nfa(&re, Some(abc())).unwrap().determinize().minimize();
        syntactic_stamp(&dfa, &Config::default()).unwrap()
    }

    fn trivial_program(n: usize, len: usize) -> Program {
        let m = Arc::new(FiniteMonoid::trivial());
        let instrs = (0..len)
            .map(|i| Instruction { position: 1 + i % n, map: vec![0; 3] })
            .collect();
        Program::new(n, abc(), m, instrs).unwrap()
    }

    #[test]
    fn empty_program_closes_only_the_boundary() {
        let fool = c_ab();
        let (stamp, _) = three_element_da_stamp();
        let p = Program::empty(10, abc(), Arc::clone(stamp.monoid()));
        let m = stamp.monoid();
        for u in 0..m.size() {
            for v in 0..m.size() {
                let fix = fix_output(&Mask::free(10), &p, u, v, &fool, &Config::default()).unwrap();
                assert_eq!(fix.output, m.mul(u, v));
                // with no instructions only the pass-through cases can fire,
                // once to clear v and once to clear u
                assert!(fix.height <= 2);
                assert_eq!(fix.mask.fixed_positions(), vec![1, 2, 9, 10]);
                assert!(fix.within_bound());
            }
        }
        let one = m.identity();
        let fix = fix_output(&Mask::free(10), &p, one, one, &fool, &Config::default()).unwrap();
        assert_eq!(fix.height, 0);
    }

    #[test]
    fn trivial_monoid_pins_nothing_but_the_boundary() {
        let fool = c_ab();
        let p = trivial_program(10, 12);
        let fix = fix_output(&Mask::free(10), &p, 0, 0, &fool, &Config::default()).unwrap();
        assert_eq!(fix.output, 0);
        assert_eq!(fix.height, 0);
        assert_eq!(fix.mask.fixed_positions(), vec![1, 2, 9, 10]);
    }

    #[test]
    fn fixed_masks_freeze_the_output_exhaustively() {
        let fool = c_ab();
        let (stamp, _) = three_element_da_stamp();
        let m = stamp.monoid();
        let n = 10;
        for seed in 0..4 {
            let p = random_program(&abc(), n, m, 14, seed);
            for (u, v) in [(0, 0), (1, 2), (2, 1), (1, 1)] {
                let fix = fix_output(&Mask::free(n), &p, u, v, &fool, &Config::default()).unwrap();
                assert!(fix.mask.is_submask_of(&Mask::free(n)));
                assert!(delta_compatible(&fix.mask, &fool));
                assert!(fix.height <= 2 * m.size() * m.size());
                assert!(fix.within_bound());

                // every safe completion of the result evaluates to t
                let free: Vec<usize> =
                    (1..=n).filter(|&q| fix.mask.at(q).is_none()).collect();
                let mut count = 0;
                for w in abc().words_of_length(free.len()) {
                    let mut full = vec![0; n];
                    for q in 1..=n {
                        if let Some(a) = fix.mask.at(q) {
                            full[q - 1] = a;
                        }
                    }
                    for (slot, &letter) in free.iter().zip(&w) {
                        full[slot - 1] = letter;
                    }
                    if !is_safe_completion(&fix.mask, &full, &fool) {
                        continue;
                    }
                    count += 1;
                    let got = m.mul(m.mul(u, p.eval(&full).unwrap()), v);
                    assert_eq!(got, fix.output);
                }
                assert!(count > 0, "no safe completion left to check");
            }
        }
    }

    #[test]
    fn sampled_safe_completions_agree_at_larger_range() {
        let fool = c_ab();
        let (stamp, _) = three_element_da_stamp();
        let m = stamp.monoid();
        let n = 40;
        let p = random_program(&abc(), n, m, 20, 7);
        let fix = fix_output(&Mask::free(n), &p, 1, 2, &fool, &Config::default()).unwrap();
        let w0 = least_constrained(fool.star_dfa(), fix.mask.slots(), true).unwrap();
        let dangerous = dangerous_positions(&fix.mask, &fool);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let mut w = w0.clone();
            for q in 1..=n {
                if !dangerous.contains(&q) && rng.gen_bool(0.5) {
                    w[q - 1] = rng.gen_range(0..3);
                }
            }
            assert!(is_safe_completion(&fix.mask, &w, &fool));
            assert_eq!(m.mul(m.mul(1, p.eval(&w).unwrap()), 2), fix.output);
        }
    }

    #[test]
    fn non_da_monoids_and_broken_masks_are_rejected() {
        let fool = c_ab();
        let m = Arc::new(crate::algebra::testutil::b2_by_hand());
        let map: Vec<usize> = vec![1, 2, 0];
        let p = Program::new(
            4,
            abc(),
            m,
            vec![Instruction { position: 1, map: map.clone() }],
        )
        .unwrap();
        let err = fix_output(&Mask::free(4), &p, 0, 0, &fool, &Config::default());
        assert!(matches!(err, Err(Error::Input(_))));

        // incompatible mask: bb cannot appear inside (c+ab)*
        let (stamp, _) = three_element_da_stamp();
        let q = Program::empty(4, abc(), Arc::clone(stamp.monoid()));
        let bad = Mask::parse("⊥bb⊥", &abc()).unwrap();
        let err = fix_output(&bad, &q, 0, 0, &fool, &Config::default());
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn growth_bound_scales_with_height() {
        assert_eq!(mask_growth_bound(0, 2, 0), Some(BigUint::from(12u32)));
        assert_eq!(mask_growth_bound(0, 2, 3), Some(BigUint::from(36u32)));
        assert_eq!(mask_growth_bound(1, 2, 0), Some(BigUint::from(576u32)));
        assert_eq!(mask_growth_bound(17, 2, 0), None);
    }

    #[test]
    fn fooling_pair_on_the_trivial_monoid() {
        let fool = c_ab();
        let p = trivial_program(10, 6);
        let target = compile_regex("(c+ab)*").unwrap();
        let outcome =
            fooling_pair(&p, &BTreeSet::from([0]), &fool, &target, &Config::default()).unwrap();
        let FoolingOutcome::Pair(cert) = outcome else { panic!("expected a pair") };
        assert_eq!(cert.outputs, [0, 0]);
        assert_ne!(cert.memberships[0], cert.memberships[1]);
        assert!(target.accepts(&cert.w0) != target.accepts(&cert.w1));
    }

    #[test]
    fn da_programs_cannot_track_c_plus_ab_star() {
        let fool = c_ab();
        let (stamp, accept) = three_element_da_stamp();
        let p = Program::from_stamp(&stamp, 40);
        let target = compile_regex("(c+ab)*").unwrap();
        let outcome = fooling_pair(&p, &accept, &fool, &target, &Config::default()).unwrap();
        let FoolingOutcome::Pair(cert) = outcome else { panic!("expected a pair") };
        assert_eq!(cert.outputs[0], cert.outputs[1]);
        assert_ne!(cert.memberships[0], cert.memberships[1]);
        assert!(is_safe_completion(&cert.mask, &cert.w0, &fool));
        assert!(is_safe_completion(&cert.mask, &cert.w1, &fool));
    }

    #[test]
    fn mod_two_counting_splits_on_a_parity_edit() {
        let ab = Alphabet::of_chars("ab".chars());
        let fool = FoolingConfig::parse(ab.clone(), &["a", "b"]).unwrap();
        // words with an even number of a's
        let target = compile_regex("(b+ab*a)*").unwrap();
        let m = Arc::new(FiniteMonoid::u1());
        let p = random_program(&ab, 20, &m, 30, 5);
        let outcome =
            fooling_pair(&p, &BTreeSet::from([0]), &fool, &target, &Config::default()).unwrap();
        let FoolingOutcome::Pair(cert) = outcome else { panic!("expected a pair") };
        let parity =
            |w: &Word| w.iter().filter(|&&x| x == 0).count() % 2;
        assert_ne!(parity(&cert.w0), parity(&cert.w1));
        assert_eq!(cert.outputs[0], cert.outputs[1]);
    }

    #[test]
    fn short_ranges_report_insufficient_instead_of_failing() {
        let fool = c_ab();
        let (stamp, accept) = three_element_da_stamp();
        let p = Program::from_stamp(&stamp, 4);
        let target = compile_regex("(c+ab)*").unwrap();
        let outcome = fooling_pair(&p, &accept, &fool, &target, &Config::default()).unwrap();
        assert!(matches!(outcome, FoolingOutcome::Insufficient { .. }));
    }
}

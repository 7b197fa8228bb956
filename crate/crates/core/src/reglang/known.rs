//! The named witness monoids and the ready-made non-tameness report.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::algebra::{FiniteMonoid, VarietyId};
use crate::config::Config;
use crate::error::Result;

use super::analysis::{
    is_quasi_essentially_v, is_quasi_v, stability_index, verify_ev_certificate, EvCertificate,
    EvDecision, QuasiDecision,
};
use super::dfa::compile_regex;
use super::stamp::{syntactic_stamp, Stamp};

/// Syntactic stamp and accepting set of the language of a regex, in one step.
pub fn syntactic_stamp_of_regex(pattern: &str, cfg: &Config) -> Result<(Stamp, BTreeSet<usize>)> {
    let dfa = compile_regex(pattern)?;
    syntactic_stamp(&dfa, cfg)
}

/// The syntactic monoid of `pattern` restricted to the images of nonempty
/// words. Both witness languages below contain the empty word but no pure
/// filler word, so their full syntactic monoids split the unit in two: the
/// class of the empty word and the class of the filler letter, which is an
/// identity for every nonempty class. Dropping the empty-word class leaves
/// the monoid the witnesses are traditionally defined as.
fn cached_image_semigroup(cell: &OnceLock<FiniteMonoid>, pattern: &str) -> FiniteMonoid {
    cell.get_or_init(|| {
        let (stamp, _) = syntactic_stamp_of_regex(pattern, &Config::default())
            .expect("static witness construction");
        let (monoid, _) = stamp
            .monoid()
            .generated_subsemigroup(stamp.images())
            .expect("witness image semigroup carries the filler class as identity");
        monoid
    })
    .clone()
}

/// B2, the six-element monoid of nonempty-word classes of (c*ac*bc*)*.
/// Aperiodic, outside DA; dividing a monoid certifies it is outside DA.
pub fn b2() -> FiniteMonoid {
    static CELL: OnceLock<FiniteMonoid> = OnceLock::new();
    cached_image_semigroup(&CELL, "(c*ac*bc*)*")
}

/// U, the monoid of nonempty-word classes of ((b+c)*a(b+c)*b(b+c)*)*. The
/// second witness: an aperiodic monoid outside DA divides B2 or U (or both).
pub fn u_monoid() -> FiniteMonoid {
    static CELL: OnceLock<FiniteMonoid> = OnceLock::new();
    cached_image_semigroup(&CELL, "((b+c)*a(b+c)*b(b+c)*)*")
}

/// Resolves the monoid names accepted wherever a serialized format allows a
/// reference in place of an inline table.
pub fn named_monoid(name: &str) -> Option<FiniteMonoid> {
    match name {
        "trivial" => Some(FiniteMonoid::trivial()),
        "u1" => Some(FiniteMonoid::u1()),
        "b2" => Some(b2()),
        "u" => Some(u_monoid()),
        _ => None,
    }
}

/// Everything needed to exhibit that J is not tame: the syntactic stamp of
/// (a+b)*ac+ has all its languages p-recognizable over J, yet its stable
/// stamp is not essentially-J. The report carries both the decision
/// procedure's own certificate and the classic counterexample family
/// (aa)((bb)(aa))^k(cc) vs (aa)((bb)(aa))^k(bb)(cc), verified for every k.
#[derive(Debug)]
pub struct JNontamenessReport {
    pub language: String,
    pub stability_index: usize,
    pub quasi_j: QuasiDecision,
    pub stable: Stamp,
    pub decision: EvDecision,
    pub classic_certificate: EvCertificate,
}

pub fn j_nontameness_report(cfg: &Config) -> Result<JNontamenessReport> {
    let pattern = "(a+b)*ac~";
    let (stamp, _) = syntactic_stamp_of_regex(pattern, cfg)?;
    let analysis = stability_index(&stamp);
    let quasi_j = is_quasi_v(&stamp, VarietyId::J);
    let (stable, decision) = is_quasi_essentially_v(&stamp, VarietyId::J, cfg)?;

    let tok = |s: &str| stable.alphabet().id_of(s).expect("two-letter block over {a,b,c}");
    let classic_certificate = EvCertificate {
        variety: VarietyId::J,
        identity: "(xy)^w = (xy)^w x".to_string(),
        identity_index: 0,
        var_words: vec![vec![tok("bb")], vec![tok("aa")]],
        context_x: vec![tok("aa")],
        context_y: vec![tok("cc")],
        stride: 1,
        from_k: 1,
        all_k: true,
    };
    verify_ev_certificate(&stable, &classic_certificate)?;

    Ok(JNontamenessReport {
        language: pattern.to_string(),
        stability_index: analysis.stability_index,
        quasi_j,
        stable,
        decision,
        classic_certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::testutil;

    #[test]
    fn b2_matches_the_hand_built_table() {
        let m = b2();
        assert_eq!(m.size(), 6);
        assert!(crate::algebra::is_isomorphic(&m, &testutil::b2_by_hand()));
    }

    // Neither defining language contains a pure filler word (each starred
    // block spends an a and a b), so the filler class is distinct from the
    // empty-word class and the full syntactic monoids carry one extra unit.
    #[test]
    fn full_syntactic_monoids_split_the_unit() {
        let cfg = Config::default();
        let (b2_stamp, _) = syntactic_stamp_of_regex("(c*ac*bc*)*", &cfg).unwrap();
        assert_eq!(b2_stamp.monoid().size(), 7);
        let (u_stamp, _) = syntactic_stamp_of_regex("((b+c)*a(b+c)*b(b+c)*)*", &cfg).unwrap();
        assert_eq!(u_stamp.monoid().size(), 8);
        assert_eq!(u_monoid().size(), 7);
    }

    #[test]
    fn witness_monoids_are_aperiodic_but_not_in_da() {
        for m in [b2(), u_monoid()] {
            assert!(m.satisfies_variety(VarietyId::AperiodicA));
            assert!(!m.satisfies_variety(VarietyId::DA));
        }
    }

    #[test]
    fn j_nontameness_report_checks_out() {
        let report = j_nontameness_report(&Config::default()).unwrap();
        assert_eq!(report.stability_index, 2);
        assert!(!report.quasi_j.holds);
        assert!(!report.decision.holds);
        assert!(report.classic_certificate.all_k);
    }
}

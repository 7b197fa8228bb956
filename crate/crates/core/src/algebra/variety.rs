//! Variety membership through omega-identities.
//!
//! Each supported variety is axiomatized by finitely many identities over
//! terms built from variables, concatenation, and the omega power (the unique
//! idempotent power of the monoid). Membership is decided by brute force over
//! all variable assignments.

use serde::{Deserialize, Serialize};

use super::FiniteMonoid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarietyId {
    /// The trivial variety: only the one-element monoid.
    TrivialI,
    /// Commutative monoids: xy = yx.
    Com,
    /// J-trivial monoids: (xy)^w = (xy)^w x = y (xy)^w.
    J,
    /// (xy)^w = (xy)^w x (xy)^w.
    DA,
    /// Aperiodic monoids: x^w = x^(w+1).
    AperiodicA,
}

impl VarietyId {
    pub const ALL: [VarietyId; 5] = [
        VarietyId::TrivialI,
        VarietyId::Com,
        VarietyId::J,
        VarietyId::DA,
        VarietyId::AperiodicA,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VarietyId::TrivialI => "I",
            VarietyId::Com => "Com",
            VarietyId::J => "J",
            VarietyId::DA => "DA",
            VarietyId::AperiodicA => "A",
        }
    }

    pub fn parse(text: &str) -> Option<VarietyId> {
        match text.to_ascii_lowercase().as_str() {
            "i" | "trivial" | "trivial-i" => Some(VarietyId::TrivialI),
            "com" => Some(VarietyId::Com),
            "j" => Some(VarietyId::J),
            "da" => Some(VarietyId::DA),
            "a" | "aperiodic" | "aperiodic-a" => Some(VarietyId::AperiodicA),
        _ => None,
        }
    }

    /// Varieties containing this one, within the supported catalog
    /// (I ⊆ Com, I ⊆ J ⊆ DA ⊆ A).
    pub fn contained_in(self) -> &'static [VarietyId] {
        match self {
            VarietyId::TrivialI => &[
                VarietyId::TrivialI,
                VarietyId::Com,
                VarietyId::J,
                VarietyId::DA,
                VarietyId::AperiodicA,
            ],
            VarietyId::Com => &[VarietyId::Com],
            VarietyId::J => &[VarietyId::J, VarietyId::DA, VarietyId::AperiodicA],
            VarietyId::DA => &[VarietyId::DA, VarietyId::AperiodicA],
            VarietyId::AperiodicA => &[VarietyId::AperiodicA],
        }
    }

    pub fn identities(self) -> &'static [OmegaIdentity] {
        use IdentityTerm::*;
        static TRIVIAL: [OmegaIdentity; 1] =
            [OmegaIdentity { display: "x = y", vars: 2, lhs: &Var(0), rhs: &Var(1) }];
        static COM: [OmegaIdentity; 1] = [OmegaIdentity {
            display: "xy = yx",
            vars: 2,
            lhs: &Seq(&[Var(0), Var(1)]),
            rhs: &Seq(&[Var(1), Var(0)]),
        }];
        const XY_OMEGA: IdentityTerm = Omega(&Seq(&[Var(0), Var(1)]));
        static J_IDS: [OmegaIdentity; 2] = [
            OmegaIdentity {
                display: "(xy)^w = (xy)^w x",
                vars: 2,
                lhs: &XY_OMEGA,
                rhs: &Seq(&[XY_OMEGA, Var(0)]),
            },
            OmegaIdentity {
                display: "(xy)^w = y (xy)^w",
                vars: 2,
                lhs: &XY_OMEGA,
                rhs: &Seq(&[Var(1), XY_OMEGA]),
            },
        ];
        static DA_IDS: [OmegaIdentity; 1] = [OmegaIdentity {
            display: "(xy)^w = (xy)^w x (xy)^w",
            vars: 2,
            lhs: &XY_OMEGA,
            rhs: &Seq(&[XY_OMEGA, Var(0), XY_OMEGA]),
        }];
        static APERIODIC: [OmegaIdentity; 1] = [OmegaIdentity {
            display: "x^w = x^(w+1)",
            vars: 1,
            lhs: &Omega(&Var(0)),
            rhs: &Seq(&[Omega(&Var(0)), Var(0)]),
        }];
        match self {
            VarietyId::TrivialI => &TRIVIAL,
            VarietyId::Com => &COM,
            VarietyId::J => &J_IDS,
            VarietyId::DA => &DA_IDS,
            VarietyId::AperiodicA => &APERIODIC,
        }
    }
}

impl std::fmt::Display for VarietyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A term over variables with concatenation and omega powers.
#[derive(Debug)]
pub enum IdentityTerm {
    Var(u8),
    Seq(&'static [IdentityTerm]),
    Omega(&'static IdentityTerm),
}

pub struct OmegaIdentity {
    pub display: &'static str,
    pub vars: usize,
    pub lhs: &'static IdentityTerm,
    pub rhs: &'static IdentityTerm,
}

impl std::fmt::Debug for OmegaIdentity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.display)
    }
}

/// Evaluate a term in `m` with omega interpreted as `m.idempotent_power()`.
pub fn eval_term(m: &FiniteMonoid, term: &IdentityTerm, assignment: &[usize], omega: usize) -> usize {
    match term {
        IdentityTerm::Var(i) => assignment[*i as usize],
        IdentityTerm::Seq(parts) => parts
            .iter()
            .fold(m.identity(), |acc, t| m.mul(acc, eval_term(m, t, assignment, omega))),
        IdentityTerm::Omega(t) => m.pow(eval_term(m, t, assignment, omega), omega),
    }
}

/// Materialize a term as a word, substituting `words` for variables and
/// repeating omega powers `k` times.
pub(crate) fn term_word(term: &IdentityTerm, words: &[Vec<usize>], k: usize) -> Vec<usize> {
    match term {
        IdentityTerm::Var(i) => words[*i as usize].clone(),
        IdentityTerm::Seq(parts) => parts.iter().flat_map(|t| term_word(t, words, k)).collect(),
        IdentityTerm::Omega(t) => {
            let base = term_word(t, words, k);
            let mut out = Vec::with_capacity(base.len() * k);
            for _ in 0..k {
                out.extend_from_slice(&base);
            }
            out
        }
    }
}

pub(super) fn satisfies(m: &FiniteMonoid, v: VarietyId) -> bool {
    find_violation(m, v).is_none()
}

pub(super) fn find_violation(m: &FiniteMonoid, v: VarietyId) -> Option<(&'static OmegaIdentity, Vec<usize>)> {
    let omega = m.idempotent_power();
    for id in v.identities() {
        let mut assignment = vec![0usize; id.vars];
        loop {
            if eval_term(m, id.lhs, &assignment, omega) != eval_term(m, id.rhs, &assignment, omega) {
                return Some((id, assignment));
            }
            // odometer over assignments
            let mut i = id.vars;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                assignment[i] += 1;
                if assignment[i] < m.size() {
                    break;
                }
                assignment[i] = 0;
            }
            if assignment.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{b2_by_hand, cyclic, left_zero};
    use super::*;

    #[test]
    fn variety_chain_on_small_monoids() {
        let trivial = FiniteMonoid::trivial();
        for v in VarietyId::ALL {
            assert!(trivial.satisfies_variety(v), "trivial monoid is in {v}");
        }

        let z2 = cyclic(2);
        assert!(z2.satisfies_variety(VarietyId::Com));
        assert!(!z2.satisfies_variety(VarietyId::AperiodicA));
        assert!(!z2.satisfies_variety(VarietyId::J));
        assert!(!z2.satisfies_variety(VarietyId::TrivialI));

        let lz = left_zero(2);
        assert!(!lz.satisfies_variety(VarietyId::Com));
        assert!(!lz.satisfies_variety(VarietyId::J), "left zeros break (xy)^w = (xy)^w x? xy=x, x^w=x, x*x=x... they break y(xy)^w");
        assert!(lz.satisfies_variety(VarietyId::DA));
        assert!(lz.satisfies_variety(VarietyId::AperiodicA));

        let b2 = b2_by_hand();
        assert!(b2.satisfies_variety(VarietyId::AperiodicA));
        assert!(!b2.satisfies_variety(VarietyId::DA));
        assert!(!b2.satisfies_variety(VarietyId::J));
    }

    #[test]
    fn violations_are_real() {
        let b2 = b2_by_hand();
        let omega = b2.idempotent_power();
        let (id, assignment) = b2.variety_violation(VarietyId::DA).unwrap();
        assert_ne!(
            eval_term(&b2, id.lhs, &assignment, omega),
            eval_term(&b2, id.rhs, &assignment, omega)
        );
        assert!(b2.variety_violation(VarietyId::AperiodicA).is_none());
    }

    #[test]
    fn containment_is_respected_by_identities() {
        // if a monoid satisfies V it satisfies every variety containing V
        for m in [FiniteMonoid::trivial(), cyclic(2), cyclic(3), left_zero(2), b2_by_hand()] {
            for v in VarietyId::ALL {
                if m.satisfies_variety(v) {
                    for &w in v.contained_in() {
                        assert!(m.satisfies_variety(w), "{v} => {w} failed on {m:?}");
                    }
                }
            }
        }
    }
}

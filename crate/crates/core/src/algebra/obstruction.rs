//! Why a monoid fails DA: either a nontrivial group hides inside (a power
//! cycle of length >= 2), or the monoid is aperiodic and one of the two
//! minimal aperiodic non-DA monoids divides it.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::reglang::known;

use super::{divides, FiniteMonoid, VarietyId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DaObstruction {
    /// x^w != x^(w+1); k >= 2 is the least exponent with x^(w+k) = x^w
    /// (the cycle length of x).
    NotAperiodic { x: usize, k: usize },
    /// The 6-element Brandt monoid divides it.
    DividedByB2,
    /// The 7-element monoid U divides it.
    DividedByU,
}

/// Pre: `m` is not in DA. Produces a witness for the failure.
pub fn find_da_obstruction(m: &FiniteMonoid, cfg: &Config) -> Result<DaObstruction> {
    if m.satisfies_variety(VarietyId::DA) {
        return Err(Error::input("monoid satisfies the DA identity; no obstruction exists"));
    }
    if !m.satisfies_variety(VarietyId::AperiodicA) {
        let omega = m.idempotent_power();
        for x in 0..m.size() {
            let xw = m.pow(x, omega);
            if m.mul(xw, x) != xw {
                let (_, k) = m.power_profile(x);
                debug_assert!(k >= 2 && m.pow(x, omega + k) == xw);
                return Ok(DaObstruction::NotAperiodic { x, k });
            }
        }
        unreachable!("non-aperiodic monoid has an element with x^w != x^(w+1)");
    }
    if divides(&known::b2(), m, cfg)? {
        return Ok(DaObstruction::DividedByB2);
    }
    if divides(&known::u_monoid(), m, cfg)? {
        return Ok(DaObstruction::DividedByU);
    }
    // Aperiodic monoids outside DA are divided by B2 or U; reaching this
    // point means a cap or an invalid table interfered.
    Err(Error::input("aperiodic monoid outside DA admits no B2/U division witness; table is inconsistent"))
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{b2_by_hand, cyclic};
    use super::*;

    #[test]
    fn z2_obstruction_is_its_generator() {
        let cfg = Config::default();
        let got = find_da_obstruction(&cyclic(2), &cfg).unwrap();
        assert_eq!(got, DaObstruction::NotAperiodic { x: 1, k: 2 });
    }

    #[test]
    fn b2_obstruction_is_b2_division() {
        let cfg = Config::default();
        let got = find_da_obstruction(&b2_by_hand(), &cfg).unwrap();
        assert_eq!(got, DaObstruction::DividedByB2);
    }

    // B2 and U are incomparable under division, so U reports the U witness.
    #[test]
    fn u_obstruction_is_u_division() {
        let cfg = Config::default();
        let got = find_da_obstruction(&crate::reglang::u_monoid(), &cfg).unwrap();
        assert_eq!(got, DaObstruction::DividedByU);
    }

    #[test]
    fn da_member_is_rejected() {
        let cfg = Config::default();
        assert!(find_da_obstruction(&FiniteMonoid::trivial(), &cfg).is_err());
    }
}

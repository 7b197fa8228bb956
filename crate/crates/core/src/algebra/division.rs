//! Brute-force division testing: T divides S iff some submonoid of S maps
//! onto T. Submonoids are enumerated through generator subsets; morphisms are
//! searched by assigning generator images and closing under products.

use std::collections::{HashMap, HashSet};

use crate::config::Config;
use crate::error::{Error, Result};

use super::{FiniteMonoid, VarietyId};

/// Distinct submonoids of `m`, each with a smallest-found generating set.
/// Generator subsets are enumerated in order of increasing size, so the first
/// subset producing a given closure is recorded.
fn distinct_submonoids(m: &FiniteMonoid) -> Vec<(Vec<usize>, Vec<usize>)> {
    let pool: Vec<usize> = (0..m.size()).filter(|&x| x != m.identity()).collect();
    let n = pool.len();
    assert!(n < usize::BITS as usize, "division cap keeps subsets enumerable");
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mut masks: Vec<u64> = (0..1u64 << n).collect();
    masks.sort_by_key(|mask| mask.count_ones());
    for mask in masks {
        let gens: Vec<usize> = (0..n).filter(|&i| (mask >> i) & 1 == 1).map(|i| pool[i]).collect();
        let elements = m.closure(&gens);
        if seen.insert(elements.clone()) {
            out.push((gens, elements));
        }
    }
    out
}

/// Try to extend the partial morphism `h` with `h[g] = t`, closing under
/// products with everything already assigned. Fails on any inconsistency.
fn close_with(host: &FiniteMonoid, target: &FiniteMonoid, h: &mut HashMap<usize, usize>, g: usize, t: usize) -> bool {
    let mut queue: Vec<usize> = Vec::new();
    match h.get(&g) {
        Some(&old) => {
            if old != t {
                return false;
            }
        }
        None => {
            h.insert(g, t);
            queue.push(g);
        }
    }
    while let Some(x) = queue.pop() {
        let hx = h[&x];
        let assigned: Vec<(usize, usize)> = h.iter().map(|(&k, &v)| (k, v)).collect();
        for (y, hy) in assigned {
            for (p, hp) in [
                (host.mul(x, y), target.mul(hx, hy)),
                (host.mul(y, x), target.mul(hy, hx)),
            ] {
                match h.get(&p) {
                    Some(&old) => {
                        if old != hp {
                            return false;
                        }
                    }
                    None => {
                        h.insert(p, hp);
                        queue.push(p);
                    }
                }
            }
        }
    }
    true
}

fn extend(
    host: &FiniteMonoid,
    target: &FiniteMonoid,
    h: &HashMap<usize, usize>,
    gens: &[usize],
    gi: usize,
) -> bool {
    if gi == gens.len() {
        let image: HashSet<usize> = h.values().copied().collect();
        return image.len() == target.size();
    }
    for t in 0..target.size() {
        let mut h2 = h.clone();
        if close_with(host, target, &mut h2, gens[gi], t) && extend(host, target, &h2, gens, gi + 1) {
            return true;
        }
    }
    false
}

/// Is there a surjective morphism from `<gens>` (inside `host`) onto `target`?
fn exists_surjection(host: &FiniteMonoid, gens: &[usize], target: &FiniteMonoid) -> bool {
    let mut h = HashMap::new();
    h.insert(host.identity(), target.identity());
    extend(host, target, &h, gens, 0)
}

/// Does `t` divide `s` (is `t` a quotient of a submonoid of `s`)?
pub fn divides(t: &FiniteMonoid, s: &FiniteMonoid, cfg: &Config) -> Result<bool> {
    if s.size() > cfg.division_cap {
        return Err(Error::resource(format!(
            "division host has {} elements, cap is {}",
            s.size(),
            cfg.division_cap
        )));
    }
    if t.size() > s.size() {
        return Ok(false);
    }
    let t_idempotents = t.idempotents().len();
    let t_sat: Vec<bool> = VarietyId::ALL.iter().map(|&v| t.satisfies_variety(v)).collect();
    for (gens, elements) in distinct_submonoids(s) {
        cfg.check_cancelled()?;
        if elements.len() < t.size() {
            continue;
        }
        let (sub, _) = s.generated_submonoid(&gens)?;
        // a surjective image has no more idempotents and satisfies every
        // identity of its preimage, so prune on both
        if sub.idempotents().len() < t_idempotents {
            continue;
        }
        let compatible = VarietyId::ALL
            .iter()
            .zip(&t_sat)
            .all(|(&v, &ts)| !sub.satisfies_variety(v) || ts);
        if !compatible {
            continue;
        }
        if exists_surjection(s, &gens, t) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Table-level isomorphism up to reindexing: a surjective morphism between
/// equal-sized monoids is a bijection, and its inverse is a morphism too.
pub fn is_isomorphic(a: &FiniteMonoid, b: &FiniteMonoid) -> bool {
    if a.size() != b.size() {
        return false;
    }
    if a.idempotents().len() != b.idempotents().len() {
        return false;
    }
    let full: Vec<usize> = (0..a.size()).collect();
    for (gens, elements) in distinct_submonoids(a) {
        if elements == full {
            return exists_surjection(a, &gens, b);
        }
    }
    // the full generator set always produces the full closure
    unreachable!("some generator subset generates the whole monoid")
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{b2_by_hand, cyclic, left_zero};
    use super::*;

    #[test]
    fn z2_does_not_divide_b2() {
        let cfg = Config::default();
        assert!(!divides(&cyclic(2), &b2_by_hand(), &cfg).unwrap());
    }

    #[test]
    fn divisions_that_hold() {
        let cfg = Config::default();
        let b2 = b2_by_hand();
        assert!(divides(&b2, &b2, &cfg).unwrap());
        assert!(divides(&FiniteMonoid::trivial(), &b2, &cfg).unwrap());
        assert!(divides(&cyclic(3), &cyclic(6), &cfg).unwrap());
        assert!(divides(&cyclic(2), &cyclic(6), &cfg).unwrap());
        assert!(!divides(&cyclic(4), &cyclic(6), &cfg).unwrap());
        assert!(divides(&left_zero(1), &left_zero(2), &cfg).unwrap());
    }

    #[test]
    fn division_respects_cap() {
        let cfg = Config { division_cap: 5, ..Config::default() };
        assert!(divides(&cyclic(2), &b2_by_hand(), &cfg).is_err());
    }

    #[test]
    fn isomorphism_ignores_indexing() {
        let z6 = cyclic(6);
        // relabel Z6 by the permutation i -> (i*5) mod 6 (an automorphism source)
        let perm: Vec<usize> = (0..6).map(|i| i * 5 % 6).collect();
        let mut inv = vec![0; 6];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let table: Vec<Vec<usize>> = (0..6)
            .map(|i| (0..6).map(|j| perm[(inv[i] + inv[j]) % 6]).collect())
            .collect();
        let relabeled = FiniteMonoid::new(table, 0, None).unwrap();
        assert!(is_isomorphic(&z6, &relabeled));
        assert!(!is_isomorphic(&z6, &left_zero(5)));
        assert!(!is_isomorphic(&cyclic(2), &cyclic(3)));
    }
}

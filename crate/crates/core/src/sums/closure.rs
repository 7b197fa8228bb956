//! Quotients and inverse morphic images of SUM languages, built
//! constructively so that every result is again a set of SUM expressions of
//! no higher level (their union is the quotient or preimage).
//!
//! The case analyses follow the marker letter: for a LeftAvoids split the
//! marker occurrence in a word is its first, so a left quotient either
//! consumes it inside `u` or leaves it in the remainder; RightAvoids is the
//! mirror image. Emptiness needs no special casing because every SUM
//! expression denotes a nonempty language, so impossible branches simply
//! produce no expressions.

use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, LetterId, Word};
use crate::error::{Error, Result};

use super::{sum_member, Avoidance, SumExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientSide {
    /// u^{-1} L: strip the prefix u.
    Left,
    /// L u^{-1}: strip the suffix u.
    Right,
}

pub fn sum_quotient(
    e: &SumExpr,
    alphabet: &Alphabet,
    u: &[LetterId],
    side: QuotientSide,
) -> Result<BTreeSet<SumExpr>> {
    e.validate(alphabet.len())?;
    for &a in u {
        alphabet.check_letter(a)?;
    }
    match side {
        QuotientSide::Left => left_quotient(e, alphabet, u),
        QuotientSide::Right => {
            let rev: Word = u.iter().rev().copied().collect();
            let pieces = left_quotient(&e.mirror(), alphabet, &rev)?;
            Ok(pieces.iter().map(SumExpr::mirror).collect())
        }
    }
}

fn left_quotient(e: &SumExpr, alphabet: &Alphabet, u: &[LetterId]) -> Result<BTreeSet<SumExpr>> {
    let mut out = BTreeSet::new();
    match e {
        SumExpr::Star(letters) => {
            if u.iter().all(|a| letters.contains(a)) {
                out.insert(e.clone());
            }
        }
        SumExpr::Split { left, marker, right, side: Avoidance::LeftAvoids } => {
            // the marker occurrence in any word is the first marker letter
            match u.iter().position(|a| a == marker) {
                None => {
                    for piece in left_quotient(left, alphabet, u)? {
                        out.insert(SumExpr::Split {
                            left: Box::new(piece),
                            marker: *marker,
                            right: right.clone(),
                            side: Avoidance::LeftAvoids,
                        });
                    }
                }
                Some(i) => {
                    if sum_member(left, alphabet, &u[..i])? {
                        out.extend(left_quotient(right, alphabet, &u[i + 1..])?);
                    }
                }
            }
        }
        SumExpr::Split { left, marker, right, side: Avoidance::RightAvoids } => {
            // the marker occurrence is the last marker letter: it lies in the
            // remainder (keep the split, quotient the left side) or in u
            for piece in left_quotient(left, alphabet, u)? {
                out.insert(SumExpr::Split {
                    left: Box::new(piece),
                    marker: *marker,
                    right: right.clone(),
                    side: Avoidance::RightAvoids,
                });
            }
            if let Some(i) = u.iter().rposition(|a| a == marker) {
                if sum_member(left, alphabet, &u[..i])? {
                    out.extend(left_quotient(right, alphabet, &u[i + 1..])?);
                }
            }
        }
    }
    Ok(out)
}

/// Preimage under the morphism sending source letter `b` to `images[b]`.
/// Returns SUM expressions over the source alphabet.
pub fn sum_inverse_morphism(
    e: &SumExpr,
    target: &Alphabet,
    source: &Alphabet,
    images: &[Word],
) -> Result<BTreeSet<SumExpr>> {
    e.validate(target.len())?;
    if images.len() != source.len() {
        return Err(Error::input(format!(
            "morphism gives {} images for {} source letters",
            images.len(),
            source.len()
        )));
    }
    for w in images {
        for &a in w {
            target.check_letter(a)?;
        }
    }
    inverse(e, target, source, images)
}

fn inverse(
    e: &SumExpr,
    target: &Alphabet,
    source: &Alphabet,
    images: &[Word],
) -> Result<BTreeSet<SumExpr>> {
    let mut out = BTreeSet::new();
    match e {
        SumExpr::Star(letters) => {
            let b: BTreeSet<LetterId> = (0..source.len())
                .filter(|&b| images[b].iter().all(|a| letters.contains(a)))
                .collect();
            out.insert(SumExpr::Star(b));
        }
        SumExpr::Split { left, marker, right, side: Avoidance::LeftAvoids } => {
            // a source word lands in L1 a L2 iff some letter b supplies the
            // marker: split its image at the first marker occurrence and
            // charge the flanks to quotients of the two sides
            for b in 0..source.len() {
                let Some(i) = images[b].iter().position(|x| x == marker) else { continue };
                let (u1, u2) = (&images[b][..i], &images[b][i + 1..]);
                let left_pieces: BTreeSet<SumExpr> = {
                    let mut set = BTreeSet::new();
                    for q in sum_quotient(left, target, u1, QuotientSide::Right)? {
                        set.extend(inverse(&q, target, source, images)?);
                    }
                    set
                };
                let right_pieces: BTreeSet<SumExpr> = {
                    let mut set = BTreeSet::new();
                    for q in sum_quotient(right, target, u2, QuotientSide::Left)? {
                        set.extend(inverse(&q, target, source, images)?);
                    }
                    set
                };
                for lp in &left_pieces {
                    for rp in &right_pieces {
                        out.insert(SumExpr::Split {
                            left: Box::new(lp.clone()),
                            marker: b,
                            right: Box::new(rp.clone()),
                            side: Avoidance::LeftAvoids,
                        });
                    }
                }
            }
        }
        SumExpr::Split { side: Avoidance::RightAvoids, .. } => {
            // reduce to the mirrored morphism: rev . phi = phi_rev . rev
            let rev_images: Vec<Word> =
                images.iter().map(|w| w.iter().rev().copied().collect()).collect();
            for piece in inverse(&e.mirror(), target, source, &rev_images)? {
                out.insert(piece.mirror());
            }
        }
    }
    Ok(out)
}

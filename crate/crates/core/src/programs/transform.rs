//! Closure transformers: the operations showing p-recognition survives
//! pairing, inverse length-multiplying morphisms and two-sided quotients,
//! plus the single-scan normal form available over commutative monoids.

use std::sync::Arc;

use crate::algebra::VarietyId;
use crate::alphabet::{Alphabet, LetterId, Word};
use crate::config::Config;
use crate::error::{Error, Result};

use super::{Instruction, Program};

impl Program {
    /// Runs both programs on the same input inside M x N: instructions of
    /// `self` act on the left coordinate, instructions of `other` on the
    /// right, so the output is the pair of both outputs.
    pub fn product_combine(&self, other: &Program, cfg: &Config) -> Result<Program> {
        if self.range != other.range {
            return Err(Error::input(format!(
                "ranges {} and {} differ",
                self.range, other.range
            )));
        }
        if self.alphabet != other.alphabet {
            return Err(Error::input("programs read different alphabets"));
        }
        let m = self.monoid.as_ref();
        let n = other.monoid.as_ref();
        let prod = Arc::new(m.direct_product(n, cfg)?);
        let mut instructions = Vec::with_capacity(self.len() + other.len());
        for ins in &self.instructions {
            let map = ins.map.iter().map(|&x| m.pair_index(n, x, n.identity())).collect();
            instructions.push(Instruction { position: ins.position, map });
        }
        for ins in &other.instructions {
            let map = ins.map.iter().map(|&y| m.pair_index(n, m.identity(), y)).collect();
            instructions.push(Instruction { position: ins.position, map });
        }
        Ok(Program { range: self.range, alphabet: self.alphabet.clone(), monoid: prod, instructions })
    }

    /// Precomposes the program with a length-multiplying morphism: every
    /// letter of `source` maps to a block of `k` letters of the program's
    /// alphabet, and the result satisfies eval(Q, w) = eval(self, mu(w)).
    pub fn inverse_lm(&self, source: &Alphabet, images: &[Word], k: usize) -> Result<Program> {
        if k == 0 || self.range % k != 0 {
            return Err(Error::input(format!(
                "program range {} is not a multiple of the block length {k}",
                self.range
            )));
        }
        if images.len() != source.len() {
            return Err(Error::input("one image word per source letter required"));
        }
        for image in images {
            if image.len() != k {
                return Err(Error::input(format!(
                    "image of length {} in a length-multiplying morphism of block {k}",
                    image.len()
                )));
            }
            for &a in image {
                self.alphabet.check_letter(a)?;
            }
        }
        let instructions = self
            .instructions
            .iter()
            .map(|ins| {
                let q = (ins.position - 1) / k + 1;
                let r = (ins.position - 1) % k;
                let map = images.iter().map(|image| ins.map[image[r]]).collect();
                Instruction { position: q, map }
            })
            .collect();
        Ok(Program {
            range: self.range / k,
            alphabet: source.clone(),
            monoid: Arc::clone(&self.monoid),
            instructions,
        })
    }

    /// Pins the first |u| and last |v| input positions to fixed words:
    /// eval(Q, w) = eval(self, u w v). Instructions on pinned positions
    /// become constant-image instructions reading position 1.
    pub fn fix_boundary(&self, u: &[LetterId], v: &[LetterId]) -> Result<Program> {
        let cut = u.len() + v.len();
        if cut > self.range {
            return Err(Error::input(format!(
                "boundary words cover {cut} positions, program range is only {}",
                self.range
            )));
        }
        for &a in u.iter().chain(v) {
            self.alphabet.check_letter(a)?;
        }
        let inner = self.range - cut;
        let tail_start = self.range - v.len();
        if inner == 0 {
            // no position is left to read: representable only when the fully
            // pinned product is the identity
            let folded = self
                .monoid
                .product(self.instructions.iter().map(|ins| {
                    let p = ins.position;
                    if p <= u.len() {
                        ins.map[u[p - 1]]
                    } else {
                        ins.map[v[p - tail_start - 1]]
                    }
                }));
            if folded != self.monoid.identity() {
                return Err(Error::input(
                    "fixing every position leaves a constant program with a non-identity output",
                ));
            }
            return Ok(Program::empty(0, self.alphabet.clone(), Arc::clone(&self.monoid)));
        }
        let instructions = self
            .instructions
            .iter()
            .map(|ins| {
                let p = ins.position;
                if p <= u.len() {
                    Instruction { position: 1, map: vec![ins.map[u[p - 1]]; self.alphabet.len()] }
                } else if p > tail_start {
                    Instruction {
                        position: 1,
                        map: vec![ins.map[v[p - tail_start - 1]]; self.alphabet.len()],
                    }
                } else {
                    Instruction { position: p - u.len(), map: ins.map.clone() }
                }
            })
            .collect();
        Ok(Program {
            range: inner,
            alphabet: self.alphabet.clone(),
            monoid: Arc::clone(&self.monoid),
            instructions,
        })
    }

    /// Over a commutative monoid the instructions at one position merge into
    /// a single product map, giving at most one instruction per position in
    /// ascending order without changing any output.
    pub fn single_scan_normalize(&self) -> Result<Program> {
        if !self.monoid.satisfies_variety(VarietyId::Com) {
            return Err(Error::input("single-scan form needs a commutative monoid"));
        }
        let mut merged: Vec<Option<Vec<usize>>> = vec![None; self.range];
        for ins in &self.instructions {
            let slot = merged[ins.position - 1]
                .get_or_insert_with(|| vec![self.monoid.identity(); self.alphabet.len()]);
            for (h, &f) in slot.iter_mut().zip(&ins.map) {
                *h = self.monoid.mul(*h, f);
            }
        }
        let instructions = merged
            .into_iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.map(|map| Instruction { position: i + 1, map }))
            .collect();
        Ok(Program {
            range: self.range,
            alphabet: self.alphabet.clone(),
            monoid: Arc::clone(&self.monoid),
            instructions,
        })
    }
}

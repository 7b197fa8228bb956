//! Strongly unambiguous sums on the command line: membership, the Z_k
//! witness family, and certificate-driven program compression.

use std::path::PathBuf;

use clap::Subcommand;
use serde_json::json;

use pom::algebra::VarietyId;
use pom::alphabet::Alphabet;
use pom::sums::{
    compress_program, derive_mk_certificate, format_sum, mk_stamp, parse_sum, sum_level,
    sum_member, y_alphabet, zk_expr,
};
use pom::{Config, Error, Result};

use crate::program::read_program;
use crate::report::Report;

#[derive(Subcommand)]
pub enum SumCmd {
    /// Decide membership of a word in a sum expression.
    Member {
        /// Alphabet as one string of characters, e.g. ab.
        #[arg(long)]
        alphabet: String,
        /// Expression text, e.g. "SPLIT(STAR{}, 'a', STAR{a,b}, L)".
        #[arg(long)]
        expr: String,
        #[arg(long)]
        word: String,
    },
    /// The level-k witness Z_k and its syntactic monoid M_k.
    Zk {
        #[arg(long)]
        k: usize,
    },
    /// Compress a program over M_k with the derived certificate and verify
    /// the result against the original.
    Compress {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

pub fn run(cmd: SumCmd, cfg: &Config) -> Result<Report> {
    match cmd {
        SumCmd::Member { alphabet, expr, word } => {
            let alphabet = Alphabet::of_chars(alphabet.chars());
            let e = parse_sum(&expr, &alphabet)?;
            let w = alphabet.parse_word(&word)?;
            let mut report = Report::new(format!("sum member {}", alphabet.format_word(&w)));
            report.info(
                "expression",
                json!({
                    "text": format_sum(&e, &alphabet),
                    "level": sum_level(&e),
                    "member": sum_member(&e, &alphabet, &w)?,
                }),
            );
            Ok(report)
        }
        SumCmd::Zk { k } => {
            let alphabet = y_alphabet(k)?;
            let e = zk_expr(k)?;
            let (stamp, accept) = mk_stamp(k, cfg)?;
            let mut report = Report::new(format!("Z_{k}"));
            report.info(
                "language",
                json!({
                    "expression": format_sum(&e, &alphabet),
                    "level": sum_level(&e),
                    "alphabet": alphabet.symbols().collect::<Vec<_>>(),
                }),
            );
            report.check(
                format!("M_{k} lies in DA"),
                stamp.monoid().satisfies_variety(VarietyId::DA),
                json!({
                    "monoid_size": stamp.monoid().size(),
                    "accepting_classes": accept.iter().collect::<Vec<_>>(),
                }),
            );
            Ok(report)
        }
        SumCmd::Compress { file, k } => {
            let (p, file_accept) = read_program(&file)?;
            let (stamp, mk_accept, combo) = derive_mk_certificate(k, cfg)?;
            if p.monoid().as_ref() != stamp.monoid().as_ref() {
                return Err(Error::input(format!(
                    "the program is not over M_{k}; its monoid table differs"
                )));
            }
            let accept = file_accept.unwrap_or(mk_accept);
            let compressed = compress_program(&p, &accept, &combo, cfg)?;

            let n = p.range();
            let sigma = p.alphabet().len();
            let m = p.monoid().size();
            let bound = 4 * sigma * m * m * n.pow(k.max(1) as u32);

            // Equivalence is guaranteed; re-check it word by word when the
            // range is small enough to afford it.
            let total = (sigma as u64).checked_pow(n as u32);
            let verified = match total {
                Some(t) if t <= cfg.enumeration_cap => {
                    let equal = p.alphabet().words_of_length(n).all(|w| {
                        let a = p.eval(&w).expect("word over the program alphabet");
                        let b = compressed.eval(&w).expect("word over the program alphabet");
                        accept.contains(&a) == accept.contains(&b)
                    });
                    Some(equal)
                }
                _ => None,
            };

            let mut report = Report::new(format!("compress over M_{k}"));
            report.check(
                "compressed subprogram stays within the length bound",
                compressed.len() <= bound,
                json!({
                    "original_length": p.len(),
                    "compressed_length": compressed.len(),
                    "bound": bound,
                }),
            );
            match verified {
                Some(equal) => report.check(
                    format!("equivalent to the original on all {sigma}^{n} words"),
                    equal,
                    json!({}),
                ),
                None => report.info(
                    "equivalence re-check skipped",
                    json!({ "note": "range too large to enumerate" }),
                ),
            }
            Ok(report)
        }
    }
}

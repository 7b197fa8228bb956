//! Program file tools: evaluate, check against a regex, build the named
//! constructions, and normalize to single-scan form.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::Subcommand;
use serde_json::json;

use pom::programs::{build_j_trick, build_pk, Program};
use pom::reglang::{regex_to_nfa, Dfa, Regex};
use pom::sums::{random_kset, KSet};
use pom::{Config, Error, Result};

use crate::report::Report;

#[derive(Subcommand)]
pub enum ProgramCmd {
    /// Evaluate the program on one word.
    Eval {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Compare the program against a regex on every word of its range.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        regex: String,
    },
    /// Emit a program as JSON on stdout.
    Build {
        #[command(subcommand)]
        what: BuildCmd,
    },
    /// Merge instructions into at most one per position (commutative monoids).
    Normalize {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum BuildCmd {
    /// The swap-trick family recognizing (a+b)*ac~ at range n.
    Jtrick {
        #[arg(long)]
        n: usize,
    },
    /// P_k for a k-set over [1, n]: explicit --tuples "1,3;2,4", or a
    /// seed-sampled set when omitted.
    Pk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        tuples: Option<String>,
    },
}

pub fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{} is not JSON: {e}", path.display())))
}

pub fn read_program(path: &Path) -> Result<(Program, Option<BTreeSet<usize>>)> {
    Program::from_json(&read_json(path)?)
}

/// Compile a regex into a minimal DFA over a forced alphabet, so languages
/// not mentioning every letter still live over the right one.
pub fn dfa_over(pattern: &str, alphabet: &pom::alphabet::Alphabet) -> Result<Dfa> {
    let re = Regex::parse(pattern)?;
    Ok(regex_to_nfa(&re, Some(alphabet.clone()))?.determinize().minimize())
}

fn parse_tuples(text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|t| {
            t.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::input(format!("bad tuple entry {p:?}")))
                })
                .collect()
        })
        .collect()
}

fn print_program(p: &Program, accept: Option<&BTreeSet<usize>>) {
    let v = p.to_json(accept);
    println!("{}", serde_json::to_string_pretty(&v).expect("program JSON"));
}

pub fn run(cmd: ProgramCmd, cfg: &Config) -> Result<Option<Report>> {
    match cmd {
        ProgramCmd::Eval { file, word } => {
            let (p, accept) = read_program(&file)?;
            let w = p.alphabet().parse_word(&word)?;
            let element = p.eval(&w)?;
            let mut report = Report::new(format!("eval {}", p.alphabet().format_word(&w)));
            report.info(
                "output",
                json!({
                    "element": element,
                    "name": p.monoid().name(element),
                    "accepted": accept.as_ref().map(|acc| acc.contains(&element)),
                }),
            );
            Ok(Some(report))
        }
        ProgramCmd::Check { file, regex } => {
            let (p, accept) = read_program(&file)?;
            let accept =
                accept.ok_or_else(|| Error::input("the program file has no acceptance set"))?;
            let dfa = dfa_over(&regex, p.alphabet())?;
            let rc = p.recognizes_exhaustive(&accept, &dfa, cfg)?;
            let mut report = Report::new(format!("check against {regex}"));
            report.check(
                format!("program agrees with the regex on all words of length {}", p.range()),
                rc.ok,
                json!({
                    "length": p.len(),
                    "counterexample": rc.counterexample.map(|w| p.alphabet().format_word(&w)),
                }),
            );
            Ok(Some(report))
        }
        ProgramCmd::Build { what } => {
            let (p, accept) = match what {
                BuildCmd::Jtrick { n } => build_j_trick(n, cfg)?,
                BuildCmd::Pk { n, k, tuples } => {
                    let s = match tuples {
                        Some(text) => KSet::new(n, k, parse_tuples(&text)?)?,
                        None => random_kset(n, k, cfg.seed)?,
                    };
                    build_pk(&s, cfg)?
                }
            };
            print_program(&p, Some(&accept));
            Ok(None)
        }
        ProgramCmd::Normalize { file } => {
            let (p, accept) = read_program(&file)?;
            let normalized = p.single_scan_normalize()?;
            print_program(&normalized, accept.as_ref());
            Ok(None)
        }
    }
}

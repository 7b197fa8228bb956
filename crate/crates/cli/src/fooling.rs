//! Fooling pairs and completion-set safety from the command line.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::Args;
use serde_json::{json, Value};

use pom::alphabet::Alphabet;
use pom::fooling::{
    check_safe_delta, fooling_pair, FoolingCertificate, FoolingConfig, FoolingOutcome,
};
use pom::programs::Program;
use pom::reglang::syntactic_stamp;
use pom::{Config, Error, Result};

use crate::program::{dfa_over, read_program};
use crate::report::Report;

#[derive(Args)]
pub struct FoolingArgs {
    /// Completion-set words, comma separated, e.g. c,ab.
    #[arg(long, value_delimiter = ',', required = true)]
    delta: Vec<String>,
    /// Alphabet as one string of characters. Defaults to the program file's
    /// alphabet; required otherwise.
    #[arg(long)]
    alphabet: Option<String>,
    /// Program file (JSON). Alternative: --stamp-regex.
    #[arg(long)]
    program: Option<PathBuf>,
    /// Build the program from the syntactic stamp of this regex instead.
    #[arg(long, conflicts_with = "program")]
    stamp_regex: Option<String>,
    /// Program range when building from a stamp.
    #[arg(long, default_value_t = 40)]
    n: usize,
    /// Acceptance set, comma separated element indices. Defaults to the
    /// program file's set or the stamp's accepting classes.
    #[arg(long, value_delimiter = ',')]
    accept: Option<Vec<usize>>,
    /// Regex for the language the pair must separate.
    #[arg(long)]
    target: Option<String>,
    /// Instead of a pair: check safety of the completion set for all masks
    /// up to this length.
    #[arg(long, value_name = "N_MAX")]
    check_safety: Option<usize>,
}

pub fn certificate_json(cert: &FoolingCertificate, p: &Program) -> Result<Value> {
    let alphabet = p.alphabet();
    Ok(json!({
        "mask": cert.mask.format(alphabet)?,
        "t": { "element": cert.output, "name": p.monoid().name(cert.output) },
        "height": cert.height,
        "w0": alphabet.format_word(&cert.w0),
        "w1": alphabet.format_word(&cert.w1),
        "outputs": cert.outputs,
        "memberships": cert.memberships,
        "program_accepts": cert.program_accepts,
    }))
}

fn safety_report(fool: &FoolingConfig, n_max: usize, cfg: &Config) -> Result<Report> {
    let sr = check_safe_delta(fool, n_max, cfg)?;
    let alphabet = fool.alphabet();
    let witness = match &sr.witness {
        Some(w) => json!({
            "mask": w.mask.format(alphabet)?,
            "position": w.position,
            "letter": alphabet.symbol(w.letter),
        }),
        None => Value::Null,
    };
    let mut report = Report::new(format!("safety of the completion set up to length {n_max}"));
    report.check(
        "every safe position of a compatible mask can be fixed freely",
        sr.safe,
        json!({
            "exhaustive": sr.exhaustive,
            "checked": sr.checked,
            "witness": witness,
            "note": if sr.exhaustive { Value::Null } else { json!("sampled") },
        }),
    );
    Ok(report)
}

pub fn run(args: FoolingArgs, cfg: &Config) -> Result<Report> {
    let flag_alphabet = args.alphabet.as_ref().map(|s| Alphabet::of_chars(s.chars()));

    // Safety mode needs no program at all.
    if let Some(n_max) = args.check_safety {
        let alphabet =
            flag_alphabet.ok_or_else(|| Error::input("--check-safety needs --alphabet"))?;
        let words: Vec<&str> = args.delta.iter().map(String::as_str).collect();
        let fool = FoolingConfig::parse(alphabet, &words)?;
        return safety_report(&fool, n_max, cfg);
    }

    let (p, accept) = match (&args.program, &args.stamp_regex) {
        (Some(path), None) => {
            let (p, file_accept) = read_program(path)?;
            let accept = override_accept(args.accept, file_accept, &p)?;
            (p, accept)
        }
        (None, Some(pattern)) => {
            let alphabet =
                flag_alphabet.ok_or_else(|| Error::input("--stamp-regex needs --alphabet"))?;
            let dfa = dfa_over(pattern, &alphabet)?;
            let (stamp, classes) = syntactic_stamp(&dfa, cfg)?;
            let p = Program::from_stamp(&stamp, args.n);
            let accept = override_accept(args.accept, Some(classes), &p)?;
            (p, accept)
        }
        _ => return Err(Error::input("give exactly one of --program or --stamp-regex")),
    };

    let words: Vec<&str> = args.delta.iter().map(String::as_str).collect();
    let fool = FoolingConfig::parse(p.alphabet().clone(), &words)?;
    let pattern = args
        .target
        .as_ref()
        .ok_or_else(|| Error::input("a fooling pair needs --target"))?;
    let target = dfa_over(pattern, p.alphabet())?;

    let mut report = Report::new(format!("fooling pair against {pattern}"));
    match fooling_pair(&p, &accept, &fool, &target, cfg)? {
        FoolingOutcome::Pair(cert) => {
            let detail = certificate_json(&cert, &p)?;
            report.check(
                "two safe completions with equal program output split the target",
                true,
                detail,
            );
        }
        FoolingOutcome::Insufficient { reason } => {
            report.check(
                "two safe completions with equal program output split the target",
                false,
                json!({ "insufficient": reason }),
            );
        }
    }
    Ok(report)
}

fn override_accept(
    flag: Option<Vec<usize>>,
    fallback: Option<BTreeSet<usize>>,
    p: &Program,
) -> Result<BTreeSet<usize>> {
    let accept: BTreeSet<usize> = match (flag, fallback) {
        (Some(list), _) => list.into_iter().collect(),
        (None, Some(set)) => set,
        (None, None) => return Err(Error::input("the program file has no acceptance set")),
    };
    for &e in &accept {
        p.monoid().check_element(e)?;
    }
    Ok(accept)
}

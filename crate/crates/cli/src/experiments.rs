//! The two canned experiments: the non-tameness of J, and the reach and
//! limits of programs over DA.

use serde_json::json;

use pom::algebra::VarietyId;
use pom::fooling::{check_safe_delta, fooling_pair, FoolingConfig, FoolingOutcome};
use pom::programs::{build_j_trick, build_pk, random_program, Program};
use pom::reglang::{compile_regex, syntactic_stamp};
use pom::sums::{compress_program, derive_mk_certificate, k_language, random_kset};
use pom::{Config, Result};

use crate::analyze::certificate_json;
use crate::fooling::certificate_json as fooling_json;
use crate::program::dfa_over;
use crate::report::Report;

pub fn nontameness_j(cfg: &Config) -> Result<Report> {
    let mut report = Report::new("non-tameness of J");

    let dfa = compile_regex("(a+b)*ac~")?;
    let mut all = true;
    let mut per_n = Vec::new();
    for n in 2..=8 {
        let (p, accept) = build_j_trick(n, cfg)?;
        let rc = p.recognizes_exhaustive(&accept, &dfa, cfg)?;
        all &= rc.ok;
        per_n.push(json!({ "n": n, "ok": rc.ok, "length": p.len() }));
    }
    report.check(
        "swap-trick programs over a J monoid recognize (a+b)*ac~ for n = 2..8",
        all,
        json!(per_n),
    );

    let jr = pom::reglang::j_nontameness_report(cfg)?;
    let cert = &jr.classic_certificate;
    let blocks = jr.stable.alphabet();
    // The certificate's identity is (xy)^w = (xy)^w x; spell the separated
    // word family out for the human reader.
    let x = blocks.format_word(&cert.var_words[0]);
    let y = blocks.format_word(&cert.var_words[1]);
    let cx = blocks.format_word(&cert.context_x);
    let cy = blocks.format_word(&cert.context_y);
    report.check(
        "the stable stamp is not essentially J",
        !jr.decision.holds,
        json!({
            "language": jr.language,
            "stability_index": jr.stability_index,
            "quasi_j_holds": jr.quasi_j.holds,
            "certificate": certificate_json(cert, blocks),
            "separated_for_every_k": [
                format!("{cx}({x}{y})^k{cy}"),
                format!("{cx}({x}{y})^k{x}{cy}"),
            ],
        }),
    );

    report.check(
        "a program family recognizes a language no stamp quasi-essentially in J captures",
        all && !jr.decision.holds,
        json!(null),
    );
    Ok(report)
}

/// One fooling run of the DA report: a DA program built from `program_regex`
/// against the non-DA target, over the completion set `delta`.
struct FoolingRun {
    name: &'static str,
    alphabet: &'static str,
    delta: &'static [&'static str],
    target: &'static str,
    program_regex: &'static str,
}

const FOOLING_RUNS: [FoolingRun; 3] = [
    FoolingRun {
        name: "(c+ab)*",
        alphabet: "abc",
        delta: &["c", "ab"],
        target: "(c+ab)*",
        program_regex: "b*a(a+b)*",
    },
    FoolingRun {
        name: "(b+ab)*",
        alphabet: "ab",
        delta: &["b", "ab"],
        target: "(b+ab)*",
        program_regex: "b*ab*",
    },
    FoolingRun {
        // b*((ab*)^2)*: an even number of a's, the k = 2 member of the
        // modular family.
        name: "b*((ab*)^2)*",
        alphabet: "ab",
        delta: &["a", "b"],
        target: "(b+ab*a)*",
        program_regex: "(a+b)*a(a+b)*",
    },
];

pub fn da_experiments(k_max: usize, n: usize, cfg: &Config) -> Result<Report> {
    let mut report = Report::new("programs over DA");

    for k in 1..=k_max {
        let n_pk: usize = 6;
        let bound = 4 * n_pk.pow(k as u32);
        let mut ok = true;
        let mut lengths = Vec::new();
        for round in 0..5 {
            let s = random_kset(n_pk, k, cfg.seed + round)?;
            let (p, accept) = build_pk(&s, cfg)?;
            let oracle = k_language(&s)?;
            let rc = p.recognizes_exhaustive(&accept, &oracle, cfg)?;
            ok &= rc.ok && p.len() <= bound;
            lengths.push(p.len());
        }
        report.check(
            format!("P_{k} matches K_{{{n_pk},S}} on 5 sampled k-sets within length 4·{n_pk}^{k}"),
            ok,
            json!({ "lengths": lengths, "bound": bound }),
        );
    }

    for k in 1..=k_max {
        let (stamp, accept, combo) = derive_mk_certificate(k, cfg)?;
        let in_da = stamp.monoid().satisfies_variety(VarietyId::DA);
        let range = 6;
        let p = random_program(stamp.alphabet(), range, stamp.monoid(), range * range, cfg.seed);
        let compressed = compress_program(&p, &accept, &combo, cfg)?;
        let sigma = stamp.alphabet().len();
        let m = stamp.monoid().size();
        let bound = 4 * sigma * m * m * range.pow(k.max(1) as u32);
        let equal = stamp.alphabet().words_of_length(range).all(|w| {
            let a = p.eval(&w).expect("word over the program alphabet");
            let b = compressed.eval(&w).expect("word over the program alphabet");
            accept.contains(&a) == accept.contains(&b)
        });
        report.check(
            format!("M_{k} is in DA and compression preserves the program's language"),
            in_da && equal && compressed.len() <= bound,
            json!({
                "monoid_size": m,
                "original_length": p.len(),
                "compressed_length": compressed.len(),
                "bound": bound,
            }),
        );
    }

    for run in &FOOLING_RUNS {
        let alphabet = pom::alphabet::Alphabet::of_chars(run.alphabet.chars());
        let fool = FoolingConfig::parse(alphabet.clone(), run.delta)?;

        let safety = check_safe_delta(&fool, 6, cfg)?;
        report.check(
            format!("the completion set for {} is safe up to length 6", run.name),
            safety.safe,
            json!({
                "exhaustive": safety.exhaustive,
                "checked": safety.checked,
                "note": if safety.exhaustive { json!(null) } else { json!("sampled") },
            }),
        );

        let dfa = dfa_over(run.program_regex, &alphabet)?;
        let (stamp, classes) = syntactic_stamp(&dfa, cfg)?;
        let p = Program::from_stamp(&stamp, n);
        let target = dfa_over(run.target, &alphabet)?;
        let (pass, detail) = match fooling_pair(&p, &classes, &fool, &target, cfg)? {
            FoolingOutcome::Pair(cert) => (true, fooling_json(&cert, &p)?),
            FoolingOutcome::Insufficient { reason } => (false, json!({ "insufficient": reason })),
        };
        report.check(
            format!(
                "a DA program of range {n} is fooled on {}: equal outputs, split membership",
                run.name
            ),
            pass,
            detail,
        );
    }

    Ok(report)
}

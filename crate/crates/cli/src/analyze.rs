//! The full language pipeline: syntactic stamp, variety memberships,
//! stability, and the quasi / essentially / quasi-essentially verdicts.

use serde_json::{json, Value};

use pom::algebra::VarietyId;
use pom::alphabet::Alphabet;
use pom::reglang::{
    is_essentially_v, is_quasi_essentially_v, is_quasi_v, stability_index,
    syntactic_stamp_of_regex, EvCertificate, EvDecision,
};
use pom::{Config, Error, Result};

use crate::report::Report;

pub fn certificate_json(cert: &EvCertificate, alphabet: &Alphabet) -> Value {
    json!({
        "identity": cert.identity,
        "var_words": cert.var_words.iter().map(|w| alphabet.format_word(w)).collect::<Vec<_>>(),
        "context_x": alphabet.format_word(&cert.context_x),
        "context_y": alphabet.format_word(&cert.context_y),
        "stride": cert.stride,
        "from_k": cert.from_k,
        "all_k": cert.all_k,
    })
}

fn ev_json(decision: &EvDecision, alphabet: &Alphabet) -> Value {
    json!({
        "holds": decision.holds,
        "quotient_size": decision.quotient.monoid.size(),
        "certificate": decision.certificate.as_ref().map(|c| certificate_json(c, alphabet)),
    })
}

pub fn run(regex: &str, varieties: &[String], cfg: &Config) -> Result<Report> {
    let requested: Vec<VarietyId> = if varieties.is_empty() {
        VarietyId::ALL.to_vec()
    } else {
        varieties
            .iter()
            .map(|name| {
                VarietyId::parse(name)
                    .ok_or_else(|| Error::input(format!("unknown variety {name:?}")))
            })
            .collect::<Result<_>>()?
    };

    let (stamp, _) = syntactic_stamp_of_regex(regex, cfg)?;
    let m = stamp.monoid();
    let analysis = stability_index(&stamp);

    let mut report = Report::new(format!("analyze {regex}"));
    report.info(
        "syntactic monoid",
        json!({
            "size": m.size(),
            "elements": (0..m.size()).map(|x| m.name(x)).collect::<Vec<_>>(),
            "varieties": VarietyId::ALL
                .iter()
                .map(|&v| json!({ "variety": v.name(), "member": m.satisfies_variety(v) }))
                .collect::<Vec<_>>(),
        }),
    );
    report.info(
        "stability",
        json!({
            "index": analysis.stability_index,
            "stable_monoid_size": analysis.stable_monoid.size(),
        }),
    );

    for v in requested {
        let quasi = is_quasi_v(&stamp, v);
        let essentially = is_essentially_v(&stamp, v, cfg)?;
        let (stable, qe) = is_quasi_essentially_v(&stamp, v, cfg)?;
        report.info(
            format!("{} verdicts", v.name()),
            json!({
                "variety": v.name(),
                "quasi": { "holds": quasi.holds, "violation": quasi.violation },
                "essentially": ev_json(&essentially, stamp.alphabet()),
                "quasi_essentially": ev_json(&qe, stable.alphabet()),
            }),
        );
    }
    Ok(report)
}

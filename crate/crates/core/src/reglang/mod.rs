//! Regular languages end to end: regex parsing, minimal DFAs, syntactic
//! stamps, stability analysis, and the essentially-V / quasi-V decisions.

pub mod analysis;
pub mod dfa;
pub mod known;
pub mod regex;
pub mod stamp;

pub use analysis::{
    check_com_program_equations, check_ecom_condition, context_quotient, evaluation_stamp,
    is_essentially_v, is_quasi_essentially_v, is_quasi_v, stability_index, stable_stamp,
    verify_ev_certificate, ComEquationsReport, ComViolation, ContextQuotient, EComReport,
    EvCertificate, EvDecision, QuasiDecision, StampAnalysis,
};
pub use dfa::{compile_regex, regex_to_nfa, Dfa, Nfa};
pub use known::{
    b2, j_nontameness_report, named_monoid, syntactic_stamp_of_regex, u_monoid, JNontamenessReport,
};
pub use regex::Regex;
pub use stamp::{syntactic_stamp, Stamp};

//! Report emission: a human-readable text form and a structured machine
//! form with fixed field names (`condition`, `holds`, `tau_max`, witness
//! labels, `slack`), stable across releases.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::certify::{CertificationReport, DominationWitness, TauMax, ViolationWitness};
use crate::real::Real;
use crate::solver::{HypCheck, HypothesisReport, SolverTrace};

fn number<T: Real>(value: T) -> Value {
    // Non-finite slacks (degenerate comparators) serialize as null.
    json!(value.to_f64_lossy())
}

fn tau_max_value<T: Real>(tau: &TauMax<T>) -> Value {
    match tau {
        TauMax::Finite(t) => number(*t),
        TauMax::Unbounded => json!("unbounded"),
        TauMax::Vacuous => json!("vacuous"),
    }
}

fn domination_witness_value<T: Real>(w: &DominationWitness<T>) -> Value {
    json!({
        "a1": w.a1, "a2": w.a2,
        "b1": w.b1, "b2": w.b2,
        "x1": w.x1, "x2": w.x2,
        "lhs": number(w.lhs),
        "rhs": number(w.rhs),
        "slack": number(w.slack),
    })
}

/// One report as a machine-readable object.
pub fn report_to_json<T: Real>(report: &CertificationReport<T>) -> Value {
    let violation = match &report.violation {
        None => Value::Null,
        Some(v) => {
            let witness = match &v.witness {
                ViolationWitness::Domination(w) => domination_witness_value(w),
                ViolationWitness::Commuting(w) => json!({
                    "a": w.a, "b": w.b, "x": w.x,
                    "phi_b": w.phi_b, "psi_a": w.psi_a,
                }),
            };
            json!({ "kind": v.kind.name(), "witness": witness })
        }
    };
    json!({
        "condition": report.condition.name(),
        "holds": report.holds,
        "tau_max": tau_max_value(&report.tau_max),
        "binding_witness": report
            .binding_witness
            .as_ref()
            .map(domination_witness_value)
            .unwrap_or(Value::Null),
        "violation": violation,
        "discretized": report.discretized,
    })
}

fn write_domination_witness<T: Real>(out: &mut String, w: &DominationWitness<T>) {
    let _ = writeln!(
        out,
        "    a1={} a2={} b1={} b2={} x1={} x2={}",
        w.a1, w.a2, w.b1, w.b2, w.x1, w.x2
    );
    let _ = writeln!(out, "    lhs={} rhs={} slack={}", w.lhs, w.rhs, w.slack);
}

/// One report as human-readable text.
pub fn report_to_text<T: Real>(report: &CertificationReport<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "condition: {}", report.condition.name());
    let _ = writeln!(out, "  holds: {}", report.holds);
    let tau = match &report.tau_max {
        TauMax::Finite(t) => format!("{t}"),
        TauMax::Unbounded => "unbounded".into(),
        TauMax::Vacuous => "vacuous".into(),
    };
    let _ = writeln!(out, "  tau_max: {tau}");
    if let Some(w) = &report.binding_witness {
        let _ = writeln!(out, "  binding witness:");
        write_domination_witness(&mut out, w);
    }
    if let Some(v) = &report.violation {
        let _ = writeln!(out, "  violation ({}):", v.kind.name());
        match &v.witness {
            ViolationWitness::Domination(w) => write_domination_witness(&mut out, w),
            ViolationWitness::Commuting(w) => {
                let _ = writeln!(
                    out,
                    "    a={} b={} x={}: phi(b)={} but psi(a)={}",
                    w.a, w.b, w.x, w.phi_b, w.psi_a
                );
            }
        }
    }
    if report.discretized {
        let _ = writeln!(out, "  note: discretized instance");
    }
    out
}

fn hyp_check_value(check: &HypCheck) -> Value {
    json!({ "holds": check.holds, "witness": check.witness })
}

pub fn hypotheses_to_json<T: Real>(report: &HypothesisReport<T>) -> Value {
    json!({
        "core_nonempty": hyp_check_value(&report.core_nonempty),
        "phi_core_into_core2": hyp_check_value(&report.phi_core_into_core2),
        "phi_core_into_psi_image": hyp_check_value(&report.phi_core_into_psi_image),
        "proximally_commuting": hyp_check_value(&report.proximally_commuting),
        "f_weak_domination": report_to_json(&report.f_weak_domination),
        "regularity": report.regularity_note,
        "all_hold": report.all_hold(),
    })
}

pub fn hypotheses_to_text<T: Real>(report: &HypothesisReport<T>) -> String {
    let mut out = String::new();
    let mut line = |name: &str, check: &HypCheck| {
        let verdict = if check.holds { "holds" } else { "FAILS" };
        let witness = check
            .witness
            .as_ref()
            .map(|w| format!(" — {w}"))
            .unwrap_or_default();
        let _ = writeln!(out, "  {name}: {verdict}{witness}");
    };
    line("(i) core nonempty", &report.core_nonempty);
    line("(ii) phi(core1) inside core2", &report.phi_core_into_core2);
    line("(iii) phi(core1) inside psi(core1)", &report.phi_core_into_psi_image);
    line("(iv) proximal commutativity", &report.proximally_commuting);
    let _ = writeln!(
        out,
        "  (v) f-weak domination: {}",
        if report.f_weak_domination.holds { "holds" } else { "FAILS" }
    );
    let _ = writeln!(out, "  {}", report.regularity_note);
    out
}

/// A trace as a machine-readable object, extending the report format with
/// the step arrays.
pub fn trace_to_json<T: Real>(trace: &SolverTrace<T>) -> Value {
    json!({
        "outcome": trace.outcome.name(),
        "result": trace.result,
        "x_seq": trace.x_seq,
        "a_seq": trace.a_seq,
        "gaps": trace.gaps.iter().map(|&g| number(g)).collect::<Vec<_>>(),
        "audit_slacks": trace.diagnostics.iter().map(|&s| number(s)).collect::<Vec<_>>(),
        "alarms": trace.alarms,
        "hypotheses": trace
            .hypotheses
            .as_ref()
            .map(hypotheses_to_json)
            .unwrap_or(Value::Null),
    })
}

/// A trace as step-indexed text lines.
pub fn trace_to_text<T: Real>(trace: &SolverTrace<T>) -> String {
    let mut out = String::new();
    if let Some(hyp) = &trace.hypotheses {
        let _ = writeln!(out, "hypotheses:");
        out.push_str(&hypotheses_to_text(hyp));
    }
    if !trace.x_seq.is_empty() {
        let _ = writeln!(out, "{:>4}  {:<16} {:<16} {:<24} audit", "step", "x", "a", "gap");
        for i in 0..trace.x_seq.len() {
            let gap = trace
                .gaps
                .get(i)
                .map(|g| format!("{g}"))
                .unwrap_or_else(|| "-".into());
            let audit = if i >= 1 {
                trace
                    .diagnostics
                    .get(i - 1)
                    .map(|s| format!("{s}"))
                    .unwrap_or_else(|| "-".into())
            } else {
                "-".into()
            };
            let _ = writeln!(
                out,
                "{:>4}  {:<16} {:<16} {:<24} {}",
                i, trace.x_seq[i], trace.a_seq[i], gap, audit
            );
        }
    }
    for alarm in &trace.alarms {
        let _ = writeln!(out, "alarm: {alarm}");
    }
    let _ = writeln!(out, "outcome: {}", trace.outcome.name());
    let _ = writeln!(out, "result: {}", trace.result.as_deref().unwrap_or("none"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{certify_f_weak_domination, commutativity_report};
    use crate::ffunc::FFunction;
    use crate::gallery::build_ex22;

    #[test]
    fn json_reports_have_the_fixed_fields() {
        let problem = build_ex22::<f64>(&[]).unwrap();
        let report = certify_f_weak_domination(&problem, &FFunction::log()).unwrap();
        let value = report_to_json(&report);
        for field in ["condition", "holds", "tau_max", "binding_witness", "violation", "discretized"]
        {
            assert!(value.get(field).is_some(), "missing field {field}");
        }
        assert_eq!(value["condition"], "f-weakly-dominates");
        assert_eq!(value["holds"], true);
        assert!(value["tau_max"].is_f64());
        let witness = &value["binding_witness"];
        for field in ["a1", "a2", "b1", "b2", "x1", "x2", "lhs", "rhs", "slack"] {
            assert!(witness.get(field).is_some(), "missing witness field {field}");
        }
    }

    #[test]
    fn commuting_report_renders_both_ways() {
        let problem = build_ex22::<f64>(&[]).unwrap();
        let report = commutativity_report(&problem);
        let value = report_to_json(&report);
        assert_eq!(value["condition"], "proximal-commuting");
        assert_eq!(value["tau_max"], "vacuous");
        let text = report_to_text(&report);
        assert!(text.contains("proximal-commuting"));
    }
}

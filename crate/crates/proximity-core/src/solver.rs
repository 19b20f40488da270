//! Constructive machinery: hypothesis checks, the alternating sequence
//! iteration, the per-step margin audit, the coincidence upgrade, the full
//! pipeline, and the fixed-point iteration for certified self-maps.
//!
//! On a finite space every orbit repeats, so the limit arguments behind the
//! existence results become checkable stopping rules: a repeated value is a
//! coincidence, a nontrivial cycle is surfaced as evidence against the
//! hypotheses, and every claimed result is cross-checked against the
//! brute-force oracle.

use std::collections::HashMap;

use crate::certify::{
    certify_f_weak_contraction, certify_f_weak_domination, CertificationReport, TauMax,
};
use crate::error::{Error, Result};
use crate::ffunc::FFunction;
use crate::problem::ProximityProblem;
use crate::real::Real;
use crate::space::{FiniteMetricSpace, SelfMap};

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// A repeat with all gaps inside the stopping tolerance.
    ConvergedTo,
    /// Two consecutive sequence values coincide.
    CoincidenceFound,
    /// Iteration budget exhausted, or a nontrivial cycle: on a finite space
    /// the latter certifies that some hypothesis is false.
    Stalled,
    /// A hypothesis failed before iterating; see the attached report.
    HypothesisViolated,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::ConvergedTo => "converged-to",
            Outcome::CoincidenceFound => "coincidence-found",
            Outcome::Stalled => "stalled",
            Outcome::HypothesisViolated => "hypothesis-violated",
        }
    }
}

/// One hypothesis verdict, with a human-readable witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypCheck {
    pub holds: bool,
    pub witness: Option<String>,
}

impl HypCheck {
    fn pass() -> Self {
        HypCheck { holds: true, witness: None }
    }

    fn fail(witness: String) -> Self {
        HypCheck { holds: false, witness: Some(witness) }
    }
}

/// Verdicts for the hypotheses the existence results need.
///
/// Closedness and continuity of the restricted maps are automatic on a
/// finite space and carried as a note.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport<T: Real> {
    /// (i) the proximal core of s1 is nonempty.
    pub core_nonempty: HypCheck,
    /// (ii) phi maps the core of s1 into the core of s2.
    pub phi_core_into_core2: HypCheck,
    /// (iii) phi(core of s1) sits inside psi(core of s1).
    pub phi_core_into_psi_image: HypCheck,
    /// (iv) the pair commutes proximally.
    pub proximally_commuting: HypCheck,
    /// (v) psi weakly dominates phi proximally.
    pub f_weak_domination: CertificationReport<T>,
    pub regularity_note: &'static str,
}

impl<T: Real> HypothesisReport<T> {
    pub fn all_hold(&self) -> bool {
        self.core_nonempty.holds
            && self.phi_core_into_core2.holds
            && self.phi_core_into_psi_image.holds
            && self.proximally_commuting.holds
            && self.f_weak_domination.holds
    }

    /// Names of the failed checks, in report order.
    pub fn failed(&self) -> Vec<&'static str> {
        let mut failed = Vec::new();
        if !self.core_nonempty.holds {
            failed.push("core-nonempty");
        }
        if !self.phi_core_into_core2.holds {
            failed.push("phi-core-into-core2");
        }
        if !self.phi_core_into_psi_image.holds {
            failed.push("phi-core-into-psi-image");
        }
        if !self.proximally_commuting.holds {
            failed.push("proximal-commutativity");
        }
        if !self.f_weak_domination.holds {
            failed.push("f-weak-domination");
        }
        failed
    }
}

/// Trace of one run: the driving points, the attainer sequence, consecutive
/// gaps, and any audit output.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace<T: Real> {
    pub x_seq: Vec<String>,
    pub a_seq: Vec<String>,
    /// `d(a_i, a_{i+1})`; one entry fewer than the sequences.
    pub gaps: Vec<T>,
    pub outcome: Outcome,
    pub result: Option<String>,
    /// Per-step margin-audit slacks when the audit applies; empty otherwise.
    pub diagnostics: Vec<T>,
    /// Internal-consistency alarms; empty on sound runs.
    pub alarms: Vec<String>,
    pub hypotheses: Option<HypothesisReport<T>>,
}

impl<T: Real> SolverTrace<T> {
    fn empty(outcome: Outcome) -> Self {
        SolverTrace {
            x_seq: Vec::new(),
            a_seq: Vec::new(),
            gaps: Vec::new(),
            outcome,
            result: None,
            diagnostics: Vec::new(),
            alarms: Vec::new(),
            hypotheses: None,
        }
    }
}

/// Which preimage rule drives the iteration. Both pick the least admissible
/// point in list order; `Xi` additionally requires `psi` to be injective on
/// the core, making the preimage unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationMode {
    PsiPreimage,
    Xi,
}

/// Runs the five hypothesis checks for the existence results.
pub fn check_hypotheses<T: Real>(
    problem: &ProximityProblem<T>,
    f: &FFunction<T>,
) -> Result<HypothesisReport<T>> {
    let space = problem.space();
    let core_nonempty = match problem.proximal_cores() {
        Ok(_) => HypCheck::pass(),
        Err(_) => HypCheck::fail("the proximal core of s1 is empty".into()),
    };

    let mut phi_core_into_core2 = HypCheck::pass();
    for &i in problem.core1_indices() {
        let j = problem.phi(i);
        if !problem.core2_contains(j) {
            phi_core_into_core2 = HypCheck::fail(format!(
                "phi({}) = {} is outside the proximal core of s2",
                space.label(i),
                space.label(j)
            ));
            break;
        }
    }

    let psi_image: Vec<usize> = problem.core1_indices().iter().map(|&i| problem.psi(i)).collect();
    let mut phi_core_into_psi_image = HypCheck::pass();
    for &i in problem.core1_indices() {
        let j = problem.phi(i);
        if !psi_image.contains(&j) {
            phi_core_into_psi_image = HypCheck::fail(format!(
                "phi({}) = {} is outside psi(core of s1)",
                space.label(i),
                space.label(j)
            ));
            break;
        }
    }

    let commuting = problem.is_proximally_commuting();
    let proximally_commuting = match commuting.witness {
        None => HypCheck::pass(),
        Some(w) => HypCheck::fail(format!(
            "phi({}) = {} but psi({}) = {} (antecedent at x = {})",
            w.b, w.phi_b, w.a, w.psi_a, w.x
        )),
    };

    let f_weak_domination = certify_f_weak_domination(problem, f)?;

    Ok(HypothesisReport {
        core_nonempty,
        phi_core_into_core2,
        phi_core_into_psi_image,
        proximally_commuting,
        f_weak_domination,
        regularity_note: "closedness/continuity of the core restrictions: satisfied (finite space)",
    })
}

fn least_attainer_in_core<T: Real>(problem: &ProximityProblem<T>, target: usize) -> Option<usize> {
    problem.core1_indices().iter().copied().find(|&a| problem.attains(a, target))
}

fn least_preimage_in_core<T: Real>(problem: &ProximityProblem<T>, target: usize) -> Option<usize> {
    problem.core1_indices().iter().copied().find(|&x| problem.psi(x) == target)
}

fn psi_injective_on_core<T: Real>(problem: &ProximityProblem<T>) -> Result<()> {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for &i in problem.core1_indices() {
        if let Some(&other) = seen.get(&problem.psi(i)) {
            return Err(Error::PsiNotInjective {
                x1: problem.space().label(other).to_string(),
                x2: problem.space().label(i).to_string(),
            });
        }
        seen.insert(problem.psi(i), i);
    }
    Ok(())
}

/// Generates the alternating sequence from `x0`.
///
/// Each step takes the least core attainer `a_i` of `phi(x_i)` at the set
/// distance and the least core `psi`-preimage of `phi(x_i)` as `x_{i+1}`.
/// Stops at the first coincidence `a_i = a_{i+1}`, on a repeated driving
/// point (a cycle: converged if every gap in the cycle is within `tol_conv`,
/// stalled otherwise), or at the iteration budget.
pub fn generate_sequence<T: Real>(
    problem: &ProximityProblem<T>,
    x0: &str,
    max_iter: usize,
) -> Result<SolverTrace<T>> {
    generate_sequence_with_mode(problem, x0, max_iter, IterationMode::PsiPreimage)
}

pub fn generate_sequence_with_mode<T: Real>(
    problem: &ProximityProblem<T>,
    x0: &str,
    max_iter: usize,
    mode: IterationMode,
) -> Result<SolverTrace<T>> {
    if mode == IterationMode::Xi {
        psi_injective_on_core(problem)?;
    }
    let space = problem.space();
    let start = space.require(x0)?;
    if !problem.core1_contains(start) {
        return Err(Error::NotInCore(x0.to_string()));
    }

    let attain = |x: usize| -> Result<usize> {
        least_attainer_in_core(problem, problem.phi(x)).ok_or_else(|| Error::NoAttainment {
            x: space.label(x).to_string(),
            image: space.label(problem.phi(x)).to_string(),
        })
    };
    let preimage = |x: usize| -> Result<usize> {
        least_preimage_in_core(problem, problem.phi(x)).ok_or_else(|| Error::NoPreimage {
            x: space.label(x).to_string(),
            image: space.label(problem.phi(x)).to_string(),
        })
    };

    let mut trace = SolverTrace::empty(Outcome::Stalled);
    let mut xs: Vec<usize> = vec![start];
    let mut aseq: Vec<usize> = vec![attain(start)?];
    let mut seen: HashMap<usize, usize> = HashMap::new();
    seen.insert(start, 0);

    let mut outcome = Outcome::Stalled;
    for _ in 0..max_iter {
        let x = *xs.last().unwrap();
        let a = *aseq.last().unwrap();
        let x_next = preimage(x)?;
        let a_next = attain(x_next)?;
        xs.push(x_next);
        aseq.push(a_next);
        trace.gaps.push(space.d(a, a_next));
        if problem.phi(a) != problem.psi(a_next) {
            trace.alarms.push(format!(
                "sequence relation failed at step {}: phi({}) != psi({})",
                xs.len() - 2,
                space.label(a),
                space.label(a_next)
            ));
        }
        if a_next == a {
            outcome = Outcome::CoincidenceFound;
            break;
        }
        if let Some(&first) = seen.get(&x_next) {
            // The driving orbit repeated: gaps along the cycle decide.
            let within = trace.gaps[first..].iter().all(|&g| g <= problem.tol_conv());
            outcome = if within { Outcome::ConvergedTo } else { Outcome::Stalled };
            if outcome == Outcome::Stalled {
                trace.alarms.push(format!(
                    "nontrivial cycle of period {} with gap above tol_conv",
                    xs.len() - 1 - first
                ));
            }
            break;
        }
        seen.insert(x_next, xs.len() - 1);
    }

    trace.outcome = outcome;
    trace.x_seq = xs.iter().map(|&i| space.label(i).to_string()).collect();
    trace.a_seq = aseq.iter().map(|&i| space.label(i).to_string()).collect();
    if outcome == Outcome::ConvergedTo || outcome == Outcome::CoincidenceFound {
        trace.result = trace.a_seq.last().cloned();
    }
    Ok(trace)
}

/// Audits a trace against the telescoped margin inequality
/// `F(d(a_i, a_{i+1})) <= F(d(a_0, a_1)) - i * tau`.
///
/// Uses the certified maximal margin unless `tau` forces a value. Emits one
/// slack per step `i >= 1` with `a_i != a_{i+1}`; every slack must be
/// non-positive when weak domination holds, so a positive value is an
/// internal-consistency alarm.
pub fn per_step_inequality_audit<T: Real>(
    trace: &SolverTrace<T>,
    problem: &ProximityProblem<T>,
    f: &FFunction<T>,
    tau: Option<T>,
) -> Result<Vec<T>> {
    let distinct_pairs = trace
        .a_seq
        .windows(2)
        .take_while(|w| w[0] != w[1])
        .count();
    if trace.a_seq.len() < 3 || distinct_pairs < 2 {
        return Err(Error::InsufficientTrace(
            "the audit needs at least three pairwise-distinct consecutive sequence values".into(),
        ));
    }
    let tau = match tau {
        Some(t) => t,
        None => match certify_f_weak_domination(problem, f)?.tau_max {
            TauMax::Finite(t) => t,
            other => {
                return Err(Error::NotCertified(format!(
                    "weak domination gives no finite margin to audit against ({other:?})"
                )))
            }
        },
    };
    let space = problem.space();
    let indices: Vec<usize> = trace
        .a_seq
        .iter()
        .map(|l| space.require(l))
        .collect::<Result<_>>()?;
    let base = f.eval(space.d(indices[0], indices[1]))?;
    let mut slacks = Vec::new();
    for i in 1..indices.len() - 1 {
        if indices[i] == indices[i + 1] {
            continue;
        }
        let value = f.eval(space.d(indices[i], indices[i + 1]))?;
        // Associated as (F(g_i) - F(g_0)) + i*tau so the bound is exact when
        // the telescoped inequality is tight and tau is the binding margin.
        let slack = (value - base) + T::from_usize(i).expect("small index") * tau;
        slacks.push(slack);
    }
    Ok(slacks)
}

/// Upgrades a coincidence point (`phi(x) = psi(x)`, `x` in the core) to the
/// common best proximity point: takes the least core attainer `a` of
/// `phi(x)`, verifies `a` attains the set distance under both maps, and
/// checks it is the unique brute-force result.
///
/// The hypotheses behind the upgrade — weak domination and `phi` mapping the
/// core of s1 into the core of s2 — are re-certified here, so the
/// verification failure path only signals genuinely unsound instances.
pub fn coincidence_to_cbpp<T: Real>(
    problem: &ProximityProblem<T>,
    x: &str,
    f: &FFunction<T>,
) -> Result<String> {
    let space = problem.space();
    let xi = space.require(x)?;
    if !problem.core1_contains(xi) {
        return Err(Error::NotInCore(x.to_string()));
    }
    if problem.phi(xi) != problem.psi(xi) {
        return Err(Error::NotCoincidence {
            x: x.to_string(),
            phi: space.label(problem.phi(xi)).to_string(),
            psi: space.label(problem.psi(xi)).to_string(),
        });
    }
    let domination = certify_f_weak_domination(problem, f)?;
    if !domination.holds {
        return Err(Error::NotCertified(
            "psi must weakly dominate phi proximally for the coincidence upgrade".into(),
        ));
    }
    for &i in problem.core1_indices() {
        if !problem.core2_contains(problem.phi(i)) {
            return Err(Error::NotCertified(format!(
                "phi({}) leaves the proximal core of s2",
                space.label(i)
            )));
        }
    }

    let a = least_attainer_in_core(problem, problem.phi(xi)).ok_or_else(|| {
        Error::NoAttainment {
            x: x.to_string(),
            image: space.label(problem.phi(xi)).to_string(),
        }
    })?;
    if !problem.attains(a, problem.phi(a)) || !problem.attains(a, problem.psi(a)) {
        return Err(Error::VerificationFailed(format!(
            "{} attains phi({x}) but not its own images at the set distance",
            space.label(a)
        )));
    }
    let oracle = problem.brute_force_cbpp();
    if oracle != vec![space.label(a)] {
        return Err(Error::VerificationFailed(format!(
            "expected the unique brute-force result [{}], got {:?}",
            space.label(a),
            oracle
        )));
    }
    Ok(space.label(a).to_string())
}

/// Full pipeline: hypothesis checks, sequence generation, coincidence
/// upgrade, margin audit, and the brute-force cross-check.
///
/// `x0` defaults to the least core point. When any hypothesis fails the
/// trace carries the failing report and no iteration runs.
pub fn solve<T: Real>(
    problem: &ProximityProblem<T>,
    f: &FFunction<T>,
    x0: Option<&str>,
    max_iter: usize,
) -> Result<SolverTrace<T>> {
    solve_with_mode(problem, f, x0, max_iter, IterationMode::PsiPreimage)
}

pub fn solve_with_mode<T: Real>(
    problem: &ProximityProblem<T>,
    f: &FFunction<T>,
    x0: Option<&str>,
    max_iter: usize,
    mode: IterationMode,
) -> Result<SolverTrace<T>> {
    let report = check_hypotheses(problem, f)?;
    if !report.all_hold() {
        let mut trace = SolverTrace::empty(Outcome::HypothesisViolated);
        trace.hypotheses = Some(report);
        return Ok(trace);
    }

    let space = problem.space();
    let start = match x0 {
        Some(label) => label.to_string(),
        None => space.label(problem.core1_indices()[0]).to_string(),
    };
    let mut trace = generate_sequence_with_mode(problem, &start, max_iter, mode)?;

    match trace.outcome {
        Outcome::CoincidenceFound | Outcome::ConvergedTo => {
            let a = trace.a_seq.last().expect("nonempty sequence").clone();
            match coincidence_to_cbpp(problem, &a, f) {
                Ok(result) => trace.result = Some(result),
                Err(Error::NotCoincidence { .. }) => {
                    trace.alarms.push(format!(
                        "repeat at {a} is not a coincidence point; reporting a stall"
                    ));
                    trace.outcome = Outcome::Stalled;
                    trace.result = None;
                }
                Err(e) => return Err(e),
            }
        }
        _ => {}
    }

    if let TauMax::Finite(tau) = report.f_weak_domination.tau_max {
        match per_step_inequality_audit(&trace, problem, f, Some(tau)) {
            Ok(slacks) => {
                if slacks.iter().any(|&s| s > T::zero()) {
                    trace.alarms.push(
                        "margin audit produced a positive slack on a certified instance".into(),
                    );
                }
                trace.diagnostics = slacks;
            }
            Err(Error::InsufficientTrace(_)) => {}
            Err(e) => return Err(e),
        }
    }
    trace.hypotheses = Some(report);
    Ok(trace)
}

/// Fixed-point iteration `x_{i+1} = phi(x_i)` for a certified weak
/// contraction. Refuses uncertified maps; the returned fixed point is
/// cross-checked as the unique one by full scan.
pub fn wardowski_fixed_point<T: Real>(
    space: &FiniteMetricSpace<T>,
    phi: &SelfMap,
    f: &FFunction<T>,
    x0: &str,
    max_iter: usize,
) -> Result<SolverTrace<T>> {
    let report = certify_f_weak_contraction(space, phi, f)?;
    if !report.holds {
        let detail = report
            .violation
            .as_ref()
            .map(|v| v.kind.name())
            .unwrap_or("unknown");
        return Err(Error::NotCertified(format!(
            "phi is not an F-weak contraction under the chosen F ({detail})"
        )));
    }

    let start = space.require(x0)?;
    let mut orbit = vec![start];
    let mut seen = vec![false; space.len()];
    seen[start] = true;
    let mut trace = SolverTrace::empty(Outcome::Stalled);

    for _ in 0..max_iter {
        let x = *orbit.last().unwrap();
        let next = phi.image(x);
        if next == x {
            trace.outcome = Outcome::ConvergedTo;
            trace.result = Some(space.label(x).to_string());
            break;
        }
        trace.gaps.push(space.d(x, next));
        orbit.push(next);
        if seen[next] {
            trace.outcome = Outcome::Stalled;
            trace.alarms.push(
                "orbit cycled although the contraction condition was certified".into(),
            );
            break;
        }
        seen[next] = true;
    }

    trace.x_seq = orbit.iter().map(|&i| space.label(i).to_string()).collect();
    trace.a_seq = trace.x_seq.clone();
    if trace.outcome == Outcome::ConvergedTo {
        let fixed: Vec<&str> = (0..space.len())
            .filter(|&i| phi.image(i) == i)
            .map(|i| space.label(i))
            .collect();
        let result = trace.result.as_deref().expect("result set on convergence");
        if fixed != vec![result] {
            return Err(Error::VerificationFailed(format!(
                "expected the unique fixed point [{result}], full scan found {fixed:?}"
            )));
        }
    }
    Ok(trace)
}

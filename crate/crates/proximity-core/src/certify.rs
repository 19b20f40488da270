//! Exhaustive certification of the domination and contraction conditions,
//! with the maximal admissible margin and deterministic witnesses.
//!
//! Each certifier enumerates every tuple satisfying its antecedent and
//! classifies the instance:
//!
//! * a tuple whose consequent fails structurally (zero comparator, coincident
//!   images) or whose margin `F(comparator) - F(separation)` is not strictly
//!   positive makes the condition fail, with the least violating tuple as
//!   witness;
//! * otherwise the condition holds and `tau_max` is the minimum margin over
//!   all admissible tuples, attained at the binding witness — the largest
//!   margin for which the defining inequality still holds everywhere;
//! * an empty antecedent set is reported as vacuous.
//!
//! Margins are compared with no epsilon: a slack of exactly zero is a
//! violation, since no positive margin fits under it. All scans are total
//! (no early exit) and witnesses are the least tuples in the lexicographic
//! order induced by the point list, so identical inputs produce identical
//! reports.

use crate::error::Result;
use crate::ffunc::FFunction;
use crate::problem::{CommutingWitness, ProximityProblem};
use crate::real::Real;
use crate::space::{FiniteMetricSpace, SelfMap};

/// Which condition a report certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    ProximalCommuting,
    FWeaklyDominates,
    FDominates,
    FWeakContraction,
}

impl ConditionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConditionKind::ProximalCommuting => "proximal-commuting",
            ConditionKind::FWeaklyDominates => "f-weakly-dominates",
            ConditionKind::FDominates => "f-dominates",
            ConditionKind::FWeakContraction => "f-weak-contraction",
        }
    }
}

/// The maximal admissible margin.
///
/// `Unbounded` is kept for report-format stability; finite enumerations
/// reduce the no-constraint case to `Vacuous`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauMax<T: Real> {
    Finite(T),
    Unbounded,
    Vacuous,
}

/// A fully resolved tuple with the two compared values.
///
/// For the pair-based conditions the first four labels are the images
/// `phi(x1), phi(x2)` and the comparison points (`psi`-images, or the points
/// themselves for the contraction condition).
#[derive(Debug, Clone, PartialEq)]
pub struct DominationWitness<T: Real> {
    pub a1: String,
    pub a2: String,
    pub b1: String,
    pub b2: String,
    pub x1: String,
    pub x2: String,
    /// `F(separation)` where the separation is `d(a1, a2)`.
    pub lhs: T,
    /// `F(comparator)`; negative infinity when the comparator degenerates to
    /// zero and `F` has no value there.
    pub rhs: T,
    /// `rhs - lhs` exactly as computed.
    pub slack: T,
}

/// Why a tuple violates its condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// The margin is not strictly positive.
    NonPositiveSlack,
    /// The comparator that `F` must be applied to is zero.
    ZeroComparator,
    /// The consequent requires distinct comparison images but `b1 = b2`.
    ImagesCoincide,
    /// Proximal commutativity's consequent `phi(b) = psi(a)` fails.
    NotCommuting,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::NonPositiveSlack => "non-positive-slack",
            ViolationKind::ZeroComparator => "zero-comparator",
            ViolationKind::ImagesCoincide => "images-coincide",
            ViolationKind::NotCommuting => "not-commuting",
        }
    }
}

/// Witness payload of a violation.
#[derive(Debug, Clone, PartialEq)]
pub enum ViolationWitness<T: Real> {
    Domination(DominationWitness<T>),
    Commuting(CommutingWitness),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation<T: Real> {
    pub kind: ViolationKind,
    pub witness: ViolationWitness<T>,
}

/// Outcome of one certification run.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport<T: Real> {
    pub condition: ConditionKind,
    pub holds: bool,
    /// On success, strictly positive (or vacuous); on failure, the slack of
    /// the reported violation (zero for structural violations).
    pub tau_max: TauMax<T>,
    /// Tuple attaining the minimum margin when the condition holds
    /// non-vacuously.
    pub binding_witness: Option<DominationWitness<T>>,
    pub violation: Option<Violation<T>>,
    /// Whether the instance is a sampled stand-in for a continuous space.
    pub discretized: bool,
}

impl<T: Real> CertificationReport<T> {
    /// Whether the condition holds with a user-supplied margin instead of
    /// the maximal one. The margin must be strictly positive to be
    /// admissible in the definitions.
    pub fn holds_with_tau(&self, tau: T) -> bool {
        if !(tau > T::zero()) {
            return false;
        }
        match (&self.violation, &self.tau_max) {
            (Some(_), _) => false,
            (None, TauMax::Finite(max)) => tau <= *max,
            (None, TauMax::Unbounded | TauMax::Vacuous) => true,
        }
    }
}

/// The comparator `max{d(b1,b2), d(a2,b2), d(a1,b1), (d(a2,b1)+d(a1,b2))/2}`.
pub fn md<T: Real>(
    space: &FiniteMetricSpace<T>,
    a1: &str,
    a2: &str,
    b1: &str,
    b2: &str,
) -> Result<T> {
    Ok(md_idx(
        space,
        space.require(a1)?,
        space.require(a2)?,
        space.require(b1)?,
        space.require(b2)?,
    ))
}

pub(crate) fn md_idx<T: Real>(
    space: &FiniteMetricSpace<T>,
    a1: usize,
    a2: usize,
    b1: usize,
    b2: usize,
) -> T {
    let two = T::one() + T::one();
    let averaged = (space.d(a2, b1) + space.d(a1, b2)) / two;
    space
        .d(b1, b2)
        .max(space.d(a2, b2))
        .max(space.d(a1, b1))
        .max(averaged)
}

type Key = [usize; 6];

/// Accumulates the least violation and the minimum slack over a scan.
struct Accumulator<T: Real> {
    violation: Option<(Key, Violation<T>)>,
    best: Option<(T, Key, DominationWitness<T>)>,
}

impl<T: Real> Accumulator<T> {
    fn new() -> Self {
        Accumulator { violation: None, best: None }
    }

    fn record_violation(&mut self, key: Key, violation: Violation<T>) {
        match &self.violation {
            Some((existing, _)) if *existing <= key => {}
            _ => self.violation = Some((key, violation)),
        }
    }

    fn record_slack(&mut self, slack: T, key: Key, witness: DominationWitness<T>) {
        let better = match &self.best {
            None => true,
            Some((s, k, _)) => slack < *s || (slack == *s && key < *k),
        };
        if better {
            self.best = Some((slack, key, witness));
        }
    }

    fn into_report(self, condition: ConditionKind, discretized: bool) -> CertificationReport<T> {
        if let Some((_, violation)) = self.violation {
            let tau_max = match &violation.witness {
                ViolationWitness::Domination(w) if w.slack.is_finite() => TauMax::Finite(w.slack),
                _ => TauMax::Finite(T::zero()),
            };
            return CertificationReport {
                condition,
                holds: false,
                tau_max,
                binding_witness: None,
                violation: Some(violation),
                discretized,
            };
        }
        match self.best {
            Some((slack, _, witness)) => CertificationReport {
                condition,
                holds: true,
                tau_max: TauMax::Finite(slack),
                binding_witness: Some(witness),
                violation: None,
                discretized,
            },
            None => CertificationReport {
                condition,
                holds: true,
                tau_max: TauMax::Vacuous,
                binding_witness: None,
                violation: None,
                discretized,
            },
        }
    }
}

/// One admissible `(x, a, b)` assignment: `a` attains the set distance to
/// `phi(x)` and `b` attains it to `psi(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct JointTriple {
    x: usize,
    a: usize,
    b: usize,
}

fn admissible_joint_triples<T: Real>(problem: &ProximityProblem<T>) -> Vec<JointTriple> {
    let mut triples = Vec::new();
    for &x in problem.sets().s1() {
        let phi_x = problem.phi(x);
        let psi_x = problem.psi(x);
        for &a in problem.sets().s1() {
            if !problem.attains(a, phi_x) {
                continue;
            }
            for &b in problem.sets().s1() {
                if problem.attains(b, psi_x) {
                    triples.push(JointTriple { x, a, b });
                }
            }
        }
    }
    triples
}

/// Number of tuple combinations the domination certifiers will visit after
/// antecedent pre-filtering. The command-line driver refuses instances above
/// `10^8` unless overridden.
pub fn weak_domination_enumeration_size<T: Real>(problem: &ProximityProblem<T>) -> u128 {
    let joint = admissible_joint_triples(problem).len() as u128;
    joint * joint
}

/// An admissible domination tuple with its separation `d(a1,a2)` and
/// comparator `M_d(a1,a2,b1,b2)`, exposed for audits over the enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleTuple<T: Real> {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
    pub x1: usize,
    pub x2: usize,
    pub separation: T,
    pub comparator: T,
}

/// Materializes the admissible tuples of the weak-domination antecedent.
/// Intended for small instances; see [`weak_domination_enumeration_size`].
pub fn admissible_weak_domination_tuples<T: Real>(
    problem: &ProximityProblem<T>,
) -> Vec<AdmissibleTuple<T>> {
    let space = problem.space();
    let triples = admissible_joint_triples(problem);
    let mut tuples = Vec::new();
    for t1 in &triples {
        for t2 in &triples {
            if t1.a == t2.a {
                continue;
            }
            tuples.push(AdmissibleTuple {
                a1: t1.a,
                a2: t2.a,
                b1: t1.b,
                b2: t2.b,
                x1: t1.x,
                x2: t2.x,
                separation: space.d(t1.a, t2.a),
                comparator: md_idx(space, t1.a, t2.a, t1.b, t2.b),
            });
        }
    }
    tuples
}

fn domination_witness<T: Real>(
    space: &FiniteMetricSpace<T>,
    key: Key,
    lhs: T,
    rhs: T,
) -> DominationWitness<T> {
    DominationWitness {
        a1: space.label(key[0]).to_string(),
        a2: space.label(key[1]).to_string(),
        b1: space.label(key[2]).to_string(),
        b2: space.label(key[3]).to_string(),
        x1: space.label(key[4]).to_string(),
        x2: space.label(key[5]).to_string(),
        lhs,
        rhs,
        slack: rhs - lhs,
    }
}

/// Certifies that `psi` weakly dominates `phi` proximally: over every tuple
/// satisfying the attainment antecedent with `a1 != a2`, the comparator
/// `M_d(a1,a2,b1,b2)` must be nonzero and `F(d(a1,a2))` must sit below
/// `F(M_d)` with positive margin.
pub fn certify_f_weak_domination<T: Real>(
    problem: &ProximityProblem<T>,
    f: &FFunction<T>,
) -> Result<CertificationReport<T>> {
    problem.proximal_cores()?;
    let space = problem.space();
    let triples = admissible_joint_triples(problem);
    let mut acc = Accumulator::new();
    for t1 in &triples {
        for t2 in &triples {
            if t1.a == t2.a {
                continue;
            }
            let key = [t1.a, t2.a, t1.b, t2.b, t1.x, t2.x];
            let separation = space.d(t1.a, t2.a);
            let comparator = md_idx(space, t1.a, t2.a, t1.b, t2.b);
            let lhs = f.eval(separation)?;
            if comparator <= T::zero() {
                let witness = domination_witness(space, key, lhs, T::neg_infinity());
                acc.record_violation(
                    key,
                    Violation {
                        kind: ViolationKind::ZeroComparator,
                        witness: ViolationWitness::Domination(witness),
                    },
                );
                continue;
            }
            let rhs = f.eval(comparator)?;
            let witness = domination_witness(space, key, lhs, rhs);
            let slack = witness.slack;
            if slack <= T::zero() {
                acc.record_violation(
                    key,
                    Violation {
                        kind: ViolationKind::NonPositiveSlack,
                        witness: ViolationWitness::Domination(witness),
                    },
                );
            } else {
                acc.record_slack(slack, key, witness);
            }
        }
    }
    Ok(acc.into_report(ConditionKind::FWeaklyDominates, problem.discretized()))
}

/// Certifies that `psi` dominates `phi` proximally: same antecedent, but the
/// consequent requires `b1 != b2` and compares against `F(d(b1,b2))`.
pub fn certify_f_domination<T: Real>(
    problem: &ProximityProblem<T>,
    f: &FFunction<T>,
) -> Result<CertificationReport<T>> {
    problem.proximal_cores()?;
    let space = problem.space();
    let triples = admissible_joint_triples(problem);
    let mut acc = Accumulator::new();
    for t1 in &triples {
        for t2 in &triples {
            if t1.a == t2.a {
                continue;
            }
            let key = [t1.a, t2.a, t1.b, t2.b, t1.x, t2.x];
            let separation = space.d(t1.a, t2.a);
            let lhs = f.eval(separation)?;
            if t1.b == t2.b {
                let witness = domination_witness(space, key, lhs, T::neg_infinity());
                acc.record_violation(
                    key,
                    Violation {
                        kind: ViolationKind::ImagesCoincide,
                        witness: ViolationWitness::Domination(witness),
                    },
                );
                continue;
            }
            let rhs = f.eval(space.d(t1.b, t2.b))?;
            let witness = domination_witness(space, key, lhs, rhs);
            let slack = witness.slack;
            if slack <= T::zero() {
                acc.record_violation(
                    key,
                    Violation {
                        kind: ViolationKind::NonPositiveSlack,
                        witness: ViolationWitness::Domination(witness),
                    },
                );
            } else {
                acc.record_slack(slack, key, witness);
            }
        }
    }
    Ok(acc.into_report(ConditionKind::FDominates, problem.discretized()))
}

/// Certifies that a self-map is an `F`-weak contraction: over every ordered
/// pair with `phi(x1) != phi(x2)`, `F(d(phi x1, phi x2))` must sit below
/// `F(M_d(phi x1, phi x2, x1, x2))` with positive margin.
pub fn certify_f_weak_contraction<T: Real>(
    space: &FiniteMetricSpace<T>,
    phi: &SelfMap,
    f: &FFunction<T>,
) -> Result<CertificationReport<T>> {
    let n = space.len();
    let mut acc = Accumulator::new();
    for x1 in 0..n {
        for x2 in 0..n {
            let (a1, a2) = (phi.image(x1), phi.image(x2));
            if a1 == a2 {
                continue;
            }
            let key = [x1, x2, 0, 0, 0, 0];
            let labels_key = [a1, a2, x1, x2, x1, x2];
            let separation = space.d(a1, a2);
            let comparator = md_idx(space, a1, a2, x1, x2);
            let lhs = f.eval(separation)?;
            if comparator <= T::zero() {
                let witness = domination_witness(space, labels_key, lhs, T::neg_infinity());
                acc.record_violation(
                    key,
                    Violation {
                        kind: ViolationKind::ZeroComparator,
                        witness: ViolationWitness::Domination(witness),
                    },
                );
                continue;
            }
            let rhs = f.eval(comparator)?;
            let witness = domination_witness(space, labels_key, lhs, rhs);
            let slack = witness.slack;
            if slack <= T::zero() {
                acc.record_violation(
                    key,
                    Violation {
                        kind: ViolationKind::NonPositiveSlack,
                        witness: ViolationWitness::Domination(witness),
                    },
                );
            } else {
                acc.record_slack(slack, key, witness);
            }
        }
    }
    Ok(acc.into_report(ConditionKind::FWeakContraction, false))
}

/// Certifies weak domination between two self-maps of the whole space: over
/// every ordered pair with `phi(x1) != phi(x2)`, compares `F(d(phi x1, phi
/// x2))` against `F(M_d(phi x1, phi x2, psi x1, psi x2))`.
///
/// With `psi` the identity this is the `F`-weak contraction condition;
/// [`certify_f_weak_contraction`] evaluates that case along an independent
/// code path so the two can cross-check each other.
pub fn certify_f_weak_domination_selfmap<T: Real>(
    space: &FiniteMetricSpace<T>,
    phi: &SelfMap,
    psi: &SelfMap,
    f: &FFunction<T>,
) -> Result<CertificationReport<T>> {
    let n = space.len();
    let mut acc = Accumulator::new();
    for x1 in 0..n {
        for x2 in 0..n {
            let (a1, a2) = (phi.image(x1), phi.image(x2));
            if a1 == a2 {
                continue;
            }
            let (b1, b2) = (psi.image(x1), psi.image(x2));
            let key = [x1, x2, 0, 0, 0, 0];
            let labels_key = [a1, a2, b1, b2, x1, x2];
            let separation = space.d(a1, a2);
            let comparator = md_idx(space, a1, a2, b1, b2);
            let lhs = f.eval(separation)?;
            if comparator <= T::zero() {
                let witness = domination_witness(space, labels_key, lhs, T::neg_infinity());
                acc.record_violation(
                    key,
                    Violation {
                        kind: ViolationKind::ZeroComparator,
                        witness: ViolationWitness::Domination(witness),
                    },
                );
                continue;
            }
            let rhs = f.eval(comparator)?;
            let witness = domination_witness(space, labels_key, lhs, rhs);
            let slack = witness.slack;
            if slack <= T::zero() {
                acc.record_violation(
                    key,
                    Violation {
                        kind: ViolationKind::NonPositiveSlack,
                        witness: ViolationWitness::Domination(witness),
                    },
                );
            } else {
                acc.record_slack(slack, key, witness);
            }
        }
    }
    Ok(acc.into_report(ConditionKind::FWeaklyDominates, false))
}

/// Wraps the proximal-commutativity check into the common report shape.
pub fn commutativity_report<T: Real>(problem: &ProximityProblem<T>) -> CertificationReport<T> {
    let verdict = problem.is_proximally_commuting();
    match verdict.witness {
        None => CertificationReport {
            condition: ConditionKind::ProximalCommuting,
            holds: true,
            tau_max: TauMax::Vacuous,
            binding_witness: None,
            violation: None,
            discretized: problem.discretized(),
        },
        Some(witness) => CertificationReport {
            condition: ConditionKind::ProximalCommuting,
            holds: false,
            tau_max: TauMax::Finite(T::zero()),
            binding_witness: None,
            violation: Some(Violation {
                kind: ViolationKind::NotCommuting,
                witness: ViolationWitness::Commuting(witness),
            }),
            discretized: problem.discretized(),
        },
    }
}

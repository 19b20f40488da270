//! Property suites: metric axioms on generated tables, monotonicity of the
//! canonical comparison functions, comparator algebra, oracle equivariance,
//! the domination hierarchy, and the identity reduction.

#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use proximity_core::certify::{
    certify_f_domination, certify_f_weak_contraction, certify_f_weak_domination,
    certify_f_weak_domination_selfmap, md, TauMax,
};
use proximity_core::ffunc::FFunction;
use proximity_core::gallery::build_cartesian;
use proximity_core::problem::ProximityProblem;
use proximity_core::space::{metric_closure, FiniteMetricSpace, SelfMap};
use proximity_core::Func;

fn point_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Random metric by min-plus closure of a random positive symmetric table.
fn random_metric(rng: &mut StdRng, n: usize) -> FiniteMetricSpace<f64> {
    let mut table = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..i {
            let d = rng.gen_range(0.5..2.0);
            table[i][j] = d;
            table[j][i] = d;
        }
    }
    metric_closure(&mut table);
    FiniteMetricSpace::from_table(point_labels(n), table).expect("closure yields a metric")
}

/// Random problem over a random metric: random nonempty subsets and random
/// total maps, exact attainment.
fn random_problem(rng: &mut StdRng) -> ProximityProblem<f64> {
    loop {
        let n = rng.gen_range(2..=8);
        let space = random_metric(rng, n);
        let mut s1: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
        let mut s2: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
        if s1.is_empty() {
            s1.push(rng.gen_range(0..n));
        }
        if s2.is_empty() {
            s2.push(rng.gen_range(0..n));
        }
        let labels = space.labels().to_vec();
        let s1_refs: Vec<&str> = s1.iter().map(|&i| labels[i].as_str()).collect();
        let s2_refs: Vec<&str> = s2.iter().map(|&i| labels[i].as_str()).collect();
        let map_pairs = |rng: &mut StdRng| -> Vec<(usize, usize)> {
            s1.iter().map(|&i| (i, s2[rng.gen_range(0..s2.len())])).collect()
        };
        let phi = map_pairs(rng);
        let psi = map_pairs(rng);
        let phi_refs: Vec<(&str, &str)> =
            phi.iter().map(|&(i, j)| (labels[i].as_str(), labels[j].as_str())).collect();
        let psi_refs: Vec<(&str, &str)> =
            psi.iter().map(|&(i, j)| (labels[i].as_str(), labels[j].as_str())).collect();
        match ProximityProblem::new(space.clone(), &s1_refs, &s2_refs, &phi_refs, &psi_refs, 0.0, 1e-9)
        {
            Ok(problem) => return problem,
            Err(_) => continue,
        }
    }
}

/// Lift of a quartering map over a geometric base: the domination condition
/// holds non-vacuously, margin at least ln 3.9.
fn contracting_lift(rng: &mut StdRng) -> ProximityProblem<f64> {
    let scale: f64 = rng.gen_range(1..=64) as f64 / 8.0;
    let levels = rng.gen_range(2..=4usize);
    let mut values = vec![0.0f64];
    values.extend((0..levels).map(|k| scale * 4f64.powi(k as i32)));
    let labels: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    let base: Vec<(&str, f64)> =
        labels.iter().zip(&values).map(|(l, &v)| (l.as_str(), v)).collect();
    let phi: Vec<(&str, &str)> = (0..base.len())
        .map(|i| (base[i].0, base[i.saturating_sub(1)].0))
        .collect();
    let psi: Vec<(&str, &str)> = base.iter().map(|&(l, _)| (l, l)).collect();
    build_cartesian(&base, &phi, &psi).expect("lift is valid")
}

fn random_canonical_f(rng: &mut StdRng) -> Func {
    match rng.gen_range(0..4) {
        0 => FFunction::log(),
        1 => FFunction::log_plus_linear(),
        2 => FFunction::neg_inv_sqrt(),
        _ => FFunction::log_quadratic(),
    }
}

proptest! {
    /// Euclidean tables pass the exact axiom validation after the min-plus
    /// repair, and the repair never moves an entry more than a rounding
    /// margin (collinear triples round independently and can land an ulp
    /// short of the triangle inequality).
    #[test]
    fn euclidean_tables_are_valid_after_repair(
        coords in proptest::collection::vec((-64i32..64, -64i32..64), 2..8)
    ) {
        let mut distinct = coords.clone();
        distinct.sort();
        distinct.dedup();
        prop_assume!(distinct.len() >= 2);
        let labels = point_labels(distinct.len());
        let tuples: Vec<Vec<f64>> = distinct
            .iter()
            .map(|&(x, y)| vec![f64::from(x) / 8.0, f64::from(y) / 8.0])
            .collect();
        let raw = proximity_core::space::euclidean_table(&tuples).unwrap();
        let mut repaired = raw.clone();
        metric_closure(&mut repaired);
        for (raw_row, repaired_row) in raw.iter().zip(&repaired) {
            for (&a, &b) in raw_row.iter().zip(repaired_row) {
                prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
            }
        }
        prop_assert!(FiniteMetricSpace::from_table(labels, repaired).is_ok());
    }

    /// Bumping one entry above a two-leg path always trips the validator.
    #[test]
    fn inflated_entries_are_rejected(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(3..=7);
        let space = random_metric(&mut rng, n);
        let mut table = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = space.d(i, j);
            }
        }
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let mut k = rng.gen_range(0..n);
        while k == i || k == j {
            k = rng.gen_range(0..n);
        }
        let inflated = table[i][j] + table[j][k] + 1.0;
        table[i][k] = inflated;
        table[k][i] = inflated;
        prop_assert!(FiniteMetricSpace::from_table(point_labels(n), table).is_err());
    }

    /// The canonical kinds are strictly increasing on every grid.
    #[test]
    fn canonical_kinds_are_monotone(
        raw in proptest::collection::vec(1u32..1_000_000, 2..12)
    ) {
        let mut grid: Vec<f64> = raw.iter().map(|&r| f64::from(r) / 1024.0).collect();
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        grid.dedup();
        prop_assume!(grid.len() >= 2);
        for f in [
            FFunction::log(),
            FFunction::log_plus_linear(),
            FFunction::neg_inv_sqrt(),
            FFunction::log_quadratic(),
        ] {
            prop_assert!(f.validate_f1(&grid).unwrap().holds);
        }
    }

    /// Monotonicity transfers to arbitrary positive pairs.
    #[test]
    fn monotonicity_transfer(a in 1u32..1_000_000, b in 1u32..1_000_000) {
        prop_assume!(a != b);
        let (lo, hi) = (f64::from(a.min(b)) / 512.0, f64::from(a.max(b)) / 512.0);
        for f in [
            FFunction::log(),
            FFunction::log_plus_linear(),
            FFunction::neg_inv_sqrt(),
            FFunction::log_quadratic(),
        ] {
            prop_assert!(f.eval(lo).unwrap() < f.eval(hi).unwrap());
        }
    }

    /// The comparator dominates its first term and is invariant under the
    /// simultaneous swap of both argument pairs.
    #[test]
    fn comparator_algebra(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(2..=8);
        let space = random_metric(&mut rng, n);
        for _ in 0..16 {
            let idx: Vec<&str> = (0..4)
                .map(|_| space.label(rng.gen_range(0..n)))
                .collect();
            let m = md(&space, idx[0], idx[1], idx[2], idx[3]).unwrap();
            prop_assert!(m >= space.d_labels(idx[2], idx[3]).unwrap());
            let swapped = md(&space, idx[1], idx[0], idx[3], idx[2]).unwrap();
            prop_assert_eq!(m, swapped);
        }
    }
}

#[test]
fn brute_force_oracle_is_permutation_equivariant() {
    let mut rng = StdRng::seed_from_u64(0x0bea_c0de);
    for _ in 0..64 {
        let problem = random_problem(&mut rng);
        let space = problem.space();
        let n = space.len();
        // Random permutation of the point list.
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let labels: Vec<String> = perm.iter().map(|&i| space.label(i).to_string()).collect();
        let table: Vec<Vec<f64>> = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| space.d(i, j)).collect())
            .collect();
        let permuted_space = FiniteMetricSpace::from_table(labels, table).unwrap();
        let to_refs = |indices: &[usize]| -> Vec<String> {
            indices.iter().map(|&i| space.label(i).to_string()).collect()
        };
        let s1 = to_refs(problem.sets().s1());
        let s2 = to_refs(problem.sets().s2());
        let phi: Vec<(String, String)> = problem
            .sets()
            .s1()
            .iter()
            .map(|&i| (space.label(i).to_string(), space.label(problem.phi(i)).to_string()))
            .collect();
        let psi: Vec<(String, String)> = problem
            .sets()
            .s1()
            .iter()
            .map(|&i| (space.label(i).to_string(), space.label(problem.psi(i)).to_string()))
            .collect();
        let s1_refs: Vec<&str> = s1.iter().map(String::as_str).collect();
        let s2_refs: Vec<&str> = s2.iter().map(String::as_str).collect();
        let phi_refs: Vec<(&str, &str)> =
            phi.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let psi_refs: Vec<(&str, &str)> =
            psi.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let permuted = ProximityProblem::new(
            permuted_space,
            &s1_refs,
            &s2_refs,
            &phi_refs,
            &psi_refs,
            0.0,
            1e-9,
        )
        .unwrap();

        let mut original: Vec<&str> = problem.brute_force_cbpp();
        let mut relabeled: Vec<&str> = permuted.brute_force_cbpp();
        original.sort_unstable();
        relabeled.sort_unstable();
        assert_eq!(original, relabeled);
    }
}

#[test]
fn proximal_commutativity_reduces_to_commutativity_on_the_whole_space() {
    let mut rng = StdRng::seed_from_u64(0xc0_0111);
    for _ in 0..128 {
        let n = rng.gen_range(2..=7);
        let space = random_metric(&mut rng, n);
        let labels = space.labels().to_vec();
        let all: Vec<&str> = labels.iter().map(String::as_str).collect();
        let phi: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let psi: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let phi_refs: Vec<(&str, &str)> = (0..n)
            .map(|i| (labels[i].as_str(), labels[phi[i]].as_str()))
            .collect();
        let psi_refs: Vec<(&str, &str)> = (0..n)
            .map(|i| (labels[i].as_str(), labels[psi[i]].as_str()))
            .collect();
        let problem =
            ProximityProblem::new(space, &all, &all, &phi_refs, &psi_refs, 0.0, 1e-9).unwrap();
        let plainly_commuting = (0..n).all(|x| phi[psi[x]] == psi[phi[x]]);
        assert_eq!(problem.is_proximally_commuting().holds, plainly_commuting);
    }
}

/// Domination implies weak domination with at least the same margin.
#[test]
fn domination_hierarchy_holds_on_random_instances() {
    let mut rng = StdRng::seed_from_u64(0x41e0_7a11);
    let mut dominated = 0usize;
    for round in 0..96 {
        let problem = if round % 2 == 0 {
            random_problem(&mut rng)
        } else {
            contracting_lift(&mut rng)
        };
        let f = random_canonical_f(&mut rng);
        let dom = certify_f_domination(&problem, &f).unwrap();
        let weak = certify_f_weak_domination(&problem, &f).unwrap();
        if !dom.holds {
            continue;
        }
        assert!(weak.holds, "weak domination must follow from domination");
        match (dom.tau_max, weak.tau_max) {
            (TauMax::Vacuous, TauMax::Vacuous) => {}
            (TauMax::Finite(t), TauMax::Finite(w)) => {
                dominated += 1;
                assert!(w >= t - 1e-12, "weak margin {w} below domination margin {t}");
            }
            (d, w) => panic!("inconsistent margins: {d:?} vs {w:?}"),
        }
    }
    assert!(dominated >= 10, "generator produced only {dominated} dominating instances");
}

/// The identity as the second map reproduces the contraction certifier.
#[test]
fn identity_reduction_matches_the_contraction_certifier() {
    let mut rng = StdRng::seed_from_u64(0x1d_5eed);
    for _ in 0..64 {
        let n = rng.gen_range(2..=8);
        let space = random_metric(&mut rng, n);
        let images: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let phi = SelfMap::from_images(&space, images).unwrap();
        let id = SelfMap::identity(&space);
        let f = random_canonical_f(&mut rng);
        let reduced = certify_f_weak_domination_selfmap(&space, &phi, &id, &f).unwrap();
        let direct = certify_f_weak_contraction(&space, &phi, &f).unwrap();
        assert_eq!(reduced.holds, direct.holds);
        assert_eq!(reduced.tau_max, direct.tau_max);
        match (&reduced.violation, &direct.violation) {
            (None, None) => {}
            (Some(a), Some(b)) => assert_eq!(a.kind, b.kind),
            _ => panic!("one certifier saw a violation, the other did not"),
        }
    }
}

/// Identical inputs give identical reports, witnesses included.
#[test]
fn certification_is_deterministic() {
    let mut rng = StdRng::seed_from_u64(0xdede_dede);
    for _ in 0..32 {
        let problem = random_problem(&mut rng);
        let f = random_canonical_f(&mut rng);
        assert_eq!(
            certify_f_weak_domination(&problem, &f).unwrap(),
            certify_f_weak_domination(&problem, &f).unwrap()
        );
        assert_eq!(
            certify_f_domination(&problem, &f).unwrap(),
            certify_f_domination(&problem, &f).unwrap()
        );
    }
}

/// The whole stack instantiates at `f32` as well as the default `f64`.
#[test]
fn single_precision_instantiation_works_end_to_end() {
    let problem = proximity_core::gallery::build_ex22::<f32>(&[]).unwrap();
    assert_eq!(problem.set_distance(), 2.0f32);
    let f = FFunction::<f32>::log();
    let report = certify_f_weak_domination(&problem, &f).unwrap();
    assert!(report.holds);
    match report.tau_max {
        TauMax::Finite(t) => assert!((t - 2f32.ln()).abs() < 1e-6),
        other => panic!("expected a finite margin, got {other:?}"),
    }
    let trace = proximity_core::solver::solve(&problem, &f, None, 64).unwrap();
    assert_eq!(trace.result.as_deref(), Some("(-1,5)"));
}

/// The reported maximum margin is sharp: it passes re-checking, a bumped
/// margin fails.
#[test]
fn tau_max_is_the_boundary_of_admissibility() {
    let mut rng = StdRng::seed_from_u64(0x7a0_b0da);
    let mut checked = 0usize;
    for _ in 0..96 {
        let problem = contracting_lift(&mut rng);
        let f = random_canonical_f(&mut rng);
        let report = certify_f_weak_domination(&problem, &f).unwrap();
        let TauMax::Finite(tau) = report.tau_max else { continue };
        assert!(report.holds);
        checked += 1;
        assert!(report.holds_with_tau(tau));
        let eps = 1e-9 * tau.abs().max(1.0);
        assert!(!report.holds_with_tau(tau + eps));
        let w = report.binding_witness.as_ref().unwrap();
        assert!(w.lhs + tau + eps > w.rhs, "the binding witness is where the bump fails");
    }
    assert!(checked >= 48);
}

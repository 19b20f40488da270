//! Built-in instances: two concentric circles, the two-slice product
//! construction, its step-map specialization, and the reciprocal-pair
//! counterexample.
//!
//! Continuous geometries enter as explicit finite samples. Distance tables
//! are assembled analytically where possible (so same-class entries are
//! bit-identical) and passed through [`metric_closure`] before construction,
//! which repairs the odd ulp the independent rounding of nearly collinear
//! triples can cost; the default parameterizations are unaffected by the
//! closure. Every builder is a pure function of its parameters.

use crate::error::{Error, Result};
use crate::problem::ProximityProblem;
use crate::real::Real;
use crate::space::{metric_closure, FiniteMetricSpace, SelfMap};

/// Two concentric circles of radii `a < b`, sampled at `n` shared angles.
///
/// `s1` is the inner circle, `s2` the outer; `phi` sends a point to the
/// nearer intersection of its diameter with the outer circle (same angle)
/// and `psi` to the farther one (antipodal angle). `n` must be even so the
/// antipodal images are sampled.
pub fn build_circle<T: Real>(a: T, b: T, n: usize) -> Result<ProximityProblem<T>> {
    if !(a.is_finite() && b.is_finite() && T::zero() < a && a < b) {
        return Err(Error::InvalidParameter(format!(
            "circle radii must satisfy 0 < a < b, got a = {a}, b = {b}"
        )));
    }
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "circle sample count must be even and at least 4, got {n}"
        )));
    }

    let two = T::one() + T::one();
    let nt = T::from_usize(n).expect("sample count fits the scalar");
    // One value per angular class keeps same-class entries bit-identical.
    let chord = |r: T, c: usize| -> T {
        let cf = T::from_usize(c).unwrap();
        two * r * (T::PI() * cf / nt).sin()
    };
    let cross = |c: usize| -> T {
        if c == 0 {
            b - a
        } else if c == n / 2 {
            a + b
        } else {
            let cf = T::from_usize(c).unwrap();
            (a * a + b * b - two * a * b * (two * T::PI() * cf / nt).cos()).sqrt()
        }
    };

    let m = 2 * n;
    let mut table = vec![vec![T::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let (ci, ki) = (i / n, i % n);
            let (cj, kj) = (j / n, j % n);
            let raw = ki.abs_diff(kj);
            let class = raw.min(n - raw);
            table[i][j] = if ci == cj {
                chord(if ci == 0 { a } else { b }, class)
            } else {
                cross(class)
            };
        }
    }
    metric_closure(&mut table);

    let labels: Vec<String> = (0..n)
        .map(|j| format!("a{j}"))
        .chain((0..n).map(|j| format!("b{j}")))
        .collect();
    let space = FiniteMetricSpace::from_table(labels.clone(), table)?;

    let s1: Vec<&str> = labels[..n].iter().map(String::as_str).collect();
    let s2: Vec<&str> = labels[n..].iter().map(String::as_str).collect();
    let phi: Vec<(String, String)> =
        (0..n).map(|j| (format!("a{j}"), format!("b{j}"))).collect();
    let psi: Vec<(String, String)> =
        (0..n).map(|j| (format!("a{j}"), format!("b{}", (j + n / 2) % n))).collect();
    let phi_refs: Vec<(&str, &str)> =
        phi.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    let psi_refs: Vec<(&str, &str)> =
        psi.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();

    let tol = T::from_f64_lit(1e-9) * b;
    Ok(ProximityProblem::new(space, &s1, &s2, &phi_refs, &psi_refs, tol, tol)?
        .with_discretized(true))
}

/// Lifts a base line sample and two base self-maps into the two-slice
/// product: point `(u, x)` with `u` in `{-1, 1}` at distance
/// `sqrt(|u-t|^2 + |x-w|^2)` from `(t, w)`. `s1` is the `-1` slice, `s2` the
/// `1` slice, and the maps act on the second coordinate.
pub fn build_cartesian<T: Real>(
    base: &[(&str, T)],
    phi_base: &[(&str, &str)],
    psi_base: &[(&str, &str)],
) -> Result<ProximityProblem<T>> {
    lift_cartesian(base, phi_base, psi_base, T::zero(), T::from_f64_lit(1e-9), false)
}

fn lift_cartesian<T: Real>(
    base: &[(&str, T)],
    phi_base: &[(&str, &str)],
    psi_base: &[(&str, &str)],
    tol_eq: T,
    tol_conv: T,
    discretized: bool,
) -> Result<ProximityProblem<T>> {
    if base.is_empty() {
        return Err(Error::InvalidParameter("the base sample must be nonempty".into()));
    }
    for (idx, &(label, value)) in base.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("base value {label:?} is not finite")));
        }
        if base[..idx].iter().any(|&(l, _)| l == label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
    }
    let find = |label: &str| -> Result<usize> {
        base.iter()
            .position(|&(l, _)| l == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    };
    let resolve_map = |which: &'static str, pairs: &[(&str, &str)]| -> Result<Vec<usize>> {
        let mut images = vec![usize::MAX; base.len()];
        for &(from, to) in pairs {
            let i = find(from)?;
            if images[i] != usize::MAX {
                return Err(Error::InvalidMapping {
                    which,
                    detail: format!("base point {from:?} mapped twice"),
                });
            }
            images[i] = find(to)?;
        }
        if let Some(i) = images.iter().position(|&v| v == usize::MAX) {
            return Err(Error::InvalidMapping {
                which,
                detail: format!("no image for base point {:?}", base[i].0),
            });
        }
        Ok(images)
    };
    let phi_images = resolve_map("phi", phi_base)?;
    let psi_images = resolve_map("psi", psi_base)?;

    let nb = base.len();
    let m = 2 * nb;
    let two = T::one() + T::one();
    let four = two * two;
    let mut table = vec![vec![T::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let (si, vi) = (i / nb, base[i % nb].1);
            let (sj, vj) = (j / nb, base[j % nb].1);
            let diff = vi - vj;
            table[i][j] = if si == sj {
                diff.abs()
            } else {
                (four + diff * diff).sqrt()
            };
        }
    }
    metric_closure(&mut table);

    let labels: Vec<String> = (0..m)
        .map(|i| {
            let slice = if i / nb == 0 { "-1" } else { "1" };
            format!("({slice},{})", base[i % nb].0)
        })
        .collect();
    let space = FiniteMetricSpace::from_table(labels.clone(), table)?;

    let s1: Vec<&str> = labels[..nb].iter().map(String::as_str).collect();
    let s2: Vec<&str> = labels[nb..].iter().map(String::as_str).collect();
    let lift_pairs = |images: &[usize]| -> Vec<(String, String)> {
        (0..nb).map(|i| (labels[i].clone(), labels[nb + images[i]].clone())).collect()
    };
    let phi = lift_pairs(&phi_images);
    let psi = lift_pairs(&psi_images);
    let phi_refs: Vec<(&str, &str)> =
        phi.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    let psi_refs: Vec<(&str, &str)> =
        psi.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();

    Ok(ProximityProblem::new(space, &s1, &s2, &phi_refs, &psi_refs, tol_eq, tol_conv)?
        .with_discretized(discretized))
}

/// The step-map instance over the sample `{-1, 1, 3, 5}` (optionally
/// extended by values with `|x| >= 1`): the lift of `phi'(x) = 3` for
/// `x <= -1`, `5` for `x >= 1`, against the identity.
///
/// The image values 3 and 5 must be sampled so the lifted maps stay total;
/// the default sample guarantees that.
pub fn build_ex22<T: Real>(extras: &[T]) -> Result<ProximityProblem<T>> {
    let mut values: Vec<T> = [-1.0, 1.0, 3.0, 5.0].iter().map(|&v| T::from_f64_lit(v)).collect();
    for &extra in extras {
        if !extra.is_finite() || extra.abs() < T::one() {
            return Err(Error::InvalidParameter(format!(
                "sample extensions must satisfy |x| >= 1, got {extra}"
            )));
        }
        values.push(extra);
    }
    values.sort_by(|p, q| p.partial_cmp(q).expect("finite values"));
    values.dedup();

    let three = T::from_f64_lit(3.0);
    let five = T::from_f64_lit(5.0);
    let mut missing = Vec::new();
    for required in [three, five] {
        if !values.contains(&required) {
            missing.push(format!("{required}"));
        }
    }
    if !missing.is_empty() {
        return Err(Error::SampleMissingImages { missing });
    }

    let labels: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    let base: Vec<(&str, T)> =
        labels.iter().zip(&values).map(|(l, &v)| (l.as_str(), v)).collect();
    let three_label = &labels[values.iter().position(|&w| w == three).unwrap()];
    let five_label = &labels[values.iter().position(|&w| w == five).unwrap()];
    let phi: Vec<(&str, &str)> = base
        .iter()
        .map(|&(l, v)| (l, if v <= -T::one() { three_label.as_str() } else { five_label.as_str() }))
        .collect();
    let psi: Vec<(&str, &str)> = base.iter().map(|&(l, _)| (l, l)).collect();

    let problem =
        lift_cartesian(&base, &phi, &psi, T::zero(), T::from_f64_lit(1e-9), true)?;
    Ok(problem)
}

/// A space with a pair of self-maps, as produced by [`build_reciprocal`].
#[derive(Debug, Clone)]
pub struct SelfMapInstance<T: Real> {
    pub space: FiniteMetricSpace<T>,
    pub phi: SelfMap,
    pub psi: SelfMap,
}

impl<T: Real> SelfMapInstance<T> {
    /// Views the instance as a proximity problem with `s1 = s2` the whole
    /// space.
    pub fn to_problem(&self, tol_eq: T, tol_conv: T) -> Result<ProximityProblem<T>> {
        let all: Vec<&str> = self.space.labels().iter().map(String::as_str).collect();
        let pairs = |map: &SelfMap| -> Vec<(String, String)> {
            (0..self.space.len())
                .map(|i| {
                    (self.space.label(i).to_string(), self.space.label(map.image(i)).to_string())
                })
                .collect()
        };
        let phi = pairs(&self.phi);
        let psi = pairs(&self.psi);
        let phi_refs: Vec<(&str, &str)> =
            phi.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
        let psi_refs: Vec<(&str, &str)> =
            psi.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
        Ok(ProximityProblem::new(
            self.space.clone(),
            &all,
            &all,
            &phi_refs,
            &psi_refs,
            tol_eq,
            tol_conv,
        )?
        .with_discretized(true))
    }
}

/// The reciprocal pair `phi(x) = -1/x`, `psi(x) = -1/x^3` (both sending 0 to
/// 1), tabulated exactly on a sample of the line.
///
/// The sample must contain 0 and 1 and be closed under both maps; closure is
/// demanded rather than snapping because snapped images would perturb the
/// exact zero-margin violation the instance exists to exhibit. Iterating
/// `psi` squares the exponent away from the unit circle, so the only finite
/// closed sample containing 0 and 1 is `{0, 1, -1}` — the canonical sample.
/// Point order follows the sample.
pub fn build_reciprocal<T: Real>(sample: &[T]) -> Result<SelfMapInstance<T>> {
    let mut values: Vec<T> = Vec::new();
    for &v in sample {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("sample value {v} is not finite")));
        }
        if !values.contains(&v) {
            values.push(v);
        }
    }
    if !values.contains(&T::zero()) || !values.contains(&T::one()) {
        return Err(Error::InvalidParameter("the sample must contain 0 and 1".into()));
    }

    let phi_of = |v: T| if v == T::zero() { T::one() } else { -(T::one() / v) };
    let psi_of = |v: T| if v == T::zero() { T::one() } else { -(T::one() / (v * v * v)) };
    let mut missing = Vec::new();
    let mut resolve = |image: T| -> Option<usize> {
        match values.iter().position(|&w| w == image) {
            Some(i) => Some(i),
            None => {
                let rendered = format!("{image}");
                if !missing.contains(&rendered) {
                    missing.push(rendered);
                }
                None
            }
        }
    };
    let phi_images: Vec<Option<usize>> = values.iter().map(|&v| resolve(phi_of(v))).collect();
    let psi_images: Vec<Option<usize>> = values.iter().map(|&v| resolve(psi_of(v))).collect();
    if !missing.is_empty() {
        return Err(Error::SampleNotClosed { missing });
    }

    let n = values.len();
    let mut table = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                table[i][j] = (values[i] - values[j]).abs();
            }
        }
    }
    metric_closure(&mut table);
    let labels: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    let space = FiniteMetricSpace::from_table(labels, table)?;
    let phi = SelfMap::from_images(&space, phi_images.into_iter().flatten().collect())?;
    let psi = SelfMap::from_images(&space, psi_images.into_iter().flatten().collect())?;
    Ok(SelfMapInstance { space, phi, psi })
}

/// The canonical reciprocal sample `[0, 1, -1]`, in that order.
pub fn canonical_reciprocal_sample<T: Real>() -> Vec<T> {
    vec![T::zero(), T::one(), -T::one()]
}

/// A named built-in instance with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GallerySpec<T: Real> {
    Circle { inner: T, outer: T, samples: usize },
    /// Demonstration lift: base `{0, 1, 2}` with a constant map against the
    /// identity.
    CartesianProduct,
    Ex22 { extras: Vec<T> },
    ReciprocalCounterexample,
}

impl<T: Real> GallerySpec<T> {
    /// Parses a gallery name; parameters take their defaults.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "circle" => Some(GallerySpec::Circle {
                inner: T::one(),
                outer: T::from_f64_lit(3.0),
                samples: 8,
            }),
            "cartesian-product" => Some(GallerySpec::CartesianProduct),
            "ex22" => Some(GallerySpec::Ex22 { extras: Vec::new() }),
            "reciprocal-counterexample" | "reciprocal" => {
                Some(GallerySpec::ReciprocalCounterexample)
            }
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GallerySpec::Circle { .. } => "circle",
            GallerySpec::CartesianProduct => "cartesian-product",
            GallerySpec::Ex22 { .. } => "ex22",
            GallerySpec::ReciprocalCounterexample => "reciprocal-counterexample",
        }
    }

    pub fn materialize(&self) -> Result<ProximityProblem<T>> {
        match self {
            GallerySpec::Circle { inner, outer, samples } => {
                build_circle(*inner, *outer, *samples)
            }
            GallerySpec::CartesianProduct => {
                let base: Vec<(&str, T)> = vec![
                    ("0", T::zero()),
                    ("1", T::one()),
                    ("2", T::from_f64_lit(2.0)),
                ];
                build_cartesian(
                    &base,
                    &[("0", "1"), ("1", "1"), ("2", "1")],
                    &[("0", "0"), ("1", "1"), ("2", "2")],
                )
            }
            GallerySpec::Ex22 { extras } => build_ex22(extras),
            GallerySpec::ReciprocalCounterexample => {
                build_reciprocal(&canonical_reciprocal_sample::<T>())?
                    .to_problem(T::zero(), T::from_f64_lit(1e-9))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{
        certify_f_domination, certify_f_weak_domination, certify_f_weak_domination_selfmap,
        TauMax, ViolationKind, ViolationWitness,
    };
    use crate::ffunc::FFunction;

    #[test]
    fn circle_distance_and_commutativity() {
        let problem = build_circle(1.0, 3.0, 8).unwrap();
        assert_eq!(problem.set_distance(), 2.0);
        assert!(problem.is_proximally_commuting().holds);
        // Same-angle images attain b - a for every inner point.
        let space = problem.space();
        for j in 0..8 {
            let z = space.index_of(&format!("a{j}")).unwrap();
            assert!(problem.attains(z, problem.phi(z)));
        }
        // Shared-angle sampling keeps the whole subsets proximal.
        let (core1, core2) = problem.proximal_cores().unwrap();
        assert_eq!(core1.len(), 8);
        assert_eq!(core2.len(), 8);
    }

    #[test]
    fn circle_brute_force_distance_check() {
        // Independent oracle: direct coordinate distances over all pairs.
        let problem = build_circle(1.0, 3.0, 12).unwrap();
        let mut min = f64::INFINITY;
        for i in 0..12 {
            let ti = 2.0 * std::f64::consts::PI * (i as f64) / 12.0;
            for j in 0..12 {
                let tj = 2.0 * std::f64::consts::PI * (j as f64) / 12.0;
                let dx = ti.cos() - 3.0 * tj.cos();
                let dy = ti.sin() - 3.0 * tj.sin();
                min = min.min((dx * dx + dy * dy).sqrt());
            }
        }
        assert!((problem.set_distance() - min).abs() <= 1e-12);
        assert!((min - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn circle_weak_domination_fails_at_an_antipodal_pair() {
        let problem = build_circle(1.0, 3.0, 8).unwrap();
        for f in [
            FFunction::log(),
            FFunction::log_plus_linear(),
            FFunction::neg_inv_sqrt(),
            FFunction::log_quadratic(),
        ] {
            let report = certify_f_weak_domination(&problem, &f).unwrap();
            assert!(!report.holds, "{}", f.name());
            assert!(report.discretized);
            let violation = report.violation.unwrap();
            assert_eq!(violation.kind, ViolationKind::NonPositiveSlack);
            let ViolationWitness::Domination(w) = violation.witness else {
                panic!("expected a domination witness")
            };
            assert_eq!(w.a1, w.b2);
            assert_eq!(w.a2, w.b1);
            let sep = problem.space().d_labels(&w.a1, &w.a2).unwrap();
            assert_eq!(sep, 2.0, "antipodal separation is the inner diameter");
        }
    }

    #[test]
    fn circle_parameter_validation() {
        assert!(matches!(build_circle(3.0, 1.0, 8), Err(Error::InvalidParameter(_))));
        assert!(matches!(build_circle(1.0, 3.0, 7), Err(Error::InvalidParameter(_))));
        assert!(matches!(build_circle(1.0, 3.0, 2), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn cartesian_lift_of_commuting_maps_commutes_proximally() {
        let base: Vec<(&str, f64)> = vec![("0", 0.0), ("1", 1.0), ("2", 2.0)];
        // Constant and identity commute.
        let problem = build_cartesian(
            &base,
            &[("0", "1"), ("1", "1"), ("2", "1")],
            &[("0", "0"), ("1", "1"), ("2", "2")],
        )
        .unwrap();
        assert!(problem.is_proximally_commuting().holds);
        assert_eq!(problem.set_distance(), 2.0);
    }

    #[test]
    fn cartesian_lift_of_non_commuting_maps_fails() {
        let base: Vec<(&str, f64)> = vec![("0", 0.0), ("1", 1.0), ("2", 2.0)];
        // swap(0,1) and the 3-cycle do not commute.
        let problem = build_cartesian(
            &base,
            &[("0", "1"), ("1", "0"), ("2", "2")],
            &[("0", "1"), ("1", "2"), ("2", "0")],
        )
        .unwrap();
        let verdict = problem.is_proximally_commuting();
        assert!(!verdict.holds);
        assert!(verdict.witness.is_some());
    }

    #[test]
    fn singleton_base_has_set_distance_two() {
        let base: Vec<(&str, f64)> = vec![("x", 7.5)];
        let problem = build_cartesian(&base, &[("x", "x")], &[("x", "x")]).unwrap();
        assert_eq!(problem.set_distance(), 2.0);
    }

    #[test]
    fn ex22_default_instance_matches_the_hand_computation() {
        let problem = build_ex22::<f64>(&[]).unwrap();
        assert_eq!(problem.set_distance(), 2.0);
        let (core1, core2) = problem.proximal_cores().unwrap();
        assert_eq!(core1.len(), 4);
        assert_eq!(core2.len(), 4);
        assert!(problem.is_proximally_commuting().holds);
        assert!(problem.is_common_best_proximity_point("(-1,5)").unwrap());
        assert!(!problem.is_common_best_proximity_point("(-1,3)").unwrap());
        assert_eq!(problem.brute_force_cbpp(), vec!["(-1,5)"]);
    }

    #[test]
    fn ex22_certifications() {
        let problem = build_ex22::<f64>(&[]).unwrap();
        let f = FFunction::log();
        let weak = certify_f_weak_domination(&problem, &f).unwrap();
        assert!(weak.holds);
        match weak.tau_max {
            TauMax::Finite(t) => assert!(t >= 2f64.ln() - 1e-12),
            other => panic!("expected a finite margin, got {other:?}"),
        }

        let dom = certify_f_domination(&problem, &f).unwrap();
        assert!(!dom.holds);
        let violation = dom.violation.unwrap();
        assert_eq!(violation.kind, ViolationKind::NonPositiveSlack);
        let ViolationWitness::Domination(w) = violation.witness else {
            panic!("expected a domination witness")
        };
        assert_eq!(
            (w.a1.as_str(), w.a2.as_str(), w.b1.as_str(), w.b2.as_str()),
            ("(-1,3)", "(-1,5)", "(-1,-1)", "(-1,1)")
        );
        assert_eq!((w.x1.as_str(), w.x2.as_str()), ("(-1,-1)", "(-1,1)"));
        assert_eq!(w.slack, 0.0);
    }

    #[test]
    fn ex22_rejects_interior_extensions() {
        assert!(matches!(build_ex22(&[0.5]), Err(Error::InvalidParameter(_))));
        assert!(build_ex22(&[2.0, -3.5]).is_ok());
    }

    #[test]
    fn reciprocal_requires_a_closed_sample() {
        // phi-closed but not psi-closed: psi(1/8) = -512 is unsampled.
        let err = build_reciprocal(&[0.0, 1.0, -1.0, 0.125, -8.0]).unwrap_err();
        match err {
            Error::SampleNotClosed { missing } => {
                assert!(missing.contains(&"-512".to_string()), "{missing:?}")
            }
            other => panic!("expected SampleNotClosed, got {other:?}"),
        }
        assert!(matches!(
            build_reciprocal(&[1.0, -1.0]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn reciprocal_canonical_instance() {
        let instance = build_reciprocal(&canonical_reciprocal_sample::<f64>()).unwrap();
        // Maps commute on the closed sample (table composition).
        for i in 0..instance.space.len() {
            assert_eq!(
                instance.phi.image(instance.psi.image(i)),
                instance.psi.image(instance.phi.image(i))
            );
        }
        let report = certify_f_weak_domination_selfmap(
            &instance.space,
            &instance.phi,
            &instance.psi,
            &FFunction::log(),
        )
        .unwrap();
        assert!(!report.holds);
        let violation = report.violation.unwrap();
        assert_eq!(violation.kind, ViolationKind::NonPositiveSlack);
        let ViolationWitness::Domination(w) = violation.witness else {
            panic!("expected a domination witness")
        };
        assert_eq!((w.x1.as_str(), w.x2.as_str()), ("0", "1"));
        assert_eq!(w.slack, 0.0);

        let problem = instance.to_problem(0.0, 1e-9).unwrap();
        assert!(problem.brute_force_cbpp().is_empty());
    }

    #[test]
    fn gallery_names_resolve() {
        for name in ["circle", "cartesian-product", "ex22", "reciprocal-counterexample"] {
            let spec = GallerySpec::<f64>::by_name(name).unwrap();
            assert_eq!(spec.name(), name);
            spec.materialize().unwrap();
        }
        assert!(GallerySpec::<f64>::by_name("nope").is_none());
    }
}

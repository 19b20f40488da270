//! Proximity problems: subset pairs, mapping pairs, set distance, proximal
//! cores, and the basic proximity predicates.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::space::FiniteMetricSpace;

/// Nonempty subsets `s1`, `s2` of a space, stored as point indices in list
/// order.
#[derive(Debug, Clone)]
pub struct SubsetPair {
    s1: Vec<usize>,
    s2: Vec<usize>,
    in_s1: Vec<bool>,
    in_s2: Vec<bool>,
}

impl SubsetPair {
    pub fn new<T: Real>(
        space: &FiniteMetricSpace<T>,
        s1: &[&str],
        s2: &[&str],
    ) -> Result<Self> {
        let to_indices = |which: &'static str, labels: &[&str]| -> Result<(Vec<usize>, Vec<bool>)> {
            if labels.is_empty() {
                return Err(Error::EmptySubset { which });
            }
            let mut member = vec![false; space.len()];
            for label in labels {
                let i = space.require(label)?;
                member[i] = true;
            }
            let indices = (0..space.len()).filter(|&i| member[i]).collect();
            Ok((indices, member))
        };
        let (s1, in_s1) = to_indices("s1", s1)?;
        let (s2, in_s2) = to_indices("s2", s2)?;
        Ok(SubsetPair { s1, s2, in_s1, in_s2 })
    }

    pub fn s1(&self) -> &[usize] {
        &self.s1
    }

    pub fn s2(&self) -> &[usize] {
        &self.s2
    }

    pub fn s1_contains(&self, i: usize) -> bool {
        self.in_s1[i]
    }

    pub fn s2_contains(&self, i: usize) -> bool {
        self.in_s2[i]
    }
}

/// The pair of total mappings `phi, psi : s1 -> s2`, stored as image tables
/// indexed by point.
#[derive(Debug, Clone)]
pub struct MappingPair {
    phi: Vec<Option<usize>>,
    psi: Vec<Option<usize>>,
}

impl MappingPair {
    pub fn new<T: Real>(
        space: &FiniteMetricSpace<T>,
        sets: &SubsetPair,
        phi: &[(&str, &str)],
        psi: &[(&str, &str)],
    ) -> Result<Self> {
        let build = |which: &'static str, pairs: &[(&str, &str)]| -> Result<Vec<Option<usize>>> {
            let mut table = vec![None; space.len()];
            for (from, to) in pairs {
                let i = space.require(from)?;
                let j = space.require(to)?;
                if !sets.s1_contains(i) {
                    return Err(Error::InvalidMapping {
                        which,
                        detail: format!("{from:?} is outside s1"),
                    });
                }
                if !sets.s2_contains(j) {
                    return Err(Error::InvalidMapping {
                        which,
                        detail: format!("image {to:?} of {from:?} is outside s2"),
                    });
                }
                if table[i].is_some() {
                    return Err(Error::InvalidMapping {
                        which,
                        detail: format!("{from:?} mapped twice"),
                    });
                }
                table[i] = Some(j);
            }
            for &i in sets.s1() {
                if table[i].is_none() {
                    return Err(Error::InvalidMapping {
                        which,
                        detail: format!("no image for {:?}", space.label(i)),
                    });
                }
            }
            Ok(table)
        };
        let phi = build("phi", phi)?;
        let psi = build("psi", psi)?;
        Ok(MappingPair { phi, psi })
    }

    pub fn phi(&self, i: usize) -> usize {
        self.phi[i].expect("phi is total on s1")
    }

    pub fn psi(&self, i: usize) -> usize {
        self.psi[i].expect("psi is total on s1")
    }
}

/// Verdict of the proximal-commutativity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingVerdict {
    pub holds: bool,
    pub witness: Option<CommutingWitness>,
}

/// First triple `(a, b, x)` in scan order for which the attainment
/// antecedent holds but `phi(b) != psi(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingWitness {
    pub a: String,
    pub b: String,
    pub x: String,
    pub phi_b: String,
    pub psi_a: String,
}

/// A complete problem instance: space, subset pair, mapping pair, and the
/// two tolerances.
///
/// `tol_eq` decides when a distance counts as attaining the set distance;
/// `tol_conv` is the iteration stopping gap. Construction validates that
/// `tol_eq` cannot merge distinct attainment classes: if any pair sits
/// further than `tol_eq` above the set distance, the closest such pair must
/// clear `2 * tol_eq`.
#[derive(Debug, Clone)]
pub struct ProximityProblem<T: Real> {
    space: FiniteMetricSpace<T>,
    sets: SubsetPair,
    maps: MappingPair,
    tol_eq: T,
    tol_conv: T,
    discretized: bool,
    set_distance: T,
    core1: Vec<usize>,
    core2: Vec<usize>,
}

impl<T: Real> ProximityProblem<T> {
    pub fn new(
        space: FiniteMetricSpace<T>,
        s1: &[&str],
        s2: &[&str],
        phi: &[(&str, &str)],
        psi: &[(&str, &str)],
        tol_eq: T,
        tol_conv: T,
    ) -> Result<Self> {
        let sets = SubsetPair::new(&space, s1, s2)?;
        let maps = MappingPair::new(&space, &sets, phi, psi)?;
        Self::from_parts(space, sets, maps, tol_eq, tol_conv)
    }

    pub fn from_parts(
        space: FiniteMetricSpace<T>,
        sets: SubsetPair,
        maps: MappingPair,
        tol_eq: T,
        tol_conv: T,
    ) -> Result<Self> {
        if !(tol_eq >= T::zero() && tol_eq.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "tol_eq must be a finite non-negative real, got {tol_eq}"
            )));
        }
        if !(tol_conv > T::zero() && tol_conv.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "tol_conv must be a finite positive real, got {tol_conv}"
            )));
        }

        let mut set_distance = T::infinity();
        for &i in sets.s1() {
            for &j in sets.s2() {
                let d = space.d(i, j);
                if d < set_distance {
                    set_distance = d;
                }
            }
        }

        // Least gap above the attainment band; tol_eq must clear it twofold
        // so the attaining cluster and the next distance class cannot merge.
        let mut least_gap_beyond = T::infinity();
        for &i in sets.s1() {
            for &j in sets.s2() {
                let gap = space.d(i, j) - set_distance;
                if gap > tol_eq && gap < least_gap_beyond {
                    least_gap_beyond = gap;
                }
            }
        }
        if least_gap_beyond.is_finite() {
            let two = T::one() + T::one();
            if two * tol_eq >= least_gap_beyond {
                return Err(Error::InvalidTolerance(format!(
                    "tol_eq = {tol_eq} merges attainment classes: the next distance class \
                     sits only {least_gap_beyond} above the set distance"
                )));
            }
        }

        let mut problem = ProximityProblem {
            space,
            sets,
            maps,
            tol_eq,
            tol_conv,
            discretized: false,
            set_distance,
            core1: Vec::new(),
            core2: Vec::new(),
        };
        problem.core1 = problem
            .sets
            .s1()
            .iter()
            .copied()
            .filter(|&i| problem.sets.s2().iter().any(|&j| problem.attains(i, j)))
            .collect();
        problem.core2 = problem
            .sets
            .s2()
            .iter()
            .copied()
            .filter(|&j| problem.sets.s1().iter().any(|&i| problem.attains(i, j)))
            .collect();
        Ok(problem)
    }

    /// Marks the instance as a sampled stand-in for a continuous space;
    /// certification reports carry the flag.
    pub fn with_discretized(mut self, discretized: bool) -> Self {
        self.discretized = discretized;
        self
    }

    /// Rebuilds the instance with different tolerances, re-running the
    /// tolerance validation.
    pub fn with_tolerances(&self, tol_eq: T, tol_conv: T) -> Result<Self> {
        let rebuilt = Self::from_parts(
            self.space.clone(),
            self.sets.clone(),
            self.maps.clone(),
            tol_eq,
            tol_conv,
        )?;
        Ok(rebuilt.with_discretized(self.discretized))
    }

    pub fn space(&self) -> &FiniteMetricSpace<T> {
        &self.space
    }

    pub fn sets(&self) -> &SubsetPair {
        &self.sets
    }

    pub fn tol_eq(&self) -> T {
        self.tol_eq
    }

    pub fn tol_conv(&self) -> T {
        self.tol_conv
    }

    pub fn discretized(&self) -> bool {
        self.discretized
    }

    pub fn phi(&self, i: usize) -> usize {
        self.maps.phi(i)
    }

    pub fn psi(&self, i: usize) -> usize {
        self.maps.psi(i)
    }

    /// Whether `d(i, j)` attains the set distance within `tol_eq`.
    pub fn attains(&self, i: usize, j: usize) -> bool {
        (self.space.d(i, j) - self.set_distance).abs() <= self.tol_eq
    }

    /// The minimum of `d` over `s1 x s2`; on a finite space the infimum in
    /// the definition is attained.
    pub fn set_distance(&self) -> T {
        self.set_distance
    }

    /// The proximal cores: points of `s1` (resp. `s2`) participating in a
    /// pair that attains the set distance.
    pub fn proximal_cores(&self) -> Result<(Vec<&str>, Vec<&str>)> {
        if self.core1.is_empty() {
            return Err(Error::EmptyCore { which: "s1" });
        }
        if self.core2.is_empty() {
            return Err(Error::EmptyCore { which: "s2" });
        }
        Ok((
            self.core1.iter().map(|&i| self.space.label(i)).collect(),
            self.core2.iter().map(|&j| self.space.label(j)).collect(),
        ))
    }

    pub fn core1_indices(&self) -> &[usize] {
        &self.core1
    }

    pub fn core2_indices(&self) -> &[usize] {
        &self.core2
    }

    pub fn core1_contains(&self, i: usize) -> bool {
        self.core1.binary_search(&i).is_ok()
    }

    pub fn core2_contains(&self, j: usize) -> bool {
        self.core2.binary_search(&j).is_ok()
    }

    /// Checks proximal commutativity: whenever `a` attains `phi(x)` and `b`
    /// attains `psi(x)`, it must hold that `phi(b) = psi(a)`.
    ///
    /// The scan walks `(a, b, x)` triples lexicographically in point-list
    /// order and reports the first violation.
    pub fn is_proximally_commuting(&self) -> CommutingVerdict {
        for &a in self.sets.s1() {
            for &b in self.sets.s1() {
                for &x in self.sets.s1() {
                    if self.attains(a, self.phi(x)) && self.attains(b, self.psi(x)) {
                        let phi_b = self.phi(b);
                        let psi_a = self.psi(a);
                        if phi_b != psi_a {
                            return CommutingVerdict {
                                holds: false,
                                witness: Some(CommutingWitness {
                                    a: self.space.label(a).to_string(),
                                    b: self.space.label(b).to_string(),
                                    x: self.space.label(x).to_string(),
                                    phi_b: self.space.label(phi_b).to_string(),
                                    psi_a: self.space.label(psi_a).to_string(),
                                }),
                            };
                        }
                    }
                }
            }
        }
        CommutingVerdict { holds: true, witness: None }
    }

    /// Whether `x` attains the set distance simultaneously under both maps.
    pub fn is_common_best_proximity_point(&self, x: &str) -> Result<bool> {
        let i = self.space.require(x)?;
        if !self.sets.s1_contains(i) {
            return Err(Error::UnknownPoint(format!("{x} (not a member of s1)")));
        }
        Ok(self.attains(i, self.phi(i)) && self.attains(i, self.psi(i)))
    }

    /// Ground-truth oracle: the set of common best proximity points by full
    /// scan of `s1`, in point-list order.
    pub fn brute_force_cbpp(&self) -> Vec<&str> {
        self.sets
            .s1()
            .iter()
            .copied()
            .filter(|&i| self.attains(i, self.phi(i)) && self.attains(i, self.psi(i)))
            .map(|i| self.space.label(i))
            .collect()
    }

    /// When `s1 = s2 =` the whole space, views the mapping pair as a pair of
    /// total self-maps.
    pub fn as_self_maps(&self) -> Option<(crate::space::SelfMap, crate::space::SelfMap)> {
        let n = self.space.len();
        if self.sets.s1().len() != n || self.sets.s2().len() != n {
            return None;
        }
        let phi = (0..n).map(|i| self.phi(i)).collect();
        let psi = (0..n).map(|i| self.psi(i)).collect();
        Some((
            crate::space::SelfMap::from_images(&self.space, phi).expect("total by construction"),
            crate::space::SelfMap::from_images(&self.space, psi).expect("total by construction"),
        ))
    }
}

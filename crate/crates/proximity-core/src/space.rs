//! Finite metric spaces with an exact, fully validated distance table.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::real::Real;

/// A finite metric space: an ordered list of labelled points plus a total
/// symmetric distance table.
///
/// All four metric axioms are validated exactly on the stored values at
/// construction (the triangle inequality over every triple, O(n^3)); a
/// violated axiom is a construction error, never a silent repair. See
/// [`metric_closure`] for repairing tables that are a rounding error short of
/// the triangle inequality.
///
/// Point order is significant: every deterministic scan in this crate walks
/// points in list order, and reported witnesses are the least tuples in the
/// lexicographic order induced by that list.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace<T: Real> {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    dist: Vec<T>,
}

impl<T: Real> FiniteMetricSpace<T> {
    /// Builds a space from a full square distance table.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<T>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::TableShape(format!("expected a {n}x{n} table")));
        }
        let mut dist = Vec::with_capacity(n * n);
        for row in &table {
            dist.extend_from_slice(row);
        }
        let space = FiniteMetricSpace { labels, index, dist };
        space.validate_axioms()?;
        Ok(space)
    }

    /// Builds a space from one explicit entry per unordered pair of distinct
    /// points; the diagonal is implied zero and symmetry is by construction.
    pub fn from_pair_entries(labels: Vec<String>, entries: &[(String, String, T)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let mut table = vec![vec![T::zero(); n]; n];
        let mut seen = vec![false; n * n];
        for (p, q, value) in entries {
            let i = *index.get(p).ok_or_else(|| Error::UnknownPoint(p.clone()))?;
            let j = *index.get(q).ok_or_else(|| Error::UnknownPoint(q.clone()))?;
            if i == j {
                return Err(Error::TableShape(format!(
                    "diagonal entry {p:?} {q:?} is implied zero and must not be listed"
                )));
            }
            if seen[i * n + j] {
                return Err(Error::TableShape(format!("pair {p:?} {q:?} listed twice")));
            }
            seen[i * n + j] = true;
            seen[j * n + i] = true;
            table[i][j] = *value;
            table[j][i] = *value;
        }
        for i in 0..n {
            for j in 0..i {
                if !seen[i * n + j] {
                    return Err(Error::TableShape(format!(
                        "missing distance for pair {:?} {:?}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Self::from_table(labels, table)
    }

    /// Builds a space from coordinate tuples under the Euclidean distance.
    ///
    /// The derived table is validated exactly, like any other: collinear or
    /// nearly collinear triples can round to a table an ulp short of the
    /// triangle inequality and be rejected. Run [`metric_closure`] over
    /// [`euclidean_table`] to repair such tables first (the problem-file
    /// parser does this for coordinate documents).
    pub fn from_points(labels: Vec<String>, coords: Vec<Vec<T>>) -> Result<Self> {
        if coords.len() != labels.len() {
            return Err(Error::TableShape(format!(
                "{} points but {} coordinate tuples",
                labels.len(),
                coords.len()
            )));
        }
        let table = euclidean_table(&coords)?;
        Self::from_table(labels, table)
    }

    fn validate_axioms(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                let d = self.d(i, j);
                if !d.is_finite() {
                    return Err(Error::NonFiniteDistance {
                        p: self.labels[i].clone(),
                        q: self.labels[j].clone(),
                        value: d.to_f64_lossy(),
                    });
                }
            }
        }
        for i in 0..n {
            let d = self.d(i, i);
            if d != T::zero() {
                return Err(Error::NonZeroDiagonal {
                    p: self.labels[i].clone(),
                    value: d.to_f64_lossy(),
                });
            }
        }
        for i in 0..n {
            for j in 0..i {
                let dij = self.d(i, j);
                let dji = self.d(j, i);
                if dij != dji {
                    return Err(Error::AsymmetricDistance {
                        p: self.labels[i].clone(),
                        q: self.labels[j].clone(),
                        pq: dij.to_f64_lossy(),
                        qp: dji.to_f64_lossy(),
                    });
                }
                if dij <= T::zero() {
                    return Err(Error::NonPositiveDistance {
                        p: self.labels[i].clone(),
                        q: self.labels[j].clone(),
                        value: dij.to_f64_lossy(),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let direct = self.d(i, k);
                    let via = self.d(i, j) + self.d(j, k);
                    if direct > via {
                        return Err(Error::TriangleViolation {
                            p: self.labels[i].clone(),
                            q: self.labels[j].clone(),
                            r: self.labels[k].clone(),
                            lhs: direct.to_f64_lossy(),
                            rhs: via.to_f64_lossy(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    /// Distance by point index.
    pub fn d(&self, i: usize, j: usize) -> T {
        self.dist[i * self.labels.len() + j]
    }

    /// Distance by point label.
    pub fn d_labels(&self, p: &str, q: &str) -> Result<T> {
        Ok(self.d(self.require(p)?, self.require(q)?))
    }
}

/// The pairwise Euclidean distance table of a list of coordinate tuples.
pub fn euclidean_table<T: Real>(coords: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = coords.len();
    let dim = coords.first().map(|c| c.len()).unwrap_or(0);
    if coords.iter().any(|c| c.len() != dim) {
        return Err(Error::TableShape("coordinate tuples must share one dimension".into()));
    }
    let mut table = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..i {
            let mut sum = T::zero();
            for k in 0..dim {
                let diff = coords[i][k] - coords[j][k];
                sum = sum + diff * diff;
            }
            let d = sum.sqrt();
            table[i][j] = d;
            table[j][i] = d;
        }
    }
    Ok(table)
}

/// Min-plus closure of a square table, iterated to a fixed point in the
/// working precision.
///
/// Tables derived from exact geometry can violate the stored-value triangle
/// inequality by an ulp or two when nearly collinear triples are rounded
/// independently. The closure lowers entries by at most that rounding margin
/// and reaches a table on which `d[i][k] <= d[i][j] + d[j][k]` holds exactly
/// as evaluated, which is the check [`FiniteMetricSpace::from_table`] runs.
/// Tables that already satisfy the inequality are returned bit-identical.
pub fn metric_closure<T: Real>(table: &mut [Vec<T>]) {
    let n = table.len();
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                let dik = table[i][k];
                for j in 0..n {
                    let via = dik + table[k][j];
                    if via < table[i][j] {
                        table[i][j] = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// A total self-map of a space, stored as an image table indexed by point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfMap {
    images: Vec<usize>,
}

impl SelfMap {
    /// Builds a self-map from an image index per point.
    pub fn from_images<T: Real>(space: &FiniteMetricSpace<T>, images: Vec<usize>) -> Result<Self> {
        if images.len() != space.len() {
            return Err(Error::InvalidMapping {
                which: "self-map",
                detail: format!("{} images for {} points", images.len(), space.len()),
            });
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= space.len()) {
            return Err(Error::InvalidMapping {
                which: "self-map",
                detail: format!("image index {bad} out of range"),
            });
        }
        Ok(SelfMap { images })
    }

    /// Builds a self-map from `(from, to)` label pairs; the map must be total.
    pub fn from_pairs<T: Real>(
        space: &FiniteMetricSpace<T>,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut images = vec![usize::MAX; space.len()];
        for (from, to) in pairs {
            let i = space.require(from)?;
            let j = space.require(to)?;
            if images[i] != usize::MAX {
                return Err(Error::InvalidMapping {
                    which: "self-map",
                    detail: format!("point {from:?} mapped twice"),
                });
            }
            images[i] = j;
        }
        if let Some(i) = images.iter().position(|&v| v == usize::MAX) {
            return Err(Error::InvalidMapping {
                which: "self-map",
                detail: format!("no image for point {:?}", space.label(i)),
            });
        }
        Ok(SelfMap { images })
    }

    pub fn identity<T: Real>(space: &FiniteMetricSpace<T>) -> Self {
        SelfMap { images: (0..space.len()).collect() }
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

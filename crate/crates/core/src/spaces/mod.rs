//! Finite discrete spaces and their distance matrices.
//!
//! The cut matrix built here follows the convention that 1 marks a pair of
//! *intersecting* neighborhoods; a space is discrete when no pair intersects.

mod packing;

use std::fmt::{Display, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

pub use packing::{code_length_bound, code_length_bound_of, pack_points, unpack_points};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("a space needs at least one point")]
    Empty,
    #[error("point {index} has dimension {found}, expected {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("negative distance at ({0}, {1})")]
    Negative(usize, usize),
    #[error("custom matrix must be symmetric with a zero diagonal")]
    NotADistance,
    #[error("custom matrix is {found}×{found} for {expected} points")]
    MatrixSize { expected: usize, found: usize },
    #[error("metric needs coordinates, the space only has a distance matrix")]
    NoCoordinates,
    #[error("characteristic radius needs at least two points")]
    UndefinedRadius,
    #[error("{radii} radii for {points} points")]
    RadiusCount { points: usize, radii: usize },
    #[error("value does not fit the code width: {0}")]
    Width(String),
    #[error("invalid point list: {0}")]
    Parse(String),
}

/// Square matrix of nonnegative distances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, SpaceError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(SpaceError::NotSquare {
                    row: i,
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, x) in row.into_iter().enumerate() {
                if x < T::zero() {
                    return Err(SpaceError::Negative(i, j));
                }
                entries.push(x);
            }
        }
        Ok(Self { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_zero())
    }

    /// Off-diagonal entries `(i, j, d)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }
}

impl<T: Display> DistanceMatrix<T> {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.entries.chunks(self.n.max(1)) {
            let cells: Vec<String> = row.iter().map(T::to_string).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Metric<T> {
    L1,
    L2,
    LInf,
    Custom(DistanceMatrix<T>),
}

/// `d(a, b)` under a coordinate metric.
pub fn lp_distance<T: Scalar>(metric: &Metric<T>, a: &[T], b: &[T]) -> Result<T, SpaceError> {
    if a.len() != b.len() {
        return Err(SpaceError::Dimension {
            index: 1,
            expected: a.len(),
            found: b.len(),
        });
    }
    let diffs = a.iter().zip(b).map(|(x, y)| (x.clone() - y.clone()).abs());
    Ok(match metric {
        Metric::L1 => diffs.fold(T::zero(), |acc, d| acc + d),
        Metric::L2 => diffs.fold(T::zero(), |acc, d| acc + d.clone() * d).sqrt(),
        Metric::LInf => diffs.fold(T::zero(), T::max_of),
        Metric::Custom(_) => return Err(SpaceError::NoCoordinates),
    })
}

/// Points with a metric. Spaces given only by a matrix have zero-dimensional
/// points and answer distances by index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteSpace<T> {
    points: Vec<Vec<T>>,
    metric: Metric<T>,
}

impl<T: Scalar> FiniteSpace<T> {
    pub fn new(points: Vec<Vec<T>>, metric: Metric<T>) -> Result<Self, SpaceError> {
        let first = points.first().ok_or(SpaceError::Empty)?;
        let dim = first.len();
        if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(SpaceError::Dimension {
                index,
                expected: dim,
                found: p.len(),
            });
        }
        if let Metric::Custom(d) = &metric {
            check_custom(d, points.len())?;
        }
        Ok(Self { points, metric })
    }

    /// Opaque points identified by index.
    pub fn from_matrix(d: DistanceMatrix<T>) -> Result<Self, SpaceError> {
        if d.size() == 0 {
            return Err(SpaceError::Empty);
        }
        check_custom(&d, d.size())?;
        Ok(Self {
            points: vec![Vec::new(); d.size()],
            metric: Metric::Custom(d),
        })
    }

    /// Points on the real line.
    pub fn line(values: Vec<T>, metric: Metric<T>) -> Result<Self, SpaceError> {
        Self::new(values.into_iter().map(|v| vec![v]).collect(), metric)
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn metric(&self) -> &Metric<T> {
        &self.metric
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn distance(&self, i: usize, j: usize) -> T {
        match &self.metric {
            Metric::Custom(d) => d.get(i, j).clone(),
            m => lp_distance(m, &self.points[i], &self.points[j]).expect("uniform dimension"),
        }
    }

    /// Distance from point `i` to an arbitrary query point.
    pub fn distance_to(&self, i: usize, q: &[T]) -> Result<T, SpaceError> {
        lp_distance(&self.metric, &self.points[i], q)
    }

    /// ‖X‖∞: the largest absolute coordinate over all points.
    pub fn norm_inf(&self) -> T {
        self.points
            .iter()
            .flatten()
            .map(|x| x.abs())
            .fold(T::zero(), T::max_of)
    }
}

fn check_custom<T: Scalar>(d: &DistanceMatrix<T>, n: usize) -> Result<(), SpaceError> {
    if d.size() != n {
        return Err(SpaceError::MatrixSize {
            expected: n,
            found: d.size(),
        });
    }
    if !d.is_symmetric() || !d.has_zero_diagonal() {
        return Err(SpaceError::NotADistance);
    }
    Ok(())
}

pub fn build_distance_matrix<T: Scalar>(space: &FiniteSpace<T>) -> DistanceMatrix<T> {
    if let Metric::Custom(d) = &space.metric {
        return d.clone();
    }
    let n = space.len();
    let mut entries = vec![T::zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = space.distance(i, j);
            entries[j * n + i] = d.clone();
            entries[i * n + j] = d;
        }
    }
    DistanceMatrix { n, entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomKind {
    Asymmetric,
    NonzeroDiagonal,
    /// `d(i,k) > d(i,j) + d(j,k)`
    Triangle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: AxiomKind,
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricReport {
    pub symmetric: bool,
    pub zero_diag: bool,
    pub triangle_ok: bool,
    pub violations: Vec<Violation>,
}

impl MetricReport {
    pub fn is_metric(&self) -> bool {
        self.symmetric && self.zero_diag && self.triangle_ok
    }
}

pub fn check_metric_axioms<T: Scalar>(d: &DistanceMatrix<T>) -> MetricReport {
    check_metric_axioms_tol(d, &T::zero())
}

/// Exhaustive scan over all ordered triples, allowing `tol` slack in the
/// triangle inequality.
pub fn check_metric_axioms_tol<T: Scalar>(d: &DistanceMatrix<T>, tol: &T) -> MetricReport {
    let n = d.size();
    let mut violations = Vec::new();
    for i in 0..n {
        if !d.get(i, i).is_zero() {
            violations.push(Violation {
                kind: AxiomKind::NonzeroDiagonal,
                i,
                j: i,
                k: i,
            });
        }
        for j in i + 1..n {
            if d.get(i, j) != d.get(j, i) {
                violations.push(Violation {
                    kind: AxiomKind::Asymmetric,
                    i,
                    j,
                    k: j,
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let via = d.get(i, j).clone() + d.get(j, k).clone() + tol.clone();
                if d.get(i, k) > &via {
                    violations.push(Violation {
                        kind: AxiomKind::Triangle,
                        i,
                        j,
                        k,
                    });
                }
            }
        }
    }
    let has = |kind| violations.iter().any(|v: &Violation| v.kind == kind);
    MetricReport {
        symmetric: !has(AxiomKind::Asymmetric),
        zero_diag: !has(AxiomKind::NonzeroDiagonal),
        triangle_ok: !has(AxiomKind::Triangle),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutMetric<T> {
    pub matrix: DistanceMatrix<T>,
    pub is_discrete: bool,
}

/// Pairwise indicator of intersecting closed balls `B(x_i, r_i)`:
/// 1 when `d(x_i, x_j) ≤ r_i + r_j`, else 0. The diagonal is 0.
pub fn cut_metric<T: Scalar>(space: &FiniteSpace<T>, radii: &[T]) -> Result<CutMetric<T>, SpaceError> {
    let n = space.len();
    if radii.len() != n {
        return Err(SpaceError::RadiusCount {
            points: n,
            radii: radii.len(),
        });
    }
    let mut entries = vec![T::zero(); n * n];
    let mut is_discrete = true;
    for i in 0..n {
        for j in i + 1..n {
            if space.distance(i, j) <= radii[i].clone() + radii[j].clone() {
                entries[i * n + j] = T::one();
                entries[j * n + i] = T::one();
                is_discrete = false;
            }
        }
    }
    Ok(CutMetric {
        matrix: DistanceMatrix { n, entries },
        is_discrete,
    })
}

/// [`cut_metric`] with the same radius at every point.
pub fn cut_metric_uniform<T: Scalar>(space: &FiniteSpace<T>, radius: T) -> CutMetric<T> {
    cut_metric(space, &vec![radius; space.len()]).expect("one radius per point")
}

/// Smallest off-diagonal distance.
pub fn characteristic_radius<T: Scalar>(d: &DistanceMatrix<T>) -> Result<T, SpaceError> {
    d.pairs()
        .map(|(_, _, x)| x.clone())
        .reduce(T::min_of)
        .ok_or(SpaceError::UndefinedRadius)
}

/// `‖X‖∞ − r`.
pub fn compactness<T: Scalar>(space: &FiniteSpace<T>) -> Result<T, SpaceError> {
    let r = characteristic_radius(&build_distance_matrix(space))?;
    Ok(space.norm_inf() - r)
}

/// Reads `[[x, y, …], …]` as a point list.
pub fn points_from_json(s: &str) -> Result<Vec<Vec<f64>>, SpaceError> {
    serde_json::from_str(s).map_err(|e| SpaceError::Parse(e.to_string()))
}

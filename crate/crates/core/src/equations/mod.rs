//! Distance equations `d(x, q) + k = 0, k ∈ K` over finite spaces, combined
//! with union and intersection, and solved by linear scan.

mod arrangement;
mod hausdorff;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::spaces::{FiniteSpace, SpaceError};

pub use arrangement::{
    point_location, point_location_cosine, point_location_direct, sgn_star, Arrangement,
    Halfspaces,
};
pub use hausdorff::{directed_hausdorff, hausdorff, hausdorff_eq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquationError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("query index {0} is outside the space")]
    QueryIndex(usize),
    #[error("the equation has no solution")]
    NoSolution,
    #[error("Hausdorff distance needs nonempty sets")]
    EmptySet,
    #[error("interval bounds out of order")]
    BadInterval,
    #[error("polytope {polytope} has {rows} constraints in dimension {dim}; the sign-sum form needs one per dimension")]
    FormulationMismatch {
        polytope: usize,
        rows: usize,
        dim: usize,
    },
    #[error("polytope {polytope}: {reason}")]
    Arrangement { polytope: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound<T> {
    pub value: T,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lo: Bound<T>,
    pub hi: Bound<T>,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: Bound<T>, hi: Bound<T>) -> Result<Self, EquationError> {
        if lo.value > hi.value {
            return Err(EquationError::BadInterval);
        }
        Ok(Self { lo, hi })
    }

    pub fn closed(lo: T, hi: T) -> Result<Self, EquationError> {
        Self::new(
            Bound {
                value: lo,
                closed: true,
            },
            Bound {
                value: hi,
                closed: true,
            },
        )
    }

    pub fn point(x: T) -> Self {
        Self::closed(x.clone(), x).expect("degenerate interval")
    }

    pub fn contains(&self, x: &T) -> bool {
        let above = if self.lo.closed {
            x >= &self.lo.value
        } else {
            x > &self.lo.value
        };
        let below = if self.hi.closed {
            x <= &self.hi.value
        } else {
            x < &self.hi.value
        };
        above && below
    }

    /// `{−x : x ∈ self}`.
    pub fn negated(&self) -> Self {
        Self {
            lo: Bound {
                value: -self.hi.value.clone(),
                closed: self.hi.closed,
            },
            hi: Bound {
                value: -self.lo.value.clone(),
                closed: self.lo.closed,
            },
        }
    }
}

/// Where an atom measures distances from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Query<T> {
    Point(Vec<T>),
    /// A member of the space, by index; works for matrix-only spaces.
    Member(usize),
}

/// `d(x, q) + k = 0` for some `k` in one of the offset intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom<T> {
    /// `None` measures from the query passed to [`solve`].
    pub center: Option<Query<T>>,
    pub offsets: Vec<Interval<T>>,
}

impl<T: Scalar> Atom<T> {
    /// Closed ball `d(x, q) ≤ ε`, i.e. `K = [−ε, 0]`.
    pub fn ball(center: Option<Query<T>>, eps: T) -> Self {
        Self {
            center,
            offsets: vec![Interval::closed(-eps, T::zero()).expect("ε ≥ 0")],
        }
    }

    /// `lo ≤ d(x, q) ≤ hi`.
    pub fn shell(center: Option<Query<T>>, lo: T, hi: T) -> Result<Self, EquationError> {
        Ok(Self {
            center,
            offsets: vec![Interval::closed(-hi, -lo)?],
        })
    }

    /// Index of the first offset interval the distance satisfies.
    fn cell(&self, d: &T) -> Option<usize> {
        self.offsets.iter().position(|k| k.negated().contains(d))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation<T> {
    Atom(Atom<T>),
    Union(Vec<Equation<T>>),
    Intersect(Vec<Equation<T>>),
}

/// Sorted, duplicate-free indices into a space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    indices: Vec<usize>,
}

impl SolutionSet {
    pub fn from_indices(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_indices(self.indices.iter().chain(&other.indices).copied().collect())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self {
            indices: self
                .indices
                .iter()
                .copied()
                .filter(|&i| other.contains(i))
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }
}

fn distances<T: Scalar>(
    space: &FiniteSpace<T>,
    query: &Query<T>,
) -> Result<Vec<T>, EquationError> {
    match query {
        Query::Member(q) if *q >= space.len() => Err(EquationError::QueryIndex(*q)),
        Query::Member(q) => Ok((0..space.len()).map(|i| space.distance(i, *q)).collect()),
        Query::Point(q) => (0..space.len())
            .map(|i| space.distance_to(i, q).map_err(Into::into))
            .collect(),
    }
}

fn atom_cells<T: Scalar>(
    space: &FiniteSpace<T>,
    atom: &Atom<T>,
    q: &Query<T>,
) -> Result<Vec<Option<usize>>, EquationError> {
    let center = atom.center.as_ref().unwrap_or(q);
    Ok(distances(space, center)?.iter().map(|d| atom.cell(d)).collect())
}

/// Indices of the points satisfying the equation at query `q`.
pub fn solve<T: Scalar>(
    space: &FiniteSpace<T>,
    eq: &Equation<T>,
    q: &Query<T>,
) -> Result<SolutionSet, EquationError> {
    match eq {
        Equation::Atom(atom) => {
            let cells = atom_cells(space, atom, q)?;
            Ok(SolutionSet::from_indices(
                cells
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.is_some())
                    .map(|(i, _)| i)
                    .collect(),
            ))
        }
        Equation::Union(children) => children.iter().try_fold(SolutionSet::default(), |acc, c| {
            Ok(acc.union(&solve(space, c, q)?))
        }),
        Equation::Intersect(children) => {
            let mut acc = SolutionSet::from_indices((0..space.len()).collect());
            for c in children {
                acc = acc.intersect(&solve(space, c, q)?);
            }
            Ok(acc)
        }
    }
}

/// One solution drawn uniformly with a seeded generator.
pub fn solve_decision<T: Scalar>(
    space: &FiniteSpace<T>,
    eq: &Equation<T>,
    q: &Query<T>,
    seed: u64,
) -> Result<usize, EquationError> {
    let sol = solve(space, eq, q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sol.indices()
        .choose(&mut rng)
        .copied()
        .ok_or(EquationError::NoSolution)
}

fn collect_atoms<'a, T>(eq: &'a Equation<T>, out: &mut Vec<&'a Atom<T>>) {
    match eq {
        Equation::Atom(a) => out.push(a),
        Equation::Union(c) | Equation::Intersect(c) => c.iter().for_each(|e| collect_atoms(e, out)),
    }
}

/// Cells of the partition the equation induces: points grouped by which
/// offset interval of every atom they fall in (or none).
pub fn partition<T: Scalar>(
    space: &FiniteSpace<T>,
    eq: &Equation<T>,
    q: &Query<T>,
) -> Result<Vec<SolutionSet>, EquationError> {
    let mut atoms = Vec::new();
    collect_atoms(eq, &mut atoms);
    let per_atom: Vec<Vec<Option<usize>>> = atoms
        .iter()
        .map(|a| atom_cells(space, a, q))
        .collect::<Result<_, _>>()?;
    let mut cells: BTreeMap<Vec<Option<usize>>, Vec<usize>> = BTreeMap::new();
    for i in 0..space.len() {
        let key = per_atom.iter().map(|c| c[i]).collect();
        cells.entry(key).or_default().push(i);
    }
    Ok(cells.into_values().map(SolutionSet::from_indices).collect())
}

/// Two equations are isomorphic on a space when their partitions have the
/// same number of cells.
pub fn isomorphic<T: Scalar>(
    space: &FiniteSpace<T>,
    a: &Equation<T>,
    b: &Equation<T>,
    q: &Query<T>,
) -> Result<bool, EquationError> {
    Ok(partition(space, a, q)?.len() == partition(space, b, q)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Metric;

    fn line(v: &[f64]) -> FiniteSpace<f64> {
        FiniteSpace::line(v.to_vec(), Metric::L1).unwrap()
    }

    fn at(x: f64) -> Query<f64> {
        Query::Point(vec![x])
    }

    #[test]
    fn ball_search() {
        let x = line(&[0.0, 1.0, 2.0, 5.0]);
        let ball = Equation::Atom(Atom::ball(None, 1.0));
        assert_eq!(solve(&x, &ball, &at(1.0)).unwrap().indices(), &[0, 1, 2]);
        let zero = Equation::Atom(Atom::ball(None, 0.0));
        assert_eq!(solve(&x, &zero, &Query::Member(3)).unwrap().indices(), &[3]);
        let both = Equation::Intersect(vec![
            Equation::Atom(Atom::ball(Some(at(1.0)), 1.0)),
            Equation::Atom(Atom::ball(Some(at(2.0)), 1.0)),
        ]);
        assert_eq!(solve(&x, &both, &at(0.0)).unwrap().indices(), &[1, 2]);
    }

    #[test]
    fn open_bounds() {
        let x = line(&[0.0, 1.0, 2.0, 5.0]);
        let k = Interval::new(
            Bound {
                value: -2.0,
                closed: false,
            },
            Bound {
                value: -1.0,
                closed: true,
            },
        )
        .unwrap();
        let eq = Equation::Atom(Atom {
            center: None,
            offsets: vec![k],
        });
        // 1 ≤ d < 2 from q = 0
        assert_eq!(solve(&x, &eq, &at(0.0)).unwrap().indices(), &[1]);
    }

    #[test]
    fn empty_and_mismatch() {
        let x = FiniteSpace::new(vec![vec![0.0, 0.0]], Metric::L2).unwrap();
        let eq = Equation::Atom(Atom::ball(None, 1.0));
        assert!(matches!(
            solve(&x, &eq, &at(0.0)),
            Err(EquationError::Space(SpaceError::Dimension { .. }))
        ));
        assert!(solve(&line(&[0.0]), &Equation::Union(vec![]), &at(0.0)).unwrap().is_empty());
    }

    #[test]
    fn decision() {
        let x = line(&[0.0, 1.0, 2.0, 5.0]);
        let single = Equation::Atom(Atom::ball(None, 0.0));
        for seed in 0..20 {
            assert_eq!(solve_decision(&x, &single, &at(5.0), seed), Ok(3));
        }
        assert_eq!(
            solve_decision(&x, &single, &at(9.0), 0),
            Err(EquationError::NoSolution)
        );
    }

    #[test]
    fn decision_is_uniform() {
        let x = line(&[0.0, 1.0, 2.0, 3.0]);
        let eq = Equation::Atom(Atom::shell(None, 0.5, 3.0).unwrap());
        let mut counts = [0usize; 4];
        for seed in 0..3000 {
            counts[solve_decision(&x, &eq, &at(0.0), seed).unwrap()] += 1;
        }
        assert_eq!(counts[0], 0);
        let chi2: f64 = counts[1..]
            .iter()
            .map(|&c| (c as f64 - 1000.0).powi(2) / 1000.0)
            .sum();
        // χ²(2) at p = 0.01
        assert!(chi2 < 9.21, "{counts:?}");
        assert!(counts[1..].iter().all(|&c| c.abs_diff(1000) <= 120));
    }

    #[test]
    fn partition_cells() {
        let x = line(&[0.0, 1.0, 2.0, 5.0]);
        let two_shells = Equation::Atom(Atom {
            center: None,
            offsets: vec![
                Interval::closed(-1.0, 0.0).unwrap(),
                Interval::closed(-3.0, -1.5).unwrap(),
            ],
        });
        let cells = partition(&x, &two_shells, &at(0.0)).unwrap();
        assert_eq!(cells.len(), 3);
        let ball = Equation::Atom(Atom::ball(None, 2.0));
        let other = Equation::Atom(Atom::ball(None, 1.0));
        assert!(isomorphic(&x, &ball, &other, &at(0.0)).unwrap());
        assert!(!isomorphic(&x, &ball, &two_shells, &at(0.0)).unwrap());
    }
}

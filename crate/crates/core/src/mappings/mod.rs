//! Distortion and dilation of mappings between finite spaces.
//!
//! A mapping is given by two spaces of equal size: point `i` of the image is
//! `f(x_i)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equations::{solve, Atom, Equation, EquationError, Query};
use crate::scalar::Scalar;
use crate::spaces::{FiniteSpace, Metric, SpaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MappingError {
    #[error("domain has {domain} points, image {image}")]
    SizeMismatch { domain: usize, image: usize },
    #[error("distortion needs two distinct domain points")]
    Undefined,
    #[error("containment needs ε′ = {needed}, above the widening limit {limit}")]
    DilationInfeasible { needed: String, limit: String },
    #[error("target dimension must be at least 1")]
    ZeroDimension,
    #[error("identity projection needs d = n ({d} ≠ {n})")]
    IdentityDimension { d: usize, n: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Equation(#[from] EquationError),
}

/// Distortion and dilation figures of one mapping. Infinite bounds
/// serialize as `null`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MappingReport {
    /// Smallest `k1 ≥ 1` with `d/k1 ≤ d′`.
    pub k1: f64,
    /// Smallest `k2 ≥ 1` with `d′ ≤ k2·d`.
    pub k2: f64,
    /// `min d′/d`, the global scale.
    pub scale: f64,
    /// `max d′/d ÷ min d′/d`, independent of scale.
    pub distortion: f64,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub pairs: usize,
    /// Pairs outside declared `(k1, k2)` bounds, when bounds were declared.
    pub violations: Vec<(usize, usize)>,
}

fn same_size<T: Scalar>(x: &FiniteSpace<T>, y: &FiniteSpace<T>) -> Result<(), MappingError> {
    if x.len() != y.len() {
        return Err(MappingError::SizeMismatch {
            domain: x.len(),
            image: y.len(),
        });
    }
    Ok(())
}

/// Applies `f` to every point, keeping `metric` on the image.
pub fn map_space<T: Scalar>(
    x: &FiniteSpace<T>,
    metric: Metric<T>,
    f: impl Fn(&[T]) -> Vec<T>,
) -> Result<FiniteSpace<T>, SpaceError> {
    FiniteSpace::new(x.points().iter().map(|p| f(p)).collect(), metric)
}

/// Pairwise ratio scan. A pair with `d > 0, d′ = 0` makes `k1` infinite; a
/// pair with `d = 0, d′ > 0` makes `k2` infinite.
pub fn measure_distortion<T: Scalar>(
    x: &FiniteSpace<T>,
    y: &FiniteSpace<T>,
) -> Result<MappingReport, MappingError> {
    same_size(x, y)?;
    let (mut lo, mut hi) = (f64::INFINITY, 0f64);
    let mut pairs = 0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let d = x.distance(i, j).to_f64_lossy();
            let dp = y.distance(i, j).to_f64_lossy();
            pairs += 1;
            if d == 0.0 {
                if dp > 0.0 {
                    hi = f64::INFINITY;
                }
                continue;
            }
            let ratio = dp / d;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    if lo == f64::INFINITY {
        return Err(MappingError::Undefined);
    }
    Ok(MappingReport {
        k1: (1.0 / lo).max(1.0),
        k2: hi.max(1.0),
        scale: lo,
        distortion: hi / lo,
        pairs,
        ..Default::default()
    })
}

/// Pairs violating `d/k1 ≤ d′ ≤ k2·d`.
pub fn distortion_violations<T: Scalar>(
    x: &FiniteSpace<T>,
    y: &FiniteSpace<T>,
    k1: &T,
    k2: &T,
) -> Result<Vec<(usize, usize)>, MappingError> {
    same_size(x, y)?;
    let mut out = Vec::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let (d, dp) = (x.distance(i, j), y.distance(i, j));
            if d.clone() / k1.clone() > dp || dp > k2.clone() * d {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationCell {
    pub eps: f64,
    /// Smallest radius `≥ ε` in the image with `f(X_i) ⊆ Y_i` for every `i`.
    pub eps_prime: f64,
    pub max_x: usize,
    pub max_y: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationReport {
    pub c1: f64,
    pub c2: f64,
    pub cells: Vec<DilationCell>,
    /// `1 + ln|X| / |X|`
    pub c2_expected: f64,
}

/// Closed-ball searches at every `q_i ∈ X` and radius in `eps_grid`; the
/// image radius is widened to the least value restoring containment.
/// `limit` caps the widening.
pub fn measure_dilation<T: Scalar>(
    x: &FiniteSpace<T>,
    y: &FiniteSpace<T>,
    eps_grid: &[T],
    limit: Option<&T>,
) -> Result<DilationReport, MappingError> {
    same_size(x, y)?;
    let n = x.len();
    let (mut c1, mut c2) = (1f64, 1f64);
    let mut cells = Vec::with_capacity(eps_grid.len());
    for eps in eps_grid {
        let ball = Equation::Atom(Atom::ball(None, eps.clone()));
        let solutions: Vec<_> = (0..n)
            .map(|i| solve(x, &ball, &Query::Member(i)))
            .collect::<Result<_, _>>()?;
        let mut eps_prime = eps.clone();
        for (i, s) in solutions.iter().enumerate() {
            for &j in s.indices() {
                eps_prime = eps_prime.max_of(y.distance(i, j));
            }
        }
        if let Some(limit) = limit {
            if &eps_prime > limit {
                return Err(MappingError::DilationInfeasible {
                    needed: eps_prime.to_string(),
                    limit: limit.to_string(),
                });
            }
        }
        let wide = Equation::Atom(Atom::ball(None, eps_prime.clone()));
        let mut max_y = 0;
        for i in 0..n {
            max_y = max_y.max(solve(y, &wide, &Query::Member(i))?.len());
        }
        let max_x = solutions.iter().map(|s| s.len()).max().unwrap_or(0);
        c1 = c1.max(max_x as f64 / max_y as f64);
        c2 = c2.max(max_y as f64 / max_x as f64);
        cells.push(DilationCell {
            eps: eps.to_f64_lossy(),
            eps_prime: eps_prime.to_f64_lossy(),
            max_x,
            max_y,
        });
    }
    Ok(DilationReport {
        c1,
        c2,
        cells,
        c2_expected: 1.0 + (n as f64).ln() / n as f64,
    })
}

/// Gaussian projection to `d` dimensions scaled by `1/√d`, seeded. With
/// `identity` set (and `d = n`) points are copied unchanged.
pub fn random_projection(
    points: &[Vec<f64>],
    d: usize,
    seed: u64,
    identity: bool,
) -> Result<Vec<Vec<f64>>, MappingError> {
    if d == 0 {
        return Err(MappingError::ZeroDimension);
    }
    let n = points.first().map_or(0, Vec::len);
    if identity {
        if d != n {
            return Err(MappingError::IdentityDimension { d, n });
        }
        return Ok(points.to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (d as f64).sqrt();
    let matrix: Vec<Vec<f64>> = (0..d)
        .map(|_| {
            (0..n)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect::<Vec<f64>>()
        })
        .collect();
    Ok(points
        .iter()
        .map(|p| {
            matrix
                .iter()
                .map(|row| row.iter().zip(p).map(|(a, x)| a * x).sum::<f64>() * scale)
                .collect()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallCounts {
    /// `max_i |B_ε(f(q_i)) ∩ Y|`
    pub image: usize,
    /// `max_i |B_{εk1}(q_i) ∩ X|`
    pub wide: usize,
    /// `max_i |B_{ε/k2}(q_i) ∩ X|`
    pub narrow: usize,
    /// Whether `image ≤ wide − narrow`.
    pub holds: bool,
}

fn max_ball<T: Scalar>(s: &FiniteSpace<T>, r: &T) -> usize {
    (0..s.len())
        .map(|i| (0..s.len()).filter(|&j| &s.distance(i, j) <= r).count())
        .max()
        .unwrap_or(0)
}

/// Closed-ball counts over all `q ∈ X`.
pub fn ball_counts<T: Scalar>(
    x: &FiniteSpace<T>,
    y: &FiniteSpace<T>,
    eps: &T,
    k1: &T,
    k2: &T,
) -> Result<BallCounts, MappingError> {
    same_size(x, y)?;
    let image = max_ball(y, eps);
    let wide = max_ball(x, &(eps.clone() * k1.clone()));
    let narrow = max_ball(x, &(eps.clone() / k2.clone()));
    Ok(BallCounts {
        image,
        wide,
        narrow,
        holds: image as i64 <= wide as i64 - narrow as i64,
    })
}

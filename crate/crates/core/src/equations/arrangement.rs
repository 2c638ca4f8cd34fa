use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::EquationError;
use crate::scalar::Scalar;

/// `A x ≤ b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspaces<T> {
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
}

impl<T: Scalar> Halfspaces<T> {
    /// Residuals `A_j x − b_j`.
    pub fn residuals(&self, x: &[T]) -> Vec<T> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, b)| {
                row.iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (r, v)| acc + r.clone() * v.clone())
                    - b.clone()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arrangement<T> {
    dim: usize,
    polytopes: Vec<Halfspaces<T>>,
}

impl<T: Scalar> Arrangement<T> {
    pub fn new(dim: usize, polytopes: Vec<Halfspaces<T>>) -> Result<Self, EquationError> {
        for (i, p) in polytopes.iter().enumerate() {
            let bad = |reason: &str| EquationError::Arrangement {
                polytope: i,
                reason: reason.into(),
            };
            if p.a.len() != p.b.len() {
                return Err(bad("A and b disagree on the number of constraints"));
            }
            if p.a.iter().any(|r| r.len() != dim) {
                return Err(bad("row length differs from the dimension"));
            }
            if p.a.iter().any(|r| r.iter().all(Zero::is_zero)) {
                return Err(bad("zero constraint row"));
            }
        }
        Ok(Self { dim, polytopes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn polytopes(&self) -> &[Halfspaces<T>] {
        &self.polytopes
    }

    fn check_query(&self, q: &[T]) -> Result<(), EquationError> {
        if q.len() != self.dim {
            return Err(crate::spaces::SpaceError::Dimension {
                index: 0,
                expected: self.dim,
                found: q.len(),
            }
            .into());
        }
        Ok(())
    }

    fn sign_vectors(&self, q: &[T]) -> Result<Vec<Vec<i64>>, EquationError> {
        self.check_query(q)?;
        self.polytopes
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.a.len() != self.dim {
                    return Err(EquationError::FormulationMismatch {
                        polytope: i,
                        rows: p.a.len(),
                        dim: self.dim,
                    });
                }
                Ok(p.residuals(q).iter().map(sgn_star).collect())
            })
            .collect()
    }
}

/// 1 for positive input, −1 otherwise (so 0 maps to −1).
pub fn sgn_star<T: Scalar>(x: &T) -> i64 {
    if x > &T::zero() {
        1
    } else {
        -1
    }
}

/// Polytopes whose `A q ≤ b` holds, evaluated constraint by constraint.
pub fn point_location_direct<T: Scalar>(
    arr: &Arrangement<T>,
    q: &[T],
) -> Result<Vec<usize>, EquationError> {
    arr.check_query(q)?;
    Ok(arr
        .polytopes
        .iter()
        .enumerate()
        .filter(|(_, p)| p.residuals(q).iter().all(|r| r <= &T::zero()))
        .map(|(i, _)| i)
        .collect())
}

/// Polytopes with `dim q + Σ_j sgn*(A_j q − b_j) = 0`. Needs exactly
/// `dim q` constraints per polytope.
pub fn point_location<T: Scalar>(
    arr: &Arrangement<T>,
    q: &[T],
) -> Result<Vec<usize>, EquationError> {
    let n = arr.dim as i64;
    Ok(arr
        .sign_vectors(q)?
        .iter()
        .enumerate()
        .filter(|(_, v)| n + v.iter().sum::<i64>() == 0)
        .map(|(i, _)| i)
        .collect())
}

/// Polytopes whose sign vertex `v` satisfies `n + n·cos(v, 1) = 0`.
///
/// The cosine is kept as an exact ratio: `‖v‖·‖1‖ = √(n·n) = n` for a cube
/// vertex, so no rounding can move the boundary case.
pub fn point_location_cosine<T: Scalar>(
    arr: &Arrangement<T>,
    q: &[T],
) -> Result<Vec<usize>, EquationError> {
    let n = BigInt::from(arr.dim);
    Ok(arr
        .sign_vectors(q)?
        .iter()
        .enumerate()
        .filter(|(_, v)| {
            let dot: BigInt = v.iter().map(|&x| BigInt::from(x)).sum();
            let norms_sq: BigInt = v.iter().map(|&x| BigInt::from(x * x)).sum::<BigInt>() * &n;
            let norms = norms_sq.sqrt();
            // n + n·dot/norms = 0  ⇔  n·norms + n·dot = 0
            (&n * &norms + &n * dot).is_zero()
        })
        .map(|(i, _)| i)
        .collect())
}

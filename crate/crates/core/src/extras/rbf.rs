use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::ExtrasError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Kernel {
    /// `exp(-r²/σ²)`; `None` picks σ as the smallest gap between sorted
    /// centers, which keeps the kernel matrix strictly diagonally dominant.
    Gaussian { sigma: Option<f64> },
    /// `1 / sqrt(1 + (r/c)²)`
    InverseMultiquadric { c: f64 },
}

impl Kernel {
    fn eval(&self, sigma: f64, r: f64) -> f64 {
        match *self {
            Kernel::Gaussian { .. } => (-(r * r) / (sigma * sigma)).exp(),
            Kernel::InverseMultiquadric { c } => 1.0 / (1.0 + (r / c) * (r / c)).sqrt(),
        }
    }
}

/// Interpolant through points of R^d, parametrised by `t = 1/‖x‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct RbfInterpolant {
    kernel: Kernel,
    sigma: f64,
    centers: Vec<f64>,
    /// One row per center, one column per output coordinate.
    coeffs: DMatrix<f64>,
}

fn min_gap(sorted: &[f64]) -> Option<f64> {
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|g| *g > 0.0)
        .min_by(f64::total_cmp)
}

pub fn rbf_interpolant(points: &[Vec<f64>], kernel: Kernel) -> Result<RbfInterpolant, ExtrasError> {
    let n = points.len();
    if n == 0 {
        return Err(ExtrasError::Empty);
    }
    let dim = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(ExtrasError::PointDimension { expected: dim, found: p.len() });
    }
    let mut centers = Vec::with_capacity(n);
    for (i, p) in points.iter().enumerate() {
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(ExtrasError::ZeroNorm(i));
        }
        centers.push(1.0 / norm);
    }
    for i in 0..n {
        for j in i + 1..n {
            if centers[i] == centers[j] {
                return Err(ExtrasError::Singular { i, j });
            }
        }
    }
    let sigma = match kernel {
        Kernel::Gaussian { sigma: Some(s) } => s,
        Kernel::Gaussian { sigma: None } => {
            let mut sorted = centers.clone();
            sorted.sort_by(f64::total_cmp);
            min_gap(&sorted).unwrap_or(1.0)
        }
        Kernel::InverseMultiquadric { .. } => 1.0,
    };
    let phi = DMatrix::from_fn(n, n, |i, k| kernel.eval(sigma, (centers[i] - centers[k]).abs()));
    let rhs = DMatrix::from_fn(n, dim, |i, c| points[i][c]);
    let lu = phi.clone().lu();
    let mut coeffs = lu.solve(&rhs).ok_or_else(|| nearest_pair(&centers))?;
    // one round of iterative refinement
    let residual = &rhs - &phi * &coeffs;
    if let Some(delta) = lu.solve(&residual) {
        coeffs += delta;
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(nearest_pair(&centers));
    }
    Ok(RbfInterpolant { kernel, sigma, centers, coeffs })
}

fn nearest_pair(centers: &[f64]) -> ExtrasError {
    let mut best = (0, 0, f64::INFINITY);
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let d = (centers[i] - centers[j]).abs();
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    ExtrasError::Singular { i: best.0, j: best.1 }
}

impl RbfInterpolant {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let weights = DVector::from_iterator(
            self.centers.len(),
            self.centers.iter().map(|c| self.kernel.eval(self.sigma, (t - c).abs())),
        );
        (self.coeffs.transpose() * weights).iter().copied().collect()
    }

    /// Value at the parameter of `x`.
    pub fn eval_point(&self, x: &[f64]) -> Vec<f64> {
        self.eval(1.0 / x.iter().map(|v| v * v).sum::<f64>().sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_residual(points: &[Vec<f64>], f: &RbfInterpolant) -> f64 {
        points
            .iter()
            .flat_map(|p| {
                f.eval_point(p)
                    .into_iter()
                    .zip(p.iter())
                    .map(|(a, b)| (a - b).abs())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn reproduces_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let points: Vec<Vec<f64>> = (0..20)
                .map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let f = rbf_interpolant(&points, Kernel::Gaussian { sigma: None }).unwrap();
            assert!(max_residual(&points, &f) <= 1e-8);
        }
        let points: Vec<Vec<f64>> = (1..6).map(|i| vec![i as f64, 0.5, 0.0]).collect();
        let g = rbf_interpolant(&points, Kernel::InverseMultiquadric { c: 0.1 }).unwrap();
        assert!(max_residual(&points, &g) <= 1e-8);
    }

    #[test]
    fn single_point() {
        let pts = vec![vec![1.0, 2.0, 2.0]];
        let f = rbf_interpolant(&pts, Kernel::Gaussian { sigma: None }).unwrap();
        assert_eq!(f.eval_point(&pts[0]), pts[0]);
    }

    #[test]
    fn same_norm_is_singular() {
        let pts = vec![vec![1.0, 0.0, 0.0], vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        assert_eq!(
            rbf_interpolant(&pts, Kernel::Gaussian { sigma: None }),
            Err(ExtrasError::Singular { i: 0, j: 2 })
        );
        assert_eq!(
            rbf_interpolant(&[vec![0.0, 0.0]], Kernel::Gaussian { sigma: None }),
            Err(ExtrasError::ZeroNorm(0))
        );
    }
}

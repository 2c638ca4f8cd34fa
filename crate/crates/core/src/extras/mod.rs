//! Side constructions: sphere sampling, bead sorting, radial interpolation.

mod beads;
mod rbf;
mod sphere;

pub use beads::{bead_sort, BeadMatrix};
pub use rbf::{rbf_interpolant, Kernel, RbfInterpolant};
pub use sphere::{
    concentration_stats, sibuya_points, sibuya_sample, sibuya_sphere, ConcentrationStats,
    SpherePoint, HISTOGRAM_BINS,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExtrasError {
    #[error("dimension must be even and at least 2, got {0}")]
    Dimension(usize),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("value {value} exceeds bead width {width}")]
    Width { value: u64, width: u64 },
    #[error("no points")]
    Empty,
    #[error("point has dimension {found}, expected {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("point {0} has zero norm")]
    ZeroNorm(usize),
    #[error("interpolation matrix is singular: points {i} and {j} share a parameter")]
    Singular { i: usize, j: usize },
}

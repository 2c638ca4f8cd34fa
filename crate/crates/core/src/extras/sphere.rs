use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ExtrasError;

/// Uniform point on the unit sphere in an even dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

fn check_dim(n: usize) -> Result<(), ExtrasError> {
    if n < 2 || n % 2 == 1 {
        return Err(ExtrasError::Dimension(n));
    }
    Ok(())
}

/// Draws with an existing generator: sorted uniform cut points split 1 into
/// `n/2` spacings, each spacing gives the squared radius of one coordinate
/// pair and a uniform angle places it on its circle.
pub fn sibuya_sample<R: Rng>(n: usize, rng: &mut R) -> Result<SpherePoint, ExtrasError> {
    check_dim(n)?;
    let m = n / 2;
    let mut cuts: Vec<f64> = (0..m - 1).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.insert(0, 0.0);
    cuts.push(1.0);
    let mut coords = Vec::with_capacity(n);
    for w in cuts.windows(2) {
        let r = (w[1] - w[0]).sqrt();
        let theta = TAU * rng.gen::<f64>();
        coords.push(r * theta.cos());
        coords.push(r * theta.sin());
    }
    Ok(SpherePoint { coords })
}

pub fn sibuya_sphere(n: usize, seed: u64) -> Result<SpherePoint, ExtrasError> {
    sibuya_sample(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `samples` points from one seeded stream.
pub fn sibuya_points(n: usize, samples: usize, seed: u64) -> Result<Vec<SpherePoint>, ExtrasError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| sibuya_sample(n, &mut rng)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationStats {
    pub n: usize,
    pub samples: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    /// Counts over `HISTOGRAM_BINS` equal bins of `[0, 2]`.
    pub histogram: Vec<usize>,
}

pub const HISTOGRAM_BINS: usize = 20;

/// Statistics of all pairwise ℓ2 distances among `samples` sphere points.
pub fn concentration_stats(
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<ConcentrationStats, ExtrasError> {
    if samples < 2 {
        return Err(ExtrasError::TooFewSamples(samples));
    }
    let pts = sibuya_points(n, samples, seed)?;
    let mut dists = Vec::with_capacity(samples * (samples - 1) / 2);
    for i in 0..samples {
        for j in i + 1..samples {
            let d: f64 = pts[i]
                .coords
                .iter()
                .zip(&pts[j].coords)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            dists.push(d);
        }
    }
    let count = dists.len() as f64;
    let mean = dists.iter().sum::<f64>() / count;
    let var = dists.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / count;
    let mut histogram = vec![0; HISTOGRAM_BINS];
    for d in &dists {
        let bin = ((d / 2.0) * HISTOGRAM_BINS as f64) as usize;
        histogram[bin.min(HISTOGRAM_BINS - 1)] += 1;
    }
    Ok(ConcentrationStats {
        n,
        samples,
        mean,
        std: var.sqrt(),
        histogram,
    })
}

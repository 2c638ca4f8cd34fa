use serde::{Deserialize, Serialize};

use super::ExtrasError;

/// Row `i` holds `v_i` beads packed to the left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeadMatrix {
    width: usize,
    rows: Vec<Vec<bool>>,
}

impl BeadMatrix {
    pub fn from_values(values: &[u64], width: u64) -> Result<Self, ExtrasError> {
        if let Some(&v) = values.iter().find(|&&v| v > width) {
            return Err(ExtrasError::Width { value: v, width });
        }
        let w = width as usize;
        Ok(Self {
            width: w,
            rows: values
                .iter()
                .map(|&v| (0..w).map(|c| (c as u64) < v).collect())
                .collect(),
        })
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    /// Beads per column.
    pub fn column_counts(&self) -> Vec<usize> {
        (0..self.width)
            .map(|c| self.rows.iter().filter(|r| r[c]).count())
            .collect()
    }

    /// Row values, assuming every row is a prefix of beads.
    pub fn values(&self) -> Vec<u64> {
        self.rows
            .iter()
            .map(|r| r.iter().take_while(|&&b| b).count() as u64)
            .collect()
    }

    pub fn rows_are_prefixes(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.windows(2).all(|w| w[0] || !w[1]))
    }

    /// One step of the swap rule: every vertical pair `(1, 0)` becomes
    /// `(0, 1)`. Pairs that qualify never overlap, so all swaps apply at
    /// once. Returns whether anything moved.
    pub fn gravity_step(&mut self) -> bool {
        let mut moved = false;
        for c in 0..self.width {
            let mut j = 0;
            while j + 1 < self.rows.len() {
                if self.rows[j][c] && !self.rows[j + 1][c] {
                    self.rows[j][c] = false;
                    self.rows[j + 1][c] = true;
                    moved = true;
                    j += 2;
                } else {
                    j += 1;
                }
            }
        }
        moved
    }

    /// Repeats [`gravity_step`](Self::gravity_step) until nothing moves.
    pub fn settle_by_swaps(&mut self) -> usize {
        let mut steps = 0;
        while self.gravity_step() {
            steps += 1;
        }
        steps
    }

    /// Fixpoint of the swap rule, built directly: each column's beads are
    /// restacked at the highest row indices.
    pub fn settle(&mut self) {
        let n = self.rows.len();
        for (c, count) in self.column_counts().into_iter().enumerate() {
            for (i, row) in self.rows.iter_mut().enumerate() {
                row[c] = i >= n - count;
            }
        }
    }
}

/// Sorts ascending by letting beads fall.
pub fn bead_sort(values: &[u64], width: u64) -> Result<Vec<u64>, ExtrasError> {
    let mut m = BeadMatrix::from_values(values, width)?;
    m.settle();
    Ok(m.values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples() {
        let mut m = BeadMatrix::from_values(&[3, 1, 2], 3).unwrap();
        assert_eq!(m.column_counts(), vec![3, 2, 1]);
        m.settle();
        assert_eq!(m.values(), vec![1, 2, 3]);
        assert_eq!(bead_sort(&[1, 2, 3], 3).unwrap(), vec![1, 2, 3]);
        assert_eq!(bead_sort(&[4, 4, 4], 5).unwrap(), vec![4, 4, 4]);
        assert_eq!(bead_sort(&[], 5).unwrap(), Vec::<u64>::new());
        assert_eq!(
            bead_sort(&[1, 7], 5),
            Err(ExtrasError::Width { value: 7, width: 5 })
        );
    }

    #[test]
    fn swaps_reach_the_restacked_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let n = rng.gen_range(1..10);
            let values: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
            let mut by_swaps = BeadMatrix::from_values(&values, 6).unwrap();
            let counts = by_swaps.column_counts();
            while by_swaps.gravity_step() {
                assert_eq!(by_swaps.column_counts(), counts);
            }
            let mut direct = BeadMatrix::from_values(&values, 6).unwrap();
            direct.settle();
            assert_eq!(by_swaps, direct);
            assert!(direct.rows_are_prefixes());
        }
    }
}

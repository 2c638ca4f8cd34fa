use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::OrderError;
use crate::numeric::{enumerate_sums, index_to_exponents, FixedLog, PrimeBasis};

/// Longest code length a rank oracle accepts.
pub const MAX_RANK_LENGTH: usize = 30;

/// Default cap on the number of sums an oracle may materialize.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Keep every sum; each rank query scans them all.
    Enumerate,
    /// Split the basis in two, sort both halves, count pairs per query.
    MeetInTheMiddle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probe {
    Finite(FixedLog),
    /// Above every code.
    Infinity,
}

/// A code materialized at a given rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selected {
    pub value: FixedLog,
    pub preimage: Vec<u32>,
    /// Rank evaluations spent finding it.
    pub rank_calls: u64,
}

/// A finite, totally preordered code family that can be read by rank.
pub trait RankedDomain {
    fn size(&self) -> u64;
    fn select(&self, rank: u64) -> Result<Selected, OrderError>;
}

#[derive(Clone, Debug)]
enum Table {
    Flat(Vec<i128>),
    Split {
        low_len: usize,
        /// (sum, index within the low half), sorted
        low: Vec<(i128, u64)>,
        high: Vec<(i128, u64)>,
    },
}

/// Counts codes of `{0..k}^n` over a prime basis lying below a value.
#[derive(Clone, Debug)]
pub struct RankOracle {
    basis: Arc<PrimeBasis>,
    n: usize,
    k: u32,
    digits: u32,
    strategy: Strategy,
    logs: Vec<i128>,
    size: u64,
    table: Table,
}

fn sorted_half(logs: &[i128], k: u32) -> Vec<(i128, u64)> {
    let mut v: Vec<(i128, u64)> = enumerate_sums(logs, k)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i as u64))
        .collect();
    v.sort_unstable();
    v
}

impl RankOracle {
    pub fn new(
        basis: Arc<PrimeBasis>,
        n: usize,
        k: u32,
        digits: u32,
        strategy: Strategy,
        budget: u64,
    ) -> Result<Self, OrderError> {
        if n == 0 || k == 0 {
            return Err(OrderError::EmptyDomain);
        }
        if n > MAX_RANK_LENGTH {
            return Err(OrderError::Budget(format!(
                "code length {n} above {MAX_RANK_LENGTH}"
            )));
        }
        let radix = k as u64 + 1;
        let size = radix
            .checked_pow(n as u32)
            .ok_or_else(|| OrderError::Budget(format!("({radix})^{n} codes")))?;
        let materialized = match strategy {
            Strategy::Enumerate => size,
            Strategy::MeetInTheMiddle => radix.pow(n.div_ceil(2) as u32),
        };
        if materialized > budget {
            return Err(OrderError::Budget(format!(
                "{materialized} sums exceed the budget of {budget}"
            )));
        }
        let logs = basis.log_mantissas(n, digits)?;
        let table = match strategy {
            Strategy::Enumerate => Table::Flat(enumerate_sums(&logs, k)),
            Strategy::MeetInTheMiddle => {
                let low_len = n / 2;
                Table::Split {
                    low_len,
                    low: sorted_half(&logs[..low_len], k),
                    high: sorted_half(&logs[low_len..], k),
                }
            }
        };
        Ok(Self {
            basis,
            n,
            k,
            digits,
            strategy,
            logs,
            size,
            table,
        })
    }

    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn max_exponent(&self) -> u32 {
        self.k
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Number of codes with value strictly below the probe.
    pub fn rank(&self, probe: &Probe) -> u64 {
        match probe {
            Probe::Infinity => self.size,
            Probe::Finite(v) => {
                // integer s satisfies s < v·10^D iff s < ⌈v·10^D⌉
                match v.ceil_mantissa(self.digits).to_i128() {
                    Some(t) => self.count_below(t),
                    None if v.is_positive() => self.size,
                    None => 0,
                }
            }
        }
    }

    fn count_below(&self, t: i128) -> u64 {
        match &self.table {
            Table::Flat(sums) => sums.iter().filter(|&&s| s < t).count() as u64,
            Table::Split { low, high, .. } => {
                // as h falls, t − h rises, so the cut in `low` only moves right
                let mut j = 0usize;
                let mut total = 0u64;
                for &(h, _) in high.iter().rev() {
                    while j < low.len() && low[j].0 < t - h {
                        j += 1;
                    }
                    total += j as u64;
                }
                total
            }
        }
    }

    /// Mantissa of the largest code value.
    fn max_sum(&self) -> i128 {
        self.logs.iter().sum::<i128>() * self.k as i128
    }

    /// Full-domain indices of every code with sum `t`.
    fn indices_with_sum(&self, t: i128) -> Vec<u64> {
        match &self.table {
            Table::Flat(sums) => sums
                .iter()
                .enumerate()
                .filter(|(_, &s)| s == t)
                .map(|(i, _)| i as u64)
                .collect(),
            Table::Split {
                low_len,
                low,
                high,
            } => {
                let stride = (self.k as u64 + 1).pow(*low_len as u32);
                let mut out = Vec::new();
                for &(h, hi) in high {
                    let want = t - h;
                    let start = low.partition_point(|&(s, _)| s < want);
                    for &(s, li) in &low[start..] {
                        if s != want {
                            break;
                        }
                        out.push(li + hi * stride);
                    }
                }
                out
            }
        }
    }

    /// Value of the code with mixed-radix index `index` (first prime least
    /// significant).
    pub fn value_at_index(&self, index: u64) -> FixedLog {
        let a = index_to_exponents(index, self.n, self.k);
        let s: i128 = a.iter().zip(&self.logs).map(|(&x, &l)| x as i128 * l).sum();
        FixedLog::from_i128(s, self.digits)
    }

    pub fn exponents_at_index(&self, index: u64) -> Vec<u32> {
        index_to_exponents(index, self.n, self.k)
    }
}

impl RankedDomain for RankOracle {
    fn size(&self) -> u64 {
        self.size
    }

    /// Binary search over value space for the smallest sum `t` with more
    /// than `rank` codes at or below it; ties resolved lexicographically.
    fn select(&self, rank: u64) -> Result<Selected, OrderError> {
        if rank >= self.size {
            return Err(OrderError::RankOutOfRange {
                rank,
                size: self.size,
            });
        }
        let mut calls = 0u64;
        let (mut lo, mut hi) = (0i128, self.max_sum());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            calls += 1;
            if self.count_below(mid + 1) > rank {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        calls += 1;
        let first = self.count_below(lo);
        let mut tied: Vec<Vec<u32>> = self
            .indices_with_sum(lo)
            .into_iter()
            .map(|i| self.exponents_at_index(i))
            .collect();
        tied.sort_unstable();
        let offset = rank.checked_sub(first).ok_or_else(|| {
            OrderError::CorruptOracle(format!("rank {rank} below the {first} codes under its value"))
        })?;
        let preimage = tied.into_iter().nth(offset as usize).ok_or_else(|| {
            OrderError::CorruptOracle(format!("no code at rank {rank} with value mantissa {lo}"))
        })?;
        Ok(Selected {
            value: FixedLog::from_i128(lo, self.digits),
            preimage,
            rank_calls: calls,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub preimage: Option<Vec<u32>>,
    pub rank: Option<u64>,
    pub comparisons: u64,
    pub rank_calls: u64,
}

/// Binary search on rank space, reading codes back by rank rather than from
/// a sorted copy. Fails when the values read are not monotone in rank.
pub fn order_search<D: RankedDomain>(
    target: &FixedLog,
    domain: &D,
) -> Result<SearchOutcome, OrderError> {
    let mut out = SearchOutcome {
        preimage: None,
        rank: None,
        comparisons: 0,
        rank_calls: 0,
    };
    let (mut lo, mut hi) = (0u64, domain.size());
    let mut below: Option<FixedLog> = None;
    let mut above: Option<FixedLog> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let s = domain.select(mid)?;
        out.rank_calls += s.rank_calls;
        let out_of_order = below.as_ref().is_some_and(|b| &s.value < b)
            || above.as_ref().is_some_and(|a| &s.value > a);
        if out_of_order {
            return Err(OrderError::CorruptOracle(format!(
                "value {} at rank {mid} breaks monotonicity",
                s.value
            )));
        }
        out.comparisons += 1;
        match s.value.cmp(target) {
            Ordering::Less => {
                lo = mid + 1;
                below = Some(s.value);
            }
            Ordering::Greater => {
                hi = mid;
                above = Some(s.value);
            }
            Ordering::Equal => {
                out.preimage = Some(s.preimage);
                out.rank = Some(mid);
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Scans codes in index order until one equals the target.
pub fn linear_scan(target: &FixedLog, oracle: &RankOracle) -> (Option<Vec<u32>>, u64) {
    for i in 0..oracle.size {
        if &oracle.value_at_index(i) == target {
            return (Some(oracle.exponents_at_index(i)), i + 1);
        }
    }
    (None, oracle.size)
}

/// Sorts every code, then binary searches. Returns the comparisons of both
/// phases.
pub fn sort_then_search(target: &FixedLog, oracle: &RankOracle) -> (Option<Vec<u32>>, u64) {
    let mut all: Vec<(FixedLog, u64)> = (0..oracle.size)
        .map(|i| (oracle.value_at_index(i), i))
        .collect();
    let mut comparisons = 0u64;
    all.sort_by(|a, b| {
        comparisons += 1;
        a.0.cmp(&b.0)
    });
    let (mut lo, mut hi) = (0usize, all.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        comparisons += 1;
        match all[mid].0.cmp(target) {
            Ordering::Less => lo = mid + 1,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return (Some(oracle.exponents_at_index(all[mid].1)), comparisons),
        }
    }
    (None, comparisons)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::l_encode;
    use crate::numeric::{gen_primes, PrimeSequence};

    fn oracle(n: usize, strategy: Strategy) -> RankOracle {
        let b = Arc::new(gen_primes(n, PrimeSequence::First, 6).unwrap());
        RankOracle::new(b, n, 1, 6, strategy, DEFAULT_BUDGET).unwrap()
    }

    fn fl(s: &str) -> FixedLog {
        s.parse().unwrap()
    }

    #[test]
    fn rank_examples() {
        for st in [Strategy::Enumerate, Strategy::MeetInTheMiddle] {
            let o = oracle(3, st);
            assert_eq!(o.rank(&Probe::Finite(fl("0.0"))), 0);
            assert_eq!(o.rank(&Probe::Infinity), 8);
            let three = l_encode(&[0, 1, 0], &Arc::new(o.basis().clone()), 6).unwrap();
            assert_eq!(o.rank(&Probe::Finite(three.sum().clone())), 2);
        }
    }

    #[test]
    fn select_inverts_rank() {
        for st in [Strategy::Enumerate, Strategy::MeetInTheMiddle] {
            let o = oracle(6, st);
            for r in 0..o.size() {
                let s = o.select(r).unwrap();
                assert_eq!(o.rank(&Probe::Finite(s.value)), r);
            }
        }
    }

    #[test]
    fn search_examples() {
        let o = oracle(3, Strategy::MeetInTheMiddle);
        let t = l_encode(&[1, 1, 0], &Arc::new(o.basis().clone()), 6).unwrap();
        let got = order_search(t.sum(), &o).unwrap();
        assert_eq!(got.preimage, Some(vec![1, 1, 0]));
        assert!(got.comparisons <= 5);
        let zero = order_search(&fl("0.0"), &o).unwrap();
        assert_eq!(zero.preimage, Some(vec![0, 0, 0]));
        let absent = order_search(&fl("0.5"), &o).unwrap();
        assert_eq!(absent.preimage, None);
    }

    #[test]
    fn baselines_agree() {
        let o = oracle(4, Strategy::Enumerate);
        for i in 0..o.size() {
            let t = o.value_at_index(i);
            let want = Some(o.exponents_at_index(i));
            assert_eq!(order_search(&t, &o).unwrap().preimage, want);
            assert_eq!(linear_scan(&t, &o).0, want);
            assert_eq!(sort_then_search(&t, &o).0, want);
        }
    }

    struct Shuffled(RankOracle);

    impl RankedDomain for Shuffled {
        fn size(&self) -> u64 {
            self.0.size()
        }
        fn select(&self, rank: u64) -> Result<Selected, OrderError> {
            // reversed order
            self.0.select(self.0.size() - 1 - rank)
        }
    }

    #[test]
    fn corrupt_oracle_detected() {
        let o = Shuffled(oracle(4, Strategy::Enumerate));
        let target = o.0.value_at_index(3);
        assert!(matches!(order_search(&target, &o), Err(OrderError::CorruptOracle(_))));
    }

    #[test]
    fn budget_limits() {
        let b = Arc::new(gen_primes(31, PrimeSequence::First, 6).unwrap());
        assert!(matches!(
            RankOracle::new(Arc::clone(&b), 31, 1, 6, Strategy::MeetInTheMiddle, DEFAULT_BUDGET),
            Err(OrderError::Budget(_))
        ));
        assert!(matches!(
            RankOracle::new(b, 24, 1, 6, Strategy::Enumerate, 1 << 20),
            Err(OrderError::Budget(_))
        ));
    }
}

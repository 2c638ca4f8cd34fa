use std::cmp::Ordering;
use std::fmt::Write as _;
use std::ops::Sub;

use serde::{Deserialize, Serialize};

use crate::codes::LCode;
use crate::numeric::FixedLog;

/// What a curve entry was generated from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Preimage {
    Exponents(Vec<u32>),
    Index(usize),
}

impl Preimage {
    /// `1;0;1` for exponent vectors, the bare number for indices.
    pub fn to_field(&self) -> String {
        match self {
            Self::Exponents(a) => a
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(";"),
            Self::Index(i) => i.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveEntry<V> {
    pub rank: usize,
    pub value: V,
    pub preimage: Preimage,
}

/// Values sorted ascending with their 0-based ranks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderCurve<V> {
    entries: Vec<CurveEntry<V>>,
}

impl<V> OrderCurve<V> {
    pub fn entries(&self) -> &[CurveEntry<V>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = &V> {
        self.entries.iter().map(|e| &e.value)
    }

    pub fn preimages(&self) -> impl Iterator<Item = &Preimage> {
        self.entries.iter().map(|e| &e.preimage)
    }
}

/// Stable sort by value; equal values are ordered by preimage.
/// Incomparable values (NaN) sort as equal.
pub fn order_curve<V: PartialOrd>(items: Vec<(V, Preimage)>) -> OrderCurve<V> {
    let mut items = items;
    items.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.1.cmp(&b.1))
    });
    OrderCurve {
        entries: items
            .into_iter()
            .enumerate()
            .map(|(rank, (value, preimage))| CurveEntry {
                rank,
                value,
                preimage,
            })
            .collect(),
    }
}

/// Curve of plain values, preimages being their input positions.
pub fn order_curve_of<V: PartialOrd>(values: Vec<V>) -> OrderCurve<V> {
    order_curve(
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, Preimage::Index(i)))
            .collect(),
    )
}

pub fn order_curve_lcodes(codes: &[LCode]) -> OrderCurve<FixedLog> {
    order_curve(
        codes
            .iter()
            .map(|c| (c.sum().clone(), Preimage::Exponents(c.exponents().to_vec())))
            .collect(),
    )
}

impl OrderCurve<FixedLog> {
    /// `rank,value_mantissa,digits,preimage` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,value_mantissa,digits,preimage\n");
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{}",
                e.rank,
                e.value.mantissa(),
                e.value.digits(),
                e.preimage.to_field()
            )
            .unwrap();
        }
        out
    }
}

/// Successive differences `v[i+1] − v[i]`.
pub fn finite_differences<V>(curve: &OrderCurve<V>) -> Vec<V>
where
    for<'a> &'a V: Sub<&'a V, Output = V>,
{
    curve
        .entries
        .windows(2)
        .map(|w| &w[1].value - &w[0].value)
        .collect()
}

/// True when all consecutive gaps are equal. Curves shorter than two
/// entries are not compact.
pub fn is_compact_order<V>(curve: &OrderCurve<V>) -> bool
where
    V: PartialEq,
    for<'a> &'a V: Sub<&'a V, Output = V>,
{
    let d = finite_differences(curve);
    !d.is_empty() && d.windows(2).all(|w| w[0] == w[1])
}

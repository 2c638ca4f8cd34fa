use super::{EquationError, Interval};
use crate::scalar::Scalar;
use crate::spaces::{lp_distance, Metric};

/// `sup_{x∈X} inf_{q∈Q} d(x, q)`.
pub fn directed_hausdorff<T: Scalar>(
    x: &[Vec<T>],
    q: &[Vec<T>],
    metric: &Metric<T>,
) -> Result<T, EquationError> {
    if x.is_empty() || q.is_empty() {
        return Err(EquationError::EmptySet);
    }
    let mut sup = T::zero();
    for a in x {
        let mut inf: Option<T> = None;
        for b in q {
            let d = lp_distance(metric, a, b)?;
            inf = Some(match inf {
                Some(m) => m.min_of(d),
                None => d,
            });
        }
        sup = sup.max_of(inf.expect("q nonempty"));
    }
    Ok(sup)
}

pub fn hausdorff<T: Scalar>(
    x: &[Vec<T>],
    q: &[Vec<T>],
    metric: &Metric<T>,
) -> Result<T, EquationError> {
    Ok(directed_hausdorff(x, q, metric)?.max_of(directed_hausdorff(q, x, metric)?))
}

/// Indices of the sets `X_i` with `H(X_i, Q) + k = 0` for some `k ∈ K`.
pub fn hausdorff_eq<T: Scalar>(
    family: &[Vec<Vec<T>>],
    q: &[Vec<T>],
    metric: &Metric<T>,
    offsets: &Interval<T>,
) -> Result<Vec<usize>, EquationError> {
    let want = offsets.negated();
    let mut out = Vec::new();
    for (i, x) in family.iter().enumerate() {
        if want.contains(&hausdorff(x, q, metric)?) {
            out.push(i);
        }
    }
    Ok(out)
}

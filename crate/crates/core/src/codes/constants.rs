use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::CodeError;
use crate::numeric::{pow10, FixedLog};

/// Scaling constants with `c_i · v_i` strictly increasing in `i` and close to 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants {
    pub constants: Vec<FixedLog>,
    /// `c_i · v_i`, exact.
    pub products: Vec<FixedLog>,
    /// ε = 10^(−epsilon_exponent).
    pub epsilon_exponent: u32,
    /// Largest mantissa length (decimal digits) among the constants.
    pub max_digits: usize,
}

impl Constants {
    pub fn epsilon(&self) -> FixedLog {
        power_of_ten_neg(self.epsilon_exponent)
    }
}

/// 10^(−e) as a fixed-point value.
fn power_of_ten_neg(e: u32) -> FixedLog {
    if e == 0 {
        FixedLog::new(10, 1).expect("positive digits")
    } else {
        FixedLog::new(1, e).expect("positive digits")
    }
}

/// Constants `c_i = ⌈v_i⁻¹ (1 + i·ε)⌉` at `digits` fractional digits
/// (`i` counted from 0), with ε the smallest power of ten for which the
/// products `c_i · v_i` are strictly increasing and all lie in `[1, 1 + m·ε]`.
///
/// Rounding up keeps every product at or above 1.
pub fn derive_constants(values: &[FixedLog], digits: u32) -> Result<Constants, CodeError> {
    if digits == 0 {
        return Err(crate::numeric::NumericError::ZeroDigits.into());
    }
    if values.iter().any(|v| !v.is_positive()) {
        return Err(CodeError::NonPositiveValue);
    }
    let m = values.len();
    if m == 0 {
        return Ok(Constants {
            constants: Vec::new(),
            products: Vec::new(),
            epsilon_exponent: digits,
            max_digits: 0,
        });
    }
    // Below 10^-(digits + value digits) the staircase is finer than the
    // resolution of any product.
    let finest = digits + values.iter().map(FixedLog::digits).max().unwrap_or(1);
    for e in (0..=finest).rev() {
        if let Some(c) = try_epsilon(values, digits, e) {
            return Ok(c);
        }
    }
    Err(CodeError::ConstantsInfeasible { digits })
}

fn try_epsilon(values: &[FixedLog], digits: u32, e: u32) -> Option<Constants> {
    let m = values.len();
    let scale_e = pow10(e);
    let scale_d = pow10(digits);
    let mut constants = Vec::with_capacity(m);
    let mut products: Vec<FixedLog> = Vec::with_capacity(m);
    for (i, v) in values.iter().enumerate() {
        // c = ⌈(10^e + i)·10^D·10^dv / (10^e · mv)⌉ / 10^D
        let num = (&scale_e + BigInt::from(i)) * &scale_d * pow10(v.digits());
        let den = &scale_e * v.mantissa();
        let c = FixedLog::new(num.div_ceil(&den), digits).ok()?;
        let p = &c * v;
        if let Some(prev) = products.last() {
            if &p <= prev {
                return None;
            }
        }
        constants.push(c);
        products.push(p);
    }
    // products ≤ 1 + m·ε
    let upper = &crate::numeric::one_at(1) + &(&power_of_ten_neg(e) * m as u32);
    if products.last()? > &upper {
        return None;
    }
    let max_digits = constants.iter().map(FixedLog::stored_digits).max().unwrap_or(0);
    Some(Constants {
        constants,
        products,
        epsilon_exponent: e,
        max_digits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{log_floor_u64, one_at};

    fn fl(s: &str) -> FixedLog {
        s.parse().unwrap()
    }

    #[test]
    fn unit_values() {
        let v = vec![fl("1.000"), fl("1.000"), fl("1.000")];
        let c = derive_constants(&v, 3).unwrap();
        let shown: Vec<String> = c.constants.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, ["1.000", "1.001", "1.002"]);
        assert_eq!(c.epsilon_exponent, 3);
        assert!(c.products.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_value() {
        let c = derive_constants(&[fl("2.000")], 3).unwrap();
        assert_eq!(c.constants[0].to_string(), "0.500");
        assert_eq!(c.products[0], one_at(3));
        assert!(c.products[0] <= &one_at(3) + &c.epsilon());
    }

    #[test]
    fn log_values_keep_index_order() {
        let v: Vec<FixedLog> = [3u64, 5, 9, 17]
            .iter()
            .map(|&x| log_floor_u64(x, 6).unwrap())
            .collect();
        let c = derive_constants(&v, 6).unwrap();
        let mut ranked: Vec<usize> = (0..4).collect();
        ranked.sort_by(|&a, &b| c.products[a].cmp(&c.products[b]));
        assert_eq!(ranked, vec![0, 1, 2, 3]);
        assert!(c.products.iter().all(|p| p >= &one_at(6)));
    }

    #[test]
    fn decreasing_values_still_increase_after_scaling() {
        let v = vec![fl("9.5"), fl("3.25"), fl("0.125")];
        let c = derive_constants(&v, 4).unwrap();
        assert!(c.products.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn epsilon_value() {
        let c = derive_constants(&[fl("1.0"), fl("1.0")], 2).unwrap();
        assert_eq!(c.epsilon(), fl("0.01"));
    }

    #[test]
    fn rejects_non_positive() {
        assert_eq!(
            derive_constants(&[fl("1.0"), fl("0.0")], 3),
            Err(CodeError::NonPositiveValue)
        );
    }
}

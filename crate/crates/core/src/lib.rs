//! Prime-power codes, their logarithmic order, and finite distance spaces.
//!
//! Codes and order statistics use exact fixed-point logarithms
//! ([`numeric::FixedLog`]). The geometric modules are generic over
//! [`Scalar`]; the aliases below name the two common instantiations.

pub mod audit;
pub mod codes;
pub mod equations;
pub mod extras;
pub mod mappings;
pub mod numeric;
pub mod order;
pub mod scalar;
pub mod spaces;
pub mod transforms;

use num_rational::BigRational;

pub use scalar::Scalar;

pub type Space = spaces::FiniteSpace<f64>;
pub type ExactSpace = spaces::FiniteSpace<BigRational>;
pub type Matrix = spaces::DistanceMatrix<f64>;
pub type ExactMatrix = spaces::DistanceMatrix<BigRational>;
pub type Equation = equations::Equation<f64>;
pub type ExactEquation = equations::Equation<BigRational>;
pub type Arrangement = equations::Arrangement<f64>;
pub type ExactArrangement = equations::Arrangement<BigRational>;

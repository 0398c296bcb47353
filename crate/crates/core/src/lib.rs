//! Arbitrary-precision Hurwitz zeta machinery: power-series expansions in the
//! shift parameter, closed forms at negative integers, rapidly convergent
//! series for odd zeta values and Dirichlet L-values, and independent
//! reference evaluators used to validate all of them.

pub mod bernoulli;
pub mod characters;
pub mod constants;
pub mod error;
pub mod identities;
pub mod jet;
pub mod oracle;
pub mod precision;
pub mod rapid;
pub mod render;
pub mod scalar;
pub mod series;

pub use error::{Result, ZetaError};
pub use precision::PrecisionContext;
pub use scalar::ComplexScalar;

//! Exact toric geometry: fans, divisors, positivity and sheaf cohomology
//! of line bundles on smooth complete toric varieties, with the blow-ups
//! of P^n at torus-fixed points as the main worked family.

pub mod cohomology;
pub mod divisor;
pub mod error;
pub mod json;
pub mod lattice_fan;
pub mod linalg;
pub mod positivity;

pub use divisor::{BlowupParams, ToricDivisor};
pub use error::{Error, Result};
pub use lattice_fan::{BlowupLayout, Character, Cone, Fan, LatticeVector};

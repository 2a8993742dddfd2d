//! Deligne–Ribet monoids, ray class groups and integral Λ-model criteria
//! over ℚ and quadratic number fields, in exact arithmetic.

pub mod abelian;
pub mod arith;
pub mod deligne_ribet;
pub mod error;
pub mod field;
pub mod lambda_check;
pub mod monoid;
pub mod ray_class;
pub mod serial;

pub use error::{Error, ErrorClass, Result};

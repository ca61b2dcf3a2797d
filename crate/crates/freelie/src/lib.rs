//! Exact arithmetic in the truncated free associative algebra on `n`
//! noncommuting generators, and the group theory living inside it: the Magnus
//! embedding of the free group, Lyndon bases of the free Lie algebra, Malcev
//! coordinates with respect to arbitrary factor orders, quasi-shuffle
//! coproducts, and the p-adic open-subgroup structure.
//!
//! Coefficients are exact: arbitrary-precision integers, rationals, or
//! fixed-precision p-adics. There is no floating point anywhere.

pub mod coeff;
pub mod completions;
pub mod coproduct;
mod error;
pub mod group;
pub mod json;
pub mod lie;
pub mod series;
pub mod words;

pub use error::{Error, Result};

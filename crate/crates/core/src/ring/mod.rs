//! Exact arithmetic in the group ring `Z[Z^N] = Z[t1^±1, ..., tN^±1]`.

mod matrix;
mod parse;
mod poly;
mod truncated;

pub use matrix::LaurentMatrix;
pub use parse::parse_poly;
pub use poly::{LaurentPoly, Monomial};
pub use truncated::TruncatedPoly;

//! Euler characteristics, p-adic determinants, R-torsion and entropy for
//! algebraic `Z^N`-actions.

pub mod cli;
pub mod entropy;
pub mod error;
pub mod expansive;
pub mod padic;
pub mod padic_det;
pub mod quotients;
pub mod ring;
pub mod roots;
pub mod torsion;
mod serde_big;

pub use error::{Error, Result};

//! Capped-precision arithmetic in `Q_p`.

pub mod limit;
pub mod number;
pub mod series;

pub use limit::{limit_checker, unit_ratio_verify, ConvergenceReport, Level, UnitRatioReport};
pub use number::{Depth, PadicNumber};
pub use series::{
    component_decomposition, log_integer, log_rational, padic_exp, padic_log, teichmuller,
    ComponentDecomposition,
};

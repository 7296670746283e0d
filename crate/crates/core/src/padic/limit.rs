//! Convergence bookkeeping for renormalized p-adic sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::number::{Depth, PadicNumber};
use super::series::{component_decomposition, log_rational, padic_exp};
use crate::error::{Error, Result};

/// Number of consecutive differences pooled into one agreement window.
pub const WINDOW: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level {
    /// The renormalizing exponent `a_n` (a subgroup index in practice).
    #[serde(with = "crate::serde_big::int")]
    pub index: BigInt,
    /// `a_n^{-1} log_p χ_n`.
    pub value: PadicNumber,
    /// `log_p χ_n`.
    pub raw_log: PadicNumber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceReport {
    pub levels: Vec<Level>,
    /// `v_p(value_n - value_{n-1})` for consecutive levels.
    pub difference_valuations: Vec<Depth>,
    pub extrapolated: Option<PadicNumber>,
    pub agreement_depth: Depth,
    pub cauchy: bool,
}

impl ConvergenceReport {
    /// Applies the agreement policy to an already computed table.
    ///
    /// Consecutive differences are pooled in windows of [`WINDOW`]; the depth
    /// of a window is its minimum. The sequence counts as Cauchy when every
    /// difference vanishes exactly, or when there are at least two windows,
    /// the last three window depths never decrease, and the final depth
    /// exceeds the first. Only then is the last value published as the limit.
    pub fn from_levels(levels: Vec<Level>) -> Result<Self> {
        let mut diffs = Vec::with_capacity(levels.len().saturating_sub(1));
        for w in levels.windows(2) {
            diffs.push(w[1].value.valuation_of_difference(&w[0].value)?);
        }
        let windows: Vec<Depth> = if diffs.len() < WINDOW {
            diffs.iter().copied().min().into_iter().collect()
        } else {
            diffs
                .windows(WINDOW)
                .map(|w| *w.iter().min().expect("nonempty"))
                .collect()
        };
        let all_exact = !diffs.is_empty() && diffs.iter().all(|d| d.is_infinite());
        let growing = windows.len() >= 2 && {
            let tail = &windows[windows.len().saturating_sub(3)..];
            tail.windows(2).all(|w| w[0] <= w[1]) && windows.last() > windows.first()
        };
        let cauchy = all_exact || growing;
        let agreement_depth = match windows.last() {
            Some(d) => *d,
            None => Depth::Finite(0),
        };
        let extrapolated = if cauchy {
            levels.last().map(|l| l.value.clone())
        } else {
            None
        };
        Ok(ConvergenceReport {
            levels,
            difference_valuations: diffs,
            extrapolated,
            agreement_depth,
            cauchy,
        })
    }
}

/// One renormalized level `a^{-1} log_p χ`.
pub fn level(a: &BigInt, chi: &BigRational, p: u64, precision: u32) -> Result<Level> {
    if a.is_zero() {
        return Err(Error::ZeroInput("renormalizing exponent"));
    }
    let raw_log = log_rational(chi, p, precision)?;
    let value = raw_log.div_int(&a.abs())?;
    Ok(Level {
        index: a.clone(),
        value,
        raw_log,
    })
}

/// Table of `a_n^{-1} log_p χ_n` with the agreement policy applied.
pub fn limit_checker(pairs: &[(BigInt, BigRational)], p: u64, precision: u32) -> Result<ConvergenceReport> {
    let levels = pairs
        .par_iter()
        .map(|(a, chi)| level(a, chi, p, precision))
        .collect::<Result<Vec<_>>>()?;
    ConvergenceReport::from_levels(levels)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitRatioRow {
    #[serde(with = "crate::serde_big::int")]
    pub index: BigInt,
    /// `χ_n^{(1)k} / exp_p(k h)^{a_n}`.
    pub ratio: PadicNumber,
    /// `v_p(ratio - 1)`.
    pub valuation: Depth,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitRatioReport {
    pub k: u64,
    pub rows: Vec<UnitRatioRow>,
}

impl UnitRatioReport {
    /// Whether `v_p(ratio - 1)` strictly increases over the last `n` rows.
    pub fn strictly_increasing_tail(&self, n: usize) -> bool {
        if self.rows.len() < n {
            return false;
        }
        let tail = &self.rows[self.rows.len() - n..];
        tail.windows(2).all(|w| w[0].valuation < w[1].valuation || w[1].valuation.is_infinite())
    }
}

/// Compares the principal-unit parts `χ_n^{(1)}` with `exp_p(h)^{a_n}`.
///
/// Requires `v(k h) >= 1` (`p` odd) or `>= 2` (`p = 2`).
pub fn unit_ratio_verify(
    pairs: &[(BigInt, BigRational)],
    h: &PadicNumber,
    k: u64,
    precision: u32,
) -> Result<UnitRatioReport> {
    let p = h.prime();
    let kh = h.mul_int(&BigInt::from(k));
    let e = padic_exp(&kh)?;
    let rows = pairs
        .par_iter()
        .map(|(a, chi)| {
            let x = PadicNumber::from_rational(chi, p, precision)?;
            let one = component_decomposition(&x)?.one_unit_padic();
            let num = one.pow(k);
            let mut den = e.pow(a.abs().try_into().map_err(|_| {
                Error::ShapeMismatch("renormalizing exponent too large".into())
            })?);
            if a.is_negative() {
                den = PadicNumber::one(p, den.precision()).try_div(&den)?;
            }
            let ratio = num.try_div(&den)?;
            let valuation = ratio.valuation_of_difference(&PadicNumber::one(p, precision))?;
            Ok(UnitRatioRow {
                index: a.clone(),
                ratio,
                valuation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UnitRatioReport { k, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::series::padic_log;

    fn seq(f: impl Fn(u32) -> BigInt, n: u32) -> Vec<(BigInt, BigRational)> {
        (1..=n)
            .map(|i| (BigInt::from(i), BigRational::from_integer(f(i))))
            .collect()
    }

    fn depths(r: &ConvergenceReport) -> Vec<i64> {
        r.difference_valuations.iter().map(|d| d.finite().unwrap_or(-1)).collect()
    }

    #[test]
    fn principal_sequence_converges() {
        let s = seq(|n| BigInt::from(4).pow(n) - BigInt::from(3).pow(n), 12);
        let r = limit_checker(&s, 3, 20).unwrap();
        assert_eq!(depths(&r), vec![1, 2, 2, 4, 6, 5, 7, 7, 7, 10, 11]);
        assert!(r.cauchy);
        let lim = padic_log(&PadicNumber::from_i64(4, 3, 20)).unwrap();
        let ex = r.extrapolated.unwrap();
        assert!(ex.valuation_of_difference(&lim).unwrap().at_least(11));
    }

    #[test]
    fn vanishing_sequence() {
        let s = seq(|n| BigInt::from(2).pow(n) - 1, 12);
        let r = limit_checker(&s, 2, 20).unwrap();
        assert_eq!(depths(&r), vec![1, 1, 2, 2, 6, 5, 5, 5, 11, 9, 10]);
        assert!(r.cauchy);
    }

    #[test]
    fn constant_fixed_points_do_not_converge() {
        let pairs: Vec<_> = (1..=6)
            .map(|n| (BigInt::from(3 * n), BigRational::from_integer(4.into())))
            .collect();
        let r = limit_checker(&pairs, 5, 12).unwrap();
        assert!(!r.cauchy);
        assert!(r.extrapolated.is_none());
        let r3 = limit_checker(&pairs, 3, 12).unwrap();
        assert!(!r3.cauchy);
    }

    #[test]
    fn constant_one_is_exactly_zero() {
        let s = seq(|_| BigInt::from(1), 5);
        let r = limit_checker(&s, 7, 10).unwrap();
        assert!(r.cauchy);
        assert_eq!(r.agreement_depth, Depth::Infinite);
        assert!(r.extrapolated.unwrap().is_exact_zero());
    }

    #[test]
    fn principal_units_match_exponential() {
        let s = seq(|n| BigInt::from(4).pow(n) - BigInt::from(3).pow(n), 12);
        let h = padic_log(&PadicNumber::from_i64(4, 3, 20)).unwrap();
        let r = unit_ratio_verify(&s, &h, 1, 20).unwrap();
        let v: Vec<_> = r.rows.iter().map(|x| x.valuation.finite().unwrap()).collect();
        assert_eq!(v, (1..=12).collect::<Vec<i64>>());
        assert!(r.strictly_increasing_tail(4));
        let bad = PadicNumber::from_i64(1, 3, 20);
        assert!(unit_ratio_verify(&s, &bad, 1, 20).is_err());
    }
}

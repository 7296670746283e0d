//! p-adic R-torsion and periodic-points entropy through finite quotients,
//! classical entropy, and Mahler measures.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansive::{check_finite_module_padic, check_principal_padic, Verdict};
use crate::padic::{limit_checker, ConvergenceReport, Depth, PadicNumber};
use crate::padic_det::{check_prime, logdet_matrix, LogdetRoutes};
use crate::quotients::{
    complex_from_resolution, euler_characteristic, exact_determinant, fixed_points_count,
    homology, FiniteIndexSubgroup, FreeResolution, SubgroupSequence,
};
use crate::ring::{LaurentMatrix, LaurentPoly};
use crate::roots::polynomial_roots;

/// Which count is renormalized along the sequence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    /// `χ(Δ, M)`.
    #[default]
    Euler,
    /// `|X^Δ| = |H_0(Δ, M)|`.
    FixedPoints,
}

impl std::str::FromStr for CountMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(CountMode::Euler),
            "fixed-points" => Ok(CountMode::FixedPoints),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown count {s:?}"),
            }),
        }
    }
}

/// `(Δ : index, count)` for each level of the sequence.
pub fn level_counts(f: &FreeResolution, seq: &SubgroupSequence, count: CountMode) -> Result<Vec<(BigInt, BigRational)>> {
    if f.rank() != seq.rank() {
        return Err(Error::RankMismatch {
            expected: f.rank(),
            found: seq.rank(),
        });
    }
    seq.levels()
        .par_iter()
        .map(|delta| {
            let c = match count {
                CountMode::Euler => euler_characteristic(f, delta)?,
                CountMode::FixedPoints => BigRational::from_integer(fixed_points_count(f, delta)?),
            };
            Ok((BigInt::from(delta.index()), c))
        })
        .collect()
}

/// All `r x r` minors of an `r x c` matrix.
fn maximal_minors(m: &LaurentMatrix) -> Result<Vec<LaurentPoly>> {
    let (r, c) = (m.rows(), m.cols());
    if r > c {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let rows: Vec<Vec<LaurentPoly>> = (0..r)
            .map(|i| idx.iter().map(|&j| m.get(i, j).clone()).collect())
            .collect();
        let minor = if r == 0 {
            LaurentPoly::one(m.rank())
        } else {
            LaurentMatrix::from_rows(rows)?.det_symbolic()?
        };
        if !minor.is_zero() {
            out.push(minor);
        }
        // Next combination in lexicographic order.
        let Some(pos) = (0..r).rev().find(|&i| idx[i] != i + c - r) else {
            break;
        };
        idx[pos] += 1;
        for k in pos + 1..r {
            idx[k] = idx[k - 1] + 1;
        }
    }
    Ok(out)
}

/// p-adic expansiveness of the module presented by `f`.
///
/// Principal presentations use the determinant; otherwise the maximal minors
/// of `∂_1` (which annihilate the module) are tested as Tate-algebra units.
pub fn resolution_verdict(f: &FreeResolution, p: u64) -> Result<Verdict> {
    let d1 = &f.boundaries()[0];
    if f.is_principal() {
        check_principal_padic(d1, p)
    } else {
        let minors = maximal_minors(d1)?;
        if minors.is_empty() {
            return Ok(Verdict::Inconclusive {
                witness: Some("no nonzero maximal minor of the presentation".into()),
            });
        }
        check_finite_module_padic(&minors, p)
    }
}

fn require_expansive(v: &Verdict) -> Result<()> {
    match v {
        Verdict::NotExpansive { witness } => Err(Error::NotExpansive(witness.clone())),
        Verdict::Inconclusive { witness } => Err(Error::Inconclusive(
            witness.clone().unwrap_or_else(|| "no witness".into()),
        )),
        _ => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyMode {
    Padic,
    Classical,
}

/// The p-adic limit table together with its published values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub mode: EntropyMode,
    pub count: CountMode,
    pub p: u64,
    #[serde(rename = "K")]
    pub precision: u32,
    pub verdict: Verdict,
    /// The count at each level, as exact rationals.
    #[serde(with = "crate::serde_big::rational_vec")]
    pub counts: Vec<BigRational>,
    #[serde(flatten)]
    pub convergence: ConvergenceReport,
    /// `τ_p(M)`, when the table is Cauchy.
    pub r_torsion: Option<PadicNumber>,
    /// `h_p^per`; the same number as `r_torsion`.
    pub entropy: Option<PadicNumber>,
    /// `log_p det_Γ ∂_1` for principal presentations.
    pub series_route: Option<PadicNumber>,
    /// Whether the series route agrees with the limit to the agreement depth.
    pub routes_agree: Option<bool>,
    pub mahler: Option<f64>,
    pub classical: Option<f64>,
}

impl EntropyReport {
    pub fn estimate(&self) -> Option<&PadicNumber> {
        self.entropy.as_ref()
    }
}

fn agreement_bound(depth: Depth, precision: u32) -> i64 {
    match depth {
        Depth::Finite(d) => d.min(precision as i64),
        Depth::Infinite => precision as i64,
    }
}

/// `τ_p(M)` as the renormalized limit of `log_p χ(Δ_n, M)`.
pub fn padic_r_torsion(
    f: &FreeResolution,
    p: u64,
    seq: &SubgroupSequence,
    precision: u32,
    count: CountMode,
) -> Result<EntropyReport> {
    check_prime(p)?;
    if precision == 0 {
        return Err(Error::PrecisionExhausted("precision must be at least 1".into()));
    }
    let verdict = resolution_verdict(f, p)?;
    require_expansive(&verdict)?;
    let pairs = level_counts(f, seq, count)?;
    let convergence = limit_checker(&pairs, p, precision)?;
    let estimate = convergence.extrapolated.clone();
    let series_route = if f.is_principal() {
        Some(logdet_matrix(&f.boundaries()[0], p, precision)?.determinant_route)
    } else {
        None
    };
    let routes_agree = match (&series_route, &estimate) {
        (Some(s), Some(e)) => Some(e.agrees_to(
            s,
            agreement_bound(convergence.agreement_depth, precision),
        )),
        _ => None,
    };
    Ok(EntropyReport {
        mode: EntropyMode::Padic,
        count,
        p,
        precision,
        verdict,
        counts: pairs.into_iter().map(|(_, c)| c).collect(),
        convergence,
        r_torsion: estimate.clone(),
        entropy: estimate,
        series_route,
        routes_agree,
        mahler: None,
        classical: None,
    })
}

/// `h_p^per(X)`, computed by the same limit and published under both labels.
pub fn padic_entropy(
    f: &FreeResolution,
    p: u64,
    seq: &SubgroupSequence,
    precision: u32,
    count: CountMode,
) -> Result<EntropyReport> {
    let r = padic_r_torsion(f, p, seq, precision, count)?;
    debug_assert_eq!(r.r_torsion, r.entropy);
    Ok(r)
}

/// Natural logarithm of a positive big integer.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_rational(q: &BigRational) -> f64 {
    ln_bigint(&q.numer().abs()) - ln_bigint(&q.denom().abs())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MahlerReport {
    pub value: f64,
    /// Midpoints per torus coordinate other than `t1`; 0 when exact by roots.
    pub grid: usize,
    pub error_estimate: f64,
    pub converged: bool,
}

const MAHLER_TOL: f64 = 1e-10;
const MAHLER_MAX_POINTS: usize = 1 << 20;

/// Jensen's formula for a complex polynomial given low to high.
fn jensen(coeffs: &[Complex64]) -> f64 {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|x| x.norm() <= 1e-300 + scale * 1e-15) {
        c.pop();
    }
    let lead = c.last().map_or(0.0, |x| x.norm());
    if lead == 0.0 {
        return f64::NEG_INFINITY;
    }
    lead.ln()
        + polynomial_roots(&c)
            .iter()
            .map(|z| z.norm().max(1.0).ln())
            .sum::<f64>()
}

/// `m(f) = ∫ log |f|` over the real torus.
///
/// One variable: Jensen's formula on numeric roots. Several variables:
/// Jensen in `t1`, then the midpoint rule in the others, refined by doubling
/// until successive grids agree within `1e-10`. Vanishing on the torus shows
/// up as slow refinement and `converged = false`.
pub fn mahler_measure(f: &LaurentPoly) -> Result<MahlerReport> {
    if f.is_zero() {
        return Err(Error::ZeroInput("Mahler measure of zero"));
    }
    let n = f.rank();
    let lo = f.terms().map(|(m, _)| m.0[0]).min().unwrap_or(0);
    let hi = f.terms().map(|(m, _)| m.0[0]).max().unwrap_or(0);
    let deg = (hi - lo) as usize;
    let inner = |w: &[Complex64]| -> f64 {
        let mut c = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (m, a) in f.terms() {
            let mut term = Complex64::new(a.to_f64().unwrap_or(f64::NAN), 0.0);
            for (z, &e) in w.iter().zip(&m.0[1..]) {
                term *= z.powi(e as i32);
            }
            c[(m.0[0] - lo) as usize] += term;
        }
        jensen(&c)
    };
    if n == 1 {
        return Ok(MahlerReport {
            value: inner(&[]),
            grid: 0,
            error_estimate: 0.0,
            converged: true,
        });
    }
    let dims = n - 1;
    let integrate = |g: usize| -> f64 {
        let total = g.pow(dims as u32);
        let sum: f64 = (0..total)
            .into_par_iter()
            .map(|mut k| {
                let w: Vec<Complex64> = (0..dims)
                    .map(|_| {
                        let j = k % g;
                        k /= g;
                        let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / g as f64;
                        Complex64::from_polar(1.0, theta)
                    })
                    .collect();
                inner(&w)
            })
            .sum();
        sum / total as f64
    };
    let mut g = 8;
    let mut prev = integrate(g);
    loop {
        let next_g = g * 2;
        if next_g.pow(dims as u32) > MAHLER_MAX_POINTS {
            return Ok(MahlerReport {
                value: prev,
                grid: g,
                error_estimate: f64::NAN,
                converged: false,
            });
        }
        let cur = integrate(next_g);
        let err = (cur - prev).abs();
        g = next_g;
        if err <= MAHLER_TOL || !cur.is_finite() {
            return Ok(MahlerReport {
                value: cur,
                grid: g,
                error_estimate: err,
                converged: cur.is_finite(),
            });
        }
        if (g * 2).pow(dims as u32) > MAHLER_MAX_POINTS {
            return Ok(MahlerReport {
                value: cur,
                grid: g,
                error_estimate: err,
                converged: false,
            });
        }
        prev = cur;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalRow {
    #[serde(with = "crate::serde_big::int")]
    pub index: BigInt,
    #[serde(with = "crate::serde_big::rational")]
    pub chi: BigRational,
    /// `(Γ:Δ)^{-1} log χ(Δ, M)`.
    pub value: f64,
    #[serde(with = "crate::serde_big::int")]
    pub fixed_points: BigInt,
    /// `(Γ:Δ)^{-1} log |X^Δ|`.
    pub fixed_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalReport {
    pub mode: EntropyMode,
    pub rows: Vec<ClassicalRow>,
    /// Last value of the `χ` column.
    pub estimate: f64,
    /// `|value_n - value_{n-1}|` for the last two levels.
    pub last_difference: Option<f64>,
    pub mahler: Option<f64>,
}

/// Real-log table of `(Γ:Δ_n)^{-1} log χ(Δ_n, M)` with the `|X^{Δ_n}|`
/// column alongside.
pub fn classical_entropy_periodic(f: &FreeResolution, seq: &SubgroupSequence) -> Result<ClassicalReport> {
    if f.rank() != seq.rank() {
        return Err(Error::RankMismatch {
            expected: f.rank(),
            found: seq.rank(),
        });
    }
    let rows = seq
        .levels()
        .par_iter()
        .map(|delta| {
            let h = homology(&complex_from_resolution(f, delta)?);
            let chi = h.euler_characteristic()?;
            let fixed = h.degrees[0].order.clone();
            let idx = delta.index() as f64;
            Ok(ClassicalRow {
                index: BigInt::from(delta.index()),
                value: ln_rational(&chi) / idx,
                fixed_value: ln_bigint(&fixed) / idx,
                chi,
                fixed_points: fixed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let estimate = rows.last().map_or(f64::NAN, |r| r.value);
    let last_difference = (rows.len() >= 2).then(|| (rows[rows.len() - 1].value - rows[rows.len() - 2].value).abs());
    Ok(ClassicalReport {
        mode: EntropyMode::Classical,
        rows,
        estimate,
        last_difference,
        mahler: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorRow {
    pub poly: String,
    /// `|Z[Γ/Δ] / f|`.
    #[serde(with = "crate::serde_big::int")]
    pub order: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorReport {
    pub index: u64,
    pub factors: Vec<FactorRow>,
    #[serde(with = "crate::serde_big::int")]
    pub product: BigInt,
}

/// Orders `|Z[Γ/Δ]/(f_i)|` from determinants, each cross-checked against
/// the Euler characteristic of the principal resolution.
pub fn principal_factor_report(fs: &[LaurentPoly], delta: &FiniteIndexSubgroup) -> Result<FactorReport> {
    let q = delta.quotient();
    let factors = fs
        .par_iter()
        .map(|f| {
            let det = exact_determinant(&q.action_matrix(f)?)?.abs();
            let res = FreeResolution::principal(LaurentMatrix::scalar(f.clone()))?;
            let chi = euler_characteristic(&res, delta)?;
            if chi != BigRational::from_integer(det.clone()) {
                return Err(Error::RouteMismatch(format!(
                    "|det| = {det} but χ = {chi} for {f}"
                )));
            }
            Ok(FactorRow {
                poly: f.to_string(),
                order: det,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let product = factors.iter().fold(BigInt::from(1), |a, r| a * &r.order);
    Ok(FactorReport {
        index: delta.index(),
        factors,
        product,
    })
}

/// Classical and p-adic entropies of `Z[Γ]/(f)` side by side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareReport {
    pub poly: String,
    pub p: u64,
    pub mahler: MahlerReport,
    pub classical: ClassicalReport,
    pub padic: EntropyReport,
    pub logdet: LogdetRoutes,
    /// Classical entropy, as the Mahler measure.
    pub h: f64,
    /// p-adic entropy, when the limit is Cauchy.
    pub h_p: Option<PadicNumber>,
}

pub fn entropy_compare(f: &LaurentPoly, p: u64, seq: &SubgroupSequence, precision: u32) -> Result<CompareReport> {
    let res = FreeResolution::principal(LaurentMatrix::scalar(f.clone()))?;
    let mahler = mahler_measure(f)?;
    let mut classical = classical_entropy_periodic(&res, seq)?;
    classical.mahler = Some(mahler.value);
    let mut padic = padic_entropy(&res, p, seq, precision, CountMode::Euler)?;
    padic.mahler = Some(mahler.value);
    padic.classical = Some(classical.estimate);
    let logdet = logdet_matrix(&res.boundaries()[0], p, precision)?;
    Ok(CompareReport {
        poly: f.to_string(),
        p,
        h: mahler.value,
        h_p: padic.entropy.clone(),
        mahler,
        classical,
        padic,
        logdet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::padic_log;
    use crate::quotients::koszul_resolution;
    use crate::ring::parse_poly;
    use std::f64::consts::LN_2;

    fn f(s: &str) -> LaurentPoly {
        parse_poly(s, None).unwrap()
    }

    fn principal(s: &str) -> FreeResolution {
        FreeResolution::principal(LaurentMatrix::scalar(f(s))).unwrap()
    }

    #[test]
    fn principal_torsion_matches_series() {
        let seq = SubgroupSequence::diagonal(1, 1..=12).unwrap();
        let r = padic_r_torsion(&principal("4 - 3*t"), 3, &seq, 20, CountMode::Euler).unwrap();
        assert!(r.convergence.cauchy);
        assert_eq!(r.routes_agree, Some(true));
        let lim = padic_log(&PadicNumber::from_i64(4, 3, 20)).unwrap();
        assert!(r.entropy.unwrap().agrees_to(&lim, 8));
        assert_eq!(r.counts[1], BigRational::from_integer(7.into()));
    }

    #[test]
    fn vanishing_and_trivial() {
        let seq = SubgroupSequence::diagonal(1, 1..=12).unwrap();
        let r = padic_entropy(&principal("t - 2"), 2, &seq, 20, CountMode::Euler).unwrap();
        assert!(r.entropy.unwrap().valuation().at_least(8));
        assert!(r.series_route.unwrap().valuation().at_least(8));
        let r = padic_entropy(&principal("t"), 5, &seq, 10, CountMode::Euler).unwrap();
        assert!(r.entropy.unwrap().is_exact_zero());
        assert!(matches!(
            padic_entropy(&principal("t - 2"), 3, &seq, 10, CountMode::Euler),
            Err(Error::NotExpansive(_))
        ));
    }

    #[test]
    fn f4_module() {
        let k = koszul_resolution(&[LaurentPoly::constant(1, 2), f("t^2 + t + 1")]).unwrap();
        let seq = SubgroupSequence::diagonal(1, (1..=6).map(|n| 3 * n)).unwrap();
        for p in [3, 5] {
            let r = padic_entropy(&k, p, &seq, 12, CountMode::Euler).unwrap();
            assert!(r.counts.iter().all(|c| c == &BigRational::from_integer(1.into())));
            assert!(r.entropy.unwrap().is_exact_zero());
            assert_eq!(r.convergence.agreement_depth, Depth::Infinite);
        }
        let r = padic_entropy(&k, 5, &seq, 12, CountMode::FixedPoints).unwrap();
        assert!(r.counts.iter().all(|c| c == &BigRational::from_integer(4.into())));
        assert!(!r.convergence.cauchy);
        assert!(r.entropy.is_none());
        let c = classical_entropy_periodic(&k, &seq).unwrap();
        assert!(c.rows.iter().all(|r| r.value == 0.0));
        assert!((c.rows[5].fixed_value - 4f64.ln() / 18.0).abs() < 1e-15);
    }

    #[test]
    fn minors() {
        let m = LaurentMatrix::parse_rows(&[vec!["2", "t", "0"], vec!["0", "1", "t - 1"]], 1).unwrap();
        let v = maximal_minors(&m).unwrap();
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(v.len(), 3, "{s:?}");
    }

    #[test]
    fn mahler_examples() {
        assert!((mahler_measure(&f("t - 2")).unwrap().value - LN_2).abs() < 1e-12);
        assert!(mahler_measure(&f("t - 1")).unwrap().value.abs() < 1e-12);
        assert!((mahler_measure(&f("4 - 3*t")).unwrap().value - 4f64.ln()).abs() < 1e-12);
        let r = mahler_measure(&f("3 + t1 + t2")).unwrap();
        assert!(r.converged && (r.value - 3f64.ln()).abs() < 1e-9, "{r:?}");
        let r = mahler_measure(&f("t1 - 2").embed(2).unwrap()).unwrap();
        assert!(r.converged && (r.value - LN_2).abs() < 1e-12);
        assert!(mahler_measure(&LaurentPoly::zero(1)).is_err());
    }

    #[test]
    fn classical_periodic() {
        let seq = SubgroupSequence::diagonal(1, 1..=30).unwrap();
        let r = classical_entropy_periodic(&principal("t - 2"), &seq).unwrap();
        assert!((r.estimate - LN_2).abs() < 1e-6);
        assert!(r.last_difference.unwrap() < 1e-6);
        let r = classical_entropy_periodic(&principal("t - 1"), &seq);
        assert!(matches!(r, Err(Error::InfiniteHomology { .. })));
    }

    #[test]
    fn factor_orders() {
        let d5 = FiniteIndexSubgroup::diagonal(1, 5).unwrap();
        assert_eq!(principal_factor_report(&[f("t - 2")], &d5).unwrap().product, BigInt::from(31));
        let d2 = FiniteIndexSubgroup::diagonal(1, 2).unwrap();
        let r = principal_factor_report(&[f("t - 2"), f("4 - 3*t")], &d2).unwrap();
        assert_eq!(r.product, BigInt::from(21));
        assert!(matches!(
            principal_factor_report(&[f("t - 1")], &d2),
            Err(Error::InfiniteHomology { .. })
        ));
    }

    #[test]
    fn comparisons() {
        let seq = SubgroupSequence::diagonal(1, 1..=12).unwrap();
        let r = entropy_compare(&f("t - 2"), 2, &seq, 20).unwrap();
        assert!((r.h - LN_2).abs() < 1e-12);
        assert!(r.h_p.unwrap().valuation().at_least(8));
        let r = entropy_compare(&f("t"), 3, &seq, 10).unwrap();
        assert_eq!(r.h, 0.0);
        assert!(r.h_p.as_ref().unwrap().is_exact_zero());
        let j = serde_json::to_string(&r).unwrap();
        let back: CompareReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
    }
}

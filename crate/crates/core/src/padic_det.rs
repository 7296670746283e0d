//! The p-adic determinant `log_p det_Γ` for `Γ = Z^N`.
//!
//! Two routes are provided. The series route decomposes `det f` as
//! `p^ν ζ t^a g` with `g ≡ 1 mod p` and takes the constant coefficient of
//! `log g`. The limit route renormalizes `log_p` of integer determinants over
//! finite quotients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::limit::{level, ConvergenceReport};
use crate::padic::number::{inverse_mod, pow_p, split_p, PadicNumber};
use crate::padic::series::{floor_log, log_truncation, teichmuller};
use crate::quotients::{exact_determinant, SubgroupSequence};
use crate::ring::{LaurentMatrix, LaurentPoly, Monomial, TruncatedPoly};

/// `f = p^ν · ζ · t^a · g` with `ζ` a Teichmüller representative and
/// `g ≡ 1 mod p`, valid modulo `p^{ν + K}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub nu: u64,
    pub teichmuller: BigInt,
    pub monomial: Monomial,
    pub one_unit: TruncatedPoly,
}

impl UnitDecomposition {
    /// `p^ν ζ t^a g` as a truncated polynomial modulo `p^{ν + K}`.
    pub fn reconstruct(&self) -> TruncatedPoly {
        let g = &self.one_unit;
        let k = g.precision() + self.nu as u32;
        let scale = &self.teichmuller * pow_p(g.prime(), self.nu as u32);
        let lifted = TruncatedPoly::reduce(&g.lift(), g.prime(), k);
        lifted.scale(&scale).shift(&self.monomial)
    }
}

/// Truncation data for the `log(1 - h)` series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesParams {
    pub p: u64,
    /// Certified output precision.
    pub precision: u32,
    /// Lower bound on `v_p(h)`.
    pub m: u32,
    /// Last series term included.
    pub k_max: u64,
    /// Extra digits carried so that division by `k <= k_max` is exact.
    pub guard: u32,
}

impl SeriesParams {
    pub fn new(p: u64, precision: u32, m: u32) -> Self {
        let k_max = log_truncation(p, m.max(1), precision);
        SeriesParams {
            p,
            precision,
            m: m.max(1),
            k_max,
            guard: floor_log(p, k_max) + 1,
        }
    }

    pub fn working_precision(&self) -> u32 {
        self.precision + self.guard
    }
}

/// Splits `f` as `p^ν ω(c) t^a g`; fails with `NotAUnit` unless `p^{-ν} f`
/// reduces mod `p` to a single monomial.
pub fn decompose_unit(f: &LaurentPoly, p: u64, precision: u32) -> Result<UnitDecomposition> {
    if f.is_zero() {
        return Err(Error::ZeroInput("unit decomposition of zero"));
    }
    check_prime(p)?;
    let nu = f.content_valuation(p).expect("nonzero");
    let pb = BigInt::from(p);
    let pnu = pb.pow(nu as u32);
    let f1 = LaurentPoly::from_terms(
        f.rank(),
        f.terms().map(|(m, c)| (m.0.clone(), c / &pnu)),
    )?;
    let mut leading = f1.terms().filter(|(_, c)| !c.is_multiple_of(&pb));
    let (a, c) = leading.next().expect("content removed");
    if leading.next().is_some() {
        return Err(Error::NotAUnit(format!("{f} (p = {p})")));
    }
    let (a, c) = (a.clone(), c.clone());
    let m = pow_p(p, precision);
    let zeta = teichmuller(&c, p, precision)?;
    let inv = inverse_mod(&zeta, &m).expect("root of unity");
    let g = TruncatedPoly::reduce(&f1.shift(&a.inverse()), p, precision).scale(&inv);
    Ok(UnitDecomposition {
        nu,
        teichmuller: zeta,
        monomial: a,
        one_unit: g,
    })
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if crate::quotients::det::is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

/// Constant coefficient of `log g = -Σ_k (1 - g)^k / k`, certified modulo
/// `p^precision`. `g` must carry at least `precision + guard` digits.
pub fn tr_log_one_unit(g: &TruncatedPoly, precision: u32) -> Result<PadicNumber> {
    let p = g.prime();
    let one = TruncatedPoly::one(g.rank(), p, g.precision());
    let h = one.try_sub(g)?;
    if h.is_zero() {
        return Ok(PadicNumber::zero_mod(p, precision as i64, precision));
    }
    let m = h.content_valuation().expect("nonzero");
    if m == 0 {
        return Err(Error::NotAUnit("argument is not congruent to 1 mod p".into()));
    }
    let params = SeriesParams::new(p, precision, m);
    let w = params.working_precision();
    if g.precision() < w {
        return Err(Error::PrecisionExhausted(format!(
            "series needs {} digits, argument has {}",
            w,
            g.precision()
        )));
    }
    let h = h.truncate(w)?;
    let traces = power_traces(&h, params.k_max, |x| Ok(x.trace_coefficient()), |a, b| a.try_mul(b))?;
    finish_series(&traces, &params)
}

/// `Σ_k tr(H^k) / k` reduced to `-log`, given `tr(H^k)` modulo `p^{working}`.
fn finish_series(traces: &[BigInt], params: &SeriesParams) -> Result<PadicNumber> {
    let p = params.p;
    let out_mod = pow_p(p, params.precision);
    let mut acc = BigInt::zero();
    for (i, t) in traces.iter().enumerate() {
        let k = i as u64 + 1;
        let (vk, wk) = split_p(&BigInt::from(k), p);
        let pk = pow_p(p, vk);
        if !t.is_multiple_of(&pk) {
            return Err(Error::PrecisionExhausted(format!("term {k} is not divisible by {k}")));
        }
        let inv = inverse_mod(&wk.mod_floor(&out_mod), &out_mod).expect("unit");
        acc -= (t / pk) * inv;
    }
    Ok(PadicNumber::from_scaled_residue(
        p,
        &acc.mod_floor(&out_mod),
        0,
        params.precision as i64,
        params.precision,
    ))
}

fn power_traces<T: Clone>(
    h: &T,
    k_max: u64,
    trace: impl Fn(&T) -> Result<BigInt>,
    mul: impl Fn(&T, &T) -> Result<T>,
) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(k_max as usize);
    let mut power = h.clone();
    out.push(trace(&power)?);
    for _ in 1..k_max {
        power = mul(&power, h)?;
        out.push(trace(&power)?);
    }
    Ok(out)
}

/// `log_p det_Γ f` for a single Laurent polynomial.
pub fn logdet_scalar(f: &LaurentPoly, p: u64, precision: u32) -> Result<PadicNumber> {
    check_prime(p)?;
    if let Some((_, c)) = f.leading_term() {
        if f.len() == 1 {
            let (_, u) = split_p(&c.abs(), p);
            if u.is_one() {
                // ±p^ν t^a: every factor is killed by the Iwasawa branch.
                return Ok(PadicNumber::exact_zero(p, precision));
            }
        }
    }
    let params = SeriesParams::new(p, precision, 1);
    let d = decompose_unit(f, p, params.working_precision())?;
    tr_log_one_unit(&d.one_unit, precision)
}

/// Result of [`logdet_matrix`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogdetRoutes {
    /// `log_p det_Γ(det f)` through the unit decomposition.
    pub determinant_route: PadicNumber,
    /// `tr log f` computed on the matrix directly, when `f ≡ 1 mod p`.
    pub matrix_route: Option<PadicNumber>,
}

/// `log_p det_Γ f` for a square matrix, with the direct matrix series as a
/// cross-check whenever `f ≡ 1 mod p`.
pub fn logdet_matrix(f: &LaurentMatrix, p: u64, precision: u32) -> Result<LogdetRoutes> {
    let det = f.det_symbolic()?;
    if det.is_zero() {
        return Err(Error::NotAUnit("matrix with zero determinant".into()));
    }
    let determinant_route = logdet_scalar(&det, p, precision)?;
    let matrix_route = if f.is_one_mod(p) {
        let m = tr_log_matrix(f, p, precision)?;
        if !m.agrees_to(&determinant_route, precision as i64) {
            return Err(Error::RouteMismatch(format!(
                "matrix series {m} vs determinant {determinant_route}"
            )));
        }
        Some(m)
    } else {
        None
    };
    Ok(LogdetRoutes {
        determinant_route,
        matrix_route,
    })
}

type TruncMatrix = Vec<Vec<TruncatedPoly>>;

fn trunc_mul(a: &TruncMatrix, b: &TruncMatrix) -> Result<TruncMatrix> {
    let n = a.len();
    let zero = a[0][0].try_sub(&a[0][0])?;
    let mut out = vec![vec![zero; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].try_add(&a[i][k].try_mul(&b[k][j])?)?;
                }
            }
        }
    }
    Ok(out)
}

/// Constant coefficient of `tr log f` for `f ≡ 1 mod p`.
pub fn tr_log_matrix(f: &LaurentMatrix, p: u64, precision: u32) -> Result<PadicNumber> {
    if !f.is_one_mod(p) {
        return Err(Error::NotAUnit("matrix is not congruent to 1 mod p".into()));
    }
    let n = f.rows();
    let id = LaurentMatrix::identity(f.rank(), n);
    let h = id.try_sub(f)?;
    let m = h
        .entries()
        .filter_map(|e| e.content_valuation(p))
        .min();
    let Some(m) = m else {
        return Ok(PadicNumber::exact_zero(p, precision));
    };
    let params = SeriesParams::new(p, precision, m as u32);
    let w = params.working_precision();
    let hm: TruncMatrix = (0..n)
        .map(|i| (0..n).map(|j| TruncatedPoly::reduce(h.get(i, j), p, w)).collect())
        .collect();
    let traces = power_traces(
        &hm,
        params.k_max,
        |x| {
            Ok((0..n)
                .map(|i| x[i][i].trace_coefficient())
                .fold(BigInt::zero(), |a, b| a + b))
        },
        trunc_mul,
    )?;
    finish_series(&traces, &params)
}

/// `(Γ:Δ_n)^{-1} log_p |det f^{(n)}|` along a subgroup sequence.
pub fn logdet_limit_estimate(
    f: &LaurentMatrix,
    p: u64,
    seq: &SubgroupSequence,
    precision: u32,
) -> Result<ConvergenceReport> {
    check_prime(p)?;
    if !f.is_square() {
        return Err(Error::ShapeMismatch("logdet needs a square matrix".into()));
    }
    if f.rank() != seq.rank() {
        return Err(Error::RankMismatch {
            expected: f.rank(),
            found: seq.rank(),
        });
    }
    let levels = seq
        .levels()
        .par_iter()
        .enumerate()
        .map(|(i, delta)| {
            let q = delta.quotient();
            let a = q.action_matrix_of(f)?;
            let d = exact_determinant(&a)?;
            if d.is_zero() {
                return Err(Error::ZeroDeterminant {
                    level: i + 1,
                    index: delta.index(),
                });
            }
            level(
                &BigInt::from(delta.index()),
                &BigRational::from_integer(d),
                p,
                precision,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    ConvergenceReport::from_levels(levels)
}

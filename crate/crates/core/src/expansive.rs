//! Expansiveness tests: p-adic for principal presentations and for modules
//! with a known annihilator, classical for one variable.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic_det::{check_prime, decompose_unit};
use crate::ring::{LaurentMatrix, LaurentPoly, TruncatedPoly};
use crate::roots::{integer_polynomial_roots, unit_circle_root};

/// Default width of the band around `|z| = 1` treated as undecided numerically.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Verdict {
    /// p-adically expansive, already killed by the completed integral group ring.
    ExpansiveExponentZero { witness: String },
    /// p-adically expansive; the witness carries a factor `p^exponent`.
    ExpansivePositiveExponent { exponent: u64, witness: String },
    /// Classically expansive (no exponent applies).
    Expansive { witness: String },
    NotExpansive { witness: String },
    Inconclusive {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<String>,
    },
}

impl Verdict {
    pub fn is_expansive(&self) -> bool {
        matches!(
            self,
            Verdict::ExpansiveExponentZero { .. }
                | Verdict::ExpansivePositiveExponent { .. }
                | Verdict::Expansive { .. }
        )
    }

    pub fn exponent(&self) -> Option<u64> {
        match self {
            Verdict::ExpansiveExponentZero { .. } => Some(0),
            Verdict::ExpansivePositiveExponent { exponent, .. } => Some(*exponent),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Verdict::ExpansiveExponentZero { witness }
            | Verdict::ExpansivePositiveExponent { witness, .. }
            | Verdict::Expansive { witness }
            | Verdict::NotExpansive { witness } => Some(witness),
            Verdict::Inconclusive { witness } => witness.as_deref(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::ExpansiveExponentZero { .. } => "ExpansiveExponentZero",
            Verdict::ExpansivePositiveExponent { .. } => "ExpansivePositiveExponent",
            Verdict::Expansive { .. } => "Expansive",
            Verdict::NotExpansive { .. } => "NotExpansive",
            Verdict::Inconclusive { .. } => "Inconclusive",
        }
    }
}

fn unit_verdict(f: &LaurentPoly, p: u64, what: &str) -> Result<Verdict> {
    match decompose_unit(f, p, 1) {
        Ok(d) => {
            let reduction = TruncatedPoly::reduce(
                &LaurentPoly::monomial(f.rank(), d.teichmuller.clone(), d.monomial.clone()),
                p,
                1,
            );
            let witness = format!("{what} = {f} is p^{} times a unit reducing to {reduction}", d.nu);
            Ok(if d.nu == 0 {
                Verdict::ExpansiveExponentZero { witness }
            } else {
                Verdict::ExpansivePositiveExponent {
                    exponent: d.nu,
                    witness,
                }
            })
        }
        Err(Error::NotAUnit(_)) => {
            let nu = f.content_valuation(p).unwrap_or(0);
            let scaled = LaurentPoly::from_terms(
                f.rank(),
                f.terms()
                    .map(|(m, c)| (m.0.clone(), c / num_bigint::BigInt::from(p).pow(nu as u32))),
            )?;
            let reduction = TruncatedPoly::reduce(&scaled, p, 1);
            Ok(Verdict::NotExpansive {
                witness: format!(
                    "{what} = {f} reduces mod p (after removing p^{nu}) to {reduction}, not a monomial"
                ),
            })
        }
        Err(e) => Err(e),
    }
}

/// p-adic expansiveness of `coker ∂` for a square `∂`, via the unit test on
/// `det ∂`.
pub fn check_principal_padic(d: &LaurentMatrix, p: u64) -> Result<Verdict> {
    check_prime(p)?;
    let det = d.det_symbolic()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    unit_verdict(&det, p, "det")
}

/// Sufficient test for a module killed by each listed element: any
/// annihilator that is a unit of the p-adic Tate algebra proves expansiveness.
pub fn check_finite_module_padic(annihilators: &[LaurentPoly], p: u64) -> Result<Verdict> {
    check_prime(p)?;
    if annihilators.is_empty() {
        return Err(Error::ZeroInput("annihilator list"));
    }
    let mut best: Option<Verdict> = None;
    for f in annihilators.iter().filter(|f| !f.is_zero()) {
        let v = unit_verdict(f, p, "annihilator")?;
        let better = match (&best, v.exponent()) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(b), Some(e)) => e < b.exponent().unwrap_or(u64::MAX),
        };
        if better {
            best = Some(v);
        }
    }
    Ok(best.unwrap_or(Verdict::Inconclusive {
        witness: Some("no listed annihilator is a unit of the p-adic Tate algebra".into()),
    }))
}

/// Classical expansiveness of `Z[t^±1]/(f)`: no root of `f` on `|z| = 1`.
///
/// Circle roots are decided exactly (gcd with the reciprocal and a Sturm
/// count); numeric roots are reported and only downgrade the verdict to
/// `Inconclusive` when they fall inside the tolerance band but the exact test
/// found nothing.
pub fn check_classical_n1(f: &LaurentPoly, tol: f64) -> Result<Verdict> {
    if f.rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: f.rank(),
        });
    }
    if f.is_zero() {
        return Err(Error::ZeroInput("classical expansiveness of zero"));
    }
    let (_, coeffs) = f.to_univariate()?;
    if let Some(w) = unit_circle_root(&coeffs) {
        return Ok(Verdict::NotExpansive {
            witness: format!("{f}: {w}"),
        });
    }
    let roots = integer_polynomial_roots(&coeffs);
    let closest = roots
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(f64::INFINITY, f64::min);
    if closest <= tol {
        return Ok(Verdict::Inconclusive {
            witness: Some(format!(
                "a root lies within {closest:e} of |z| = 1 numerically"
            )),
        });
    }
    let desc = if roots.is_empty() {
        "no roots".to_string()
    } else {
        format!("min ||z| - 1| over roots = {closest:.6}")
    };
    Ok(Verdict::Expansive {
        witness: format!("{f}: {desc}"),
    })
}

/// Minimum of `|f|` over `samples` quasi-random points of the real torus.
/// A heuristic scan; never used as a verdict.
pub fn torus_sample_min(f: &LaurentPoly, samples: usize) -> f64 {
    let n = f.rank();
    // Kronecker sequence with irrational steps sqrt(prime) mod 1.
    let steps: Vec<f64> = [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0]
        .iter()
        .cycle()
        .take(n)
        .enumerate()
        .map(|(i, q)| (q.sqrt() * (1 + i / 10) as f64).fract())
        .collect();
    let mut best = f64::INFINITY;
    let mut z = vec![Complex64::new(1.0, 0.0); n];
    for j in 0..samples.max(1) {
        for (i, s) in steps.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * ((j as f64) * s).fract();
            z[i] = Complex64::from_polar(1.0, theta);
        }
        best = best.min(f.eval_complex(&z).norm());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_poly;

    fn m(s: &str) -> LaurentMatrix {
        LaurentMatrix::scalar(parse_poly(s, None).unwrap())
    }

    fn f(s: &str) -> LaurentPoly {
        parse_poly(s, None).unwrap()
    }

    #[test]
    fn principal_examples() {
        assert_eq!(check_principal_padic(&m("t - 2"), 2).unwrap().kind(), "ExpansiveExponentZero");
        assert_eq!(check_principal_padic(&m("t - 2"), 3).unwrap().kind(), "NotExpansive");
        assert_eq!(check_principal_padic(&m("3 + t1 + t2"), 2).unwrap().kind(), "NotExpansive");
        assert_eq!(check_principal_padic(&m("3 - t"), 3).unwrap().kind(), "ExpansiveExponentZero");
        let v = check_principal_padic(&m("9 + 3*t"), 3).unwrap();
        assert_eq!(v.exponent(), Some(1));
        assert_eq!(check_principal_padic(&m("0"), 3), Err(Error::Singular));
        assert_eq!(check_principal_padic(&m("t"), 4), Err(Error::InvalidPrime(4)));
    }

    #[test]
    fn annihilator_examples() {
        let v = check_finite_module_padic(&[LaurentPoly::constant(1, 2), f("t^2 + t + 1")], 3).unwrap();
        assert_eq!(v.exponent(), Some(0));
        let v = check_finite_module_padic(&[LaurentPoly::constant(1, 5)], 5).unwrap();
        assert_eq!(v.exponent(), Some(1));
        for p in [2, 3, 5] {
            let v = check_finite_module_padic(&[f("t - 1")], p).unwrap();
            assert_eq!(v.kind(), "Inconclusive");
        }
        assert!(check_finite_module_padic(&[], 3).is_err());
    }

    #[test]
    fn classical_examples() {
        assert!(check_classical_n1(&f("t - 2"), DEFAULT_TOLERANCE).unwrap().is_expansive());
        assert_eq!(check_classical_n1(&f("t - 1"), DEFAULT_TOLERANCE).unwrap().kind(), "NotExpansive");
        assert_eq!(
            check_classical_n1(&f("t^2 + t + 1"), DEFAULT_TOLERANCE).unwrap().kind(),
            "NotExpansive"
        );
        assert!(check_classical_n1(&f("4 - 3*t"), DEFAULT_TOLERANCE).unwrap().is_expansive());
        assert!(check_classical_n1(&f("t1 + t2"), DEFAULT_TOLERANCE).is_err());
    }

    #[test]
    fn torus_scan() {
        assert!(torus_sample_min(&f("3 + t1 + t2"), 10_000) > 0.9);
        assert!(torus_sample_min(&f("1 + t1 + t2"), 10_000) < 0.05);
        assert_eq!(torus_sample_min(&f("5"), 10), 5.0);
    }

    #[test]
    fn verdict_json() {
        let v = check_principal_padic(&m("9 + 3*t"), 3).unwrap();
        let j = serde_json::to_string(&v).unwrap();
        assert!(j.starts_with(r#"{"kind":"ExpansivePositiveExponent","exponent":1,"witness":"#));
        assert_eq!(serde_json::from_str::<Verdict>(&j).unwrap(), v);
    }
}

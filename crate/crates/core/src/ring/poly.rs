use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A group element `t^a` of `Z^N`, stored as its exponent vector.
///
/// Ordering is lexicographic on the exponents; it is a group order, so
/// leading terms multiply.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn one(rank: usize) -> Self {
        Monomial(vec![0; rank])
    }

    pub fn var(rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i] = 1;
        Monomial(e)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Monomial(self.0.iter().map(|a| -a).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// An element of `Z[t1^±1, ..., tN^±1]`, the integral group ring of `Z^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        assert!(rank >= 1, "rank must be at least 1");
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, BigInt::one())
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(rank, c, Monomial::one(rank))
    }

    /// `c * t^a`.
    pub fn monomial(rank: usize, c: impl Into<BigInt>, m: Monomial) -> Self {
        assert_eq!(m.rank(), rank, "monomial rank");
        let mut p = Self::zero(rank);
        p.add_term(m, c.into());
        p
    }

    /// The variable `t_{i+1}`.
    pub fn var(rank: usize, i: usize) -> Self {
        Self::monomial(rank, 1, Monomial::var(rank, i))
    }

    pub fn from_terms<I>(rank: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, BigInt)>,
    {
        let mut p = Self::zero(rank);
        for (e, c) in terms {
            if e.len() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.trace_coefficient().is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Leading term under the lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn lowest_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next()
    }

    /// Augmentation: every group element goes to 1.
    pub fn augment(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Coefficient of the identity element.
    pub fn trace_coefficient(&self) -> BigInt {
        self.coefficient(&Monomial::one(self.rank))
    }

    /// Minimum p-adic valuation of the coefficients; `None` for the zero polynomial.
    pub fn content_valuation(&self, p: u64) -> Option<u64> {
        let p = BigInt::from(p);
        self.terms.values().map(|c| valuation_of(c, &p)).min()
    }

    /// Gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = LaurentPoly::zero(self.rank);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.rank);
        if c.is_zero() {
            return out;
        }
        for (m, x) in &self.terms {
            out.terms.insert(m.clone(), x * c);
        }
        out
    }

    /// Multiply by the group element `t^a`.
    pub fn shift(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.rank);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division `self / d` in the Laurent ring.
    ///
    /// Peels leading terms off under the lexicographic group order; fails with
    /// [`Error::InexactDivision`] when `d` does not divide `self`.
    pub fn exact_div(&self, d: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(d)?;
        let (dlead_m, dlead_c) = d.leading_term().ok_or(Error::ZeroInput("divisor"))?;
        let (dlow_m, _) = d.lowest_term().expect("nonzero");
        let mut q = LaurentPoly::zero(self.rank);
        let mut r = self.clone();
        // Any quotient term lies in [low(self)/low(d), lead(self)/lead(d)].
        let floor = match self.lowest_term() {
            Some((m, _)) => m.div(dlow_m),
            None => return Ok(q),
        };
        while let Some((rm, rc)) = r.leading_term() {
            let (qc, rem) = rc.div_rem(dlead_c);
            if !rem.is_zero() {
                return Err(Error::InexactDivision);
            }
            let qm = rm.div(dlead_m);
            if qm < floor {
                return Err(Error::InexactDivision);
            }
            let t = LaurentPoly::monomial(self.rank, qc.clone(), qm.clone());
            r = &r - &(&t * d);
            q.add_term(qm, qc);
        }
        Ok(q)
    }

    /// Evaluate at a complex point of `(C^*)^N`.
    pub fn eval_complex(&self, z: &[num_complex::Complex64]) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = num_complex::Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (zi, &a) in z.iter().zip(m.exponents()) {
                term *= zi.powi(a as i32);
            }
            acc += term;
        }
        acc
    }

    /// For `N = 1`: shift to an ordinary polynomial, returning `(shift, coeffs)`
    /// with `self = t^shift * sum coeffs[i] t^i` and `coeffs[0] != 0`.
    pub fn to_univariate(&self) -> Result<(i64, Vec<BigInt>)> {
        if self.rank != 1 {
            return Err(Error::RankMismatch {
                expected: 1,
                found: self.rank,
            });
        }
        let lo = match self.lowest_term() {
            Some((m, _)) => m.0[0],
            None => return Ok((0, vec![])),
        };
        let hi = self.leading_term().unwrap().0 .0[0];
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize + 1];
        for (m, c) in &self.terms {
            coeffs[(m.0[0] - lo) as usize] = c.clone();
        }
        Ok((lo, coeffs))
    }

    /// View a polynomial in fewer variables inside a larger rank (new variables unused).
    pub fn embed(&self, rank: usize) -> Result<LaurentPoly> {
        if rank < self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: rank,
            });
        }
        let mut out = LaurentPoly::zero(rank);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.resize(rank, 0);
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    fn check_rank(&self, other: &LaurentPoly) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        Ok(())
    }
}

pub(crate) fn valuation_of(c: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!c.is_zero());
    let mut v = 0;
    let mut x = c.abs();
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("rank mismatch in LaurentPoly addition")
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("rank mismatch in LaurentPoly subtraction")
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("rank mismatch in LaurentPoly multiplication")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars = format_monomial(m);
            match (abs.is_one(), vars.is_empty()) {
                (_, true) => write!(f, "{abs}")?,
                (true, false) => write!(f, "{vars}")?,
                (false, false) => write!(f, "{abs}*{vars}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn format_monomial(m: &Monomial) -> String {
    let rank = m.rank();
    let mut parts = Vec::new();
    for (i, &a) in m.exponents().iter().enumerate() {
        if a == 0 {
            continue;
        }
        let name = if rank == 1 {
            "t".to_string()
        } else {
            format!("t{}", i + 1)
        };
        if a == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{a}"));
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_poly;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s, None).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p("t - 2") * &p("t + 2"), p("t^2 - 4"));
    }

    #[test]
    fn multiplicative_identity() {
        let f = p("3 - t^-2 + 5*t^7");
        assert_eq!(&f * &LaurentPoly::one(1), f);
    }

    #[test]
    fn two_variable_expansion() {
        let f = parse_poly("1 + t1", Some(2)).unwrap();
        let g = parse_poly("1 + t2", Some(2)).unwrap();
        assert_eq!(&f * &g, parse_poly("1 + t1 + t2 + t1*t2", Some(2)).unwrap());
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let f = parse_poly("t1", Some(2)).unwrap();
        assert!(matches!(
            f.try_mul(&p("t")),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn augmentation() {
        assert_eq!(p("4 - 3*t").augment(), BigInt::from(1));
        assert_eq!(
            parse_poly("t1*t2^-1 - t1", None).unwrap().augment(),
            BigInt::zero()
        );
        assert_eq!(LaurentPoly::zero(1).augment(), BigInt::zero());
    }

    #[test]
    fn trace_coefficient() {
        assert_eq!(p("4 - 3*t").trace_coefficient(), BigInt::from(4));
        assert_eq!(p("t + t^-1").trace_coefficient(), BigInt::zero());
        assert_eq!(p("7").trace_coefficient(), BigInt::from(7));
    }

    #[test]
    fn content_valuation() {
        assert_eq!(p("3 + 9*t").content_valuation(3), Some(1));
        assert_eq!(p("4 - 3*t").content_valuation(3), Some(0));
        assert_eq!(LaurentPoly::zero(1).content_valuation(3), None);
    }

    #[test]
    fn exact_division() {
        let f = p("t^2 + t + 1");
        let g = p("2 - t^-1 + 3*t^4");
        assert_eq!((&f * &g).exact_div(&g).unwrap(), f);
        assert_eq!(p("t^3 - 1").exact_div(&p("t - 1")).unwrap(), p("t^2 + t + 1"));
        assert_eq!(p("t^2 + 1").exact_div(&p("t - 1")), Err(Error::InexactDivision));
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(p("-3*t + 4").to_string(), "4 - 3*t");
        assert_eq!(
            parse_poly("t2^-1 + 3 + t1", None).unwrap().to_string(),
            "t2^-1 + 3 + t1"
        );
        assert_eq!(LaurentPoly::zero(2).to_string(), "0");
    }
}

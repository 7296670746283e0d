use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::{format_monomial, LaurentPoly, Monomial};
use crate::error::{Error, Result};

/// A finitely supported element of the completed group ring, known modulo `p^K`.
///
/// Coefficients are kept reduced into `[0, p^K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPoly {
    rank: usize,
    p: u64,
    precision: u32,
    modulus: BigInt,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TruncatedPoly {
    pub fn zero(rank: usize, p: u64, precision: u32) -> Self {
        assert!(precision >= 1, "precision must be at least 1");
        TruncatedPoly {
            rank,
            p,
            precision,
            modulus: BigInt::from(p).pow(precision),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize, p: u64, precision: u32) -> Self {
        let mut out = Self::zero(rank, p, precision);
        out.add_term(Monomial::one(rank), BigInt::one());
        out
    }

    /// Coefficientwise reduction of an exact Laurent polynomial.
    pub fn reduce(f: &LaurentPoly, p: u64, precision: u32) -> Self {
        let mut out = Self::zero(f.rank(), p, precision);
        for (m, c) in f.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                let c = c.mod_floor(&self.modulus);
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let c = (o.get() + c).mod_floor(&self.modulus);
                if c.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn trace_coefficient(&self) -> BigInt {
        self.terms
            .get(&Monomial::one(self.rank))
            .cloned()
            .unwrap_or_default()
    }

    /// Minimum valuation of the residues, capped at the precision (`None` for zero).
    pub fn content_valuation(&self) -> Option<u32> {
        let p = BigInt::from(self.p);
        self.terms
            .values()
            .map(|c| super::poly::valuation_of(c, &p) as u32)
            .min()
    }

    /// Lift to the Laurent ring with the residues as integer coefficients.
    pub fn lift(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.rank,
            self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())),
        )
        .expect("ranks agree")
    }

    /// Reduce further to a smaller precision.
    pub fn truncate(&self, precision: u32) -> Result<Self> {
        if precision > self.precision {
            return Err(Error::PrecisionExhausted(format!(
                "cannot raise precision {} to {}",
                self.precision, precision
            )));
        }
        let mut out = Self::zero(self.rank, self.p, precision);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        if self.p != other.p || self.precision != other.precision {
            return Err(Error::ShapeMismatch(format!(
                "truncation mod {}^{} vs {}^{}",
                self.p, self.precision, other.p, other.precision
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let mut out = Self::zero(self.rank, self.p, self.precision);
        out.terms = acc
            .into_iter()
            .map(|(m, c)| (m, c.mod_floor(&self.modulus)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.rank, self.p, self.precision);
        out.terms = self
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), (x * c).mod_floor(&self.modulus)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        out
    }

    pub fn shift(&self, m: &Monomial) -> Self {
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.mul(m), c.clone()))
            .collect();
        out
    }
}

impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let vars = format_monomial(m);
            match (c.is_one(), vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (true, false) => write!(f, "{vars}")?,
                (false, false) => write!(f, "{c}*{vars}")?,
            }
        }
        write!(f, " mod {}^{}", self.p, self.precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_poly;

    fn red(s: &str, p: u64, k: u32) -> TruncatedPoly {
        TruncatedPoly::reduce(&parse_poly(s, None).unwrap(), p, k)
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(red("4 - 3*t", 3, 1), TruncatedPoly::one(1, 3, 1));
        assert_eq!(red("t - 2", 2, 1), red("t", 2, 1));
        assert!(red("6 + 3*t^-4", 3, 1).is_zero());
    }

    #[test]
    fn residues_are_canonical() {
        let f = red("-1 - 10*t", 3, 2);
        let coeffs: Vec<_> = f.terms().map(|(_, c)| c.clone()).collect();
        assert_eq!(coeffs, vec![BigInt::from(8), BigInt::from(8)]);
    }

    #[test]
    fn precision_mismatch_is_rejected() {
        assert!(red("t", 3, 2).try_add(&red("t", 3, 3)).is_err());
        assert!(red("t", 3, 2).try_mul(&red("t", 5, 2)).is_err());
    }
}

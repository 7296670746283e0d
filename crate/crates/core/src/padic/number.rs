use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Q_p` known to a fixed relative precision.
///
/// A nonzero value is `p^v * unit` with `unit` a residue mod `p^K` prime to
/// `p`. A zero value is either exact, or only known to vanish modulo `p^v`.
/// Zeros keep a nominal `K` so that operations like `exp` know how far to go.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PadicJson", into = "PadicJson")]
pub struct PadicNumber {
    p: u64,
    zero: bool,
    v: i64,
    unit: BigInt,
    k: u32,
}

/// A valuation that may be infinite (exact zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "DepthJson", try_from = "DepthJson")]
pub enum Depth {
    Finite(i64),
    Infinite,
}

impl Depth {
    pub fn is_infinite(self) -> bool {
        matches!(self, Depth::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Depth::Finite(v) => Some(v),
            Depth::Infinite => None,
        }
    }

    /// `self >= n`, with infinity above everything.
    pub fn at_least(self, n: i64) -> bool {
        match self {
            Depth::Finite(v) => v >= n,
            Depth::Infinite => true,
        }
    }
}

impl PartialOrd for Depth {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Depth {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Depth::Infinite, Depth::Infinite) => Ordering::Equal,
            (Depth::Infinite, _) => Ordering::Greater,
            (_, Depth::Infinite) => Ordering::Less,
            (Depth::Finite(a), Depth::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(v) => write!(f, "{v}"),
            Depth::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DepthJson {
    Finite(i64),
    Word(String),
}

impl From<Depth> for DepthJson {
    fn from(d: Depth) -> Self {
        match d {
            Depth::Finite(v) => DepthJson::Finite(v),
            Depth::Infinite => DepthJson::Word("inf".into()),
        }
    }
}

impl TryFrom<DepthJson> for Depth {
    type Error = String;
    fn try_from(d: DepthJson) -> std::result::Result<Self, String> {
        match d {
            DepthJson::Finite(v) => Ok(Depth::Finite(v)),
            DepthJson::Word(w) if w == "inf" => Ok(Depth::Infinite),
            DepthJson::Word(w) => Err(format!("bad depth {w:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PadicJson {
    p: u64,
    v: Option<i64>,
    unit_digits: Vec<u64>,
    #[serde(rename = "K")]
    k: u32,
}

impl From<PadicNumber> for PadicJson {
    fn from(x: PadicNumber) -> Self {
        if x.zero {
            return PadicJson {
                p: x.p,
                v: (x.v != i64::MAX).then_some(x.v),
                unit_digits: Vec::new(),
                k: x.k,
            };
        }
        PadicJson {
            p: x.p,
            v: Some(x.v),
            unit_digits: x.unit_digits(),
            k: x.k,
        }
    }
}

impl TryFrom<PadicJson> for PadicNumber {
    type Error = String;
    fn try_from(j: PadicJson) -> std::result::Result<Self, String> {
        if j.p < 2 {
            return Err(format!("{} is not a prime", j.p));
        }
        if j.unit_digits.is_empty() {
            return Ok(PadicNumber {
                p: j.p,
                zero: true,
                v: j.v.unwrap_or(i64::MAX),
                unit: BigInt::zero(),
                k: j.k,
            });
        }
        if j.unit_digits.len() != j.k as usize {
            return Err("unit_digits must have exactly K entries".into());
        }
        if j.unit_digits.iter().any(|&d| d >= j.p) || j.unit_digits[0] == 0 {
            return Err("unit digits out of range".into());
        }
        let v = j.v.ok_or("nonzero value needs a valuation")?;
        let pb = BigInt::from(j.p);
        let unit = j
            .unit_digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * &pb + d);
        Ok(PadicNumber {
            p: j.p,
            zero: false,
            v,
            unit,
            k: j.k,
        })
    }
}

pub(crate) fn pow_p(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// `(v_p(n), n / p^v)` for nonzero `n`.
pub(crate) fn split_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

pub(crate) fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

impl PadicNumber {
    pub fn exact_zero(p: u64, precision: u32) -> Self {
        PadicNumber {
            p,
            zero: true,
            v: i64::MAX,
            unit: BigInt::zero(),
            k: precision,
        }
    }

    /// A value only known to lie in `p^bound Z_p`.
    pub fn zero_mod(p: u64, bound: i64, precision: u32) -> Self {
        PadicNumber {
            p,
            zero: true,
            v: bound,
            unit: BigInt::zero(),
            k: precision,
        }
    }

    pub fn one(p: u64, precision: u32) -> Self {
        Self::from_integer(&BigInt::one(), p, precision)
    }

    pub fn from_integer(n: &BigInt, p: u64, precision: u32) -> Self {
        assert!(precision >= 1, "precision must be at least 1");
        if n.is_zero() {
            return Self::exact_zero(p, precision);
        }
        let (v, u) = split_p(n, p);
        Self::from_unit(p, v as i64, &u, precision)
    }

    pub fn from_i64(n: i64, p: u64, precision: u32) -> Self {
        Self::from_integer(&BigInt::from(n), p, precision)
    }

    pub fn from_fraction(num: &BigInt, den: &BigInt, p: u64, precision: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::exact_zero(p, precision));
        }
        let (va, ua) = split_p(num, p);
        let (vb, ub) = split_p(den, p);
        let m = pow_p(p, precision);
        let inv = inverse_mod(&ub.mod_floor(&m), &m).expect("unit");
        Ok(Self::from_unit(p, va as i64 - vb as i64, &(ua * inv), precision))
    }

    pub fn from_rational(q: &BigRational, p: u64, precision: u32) -> Result<Self> {
        Self::from_fraction(q.numer(), q.denom(), p, precision)
    }

    /// `p^v * u` with `u` prime to `p`, reduced mod `p^K`.
    pub(crate) fn from_unit(p: u64, v: i64, u: &BigInt, precision: u32) -> Self {
        let unit = u.mod_floor(&pow_p(p, precision));
        debug_assert!(!unit.is_multiple_of(&BigInt::from(p)));
        PadicNumber {
            p,
            zero: false,
            v,
            unit,
            k: precision,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_exact_zero(&self) -> bool {
        self.zero && self.v == i64::MAX
    }

    /// Valuation; for an inexact zero this is the certified lower bound.
    pub fn valuation(&self) -> Depth {
        if self.is_exact_zero() {
            Depth::Infinite
        } else {
            Depth::Finite(self.v)
        }
    }

    /// Relative precision `K` (nominal for zeros).
    pub fn precision(&self) -> u32 {
        self.k
    }

    /// The exponent `A` with the value known modulo `p^A`.
    pub fn absolute_precision(&self) -> Depth {
        match (self.zero, self.v) {
            (true, i64::MAX) => Depth::Infinite,
            (true, v) => Depth::Finite(v),
            (false, v) => Depth::Finite(v + self.k as i64),
        }
    }

    /// The unit residue mod `p^K` (zero for zero values).
    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Base-`p` digits of the unit, little-endian, exactly `K` of them.
    pub fn unit_digits(&self) -> Vec<u64> {
        if self.zero {
            return Vec::new();
        }
        let pb = BigInt::from(self.p);
        let mut u = self.unit.clone();
        (0..self.k)
            .map(|_| {
                let (q, r) = u.div_rem(&pb);
                u = q;
                r.to_u64().expect("digit")
            })
            .collect()
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ShapeMismatch(format!(
                "p-adic numbers over different primes {} and {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let nominal = self.k.min(other.k);
        if self.is_exact_zero() {
            return Ok(other.clone());
        }
        if other.is_exact_zero() {
            return Ok(self.clone());
        }
        let abs = self
            .absolute_precision()
            .min(other.absolute_precision())
            .finite()
            .expect("one side is inexact");
        let terms: Vec<&Self> = [self, other].into_iter().filter(|x| !x.zero).collect();
        let Some(shift) = terms.iter().map(|x| x.v).min() else {
            return Ok(Self::zero_mod(self.p, abs, nominal));
        };
        if shift >= abs {
            return Ok(Self::zero_mod(self.p, abs, nominal));
        }
        let mut r = BigInt::zero();
        for x in terms {
            r += &x.unit * pow_p(self.p, (x.v - shift) as u32);
        }
        Ok(Self::from_scaled_residue(self.p, &r, shift, abs, nominal))
    }

    /// The value `p^shift * r`, known modulo `p^abs`.
    pub(crate) fn from_scaled_residue(p: u64, r: &BigInt, shift: i64, abs: i64, nominal: u32) -> Self {
        let span = abs - shift;
        if span <= 0 {
            return Self::zero_mod(p, abs, nominal);
        }
        let r = r.mod_floor(&pow_p(p, span as u32));
        if r.is_zero() {
            return Self::zero_mod(p, abs, nominal);
        }
        let (w, u) = split_p(&r, p);
        let v = shift + w as i64;
        Self::from_unit(p, v, &u, (abs - v) as u32)
    }

    pub fn neg(&self) -> Self {
        if self.zero {
            return self.clone();
        }
        Self::from_unit(self.p, self.v, &-&self.unit, self.k)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let nominal = self.k.min(other.k);
        match (self.zero, other.zero) {
            (true, true) => {
                if self.is_exact_zero() || other.is_exact_zero() {
                    return Ok(Self::exact_zero(self.p, nominal));
                }
                Ok(Self::zero_mod(self.p, self.v.saturating_add(other.v), nominal))
            }
            (true, false) | (false, true) => {
                let (z, x) = if self.zero { (self, other) } else { (other, self) };
                if z.is_exact_zero() {
                    return Ok(Self::exact_zero(self.p, nominal));
                }
                Ok(Self::zero_mod(self.p, z.v + x.v, nominal))
            }
            (false, false) => Ok(Self::from_unit(
                self.p,
                self.v + other.v,
                &(&self.unit * &other.unit),
                nominal,
            )),
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        if other.zero {
            return Err(Error::ZeroInput("p-adic division by zero"));
        }
        let nominal = self.k.min(other.k);
        if self.zero {
            if self.is_exact_zero() {
                return Ok(Self::exact_zero(self.p, nominal));
            }
            return Ok(Self::zero_mod(self.p, self.v - other.v, nominal));
        }
        let m = pow_p(self.p, nominal);
        let inv = inverse_mod(&other.unit.mod_floor(&m), &m).expect("unit");
        Ok(Self::from_unit(
            self.p,
            self.v - other.v,
            &(&self.unit * inv),
            nominal,
        ))
    }

    /// Multiply by an integer; relative precision is unchanged.
    pub fn mul_int(&self, n: &BigInt) -> Self {
        self.try_mul(&Self::from_integer(n, self.p, self.k.max(1)))
            .expect("same prime")
    }

    /// Divide by a nonzero integer; relative precision is unchanged.
    pub fn div_int(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::ZeroInput("p-adic division by zero"));
        }
        self.try_div(&Self::from_integer(n, self.p, self.k.max(1)))
    }

    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            return Self::one(self.p, self.k.max(1));
        }
        if self.zero {
            if self.is_exact_zero() {
                return self.clone();
            }
            return Self::zero_mod(self.p, self.v.saturating_mul(e as i64), self.k);
        }
        let m = pow_p(self.p, self.k);
        Self::from_unit(
            self.p,
            self.v * e as i64,
            &self.unit.modpow(&BigInt::from(e), &m),
            self.k,
        )
    }

    /// `p^{-v}` times the value, as a residue modulo `p^K` (zero for zeros).
    pub fn unit_part(&self) -> PadicNumber {
        if self.zero {
            return self.clone();
        }
        Self::from_unit(self.p, 0, &self.unit, self.k)
    }

    /// Reduce to a smaller absolute precision.
    pub fn with_absolute_precision(&self, abs: i64) -> Self {
        match self.absolute_precision() {
            Depth::Finite(a) if a <= abs => self.clone(),
            _ if self.zero => Self::zero_mod(self.p, abs, self.k),
            _ => Self::from_scaled_residue(self.p, &self.unit, self.v, abs, self.k),
        }
    }

    /// The value as an integer modulo `p^abs`, for values in `Z_p`.
    pub fn residue(&self, abs: u32) -> Option<BigInt> {
        if self.zero {
            return Some(BigInt::zero());
        }
        if self.v < 0 {
            return None;
        }
        let m = pow_p(self.p, abs);
        Some((&self.unit * pow_p(self.p, self.v as u32)).mod_floor(&m))
    }

    /// `v_p(self - other)`, capped by the precision of both inputs.
    pub fn valuation_of_difference(&self, other: &Self) -> Result<Depth> {
        Ok(self.try_sub(other)?.valuation())
    }

    /// Agreement to at least absolute precision `abs`.
    pub fn agrees_to(&self, other: &Self, abs: i64) -> bool {
        self.valuation_of_difference(other)
            .map(|d| d.at_least(abs))
            .unwrap_or(false)
    }

    /// Exact rational value of the stored representative.
    pub fn to_rational(&self) -> BigRational {
        if self.zero {
            return BigRational::zero();
        }
        let u = BigRational::from_integer(self.unit.clone());
        let pv = BigRational::from_integer(pow_p(self.p, self.v.unsigned_abs() as u32));
        if self.v >= 0 {
            u * pv
        } else {
            u / pv
        }
    }

    /// Lossy float value of the stored representative (for diagnostics only).
    pub fn approx_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        if self.is_exact_zero() {
            return write!(f, "0 [exact]");
        }
        if self.zero {
            return write!(f, "0 (mod {p}^{})", self.v);
        }
        write!(f, "{p}^{} * (", self.v)?;
        let mut place = BigInt::one();
        for (i, d) in self.unit_digits().iter().enumerate() {
            if i == 0 {
                write!(f, "{d}")?;
            } else {
                write!(f, " + {d}*{place}")?;
            }
            place *= p;
        }
        write!(f, " + ...) [K={}]", self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: i64, p: u64) -> PadicNumber {
        PadicNumber::from_i64(x, p, 8)
    }

    #[test]
    fn integers() {
        let x = n(12, 3);
        assert_eq!(x.valuation(), Depth::Finite(1));
        assert_eq!(x.unit(), &BigInt::from(4));
        assert!(n(0, 3).is_exact_zero());
        let y = PadicNumber::from_i64(-1, 5, 4);
        assert_eq!(y.valuation(), Depth::Finite(0));
        assert_eq!(y.unit(), &BigInt::from(624));
    }

    #[test]
    fn rationals() {
        let x = PadicNumber::from_fraction(&1.into(), &3.into(), 3, 5).unwrap();
        assert_eq!(x.valuation(), Depth::Finite(-1));
        assert_eq!(x.unit(), &BigInt::one());
        let h = PadicNumber::from_fraction(&1.into(), &2.into(), 3, 4).unwrap();
        assert_eq!(h.try_mul(&n(2, 3)).unwrap(), PadicNumber::one(3, 4));
        assert_eq!(
            PadicNumber::from_fraction(&1.into(), &0.into(), 3, 4),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn cancellation_tracks_precision() {
        let a = n(10, 3);
        let b = n(1, 3);
        let d = a.try_sub(&b).unwrap();
        assert_eq!(d.valuation(), Depth::Finite(2));
        assert_eq!(d.absolute_precision(), Depth::Finite(8));
        let z = a.try_sub(&a).unwrap();
        assert!(z.is_zero() && !z.is_exact_zero());
        assert_eq!(z.valuation(), Depth::Finite(8));
    }

    #[test]
    fn display_and_json() {
        let x = PadicNumber::from_i64(4, 3, 8);
        assert_eq!(x.to_string(), "3^0 * (1 + 1*3 + 0*9 + 0*27 + 0*81 + 0*243 + 0*729 + 0*2187 + ...) [K=8]");
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"p":3,"v":0,"unit_digits":[1,1,0,0,0,0,0,0],"K":8}"#);
        let back: PadicNumber = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x);
        let z = PadicNumber::exact_zero(5, 3);
        let jz = serde_json::to_string(&z).unwrap();
        assert_eq!(jz, r#"{"p":5,"v":null,"unit_digits":[],"K":3}"#);
        assert_eq!(serde_json::from_str::<PadicNumber>(&jz).unwrap(), z);
    }

    #[test]
    fn depth_order_and_json() {
        assert!(Depth::Infinite > Depth::Finite(i64::MAX - 1));
        assert_eq!(serde_json::to_string(&Depth::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::from_str::<Depth>("3").unwrap(), Depth::Finite(3));
    }

    #[test]
    fn division_and_powers() {
        let x = n(12, 3);
        assert_eq!(x.div_int(&3.into()).unwrap(), n(4, 3));
        assert_eq!(x.pow(2), n(144, 3));
        assert!(x.try_div(&PadicNumber::exact_zero(3, 8)).is_err());
    }
}

//! Iwasawa logarithm, exponential, Teichmüller lifts and the splitting
//! `Q_p^× = μ_{p-1} × (1 + pZ_p) × p^Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::number::{inverse_mod, pow_p, split_p, PadicNumber};
use crate::error::{Error, Result};

/// `floor(log_p k)` for `k >= 1`.
pub fn floor_log(p: u64, k: u64) -> u32 {
    let mut e = 0;
    let mut q = p;
    while q <= k {
        e += 1;
        match q.checked_mul(p) {
            Some(n) => q = n,
            None => break,
        }
    }
    e
}

/// Smallest `k` with `k*m - floor(log_p k) >= target`; every term of
/// `log(1 + z)` past it has valuation at least `target` when `v(z) >= m`.
pub fn log_truncation(p: u64, m: u32, target: u32) -> u64 {
    let mut k = 1u64;
    while (k * m as u64) < target as u64 + floor_log(p, k) as u64 {
        k += 1;
    }
    k
}

/// `log(1 + z) mod p^target` for an integer `z` with `v_p(z) >= m >= 1`.
///
/// Terms are accumulated modulo `p^{target + e}` with `e = floor(log_p k_max)`,
/// so the division by `k` is exact.
pub(crate) fn log_one_plus(z: &BigInt, p: u64, m: u32, target: u32) -> BigInt {
    debug_assert!(m >= 1);
    let kmax = log_truncation(p, m, target);
    let e = floor_log(p, kmax);
    let work = pow_p(p, target + e);
    let out_mod = pow_p(p, target);
    let z = z.mod_floor(&work);
    let mut power = BigInt::one();
    let mut acc = BigInt::zero();
    for k in 1..=kmax {
        power = (power * &z).mod_floor(&work);
        let (vk, wk) = split_p(&BigInt::from(k), p);
        let pk = pow_p(p, vk);
        debug_assert!(power.is_multiple_of(&pk));
        let num = &power / pk;
        let inv = inverse_mod(&wk.mod_floor(&out_mod), &out_mod).expect("unit");
        let term = (num * inv).mod_floor(&out_mod);
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.mod_floor(&out_mod)
}

/// The Iwasawa branch of the `p`-adic logarithm, with `log_p(p) = 0`.
///
/// The result is known modulo `p^K` where `K` is the relative precision of `x`.
pub fn padic_log(x: &PadicNumber) -> Result<PadicNumber> {
    if x.is_zero() {
        return Err(Error::ZeroInput("logarithm of zero"));
    }
    let p = x.prime();
    let k = x.precision();
    let m = pow_p(p, k);
    let mut u = x.unit().clone();
    let raw = if p == 2 {
        if k < 2 {
            return Ok(PadicNumber::zero_mod(2, k as i64, k));
        }
        // log(-1) = 0, so move u into 1 + 4Z_2 first.
        if u.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
            u = (-u).mod_floor(&m);
        }
        let z: BigInt = &u - 1;
        if z.is_zero() {
            return Ok(PadicNumber::zero_mod(2, k as i64, k));
        }
        log_one_plus(&z, 2, 2, k)
    } else {
        let y = u.modpow(&BigInt::from(p - 1), &m);
        let z: BigInt = y - 1;
        if z.is_zero() {
            return Ok(PadicNumber::zero_mod(p, k as i64, k));
        }
        let l = log_one_plus(&z, p, 1, k);
        let inv = inverse_mod(&BigInt::from(p - 1), &m).expect("unit");
        (l * inv).mod_floor(&m)
    };
    Ok(PadicNumber::from_scaled_residue(p, &raw, 0, k as i64, k))
}

/// `log_p(q)` for a nonzero rational. Exactly zero when `q = ±p^a`.
pub fn log_rational(q: &BigRational, p: u64, precision: u32) -> Result<PadicNumber> {
    if q.is_zero() {
        return Err(Error::ZeroInput("logarithm of zero"));
    }
    let (_, un) = split_p(&q.numer().abs(), p);
    let (_, ud) = split_p(&q.denom().abs(), p);
    if un.is_one() && ud.is_one() {
        return Ok(PadicNumber::exact_zero(p, precision));
    }
    padic_log(&PadicNumber::from_rational(q, p, precision)?)
}

pub fn log_integer(n: &BigInt, p: u64, precision: u32) -> Result<PadicNumber> {
    log_rational(&BigRational::from_integer(n.clone()), p, precision)
}

/// `v_p(k!)`.
fn factorial_valuation(p: u64, k: u64) -> u64 {
    let mut s = 0;
    let mut q = p;
    while q <= k {
        s += k / q;
        match q.checked_mul(p) {
            Some(n) => q = n,
            None => break,
        }
    }
    s
}

/// `exp_p(x) = Σ x^k / k!`, for `v(x) >= 1` (`p` odd) or `v(x) >= 2` (`p = 2`).
///
/// The result is known modulo `p^A`, `A` the absolute precision of `x`
/// (or its nominal precision when `x` is an exact zero).
pub fn padic_exp(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.prime();
    let required = if p == 2 { 2 } else { 1 };
    let abs = match x.absolute_precision().finite() {
        Some(a) => a,
        None => return Ok(PadicNumber::one(p, x.precision().max(1))),
    };
    if x.is_zero() {
        return Ok(PadicNumber::one(p, abs.max(1) as u32));
    }
    let v = x.valuation().finite().expect("finite");
    if v < required {
        return Err(Error::ConvergenceRadius {
            valuation: v,
            required,
        });
    }
    let target = abs as u32;
    // Terms k with k*(v(p-1) - 1) >= target*(p-1) are below p^target.
    let slope = (v as u64) * (p - 1) - 1;
    let mut kmax = 1u64;
    while kmax * slope < target as u64 * (p - 1) {
        kmax += 1;
    }
    let e = factorial_valuation(p, kmax) as u32;
    let work = pow_p(p, target + e);
    let out_mod = pow_p(p, target);
    let xi = x.residue(target + e).expect("integral");
    let mut power = BigInt::one();
    let mut fact_unit = BigInt::one();
    let mut acc = BigInt::one();
    for k in 1..=kmax {
        power = (power * &xi).mod_floor(&work);
        let (_, wk) = split_p(&BigInt::from(k), p);
        fact_unit = (fact_unit * wk).mod_floor(&out_mod);
        let pf = pow_p(p, factorial_valuation(p, k) as u32);
        debug_assert!(power.is_multiple_of(&pf));
        let num = &power / pf;
        let inv = inverse_mod(&fact_unit, &out_mod).expect("unit");
        acc += num * inv;
    }
    Ok(PadicNumber::from_scaled_residue(p, &acc, 0, abs, target))
}

/// The Teichmüller representative `ω(c)` modulo `p^K`: the `(p-1)`-th root
/// of unity congruent to `c` mod `p`.
pub fn teichmuller(c: &BigInt, p: u64, precision: u32) -> Result<BigInt> {
    let pb = BigInt::from(p);
    if c.is_multiple_of(&pb) {
        return Err(Error::ZeroInput("Teichmüller lift of a multiple of p"));
    }
    let m = pow_p(p, precision);
    if p == 2 {
        return Ok(BigInt::one());
    }
    let mut x = c.mod_floor(&pb);
    // x -> x^p gains one digit per step.
    loop {
        let next = x.modpow(&pb, &m);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
}

/// `x = p^ν · ζ · χ1` with `ζ` a root of unity (`±1` when `p = 2`) and `χ1`
/// a principal unit (`≡ 1 mod p`, or `mod 4` when `p = 2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDecomposition {
    pub p: u64,
    pub nu: i64,
    #[serde(with = "crate::serde_big::int")]
    pub teichmuller: BigInt,
    #[serde(with = "crate::serde_big::int")]
    pub one_unit: BigInt,
    #[serde(rename = "K")]
    pub precision: u32,
}

impl ComponentDecomposition {
    pub fn one_unit_padic(&self) -> PadicNumber {
        PadicNumber::from_unit(self.p, 0, &self.one_unit, self.precision)
    }

    pub fn teichmuller_padic(&self) -> PadicNumber {
        PadicNumber::from_unit(self.p, 0, &self.teichmuller, self.precision)
    }

    /// `p^ν · ζ · χ1`.
    pub fn reconstruct(&self) -> PadicNumber {
        let pn = PadicNumber::from_unit(self.p, self.nu, &BigInt::one(), self.precision);
        pn.try_mul(&self.teichmuller_padic())
            .and_then(|a| a.try_mul(&self.one_unit_padic()))
            .expect("same prime")
    }
}

pub fn component_decomposition(x: &PadicNumber) -> Result<ComponentDecomposition> {
    if x.is_zero() {
        return Err(Error::ZeroInput("component decomposition of zero"));
    }
    let p = x.prime();
    let k = x.precision();
    let m = pow_p(p, k);
    let u = x.unit();
    let zeta = if p == 2 {
        if u.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
            (-BigInt::one()).mod_floor(&m)
        } else {
            BigInt::one()
        }
    } else {
        teichmuller(u, p, k)?
    };
    let inv = inverse_mod(&zeta, &m).expect("root of unity");
    Ok(ComponentDecomposition {
        p,
        nu: x.valuation().finite().expect("nonzero"),
        teichmuller: zeta,
        one_unit: (u * inv).mod_floor(&m),
        precision: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::number::Depth;

    fn n(x: i64, p: u64, k: u32) -> PadicNumber {
        PadicNumber::from_i64(x, p, k)
    }

    /// Σ (-1)^{k+1} a^k / k over the rationals, reduced mod p^K.
    fn oracle_log1p(a: i64, p: u64, k: u32, terms: u32) -> BigInt {
        let mut s = BigRational::zero();
        for j in 1..=terms {
            let t = BigRational::new(BigInt::from(a).pow(j), BigInt::from(j));
            if j % 2 == 1 {
                s += t;
            } else {
                s -= t;
            }
        }
        let m = pow_p(p, k);
        let inv = inverse_mod(&s.denom().mod_floor(&m), &m).unwrap();
        (s.numer() * inv).mod_floor(&m)
    }

    #[test]
    fn trivial_logs() {
        assert!(padic_log(&n(1, 5, 6)).unwrap().is_zero());
        assert!(log_integer(&3.into(), 3, 8).unwrap().is_exact_zero());
        assert!(log_integer(&(-1).into(), 2, 8).unwrap().is_exact_zero());
        assert!(padic_log(&n(-1, 2, 8)).unwrap().is_zero());
        assert!(log_integer(&0.into(), 3, 8).is_err());
    }

    #[test]
    fn log_of_four_matches_series() {
        let l = padic_log(&n(4, 3, 8)).unwrap();
        assert_eq!(l.valuation(), Depth::Finite(1));
        let want = oracle_log1p(3, 3, 8, 40);
        assert_eq!(l.residue(8).unwrap(), want);
    }

    #[test]
    fn log_kills_roots_of_unity() {
        for p in [3u64, 5, 7] {
            let w = teichmuller(&2.into(), p, 10).unwrap();
            let x = PadicNumber::from_integer(&(&w * 7 * BigInt::from(p)), p, 10);
            let a = padic_log(&x).unwrap();
            let b = padic_log(&n(7, p, 10)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn exp_round_trips() {
        let l = padic_log(&n(4, 3, 12)).unwrap();
        let e = padic_exp(&l).unwrap();
        assert!(e.agrees_to(&n(4, 3, 12), 12));
        let two = n(2, 2, 12);
        assert!(matches!(padic_exp(&two), Err(Error::ConvergenceRadius { .. })));
        let four = n(4, 2, 12);
        let back = padic_log(&padic_exp(&four).unwrap()).unwrap();
        assert!(back.agrees_to(&four, 12));
        assert_eq!(padic_exp(&PadicNumber::exact_zero(5, 6)).unwrap(), PadicNumber::one(5, 6));
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(&1.into(), 7, 9).unwrap(), BigInt::one());
        let m = pow_p(3, 8);
        assert_eq!(teichmuller(&2.into(), 3, 8).unwrap(), &m - 1);
        for c in 1..13 {
            let w = teichmuller(&c.into(), 13, 6).unwrap();
            assert_eq!(w.modpow(&12.into(), &pow_p(13, 6)), BigInt::one());
            assert_eq!(w.mod_floor(&13.into()), BigInt::from(c));
        }
        assert!(teichmuller(&6.into(), 3, 4).is_err());
    }

    #[test]
    fn decompositions() {
        let d = component_decomposition(&n(12, 3, 8)).unwrap();
        assert_eq!((d.nu, d.teichmuller.clone(), d.one_unit.clone()), (1, BigInt::one(), BigInt::from(4)));
        let d = component_decomposition(&n(-1, 3, 8)).unwrap();
        assert_eq!(d.one_unit, BigInt::one());
        assert_eq!(d.teichmuller, pow_p(3, 8) - 1);
        for k in 2..10u32 {
            let x = BigInt::from(2).pow(k) - 1;
            let d = component_decomposition(&PadicNumber::from_integer(&x, 2, 16)).unwrap();
            assert_eq!(d.teichmuller, pow_p(2, 16) - 1);
            assert_eq!(d.one_unit, (BigInt::one() - BigInt::from(2).pow(k)).mod_floor(&pow_p(2, 16)));
            assert_eq!(d.reconstruct(), PadicNumber::from_integer(&x, 2, 16));
        }
    }

    #[test]
    fn truncation_order() {
        assert_eq!(floor_log(3, 1), 0);
        assert_eq!(floor_log(3, 9), 2);
        let k = log_truncation(3, 1, 8);
        assert!(k - floor_log(3, k) as u64 >= 8);
        assert!(k - 1 - (floor_log(3, k - 1) as u64) < 8);
    }
}

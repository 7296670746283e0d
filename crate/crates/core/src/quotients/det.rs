//! Exact integer determinants.
//!
//! Two independent engines: fraction-free Bareiss elimination, and a
//! multi-modular computation recombined by the Chinese remainder theorem
//! with a Hadamard bound deciding how many primes are needed.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::intmat::IntMatrix;
use crate::error::{Error, Result};

/// Dimension at or below which [`exact_determinant`] uses Bareiss.
pub const BAREISS_MAX_DIM: usize = 64;

pub fn exact_determinant(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "determinant of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if a.rows() <= BAREISS_MAX_DIM {
        det_bareiss(a)
    } else {
        det_crt(a)
    }
}

pub fn det_bareiss(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("non-square determinant".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m: Vec<Vec<BigInt>> = a.to_rows();
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        bottom.par_iter_mut().for_each(|row| {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let num = &row[j] * &pivot_row[k] - &lead * &pivot_row[j];
                row[j] = num / &prev;
            }
        });
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Multi-modular determinant. Primes just below `2^31` are taken until their
/// product exceeds twice the Hadamard bound.
pub fn det_crt(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("non-square determinant".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let bound = hadamard_bound(a);
    let target = bound * 2u32;
    let mut primes = Vec::new();
    let mut product = BigUint::one();
    let mut candidate: u64 = (1 << 31) - 1;
    while product <= target {
        if is_prime_u64(candidate) {
            primes.push(candidate);
            product *= candidate;
        }
        candidate -= 2;
    }
    let residues: Vec<u64> = primes.par_iter().map(|&q| det_mod_prime(a, q)).collect();

    // Garner-free incremental CRT: x ≡ r_i mod q_i.
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (&q, &r) in primes.iter().zip(&residues) {
        let qb = BigInt::from(q);
        let xm = x.mod_floor(&qb).to_u64().expect("small");
        let mm = modulus.mod_floor(&qb).to_u64().expect("small");
        let inv = mod_inverse(mm, q).expect("distinct primes");
        let delta = ((r + q - xm) % q) as u128 * inv as u128 % q as u128;
        x += &modulus * BigInt::from(delta as u64);
        modulus *= qb;
    }
    let half = &modulus >> 1;
    if x > half {
        x -= &modulus;
    }
    Ok(x)
}

/// Product of the Euclidean row norms, each rounded up.
pub fn hadamard_bound(a: &IntMatrix) -> BigUint {
    let mut bound = BigUint::one();
    for i in 0..a.rows() {
        let sq: BigUint = a
            .row(i)
            .iter()
            .map(|x| x.magnitude() * x.magnitude())
            .sum();
        let root = sq.sqrt();
        let root = if &root * &root == sq { root } else { root + 1u32 };
        bound *= root;
    }
    bound
}

pub(crate) fn det_mod_prime(a: &IntMatrix, q: u64) -> u64 {
    let n = a.rows();
    let qb = BigInt::from(q);
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| x.mod_floor(&qb).to_u64().expect("reduced"))
                .collect()
        })
        .collect();
    let mut det: u64 = 1;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            m.swap(piv, k);
            det = (q - det) % q;
        }
        det = mulmod(det, m[k][k], q);
        let inv = mod_inverse(m[k][k], q).expect("nonzero mod prime");
        for i in k + 1..n {
            if m[i][k] == 0 {
                continue;
            }
            let f = mulmod(m[i][k], inv, q);
            for j in k..n {
                let sub = mulmod(f, m[k][j], q);
                m[i][j] = (m[i][j] + q - sub) % q;
            }
        }
    }
    det
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub(crate) fn mod_inverse(a: u64, q: u64) -> Option<u64> {
    let g = BigInt::from(a).extended_gcd(&BigInt::from(q));
    if !g.gcd.is_one() {
        return None;
    }
    let x = g.x.mod_floor(&BigInt::from(q));
    x.to_u64()
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Sign helper used by callers that only need `|det|`.
pub fn abs_determinant(a: &IntMatrix) -> Result<BigUint> {
    let d = exact_determinant(a)?;
    Ok(match d.sign() {
        Sign::NoSign => BigUint::zero(),
        _ => d.abs().to_biguint().expect("nonnegative"),
    })
}

//! Univariate polynomials: numeric complex roots and a small exact toolkit
//! over `Q` (gcd, Sturm counts) used to certify roots on the unit circle.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// All complex roots of `Σ coeffs[i] z^i` (low to high), with multiplicity.
///
/// Aberth–Ehrlich iteration followed by a few Newton steps per root.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    while c.len() > 1 && c.last().is_some_and(|x| x.norm() <= 1e-300 + scale * 1e-15) {
        c.pop();
    }
    let mut zeros = 0;
    while c.len() > 1 && c[0].norm() == 0.0 {
        c.remove(0);
        zeros += 1;
    }
    let n = c.len() - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if n == 0 {
        return out;
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    // Fujiwara-style radius for the initial circle.
    let radius = (0..n)
        .map(|i| monic[i].norm().powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval_with_derivative(&monic, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (v, d) = eval_with_derivative(&monic, *r);
            if d.norm() == 0.0 {
                break;
            }
            let step = v / d;
            if !step.is_finite() || step.norm() < 1e-18 * r.norm().max(1.0) {
                break;
            }
            *r -= step;
        }
    }
    out.extend(z);
    out
}

/// Roots of an integer polynomial given low to high.
pub fn integer_polynomial_roots(coeffs: &[BigInt]) -> Vec<Complex64> {
    use num_traits::ToPrimitive;
    let c: Vec<Complex64> = coeffs
        .iter()
        .map(|x| Complex64::new(x.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    polynomial_roots(&c)
}

fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        d = d * z + v;
        v = v * z + a;
    }
    (v, d)
}

/// Dense polynomial over `Q`, low to high, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<BigRational>);

impl QPoly {
    pub fn from_integers(c: &[BigInt]) -> Self {
        let mut p = QPoly(c.iter().cloned().map(BigRational::from_integer).collect());
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.0.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * x + a)
    }

    pub fn derivative(&self) -> Self {
        let mut p = QPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        );
        p.trim();
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = BigRational::zero();
        let mut p = QPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) - other.0.get(i).unwrap_or(&z))
                .collect(),
        );
        p.trim();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QPoly(Vec::new());
        }
        let mut c = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        let mut p = QPoly(c);
        p.trim();
        p
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut p = QPoly(self.0.iter().map(|a| a * s).collect());
        p.trim();
        p
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lead().expect("division by zero polynomial").clone();
        let dd = d.degree().unwrap();
        let mut r = self.clone();
        let mut q = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead().unwrap() / &dl;
            let shift = rd - dd;
            for (i, a) in d.0.iter().enumerate() {
                r.0[i + shift] -= &c * a;
            }
            q[shift] = c;
            r.trim();
        }
        let mut q = QPoly(q);
        q.trim();
        (q, r)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&(BigRational::one() / l)),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `z^deg f(1/z)`.
    pub fn reciprocal(&self) -> Self {
        let mut c = self.0.clone();
        c.reverse();
        let mut p = QPoly(c);
        p.trim();
        p
    }

    /// Number of distinct real roots in `(a, b]` by Sturm's theorem.
    pub fn count_real_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].divrem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-BigRational::one()));
        }
        let changes = |x: &BigRational| -> usize {
            let signs: Vec<i8> = seq
                .iter()
                .map(|p| {
                    let v = p.eval(x);
                    if v.is_positive() {
                        1
                    } else if v.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .filter(|&s| s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        changes(a).saturating_sub(changes(b))
    }
}

/// Whether the integer polynomial (low to high, nonzero constant term) has a
/// root on the unit circle, decided exactly. Returns the witness description.
pub fn unit_circle_root(coeffs: &[BigInt]) -> Option<String> {
    let f = QPoly::from_integers(coeffs);
    let deg = f.degree()?;
    if deg == 0 {
        return None;
    }
    let one = BigRational::one();
    if f.eval(&one).is_zero() {
        return Some("root z = 1".into());
    }
    if f.eval(&-one.clone()).is_zero() {
        return Some("root z = -1".into());
    }
    // Roots on |z| = 1 are common roots of f and its reciprocal.
    let g = f.gcd(&f.reciprocal());
    let Some(gd) = g.degree() else { return None };
    if gd == 0 {
        return None;
    }
    // g is palindromic of even degree 2m: g(z) = z^m h(z + 1/z).
    let m = gd / 2;
    let c = &g.0;
    let x = QPoly(vec![BigRational::zero(), BigRational::one()]);
    let mut d_prev = QPoly(vec![BigRational::from_integer(2.into())]);
    let mut d_cur = x.clone();
    let mut h = QPoly(vec![c[m].clone()]);
    for k in 1..=m {
        if k > 1 {
            let next = x.mul(&d_cur).sub(&d_prev);
            d_prev = std::mem::replace(&mut d_cur, next);
        }
        h = h.sub(&d_cur.scale(&-c[m + k].clone()));
    }
    let two = BigRational::from_integer(2.into());
    let n = h.count_real_roots(&-two.clone(), &two);
    (n > 0).then(|| format!("{n} conjugate pair(s) of roots on |z| = 1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn numeric_roots() {
        let r = integer_polynomial_roots(&ints(&[-2, 1]));
        assert!((r[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        let mut r = integer_polynomial_roots(&ints(&[6, -5, 1]));
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0].re - 2.0).abs() < 1e-12 && (r[1].re - 3.0).abs() < 1e-12);
        let r = integer_polynomial_roots(&ints(&[1, 1, 1]));
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn repeated_roots_converge() {
        let r = integer_polynomial_roots(&ints(&[1, -3, 3, -1]));
        for z in r {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn circle_certification() {
        assert!(unit_circle_root(&ints(&[-1, 1])).is_some());
        assert!(unit_circle_root(&ints(&[1, 1, 1])).is_some());
        assert!(unit_circle_root(&ints(&[-2, 1])).is_none());
        assert!(unit_circle_root(&ints(&[4, -3])).is_none());
        // Lehmer-type: 1 - 3z + z^2 has reciprocal roots off the circle.
        assert!(unit_circle_root(&ints(&[1, -3, 1])).is_none());
        // z^4 + 1 has all roots on the circle.
        assert!(unit_circle_root(&ints(&[1, 0, 0, 0, 1])).is_some());
        // (z^2 + z + 1)(z - 3)
        assert!(unit_circle_root(&ints(&[-3, -2, -2, 1])).is_some());
    }

    #[test]
    fn sturm_counts() {
        // (x - 1)(x + 1)(x - 3)
        let p = QPoly::from_integers(&ints(&[3, -1, -3, 1]));
        let r = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(p.count_real_roots(&r(-2), &r(2)), 2);
        assert_eq!(p.count_real_roots(&r(-5), &r(5)), 3);
    }
}

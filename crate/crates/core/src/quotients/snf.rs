//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::intmat::IntMatrix;

/// Result of a Smith normal form computation.
///
/// `divisors` has `min(rows, cols)` entries, non-negative, with
/// `divisors[i] | divisors[i + 1]` (zeros last). When transforms were
/// requested, `u * a * v` is the diagonal matrix carrying `divisors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub divisors: Vec<BigInt>,
    pub rank: usize,
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
}

impl SmithForm {
    /// The divisors other than 0 and 1, i.e. the invariant factors of the
    /// torsion of the cokernel.
    pub fn torsion_divisors(&self) -> Vec<BigInt> {
        self.divisors
            .iter()
            .filter(|d| !d.is_zero() && *d != &BigInt::from(1))
            .cloned()
            .collect()
    }
}

/// Divisors only. The rank `r` and a nonzero `r x r` minor `D` come from
/// fraction-free elimination; since `D` is a multiple of every invariant
/// factor, the diagonalization then runs modulo `D`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rank, minor) = rank_and_minor(a);
    let mut divisors = snf_mod(a, rank, &minor);
    divisors.resize(a.rows().min(a.cols()), BigInt::zero());
    SmithForm {
        divisors,
        rank,
        u: None,
        v: None,
    }
}

pub fn smith_normal_form_with_transforms(a: &IntMatrix) -> SmithForm {
    snf_impl(a, true)
}

pub fn integer_rank(a: &IntMatrix) -> usize {
    rank_and_minor(a).0
}

/// Rank `r` and `|det|` of some nonsingular `r x r` submatrix (1 when `r = 0`),
/// by Bareiss elimination with full pivoting.
pub fn rank_and_minor(a: &IntMatrix) -> (usize, BigInt) {
    let (m, n) = (a.rows(), a.cols());
    let mut w: Vec<Vec<BigInt>> = a.to_rows();
    let mut prev = BigInt::one();
    let mut k = 0;
    while k < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in w.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.magnitude() < w[bi][bj].magnitude()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap(k, pi);
        for row in w.iter_mut() {
            row.swap(k, pj);
        }
        let (top, rest) = w.split_at_mut(k + 1);
        let pivot_row = &top[k];
        rest.par_iter_mut().for_each(|row| {
            let f = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let v = &pivot_row[k] * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
        });
        prev = w[k][k].clone();
        k += 1;
    }
    (k, prev.abs())
}

/// A unimodular `[[s, t], [u, v]]` sending `(a, b)` to `(gcd, 0)`. Plain
/// elimination when `a | b`, so the pivot only changes when it shrinks.
fn combiner(a: &BigInt, b: &BigInt) -> [BigInt; 4] {
    if !a.is_zero() && b.is_multiple_of(a) {
        return [BigInt::one(), BigInt::zero(), -(b / a), BigInt::one()];
    }
    let e = a.extended_gcd(b);
    [e.x, e.y, -(b / &e.gcd), a / &e.gcd]
}

/// Nonzero invariant factors of a rank-`rank` matrix, given a nonzero
/// multiple `modulus` of the largest one.
fn snf_mod(a: &IntMatrix, rank: usize, modulus: &BigInt) -> Vec<BigInt> {
    let md = modulus.abs();
    if md.is_one() || rank == 0 {
        return vec![BigInt::one(); rank];
    }
    let (m, n) = (a.rows(), a.cols());
    let mut w: Vec<Vec<BigInt>> = a
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.mod_floor(&md)).collect())
        .collect();
    let mut diag = Vec::with_capacity(rank);
    for k in 0..m.min(n) {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (i, row) in w.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if x.is_zero() {
                    continue;
                }
                let g = x.gcd(&md);
                if best.as_ref().map_or(true, |b| g < b.2) {
                    let one = g.is_one();
                    best = Some((i, j, g));
                    if one {
                        break;
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        w.swap(k, pi);
        for row in w.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            for i in k + 1..m {
                if w[i][k].is_zero() {
                    continue;
                }
                let [s, t, u, v] = combiner(&w[k][k], &w[i][k]);
                for j in k..n {
                    let (x, y) = (&w[k][j], &w[i][j]);
                    let nk = (&s * x + &t * y).mod_floor(&md);
                    let ni = (&u * x + &v * y).mod_floor(&md);
                    w[k][j] = nk;
                    w[i][j] = ni;
                }
            }
            for j in k + 1..n {
                if w[k][j].is_zero() {
                    continue;
                }
                let [s, t, u, v] = combiner(&w[k][k], &w[k][j]);
                for row in w.iter_mut().skip(k) {
                    let nk = (&s * &row[k] + &t * &row[j]).mod_floor(&md);
                    let nj = (&u * &row[k] + &v * &row[j]).mod_floor(&md);
                    row[k] = nk;
                    row[j] = nj;
                }
            }
            // Column operations may refill column k below the pivot.
            if (k + 1..m).any(|i| !w[i][k].is_zero()) {
                continue;
            }
            let g = w[k][k].gcd(&md);
            let bad = (k + 1..m).find(|&i| w[i][k + 1..].iter().any(|x| !x.is_multiple_of(&g)));
            match bad {
                Some(i) => {
                    for j in k..n {
                        let v = (&w[k][j] + &w[i][j]).mod_floor(&md);
                        w[k][j] = v;
                    }
                }
                None => break,
            }
        }
        diag.push(w[k][k].gcd(&md));
        if diag.len() == rank {
            break;
        }
    }
    // A factor equal to the modulus reduces to zero and ends the loop early.
    diag.resize(rank, md);
    diag
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, c);
        }
    }
    /// Rows `(k, i) <- [[s, t], [u, v]] (k, i)` for a unimodular `[s, t, u, v]`.
    fn combine_rows(&mut self, k: usize, i: usize, c: &[BigInt; 4]) {
        fn apply(a: &mut IntMatrix, k: usize, i: usize, [s, t, u, v]: &[BigInt; 4]) {
            for j in 0..a.cols() {
                let (x, y) = (a[(k, j)].clone(), a[(i, j)].clone());
                a[(k, j)] = s * &x + t * &y;
                a[(i, j)] = u * &x + v * &y;
            }
        }
        apply(&mut self.a, k, i, c);
        if let Some(u) = &mut self.u {
            apply(u, k, i, c);
        }
    }
    /// The column analogue of `combine_rows`.
    fn combine_cols(&mut self, k: usize, j: usize, c: &[BigInt; 4]) {
        fn apply(a: &mut IntMatrix, k: usize, j: usize, [s, t, u, v]: &[BigInt; 4]) {
            for i in 0..a.rows() {
                let (x, y) = (a[(i, k)].clone(), a[(i, j)].clone());
                a[(i, k)] = s * &x + t * &y;
                a[(i, j)] = u * &x + v * &y;
            }
        }
        apply(&mut self.a, k, j, c);
        if let Some(v) = &mut self.v {
            apply(v, k, j, c);
        }
    }
    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }
}

fn snf_impl(input: &IntMatrix, transforms: bool) -> SmithForm {
    let (m, n) = (input.rows(), input.cols());
    let mut w = Work {
        a: input.clone(),
        u: transforms.then(|| IntMatrix::identity(m)),
        v: transforms.then(|| IntMatrix::identity(n)),
    };
    let mut rank = 0;
    for k in 0..m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                let x = &w.a[(i, j)];
                if !x.is_zero()
                    && best.map_or(true, |(bi, bj)| x.abs() < w.a[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        loop {
            for i in k + 1..m {
                if !w.a[(i, k)].is_zero() {
                    let c = combiner(&w.a[(k, k)], &w.a[(i, k)]);
                    w.combine_rows(k, i, &c);
                }
            }
            for j in k + 1..n {
                if !w.a[(k, j)].is_zero() {
                    let c = combiner(&w.a[(k, k)], &w.a[(k, j)]);
                    w.combine_cols(k, j, &c);
                }
            }
            // Column operations may refill column k below the pivot.
            if (k + 1..m).any(|i| !w.a[(i, k)].is_zero()) {
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let piv = w.a[(k, k)].clone();
            let bad = (k + 1..m).find(|&i| (k + 1..n).any(|j| !w.a[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => w.add_row(k, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[(k, k)].is_negative() {
            w.negate_row(k);
        }
        rank += 1;
    }
    let divisors = (0..m.min(n)).map(|i| w.a[(i, i)].clone()).collect();
    SmithForm {
        divisors,
        rank,
        u: w.u,
        v: w.v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divs(rows: &[Vec<i64>]) -> Vec<i64> {
        let a = IntMatrix::from_rows(rows).unwrap();
        smith_normal_form(&a)
            .divisors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn documented_examples() {
        assert_eq!(divs(&[vec![2, 0], vec![0, 4]]), vec![2, 4]);
        assert_eq!(divs(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(divs(&[vec![0, 0], vec![0, 0]]), vec![0, 0]);
    }

    #[test]
    fn divisibility_is_enforced() {
        assert_eq!(divs(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(divs(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]), vec![2, 2, 60]);
    }

    #[test]
    fn modular_matches_plain_elimination() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]],
            vec![vec![0, 2, 0], vec![0, 0, 0]],
            vec![vec![1, 1], vec![1, 1], vec![2, 2]],
            vec![vec![6, 0, 0], vec![0, 10, 0], vec![0, 0, 15], vec![0, 0, 0]],
            vec![vec![4, -3, 0], vec![0, 4, -3], vec![-3, 0, 4]],
            vec![vec![9, 0], vec![0, 9]],
        ];
        for c in cases {
            let a = IntMatrix::from_rows(&c).unwrap();
            assert_eq!(smith_normal_form(&a).divisors, snf_impl(&a, false).divisors, "{c:?}");
        }
    }

    #[test]
    fn large_circulant_is_fast() {
        let n = 40;
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 4;
            rows[(i + 1) % n][i] = -3;
        }
        let a = IntMatrix::from_rows(&rows).unwrap();
        let s = smith_normal_form(&a);
        let det: BigInt = s.divisors.iter().product();
        assert_eq!(det, BigInt::from(4).pow(40) - BigInt::from(3).pow(40));
    }

    #[test]
    fn transforms_reproduce_the_diagonal() {
        let a = IntMatrix::from_rows(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5], vec![3, 5, 8]])
            .unwrap();
        let s = smith_normal_form_with_transforms(&a);
        let d = s
            .u
            .as_ref()
            .unwrap()
            .try_mul(&a)
            .unwrap()
            .try_mul(s.v.as_ref().unwrap())
            .unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let want = if i == j { s.divisors[i].clone() } else { BigInt::zero() };
                assert_eq!(d[(i, j)], want);
            }
        }
    }
}

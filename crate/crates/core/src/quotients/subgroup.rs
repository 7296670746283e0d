//! Finite-index subgroups of `Z^N` and the quotient groups they define.

use serde::{Deserialize, Serialize};

use super::intmat::IntMatrix;
use crate::error::{Error, Result};
use crate::ring::{LaurentMatrix, LaurentPoly};

/// A sublattice of `Z^N` of finite index, stored by its column Hermite
/// normal form: upper triangular, positive diagonal, and
/// `0 <= basis[i][j] < basis[i][i]` for `j > i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteIndexSubgroup {
    rank: usize,
    basis: Vec<Vec<i64>>,
    index: u64,
}

impl FiniteIndexSubgroup {
    /// The lattice spanned by the columns of `a`.
    pub fn from_matrix(a: &[Vec<i64>]) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("empty generator matrix".into()));
        }
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "subgroup generators must form a square {n}x{n} matrix"
            )));
        }
        let mut b: Vec<Vec<i128>> = a
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        for i in (0..n).rev() {
            // Column gcd sweep on row i over the active columns 0..=i.
            for j in 0..i {
                if b[i][j] == 0 {
                    continue;
                }
                let (g, x, y) = ext_gcd(b[i][i], b[i][j]);
                let (ci, cj) = (b[i][i] / g, b[i][j] / g);
                for row in b.iter_mut() {
                    let (u, v) = (row[i], row[j]);
                    row[i] = x * u + y * v;
                    row[j] = -cj * u + ci * v;
                }
            }
            if b[i][i] == 0 {
                return Err(Error::Singular);
            }
            if b[i][i] < 0 {
                for row in b.iter_mut() {
                    row[i] = -row[i];
                }
            }
            for j in i + 1..n {
                let q = b[i][j].div_euclid(b[i][i]);
                if q != 0 {
                    for row in b.iter_mut() {
                        row[j] -= q * row[i];
                    }
                }
            }
        }
        let mut index: u64 = 1;
        let mut basis = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                basis[i][j] = i64::try_from(b[i][j])
                    .map_err(|_| Error::ShapeMismatch("subgroup entries overflow".into()))?;
            }
            index = index
                .checked_mul(basis[i][i] as u64)
                .ok_or_else(|| Error::ShapeMismatch("subgroup index overflows".into()))?;
        }
        Ok(FiniteIndexSubgroup {
            rank: n,
            basis,
            index,
        })
    }

    /// `n Z^N`.
    pub fn diagonal(rank: usize, n: i64) -> Result<Self> {
        let a: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { n } else { 0 }).collect())
            .collect();
        Self::from_matrix(&a)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Canonical representative of `v + Δ` inside the Hermite box.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for i in (0..self.rank).rev() {
            let q = v[i].div_euclid(self.basis[i][i]);
            if q != 0 {
                for (k, x) in v.iter_mut().enumerate().take(i + 1) {
                    *x -= q * self.basis[k][i];
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn quotient(&self) -> QuotientGroup {
        QuotientGroup::new(self.clone())
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// `Z^N / Δ` with coset representatives enumerated lexicographically over
/// the Hermite box.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    subgroup: FiniteIndexSubgroup,
    reps: Vec<Vec<i64>>,
}

impl QuotientGroup {
    pub fn new(subgroup: FiniteIndexSubgroup) -> Self {
        let n = subgroup.rank;
        let dims: Vec<i64> = (0..n).map(|i| subgroup.basis[i][i]).collect();
        let mut reps = Vec::with_capacity(subgroup.index as usize);
        let mut cur = vec![0i64; n];
        loop {
            reps.push(cur.clone());
            let mut k = n;
            loop {
                if k == 0 {
                    return QuotientGroup { subgroup, reps };
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < dims[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    pub fn subgroup(&self) -> &FiniteIndexSubgroup {
        &self.subgroup
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Vec<i64>] {
        &self.reps
    }

    /// Position of the coset of `v` in [`Self::reps`].
    pub fn position(&self, v: &[i64]) -> usize {
        let r = self.subgroup.reduce(v);
        let mut pos = 0usize;
        for (i, x) in r.iter().enumerate() {
            pos = pos * self.subgroup.basis[i][i] as usize + *x as usize;
        }
        pos
    }

    /// Matrix of multiplication by `f` on `Z[Z^N / Δ]`; column `j` is `f * rep_j`.
    pub fn action_matrix(&self, f: &LaurentPoly) -> Result<IntMatrix> {
        if f.rank() != self.subgroup.rank {
            return Err(Error::RankMismatch {
                expected: self.subgroup.rank,
                found: f.rank(),
            });
        }
        let n = self.order();
        let mut out = IntMatrix::zeros(n, n);
        self.fill_block(f, &mut out, 0, 0);
        Ok(out)
    }

    /// Blockwise action matrix of a matrix over the group ring.
    pub fn action_matrix_of(&self, f: &LaurentMatrix) -> Result<IntMatrix> {
        if f.rank() != self.subgroup.rank {
            return Err(Error::RankMismatch {
                expected: self.subgroup.rank,
                found: f.rank(),
            });
        }
        let n = self.order();
        let mut out = IntMatrix::zeros(f.rows() * n, f.cols() * n);
        for i in 0..f.rows() {
            for j in 0..f.cols() {
                self.fill_block(f.get(i, j), &mut out, i * n, j * n);
            }
        }
        Ok(out)
    }

    fn fill_block(&self, f: &LaurentPoly, out: &mut IntMatrix, r0: usize, c0: usize) {
        if f.is_zero() {
            return;
        }
        let mut shifted = vec![0i64; self.subgroup.rank];
        for (j, rep) in self.reps.iter().enumerate() {
            for (m, c) in f.terms() {
                for (k, s) in shifted.iter_mut().enumerate() {
                    *s = rep[k] + m.0[k];
                }
                let i = self.position(&shifted);
                out[(r0 + i, c0 + j)] += c;
            }
        }
    }
}

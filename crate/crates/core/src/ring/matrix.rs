use std::fmt;

use super::parse::parse_poly;
use super::poly::{LaurentPoly, Monomial};
use crate::error::{Error, Result};

/// A rectangular matrix over `Z[t1^±1, ..., tN^±1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    rank: usize,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rank: usize, rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rank,
            rows,
            cols,
            entries: vec![LaurentPoly::zero(rank); rows * cols],
        }
    }

    pub fn identity(rank: usize, n: usize) -> Self {
        let mut m = Self::zeros(rank, n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(rank));
        }
        m
    }

    pub fn scalar(f: LaurentPoly) -> Self {
        LaurentMatrix {
            rank: f.rank(),
            rows: 1,
            cols: 1,
            entries: vec![f],
        }
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let rank = rows
            .iter()
            .flatten()
            .map(LaurentPoly::rank)
            .next()
            .unwrap_or(1);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch("ragged matrix rows".into()));
            }
            for f in row {
                if f.rank() != rank {
                    return Err(Error::RankMismatch {
                        expected: rank,
                        found: f.rank(),
                    });
                }
                entries.push(f);
            }
        }
        Ok(LaurentMatrix {
            rank,
            rows: r,
            cols: c,
            entries,
        })
    }

    /// Parse a row-major array of polynomial strings at a fixed rank.
    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>], rank: usize) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| parse_poly(s.as_ref(), Some(rank))).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let mut m = Self::from_rows(parsed)?;
        m.rank = rank;
        Ok(m)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: LaurentPoly) {
        assert_eq!(f.rank(), self.rank);
        self.entries[i * self.cols + j] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.rank, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(LaurentMatrix { entries, ..*self })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(LaurentMatrix { entries, ..*self })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rank, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LaurentPoly::zero(self.rank);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Block diagonal sum `[[self, 0], [0, other]]`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        let mut out = Self::zeros(self.rank, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Exact determinant in the Laurent ring.
    ///
    /// Cofactor expansion up to 4x4, fraction-free Bareiss elimination above.
    pub fn det_symbolic(&self) -> Result<LaurentPoly> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows <= 4 {
            Ok(self.det_cofactor())
        } else {
            self.det_bareiss()
        }
    }

    pub(crate) fn det_cofactor(&self) -> LaurentPoly {
        let n = self.rows;
        let idx: Vec<usize> = (0..n).collect();
        cofactor(self, 0, &idx)
    }

    /// Bareiss over `Z[t^±]`. Each pivot step divides exactly by the previous
    /// pivot; rows are swapped to avoid zero pivots.
    pub(crate) fn det_bareiss(&self) -> Result<LaurentPoly> {
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::one(self.rank));
        }
        let mut a: Vec<Vec<LaurentPoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut prev = LaurentPoly::one(self.rank);
        let mut negate = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return Ok(LaurentPoly::zero(self.rank)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.exact_div(&prev)?;
                }
                a[i][k] = LaurentPoly::zero(self.rank);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -&d } else { d })
    }

    /// Whether every entry of `self - I` lies in `p * Z[t^±]`.
    pub fn is_one_mod(&self, p: u64) -> bool {
        if !self.is_square() {
            return false;
        }
        let id = Self::identity(self.rank, self.rows);
        let diff = self.try_sub(&id).expect("same shape");
        diff.entries
            .iter()
            .all(|f| f.is_zero() || f.content_valuation(p).is_some_and(|v| v >= 1))
    }

    /// Monomial unit `±t^a` placed at `(i, i)` of an identity matrix.
    pub fn monomial_unit(rank: usize, n: usize, i: usize, sign: i64, m: Monomial) -> Self {
        let mut out = Self::identity(rank, n);
        out.set(i, i, LaurentPoly::monomial(rank, sign, m));
        out
    }

    /// Elementary matrix `I + f * e_{ij}` with `i != j`.
    pub fn elementary(rank: usize, n: usize, i: usize, j: usize, f: LaurentPoly) -> Self {
        assert_ne!(i, j, "elementary matrices are off-diagonal");
        let mut out = Self::identity(rank, n);
        out.set(i, j, f);
        out
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

fn cofactor(m: &LaurentMatrix, row: usize, cols: &[usize]) -> LaurentPoly {
    if cols.is_empty() {
        return LaurentPoly::one(m.rank);
    }
    let mut acc = LaurentPoly::zero(m.rank);
    for (k, &c) in cols.iter().enumerate() {
        let a = m.get(row, c);
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = a * &cofactor(m, row + 1, &rest);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

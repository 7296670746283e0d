//! Milnor torsion of based integer complexes that are acyclic over `Q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quotients::{homology, IntMatrix, IntegerComplex};

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_int(a: &IntMatrix) -> Self {
        let mut m = Self::zeros(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m.data[i * a.cols() + j] = BigRational::from_integer(a[(i, j)].clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn try_mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &QMatrix) -> Result<QMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("matrix sum shapes differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Columns `idx` of `self`, in the given order.
    fn select_cols(&self, idx: &[usize]) -> QMatrix {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    /// Pivot columns of the row echelon form, scanning columns in `order`.
    fn pivot_columns(&self, order: &[usize]) -> Vec<usize> {
        let mut m = self.select_cols(order);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).recip();
            for i in r + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(order[c]);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Inverse and determinant by Gauss-Jordan elimination.
    pub fn inverse_det(&self) -> Result<(QMatrix, BigRational)> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let mut det = BigRational::one();
        for c in 0..n {
            let pr = (c..n).find(|&i| !a.get(i, c).is_zero()).ok_or(Error::Singular)?;
            if pr != c {
                a.swap_rows(pr, c);
                inv.swap_rows(pr, c);
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            let pinv = piv.recip();
            for j in 0..n {
                a.set(c, j, a.get(c, j) * &pinv);
                inv.set(c, j, inv.get(c, j) * &pinv);
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - &f * a.get(c, j));
                    inv.set(i, j, inv.get(i, j) - &f * inv.get(c, j));
                }
            }
        }
        Ok((inv, det))
    }

    pub fn determinant(&self) -> Result<BigRational> {
        match self.inverse_det() {
            Ok((_, d)) => Ok(d),
            Err(Error::Singular) => Ok(BigRational::zero()),
            Err(e) => Err(e),
        }
    }
}

/// An integer complex whose chain groups carry their standard bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedComplex {
    complex: IntegerComplex,
}

impl BasedComplex {
    pub fn new(boundaries: Vec<IntMatrix>) -> Result<Self> {
        Ok(BasedComplex {
            complex: IntegerComplex::new(boundaries)?,
        })
    }

    pub fn from_complex(complex: IntegerComplex) -> Self {
        BasedComplex { complex }
    }

    pub fn complex(&self) -> &IntegerComplex {
        &self.complex
    }

    pub fn shifted(&self) -> Self {
        BasedComplex {
            complex: self.complex.shifted(),
        }
    }

    /// Replaces the basis of `C_degree` via `S`: `∂_degree ↦ ∂_degree S` and
    /// `∂_{degree+1} ↦ S^{-1} ∂_{degree+1}`.
    pub fn change_basis(&self, degree: usize, s: &IntMatrix, s_inv: &IntMatrix) -> Result<Self> {
        let ranks = self.complex.ranks();
        let n = *ranks
            .get(degree)
            .ok_or_else(|| Error::ShapeMismatch(format!("no chain group in degree {degree}")))?;
        if s.try_mul(s_inv)? != IntMatrix::identity(n) {
            return Err(Error::ShapeMismatch("basis change is not inverted by s_inv".into()));
        }
        let mut b: Vec<IntMatrix> = self.complex.boundaries().to_vec();
        if degree >= 1 {
            b[degree - 1] = b[degree - 1].try_mul(s)?;
        }
        if degree < b.len() {
            b[degree] = s_inv.try_mul(&b[degree])?;
        }
        Ok(BasedComplex {
            complex: IntegerComplex::new_unchecked(b)?,
        })
    }

    /// Normal-form complex `⊕ (Z -D-> Z)` conjugated by elementary moves.
    ///
    /// `blocks[i - 1]` lists the diagonal entries of the pieces joining
    /// degrees `i` and `i - 1`. Each move `(degree, j, k, c)` applies the
    /// basis change `e_j ↦ e_j + c e_k` in `C_degree` (requires `j != k`).
    pub fn normal_form(blocks: &[Vec<i64>], moves: &[(usize, usize, usize, i64)]) -> Result<Self> {
        let d = blocks.len();
        if d == 0 {
            return Err(Error::ShapeMismatch("normal form needs at least one block".into()));
        }
        let m = |i: usize| if (1..=d).contains(&i) { blocks[i - 1].len() } else { 0 };
        // C_i = Z^{m_i} (sources of ∂_i) ⊕ Z^{m_{i+1}} (targets of ∂_{i+1}).
        let mut b: Vec<IntMatrix> = (1..=d)
            .map(|i| {
                let mut a = IntMatrix::zeros(m(i - 1) + m(i), m(i) + m(i + 1));
                for (k, &x) in blocks[i - 1].iter().enumerate() {
                    a[(m(i - 1) + k, k)] = BigInt::from(x);
                }
                a
            })
            .collect();
        let ranks: Vec<usize> = (0..=d).map(|i| m(i) + m(i + 1)).collect();
        for &(g, j, k, c) in moves {
            if g > d || j == k || j >= ranks[g] || k >= ranks[g] {
                return Err(Error::ShapeMismatch(format!("bad move ({g}, {j}, {k})")));
            }
            let c = BigInt::from(c);
            if g >= 1 {
                b[g - 1].add_col_multiple(k, j, &-c.clone());
            }
            if g < d {
                b[g].add_row_multiple(j, k, &c);
            }
        }
        Ok(BasedComplex {
            complex: IntegerComplex::new_unchecked(b)?,
        })
    }
}

/// How complements of the boundaries are chosen when building `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PivotStrategy {
    Leftmost,
    Rightmost,
}

fn check_acyclic(c: &IntegerComplex) -> Result<()> {
    for d in homology(c).degrees {
        if d.free_rank > 0 {
            return Err(Error::NotAcyclic {
                degree: d.degree,
                betti: d.free_rank,
            });
        }
    }
    Ok(())
}

/// A chain contraction `δ_i : C_i -> C_{i+1}` over `Q`, `i = 0..d-1`, with
/// `δ∂ + ∂δ = 1` checked exactly in every degree.
pub fn chain_contraction_rational(c: &BasedComplex, strategy: PivotStrategy) -> Result<Vec<QMatrix>> {
    let cx = c.complex();
    check_acyclic(cx)?;
    let d = cx.length();
    let ranks = cx.ranks();
    let bd: Vec<QMatrix> = cx.boundaries().iter().map(QMatrix::from_int).collect();
    // Pivot columns S_i ⊂ C_i on which ∂_i is injective onto its image.
    let pivots: Vec<Vec<usize>> = (0..=d + 1)
        .map(|i| {
            if i == 0 || i > d {
                return Vec::new();
            }
            let n = ranks[i];
            let order: Vec<usize> = match strategy {
                PivotStrategy::Leftmost => (0..n).collect(),
                PivotStrategy::Rightmost => (0..n).rev().collect(),
            };
            bd[i - 1].pivot_columns(&order)
        })
        .collect();
    let mut delta = Vec::with_capacity(d);
    for i in 0..d {
        // C_i = im ∂_{i+1} ⊕ span(S_i); δ_i inverts ∂_{i+1}|S_{i+1} on the first summand.
        let img = bd[i].select_cols(&pivots[i + 1]);
        let comp = QMatrix::identity(ranks[i]).select_cols(&pivots[i]);
        let r = img.cols;
        let mut basis = QMatrix::zeros(ranks[i], ranks[i]);
        for row in 0..ranks[i] {
            for col in 0..r {
                basis.set(row, col, img.get(row, col).clone());
            }
            for col in 0..comp.cols {
                basis.set(row, r + col, comp.get(row, col).clone());
            }
        }
        if r + comp.cols != ranks[i] {
            return Err(Error::NotAcyclic { degree: i, betti: ranks[i] - r - comp.cols });
        }
        let (inv, _) = basis.inverse_det()?;
        let mut di = QMatrix::zeros(ranks[i + 1], ranks[i]);
        for (k, &col) in pivots[i + 1].iter().enumerate() {
            for j in 0..ranks[i] {
                di.set(col, j, inv.get(k, j).clone());
            }
        }
        delta.push(di);
    }
    for i in 0..=d {
        let mut s = QMatrix::zeros(ranks[i], ranks[i]);
        if i >= 1 {
            s = s.try_add(&delta[i - 1].try_mul(&bd[i - 1])?)?;
        }
        if i < d {
            s = s.try_add(&bd[i].try_mul(&delta[i])?)?;
        }
        if s != QMatrix::identity(ranks[i]) {
            return Err(Error::ShapeMismatch(format!("contraction fails in degree {i}")));
        }
    }
    Ok(delta)
}

/// `(∂ + δ)` from odd to even degrees, in the declared bases.
pub fn odd_part(c: &BasedComplex, delta: &[QMatrix]) -> Result<QMatrix> {
    let cx = c.complex();
    let ranks = cx.ranks();
    let offsets = |parity: usize| -> Vec<Option<usize>> {
        let mut acc = 0;
        ranks
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                (i % 2 == parity).then(|| {
                    let o = acc;
                    acc += n;
                    o
                })
            })
            .collect()
    };
    let (even, odd) = (offsets(0), offsets(1));
    let ne: usize = ranks.iter().step_by(2).sum();
    let no: usize = ranks.iter().skip(1).step_by(2).sum();
    if ne != no {
        return Err(Error::ShapeMismatch(format!("odd part is {ne}x{no}")));
    }
    let mut m = QMatrix::zeros(ne, no);
    for i in (1..ranks.len()).step_by(2) {
        let col0 = odd[i].expect("odd degree");
        let b = QMatrix::from_int(cx.boundary(i));
        let row0 = even[i - 1].expect("even degree");
        for r in 0..b.rows {
            for k in 0..b.cols {
                m.set(row0 + r, col0 + k, b.get(r, k).clone());
            }
        }
        if i < delta.len() {
            let row0 = even[i + 1].expect("even degree");
            let dl = &delta[i];
            for r in 0..dl.rows {
                for k in 0..dl.cols {
                    m.set(row0 + r, col0 + k, dl.get(r, k).clone());
                }
            }
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionReport {
    /// `|det (∂ + δ)_odd|`.
    #[serde(with = "crate::serde_big::rational")]
    pub torsion_abs: BigRational,
    /// The same value from the second pivoting strategy.
    #[serde(with = "crate::serde_big::rational")]
    pub torsion_alt: BigRational,
    /// `|H_i|` for each degree.
    #[serde(with = "crate::serde_big::int_vec")]
    pub homology_orders: Vec<BigInt>,
    /// `Π |H_i|^{(-1)^i}`.
    #[serde(with = "crate::serde_big::rational")]
    pub homology_product: BigRational,
    #[serde(rename = "match")]
    pub matches: bool,
    pub strategies_agree: bool,
}

fn torsion_with(c: &BasedComplex, strategy: PivotStrategy) -> Result<BigRational> {
    let delta = chain_contraction_rational(c, strategy)?;
    Ok(odd_part(c, &delta)?.determinant()?.abs())
}

pub fn torsion_rational(c: &BasedComplex) -> Result<TorsionReport> {
    let torsion_abs = torsion_with(c, PivotStrategy::Leftmost)?;
    let torsion_alt = torsion_with(c, PivotStrategy::Rightmost)?;
    let h = homology(c.complex());
    let homology_product = h.euler_characteristic()?;
    Ok(TorsionReport {
        matches: torsion_abs == homology_product,
        strategies_agree: torsion_abs == torsion_alt,
        homology_orders: h.degrees.into_iter().map(|d| d.order).collect(),
        torsion_abs,
        torsion_alt,
        homology_product,
    })
}

/// Whether the torsion equals `Π |H_i|^{(-1)^i}`.
pub fn verify_torsion_formula(c: &BasedComplex) -> Result<bool> {
    let r = torsion_rational(c)?;
    Ok(r.matches && r.strategies_agree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn single(rows: &[Vec<i64>]) -> BasedComplex {
        BasedComplex::new(vec![IntMatrix::from_rows(rows).unwrap()]).unwrap()
    }

    #[test]
    fn one_step_contractions() {
        let c = single(&[vec![2]]);
        let d = chain_contraction_rational(&c, PivotStrategy::Leftmost).unwrap();
        assert_eq!(d[0].get(0, 0), &q(1, 2));
        let c = single(&[vec![1]]);
        let d = chain_contraction_rational(&c, PivotStrategy::Leftmost).unwrap();
        assert_eq!(d[0].get(0, 0), &q(1, 1));
        let c = single(&[vec![1, 1], vec![0, 2]]);
        let d = chain_contraction_rational(&c, PivotStrategy::Rightmost).unwrap();
        let (inv, _) = QMatrix::from_int(&IntMatrix::from_rows(&[vec![1, 1], vec![0, 2]]).unwrap())
            .inverse_det()
            .unwrap();
        assert_eq!(d[0], inv);
    }

    #[test]
    fn small_torsions() {
        let r = torsion_rational(&single(&[vec![2]])).unwrap();
        assert_eq!(r.torsion_abs, q(2, 1));
        assert!(r.matches);
        let r = torsion_rational(&single(&[vec![1, 1], vec![0, 2]])).unwrap();
        assert_eq!(r.torsion_abs, q(2, 1));
        assert_eq!(r.homology_orders[0], BigInt::from(2));
        assert_eq!(torsion_rational(&single(&[vec![1]])).unwrap().torsion_abs, q(1, 1));
        let six = single(&[vec![6]]);
        assert!(verify_torsion_formula(&six).unwrap());
        let r = torsion_rational(&six.shifted()).unwrap();
        assert_eq!(r.torsion_abs, q(1, 6));
        assert!(r.matches);
    }

    #[test]
    fn not_acyclic() {
        let c = single(&[vec![0]]);
        assert!(matches!(torsion_rational(&c), Err(Error::NotAcyclic { .. })));
    }

    #[test]
    fn normal_forms() {
        let c = BasedComplex::normal_form(
            &[vec![2, 3], vec![6], vec![1, 2]],
            &[(1, 0, 1, 2), (2, 2, 0, -1), (0, 1, 0, 3), (3, 0, 1, 1), (1, 2, 0, 1)],
        )
        .unwrap();
        assert!(IntegerComplex::new(c.complex().boundaries().to_vec()).is_ok());
        let r = torsion_rational(&c).unwrap();
        // (2*3) / 6 * (1*2)
        assert_eq!(r.torsion_abs, q(2, 1));
        assert!(r.matches && r.strategies_agree);
    }

    #[test]
    fn unimodular_basis_change() {
        let c = BasedComplex::normal_form(&[vec![2], vec![3, 1]], &[(1, 0, 1, 1)]).unwrap();
        let s = IntMatrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 0], vec![0, 0, -1]]).unwrap();
        let s_inv = IntMatrix::from_rows(&[vec![1, -2, 0], vec![0, 1, 0], vec![0, 0, -1]]).unwrap();
        let c2 = c.change_basis(1, &s, &s_inv).unwrap();
        assert_eq!(
            torsion_rational(&c).unwrap().torsion_abs,
            torsion_rational(&c2).unwrap().torsion_abs
        );
    }
}

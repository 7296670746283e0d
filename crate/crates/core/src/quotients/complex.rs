use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::intmat::IntMatrix;
use super::snf::{smith_normal_form, SmithForm};
use crate::error::{Error, Result};

/// A finite chain complex of free abelian groups
/// `C_d -> ... -> C_1 -> C_0`, with `boundaries[i - 1]` the map `C_i -> C_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerComplex {
    ranks: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl IntegerComplex {
    /// Checks shapes and that consecutive composites vanish.
    pub fn new(boundaries: Vec<IntMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(boundaries)?;
        for i in 1..c.boundaries.len() {
            if !c.boundaries[i - 1].try_mul(&c.boundaries[i])?.is_zero() {
                return Err(Error::CompositeNonzero { index: i });
            }
        }
        Ok(c)
    }

    /// Shape checks only; the composite-zero property is the caller's promise.
    pub fn new_unchecked(boundaries: Vec<IntMatrix>) -> Result<Self> {
        if boundaries.is_empty() {
            return Err(Error::ShapeMismatch("complex needs at least one boundary".into()));
        }
        let mut ranks = vec![boundaries[0].rows()];
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != ranks[i] {
                return Err(Error::ShapeMismatch(format!(
                    "boundary {} has {} rows, expected {}",
                    i + 1,
                    b.rows(),
                    ranks[i]
                )));
            }
            ranks.push(b.cols());
        }
        Ok(IntegerComplex { ranks, boundaries })
    }

    /// Length `d` (number of boundary maps).
    pub fn length(&self) -> usize {
        self.boundaries.len()
    }

    /// Ranks of `C_0, ..., C_d`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// The map `C_i -> C_{i-1}` for `1 <= i <= d`.
    pub fn boundary(&self, i: usize) -> &IntMatrix {
        &self.boundaries[i - 1]
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.boundaries
    }

    /// Shift all degrees up by one, prepending a zero `C_0`.
    pub fn shifted(&self) -> Self {
        let mut boundaries = vec![IntMatrix::zeros(0, self.ranks[0])];
        boundaries.extend(self.boundaries.iter().cloned());
        IntegerComplex::new_unchecked(boundaries).expect("shapes chain")
    }

    pub fn homology(&self) -> HomologySummary {
        homology(self)
    }
}

/// Homology of one degree: `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeHomology {
    pub degree: usize,
    pub free_rank: usize,
    #[serde(with = "crate::serde_big::int_vec")]
    pub divisors: Vec<BigInt>,
    /// Order of the torsion subgroup; the order of `H_i` when `free_rank == 0`.
    #[serde(with = "crate::serde_big::int")]
    pub order: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologySummary {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologySummary {
    pub fn is_finite(&self) -> bool {
        self.degrees.iter().all(|d| d.free_rank == 0)
    }

    /// `Π |H_i|^{(-1)^i}`, defined when every homology group is finite.
    pub fn euler_characteristic(&self) -> Result<BigRational> {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for d in &self.degrees {
            if d.free_rank > 0 {
                return Err(Error::InfiniteHomology {
                    degree: d.degree,
                    free_rank: d.free_rank,
                });
            }
            if d.degree % 2 == 0 {
                num *= &d.order;
            } else {
                den *= &d.order;
            }
        }
        Ok(BigRational::new(num, den))
    }

    pub fn order(&self, degree: usize) -> Option<&BigInt> {
        self.degrees
            .get(degree)
            .filter(|d| d.free_rank == 0)
            .map(|d| &d.order)
    }
}

/// `H_i = ker ∂_i / im ∂_{i+1}` for every degree, from one Smith form per boundary.
///
/// The torsion of `H_i` is the torsion of `coker ∂_{i+1}` because
/// `C_i / ker ∂_i` is free.
pub fn homology(c: &IntegerComplex) -> HomologySummary {
    let forms: Vec<SmithForm> = c.boundaries.par_iter().map(smith_normal_form).collect();
    let d = c.length();
    let rank_of = |i: usize| -> usize {
        if i == 0 || i > d {
            0
        } else {
            forms[i - 1].rank
        }
    };
    let degrees = (0..=d)
        .map(|i| {
            let free_rank = c.ranks[i] - rank_of(i) - rank_of(i + 1);
            let divisors = if i < d {
                forms[i].torsion_divisors()
            } else {
                Vec::new()
            };
            let order = divisors.iter().fold(BigInt::one(), |acc, x| acc * x);
            DegreeHomology {
                degree: i,
                free_rank,
                divisors,
                order,
            }
        })
        .collect();
    HomologySummary { degrees }
}

/// `|H_0| = |coker ∂_1|`, computed from the first boundary alone.
pub fn h0_order(c: &IntegerComplex) -> Result<BigInt> {
    let s = smith_normal_form(c.boundary(1));
    let free_rank = c.ranks[0] - s.rank;
    if free_rank > 0 {
        return Err(Error::InfiniteHomology {
            degree: 0,
            free_rank,
        });
    }
    Ok(s
        .divisors
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc * x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(mats: &[Vec<Vec<i64>>]) -> IntegerComplex {
        IntegerComplex::new(mats.iter().map(|m| IntMatrix::from_rows(m).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn multiplication_by_two() {
        let h = cx(&[vec![vec![2]]]).homology();
        assert_eq!(h.degrees[0].order, BigInt::from(2));
        assert_eq!(h.degrees[0].free_rank, 0);
        assert_eq!(h.degrees[1].order, BigInt::one());
        assert_eq!(h.degrees[1].free_rank, 0);
        assert_eq!(h.euler_characteristic().unwrap(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn identity_is_acyclic() {
        let h = cx(&[vec![vec![1, 0], vec![0, 1]]]).homology();
        assert!(h.is_finite());
        assert_eq!(h.euler_characteristic().unwrap(), BigRational::one());
    }

    #[test]
    fn free_homology_blocks_euler() {
        let h = cx(&[vec![vec![0]]]).homology();
        assert_eq!(h.degrees[0].free_rank, 1);
        assert!(matches!(
            h.euler_characteristic(),
            Err(Error::InfiniteHomology { degree: 0, .. })
        ));
    }

    #[test]
    fn two_step_complex() {
        // Z --(3,-3)^T--> Z^2 --(1 1)--> Z : H_0 = 0, H_1 = Z/3, H_2 = 0.
        let c = cx(&[vec![vec![1, 1]], vec![vec![3], vec![-3]]]);
        let h = c.homology();
        let orders: Vec<_> = h.degrees.iter().map(|d| d.order.clone()).collect();
        assert_eq!(orders, vec![BigInt::one(), BigInt::from(3), BigInt::one()]);
        assert_eq!(h.euler_characteristic().unwrap(), BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn nonzero_composite_is_rejected() {
        let r = IntegerComplex::new(vec![
            IntMatrix::from_rows(&[vec![1]]).unwrap(),
            IntMatrix::from_rows(&[vec![1]]).unwrap(),
        ]);
        assert_eq!(r, Err(Error::CompositeNonzero { index: 1 }));
    }
}

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::complex::{h0_order, homology, HomologySummary, IntegerComplex};
use super::subgroup::{FiniteIndexSubgroup, QuotientGroup};
use crate::error::{Error, Result};
use crate::ring::{LaurentMatrix, LaurentPoly};

/// A finite free resolution `0 -> F_d -> ... -> F_1 -> F_0` over
/// `Z[t1^±1, ..., tN^±1]` presenting `M = coker ∂_1`.
///
/// `boundaries[i - 1]` is `∂_i : F_i -> F_{i-1}` with `rank F_{i-1}` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeResolution {
    rank: usize,
    boundaries: Vec<LaurentMatrix>,
}

/// On-disk form: `{"rank": N, "boundaries": [[["poly", ...], ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeResolutionJson {
    pub rank: usize,
    pub boundaries: Vec<Vec<Vec<String>>>,
}

impl FreeResolution {
    pub fn new(boundaries: Vec<LaurentMatrix>) -> Result<Self> {
        let rank = boundaries
            .first()
            .map(LaurentMatrix::rank)
            .ok_or_else(|| Error::ShapeMismatch("resolution needs a boundary".into()))?;
        for (i, b) in boundaries.iter().enumerate() {
            if b.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: b.rank(),
                });
            }
            if i > 0 && boundaries[i - 1].cols() != b.rows() {
                return Err(Error::ShapeMismatch(format!(
                    "boundary {} has {} rows but F_{} has rank {}",
                    i + 1,
                    b.rows(),
                    i,
                    boundaries[i - 1].cols()
                )));
            }
        }
        for i in 1..boundaries.len() {
            if !boundaries[i - 1].try_mul(&boundaries[i])?.is_zero() {
                return Err(Error::CompositeNonzero { index: i });
            }
        }
        Ok(FreeResolution { rank, boundaries })
    }

    /// `0 -> ZΓ^r --∂--> ZΓ^r`.
    pub fn principal(f: LaurentMatrix) -> Result<Self> {
        if !f.is_square() {
            return Err(Error::ShapeMismatch("principal presentation must be square".into()));
        }
        Self::new(vec![f])
    }

    pub fn from_json(j: &FreeResolutionJson) -> Result<Self> {
        let mats = j
            .boundaries
            .iter()
            .map(|m| LaurentMatrix::parse_rows(m, j.rank))
            .collect::<Result<Vec<_>>>()?;
        Self::new(mats)
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> FreeResolutionJson {
        FreeResolutionJson {
            rank: self.rank,
            boundaries: self.boundaries.iter().map(LaurentMatrix::to_strings).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn length(&self) -> usize {
        self.boundaries.len()
    }

    pub fn boundaries(&self) -> &[LaurentMatrix] {
        &self.boundaries
    }

    /// Ranks of `F_0, ..., F_d`.
    pub fn module_ranks(&self) -> Vec<usize> {
        let mut r = vec![self.boundaries[0].rows()];
        r.extend(self.boundaries.iter().map(LaurentMatrix::cols));
        r
    }

    /// Whether this is a square one-step presentation.
    pub fn is_principal(&self) -> bool {
        self.boundaries.len() == 1 && self.boundaries[0].is_square()
    }

    /// Degreewise direct sum, padding the shorter resolution with zero modules.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        let d = self.length().max(other.length());
        let pad = |r: &Self, i: usize| -> LaurentMatrix {
            match r.boundaries.get(i) {
                Some(b) => b.clone(),
                None => {
                    let rows = r.module_ranks().get(i).copied().unwrap_or(0);
                    LaurentMatrix::zeros(r.rank, rows, 0)
                }
            }
        };
        let mats = (0..d)
            .map(|i| pad(self, i).direct_sum(&pad(other, i)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(mats)
    }

    /// Change coordinates on `F_k` by the invertible `s`:
    /// `∂_{k+1} -> s ∂_{k+1}` and `∂_k -> ∂_k s^{-1}`.
    pub fn change_basis(&self, degree: usize, s: &LaurentMatrix, s_inv: &LaurentMatrix) -> Result<Self> {
        let mut mats = self.boundaries.clone();
        if degree < mats.len() {
            mats[degree] = s.try_mul(&mats[degree])?;
        }
        if degree > 0 {
            mats[degree - 1] = mats[degree - 1].try_mul(s_inv)?;
        }
        Self::new(mats)
    }
}

/// Koszul resolution of `ZΓ/(f)` or `ZΓ/(f, g)`.
///
/// `k = 2`: `0 -> ZΓ --(g, -f)^T--> ZΓ^2 --(f g)--> ZΓ`. Regularity of the
/// sequence is not checked.
pub fn koszul_resolution(fs: &[LaurentPoly]) -> Result<FreeResolution> {
    match fs {
        [f] => FreeResolution::new(vec![LaurentMatrix::scalar(f.clone())]),
        [f, g] => {
            if f.rank() != g.rank() {
                return Err(Error::RankMismatch {
                    expected: f.rank(),
                    found: g.rank(),
                });
            }
            let d1 = LaurentMatrix::from_rows(vec![vec![f.clone(), g.clone()]])?;
            let d2 = LaurentMatrix::from_rows(vec![vec![g.clone()], vec![-f]])?;
            FreeResolution::new(vec![d1, d2])
        }
        _ => Err(Error::ShapeMismatch(format!(
            "Koszul resolutions of length {} are not supported (use 1 or 2)",
            fs.len()
        ))),
    }
}

/// `Z ⊗_{ZΔ} F_•` as an integer complex, with every composite re-verified.
pub fn complex_from_resolution(f: &FreeResolution, delta: &FiniteIndexSubgroup) -> Result<IntegerComplex> {
    complex_over(f, &delta.quotient())
}

pub fn complex_over(f: &FreeResolution, q: &QuotientGroup) -> Result<IntegerComplex> {
    if f.rank != q.subgroup().rank() {
        return Err(Error::RankMismatch {
            expected: f.rank,
            found: q.subgroup().rank(),
        });
    }
    let mats = f
        .boundaries
        .iter()
        .map(|b| q.action_matrix_of(b))
        .collect::<Result<Vec<_>>>()?;
    IntegerComplex::new(mats)
}

pub fn homology_at(f: &FreeResolution, delta: &FiniteIndexSubgroup) -> Result<HomologySummary> {
    Ok(homology(&complex_from_resolution(f, delta)?))
}

/// `χ(Δ, M) = Π_i |H_i(Δ, M)|^{(-1)^i}`.
pub fn euler_characteristic(f: &FreeResolution, delta: &FiniteIndexSubgroup) -> Result<BigRational> {
    homology_at(f, delta)?.euler_characteristic()
}

/// `|H_0(Δ, M)|`, the number of points of the dual system fixed by `Δ`.
pub fn fixed_points_count(f: &FreeResolution, delta: &FiniteIndexSubgroup) -> Result<BigInt> {
    h0_order(&complex_from_resolution(f, delta)?)
}

/// An ordered list of subgroups with strictly increasing index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSequence {
    levels: Vec<FiniteIndexSubgroup>,
}

impl SubgroupSequence {
    pub fn new(levels: Vec<FiniteIndexSubgroup>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidSequence("empty sequence".into()));
        }
        let rank = levels[0].rank();
        for w in levels.windows(2) {
            if w[1].rank() != rank {
                return Err(Error::InvalidSequence("subgroups of different rank".into()));
            }
            if w[1].index() <= w[0].index() {
                return Err(Error::InvalidSequence(format!(
                    "indices must increase strictly ({} then {})",
                    w[0].index(),
                    w[1].index()
                )));
            }
        }
        Ok(SubgroupSequence { levels })
    }

    /// `diag(n, ..., n)` for each listed `n`.
    pub fn diagonal(rank: usize, ns: impl IntoIterator<Item = i64>) -> Result<Self> {
        let levels = ns
            .into_iter()
            .map(|n| {
                if n < 1 {
                    Err(Error::InvalidSequence(format!("scale {n} must be positive")))
                } else {
                    FiniteIndexSubgroup::diagonal(rank, n)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(levels)
    }

    /// Parse `diag:n=A..B`, `diag:n=A..B:STEP`, `diag:n=a,b,c`, or a JSON list
    /// of square integer matrices whose columns generate each subgroup.
    pub fn parse(spec: &str, rank: usize) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("diag:") {
            let rest = rest.strip_prefix("n=").unwrap_or(rest);
            return Self::diagonal(rank, parse_scales(rest)?);
        }
        if spec.starts_with('[') {
            let mats: Vec<Vec<Vec<i64>>> = serde_json::from_str(spec)
                .map_err(|e| Error::InvalidSequence(e.to_string()))?;
            let levels = mats
                .iter()
                .map(|m| {
                    let s = FiniteIndexSubgroup::from_matrix(m)?;
                    if s.rank() != rank {
                        return Err(Error::RankMismatch {
                            expected: rank,
                            found: s.rank(),
                        });
                    }
                    Ok(s)
                })
                .collect::<Result<Vec<_>>>()?;
            return Self::new(levels);
        }
        Err(Error::InvalidSequence(format!("unrecognised sequence {spec:?}")))
    }

    pub fn levels(&self) -> &[FiniteIndexSubgroup] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.levels[0].rank()
    }
}

fn parse_scales(s: &str) -> Result<Vec<i64>> {
    let bad = || Error::InvalidSequence(format!("bad scale list {s:?}"));
    let int = |x: &str| x.trim().parse::<i64>().map_err(|_| bad());
    if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, st)) => (int(b)?, int(st)?),
            None => (int(rest)?, 1),
        };
        let a = int(a)?;
        if step < 1 || b < a {
            return Err(bad());
        }
        Ok((a..=b).step_by(step as usize).collect())
    } else {
        s.split(',').map(int).collect()
    }
}

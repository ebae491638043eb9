//! The per-layer quadratic form `Q(x) = sum_i w_i x_i^2 - sum_i c_i x_{i-1} x_i`
//! and the bounds derived from it that make enumeration finite.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::pascal::RationalMatrix;
use crate::qp::DualChargeType;

#[derive(Clone, Debug)]
pub struct QuadraticForm {
    den: i64,
    weights: Vec<i64>,
    cross: Vec<i64>,
    matrix: RationalMatrix,
    minors: Vec<BigRational>,
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn scaled(r: Rational64, den: u32, what: &str) -> Result<i64> {
    let s = r * Rational64::from_integer(den as i64);
    if !s.is_integer() {
        return Err(Error::OffLattice { value: format!("{what} {r}"), denominator: den });
    }
    Ok(s.to_integer())
}

/// Determinant of the principal submatrix on `range`; 1 when empty.
fn principal_det(m: &RationalMatrix, range: std::ops::Range<usize>) -> Result<BigRational> {
    if range.is_empty() {
        return Ok(BigRational::one());
    }
    let start = range.start;
    RationalMatrix::from_fn(range.len(), range.len(), |r, c| m.get(start + r, start + c).clone())?.determinant()
}

/// Determinant of `m` with row and column `i` deleted; 1 for a 1x1 matrix.
fn deleted_det(m: &RationalMatrix, i: usize) -> Result<BigRational> {
    let n = m.rows();
    if n == 1 {
        return Ok(BigRational::one());
    }
    let idx: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    RationalMatrix::from_fn(n - 1, n - 1, |r, c| m.get(idx[r], idx[c]).clone())?.determinant()
}

impl QuadraticForm {
    /// `weights[i]` is the diagonal coefficient of color `i`, `cross[i]` the
    /// coupling between colors `i - 1` and `i` (`cross[0]` is ignored).
    /// Every coefficient must be a multiple of `1/den`.
    pub fn new(den: u32, weights: &[Rational64], cross: &[Rational64]) -> Result<Self> {
        if weights.is_empty() || weights.len() != cross.len() {
            return Err(Error::DimensionMismatch { expected: weights.len(), found: cross.len() });
        }
        let n = weights.len();
        let w_num = weights.iter().map(|&w| scaled(w, den, "weight")).collect::<Result<Vec<_>>>()?;
        let mut c_num = cross.iter().map(|&c| scaled(c, den, "coupling")).collect::<Result<Vec<_>>>()?;
        c_num[0] = 0;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let matrix = RationalMatrix::from_fn(n, n, |r, c| {
            if r == c {
                big(weights[r])
            } else if r + 1 == c {
                -big(cross[c]) * &half
            } else if c + 1 == r {
                -big(cross[r]) * &half
            } else {
                BigRational::zero()
            }
        })?;
        let minors = (1..=n).map(|j| principal_det(&matrix, 0..j)).collect::<Result<Vec<_>>>()?;
        Ok(QuadraticForm { den: den as i64, weights: w_num, cross: c_num, matrix, minors })
    }

    pub fn num_colors(&self) -> usize {
        self.weights.len()
    }

    pub fn den(&self) -> u32 {
        self.den as u32
    }

    /// The symmetric matrix of the form on a single layer.
    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn leading_minors(&self) -> &[BigRational] {
        &self.minors
    }

    /// Sylvester's criterion on the exact leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        self.minors.iter().all(|m| m.is_positive())
    }

    /// `den * Q(x)` for a single layer `x` indexed by color.
    pub fn layer_num(&self, x: &[u32]) -> i64 {
        let mut acc = 0i64;
        for (i, &xi) in x.iter().enumerate() {
            let xi = xi as i64;
            acc += self.weights[i] * xi * xi;
            if i > 0 {
                acc -= self.cross[i] * x[i - 1] as i64 * xi;
            }
        }
        acc
    }

    /// `Q(R)` summed over the layers of a dual-charge-type.
    pub fn evaluate(&self, dual: &DualChargeType) -> Rational64 {
        let rows = dual.rows();
        let k = rows.first().map_or(0, |r| r.len());
        let total: i64 = (0..k)
            .map(|s| {
                let layer: Vec<u32> = rows.iter().map(|r| r[s]).collect();
                self.layer_num(&layer)
            })
            .sum();
        Rational64::new(total, self.den)
    }

    /// Per-color bound on a single layer with `Q(x) <= trunc`.
    ///
    /// For a positive definite `M`, the maximum of `x_i` on the ellipsoid
    /// `x^T M x <= N` is `sqrt(N (M^{-1})_{ii})`.
    pub fn layer_box(&self, trunc: Rational64) -> Result<Vec<u32>> {
        if !self.is_positive_definite() {
            return Err(Error::NotPositiveDefinite("no finite layer bound".into()));
        }
        let det = self.minors.last().expect("form has at least one color").clone();
        (0..self.num_colors())
            .map(|i| {
                let limit = big(trunc) * deleted_det(&self.matrix, i)? / &det;
                Ok(isqrt_floor(&limit))
            })
            .collect()
    }

    /// For each prefix of colors `0..j`, the Schur complement of the
    /// remaining colors, cleared of denominators. Minimizing the form over
    /// real values of the remaining colors gives `x^T S_j x`, a lower
    /// bound for any completion.
    pub(crate) fn prefix_bounds(&self) -> Result<Vec<PrefixBound>> {
        if !self.is_positive_definite() {
            return Err(Error::NotPositiveDefinite("no prefix bounds".into()));
        }
        let n = self.num_colors();
        (1..=n)
            .map(|j| {
                let mut s: Vec<Vec<BigRational>> =
                    (0..j).map(|r| (0..j).map(|c| self.matrix.get(r, c).clone()).collect()).collect();
                if j < n {
                    // the chain couples the prefix to the rest only through (j-1, j)
                    let link = self.matrix.get(j - 1, j);
                    let inv00 = principal_det(&self.matrix, j + 1..n)? / principal_det(&self.matrix, j..n)?;
                    s[j - 1][j - 1] -= link * link * inv00;
                }
                let scale = s.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let matrix = s
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|x| {
                                (x * &scale).to_integer().to_i128().ok_or_else(|| {
                                    Error::Internal("prefix bound coefficient overflow".into())
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let scale = scale.to_i128().ok_or_else(|| Error::Internal("prefix scale overflow".into()))?;
                Ok(PrefixBound { matrix, scale })
            })
            .collect()
    }
}

/// `x^T S x / scale` lower-bounds the form on any completion of a prefix.
#[derive(Clone, Debug)]
pub(crate) struct PrefixBound {
    matrix: Vec<Vec<i128>>,
    scale: i128,
}

impl PrefixBound {
    /// Whether `sum_s x_s^T S x_s` exceeds `trunc` for the given layers.
    pub(crate) fn exceeds(&self, layers: &[Vec<u32>], trunc: Rational64) -> bool {
        let mut total: i128 = 0;
        for x in layers {
            for (r, row) in self.matrix.iter().enumerate() {
                let xr = x[r] as i128;
                if xr == 0 {
                    continue;
                }
                for (c, &v) in row.iter().enumerate() {
                    total += v * xr * x[c] as i128;
                }
            }
        }
        total * *trunc.denom() as i128 > *trunc.numer() as i128 * self.scale
    }
}

fn isqrt_floor(x: &BigRational) -> u32 {
    if !x.is_positive() {
        return 0;
    }
    let mut t: u32 = 0;
    loop {
        let next = BigInt::from(t + 1);
        if &next * &next * x.denom() > *x.numer() {
            return t;
        }
        t += 1;
    }
}

//! Generalized binomial coefficients and the Pascal-type coefficient matrix
//! whose determinant controls the linear independence argument for
//! twisted vertex operator coefficients.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Dense matrix with exact rational entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::input("matrix dimensions must be positive"));
        }
        Ok(RationalMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigRational) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigRational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        Self::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).fold(BigRational::zero(), |acc, k| acc + self.get(r, k) * other.get(k, c))
        })
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                self.get(r, r).is_one() && (r + 1..self.cols).all(|c| self.get(r, c).is_zero())
            })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    ///
    /// Each row is first cleared of denominators, so elimination runs over
    /// integers with exact divisions; the row scales are divided out at the end.
    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|r| {
                let lcm = (0..n).fold(BigInt::one(), |l, c| l.lcm(self.get(r, c).denom()));
                scale *= &lcm;
                (0..n).map(|c| (self.get(r, c) * &lcm).to_integer()).collect()
            })
            .collect();

        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return Ok(BigRational::zero());
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(BigRational::new(sign * &a[n - 1][n - 1], scale))
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `x (x-1) ... (x-n+1) / n!`.
pub fn gen_binomial(x: &BigRational, n: u32) -> BigRational {
    let mut acc = BigRational::one();
    for k in 0..n as i64 {
        acc = acc * (x - rat(k, 1)) / rat(k + 1, 1);
    }
    acc
}

/// Both sides of `sum_q C(a,q) C(b,n-q) = C(a+b,n)`.
pub fn chu_vandermonde(a: &BigRational, b: &BigRational, n: u32) -> (BigRational, BigRational) {
    let lhs = (0..=n).fold(BigRational::zero(), |acc, q| {
        acc + gen_binomial(a, q) * gen_binomial(b, n - q)
    });
    (lhs, gen_binomial(&(a + b), n))
}

fn check_order(v: u32) -> Result<()> {
    if v == 2 || v == 3 {
        Ok(())
    } else {
        Err(Error::input(format!("twist order must be 2 or 3, got {v}")))
    }
}

/// The `2n x 2n` matrix with entry `(row, col) = C(p + col/v, row)`.
pub fn pascal_matrix(n: usize, v: u32, p: &BigRational) -> Result<RationalMatrix> {
    if n == 0 {
        return Err(Error::input("pascal matrix size n must be at least 1"));
    }
    check_order(v)?;
    RationalMatrix::from_fn(2 * n, 2 * n, |row, col| {
        gen_binomial(&(p + rat(col as i64, v as i64)), row as u32)
    })
}

/// Lower unitriangular factor with entry `(row, j) = C(p, row - j)`.
pub fn shift_factor(n: usize, p: &BigRational) -> Result<RationalMatrix> {
    RationalMatrix::from_fn(2 * n, 2 * n, |row, j| {
        if row >= j {
            gen_binomial(p, (row - j) as u32)
        } else {
            BigRational::zero()
        }
    })
}

/// Determinant of the `p = 0` matrix.
pub fn base_matrix_det(n: usize, v: u32) -> Result<BigRational> {
    pascal_matrix(n, v, &BigRational::zero())?.determinant()
}

/// The closed form `v^{-n(2n-1)}`.
pub fn expected_base_det(n: usize, v: u32) -> BigRational {
    let e = (n * (2 * n - 1)) as u32;
    BigRational::new(BigInt::one(), BigInt::from(v).pow(e))
}

/// Whether the `p`-matrix factors as `shift_factor(p) * base`.
pub fn triangular_factor_check(n: usize, v: u32, p: &BigRational) -> Result<bool> {
    let full = pascal_matrix(n, v, p)?;
    let base = pascal_matrix(n, v, &BigRational::zero())?;
    let lower = shift_factor(n, p)?;
    Ok(lower.is_lower_unitriangular() && lower.checked_mul(&base)? == full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Determinant by cofactor expansion along the first row.
    fn cofactor_det(m: &[Vec<BigRational>]) -> BigRational {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigRational::zero();
        for c in 0..n {
            let minor: Vec<Vec<BigRational>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][c] * cofactor_det(&minor);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn rows(m: &RationalMatrix) -> Vec<Vec<BigRational>> {
        (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).clone()).collect()).collect()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(gen_binomial(&rat(7, 3), 0), rat(1, 1));
        assert_eq!(gen_binomial(&rat(1, 2), 1), rat(1, 2));
        assert_eq!(gen_binomial(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(gen_binomial(&rat(5, 1), 2), rat(10, 1));
        assert_eq!(gen_binomial(&rat(3, 1), 5), rat(0, 1));
    }

    #[test]
    fn chu_vandermonde_examples() {
        assert_eq!(chu_vandermonde(&rat(1, 1), &rat(1, 1), 1), (rat(2, 1), rat(2, 1)));
        let (l, r) = chu_vandermonde(&rat(1, 2), &rat(1, 2), 2);
        assert_eq!(l, r);
        assert_eq!(r, rat(0, 1));
        let a = rat(-5, 7);
        let (l, r) = chu_vandermonde(&a, &rat(0, 1), 4);
        assert_eq!(l, gen_binomial(&a, 4));
        assert_eq!(r, gen_binomial(&a, 4));
    }

    #[test]
    fn pascal_matrix_examples() {
        let zero = BigRational::zero();
        let m = pascal_matrix(1, 2, &zero).unwrap();
        assert_eq!(m.to_string(), "[[1, 1], [0, 1/2]]");
        let m = pascal_matrix(1, 3, &zero).unwrap();
        assert_eq!(m.to_string(), "[[1, 1], [0, 1/3]]");
        let m = pascal_matrix(1, 2, &rat(1, 1)).unwrap();
        assert_eq!(m.to_string(), "[[1, 1], [1, 3/2]]");
        assert!(pascal_matrix(0, 2, &zero).is_err());
        assert!(pascal_matrix(1, 4, &zero).is_err());
    }

    #[test]
    fn base_det_examples() {
        assert_eq!(base_matrix_det(1, 2).unwrap(), rat(1, 2));
        assert_eq!(base_matrix_det(1, 3).unwrap(), rat(1, 3));
        assert_eq!(base_matrix_det(2, 2).unwrap(), rat(1, 64));
    }

    #[test]
    fn base_det_closed_form() {
        for v in [2, 3] {
            for n in 1..=6 {
                assert_eq!(base_matrix_det(n, v).unwrap(), expected_base_det(n, v), "n={n} v={v}");
            }
        }
    }

    #[test]
    fn bareiss_agrees_with_cofactor_expansion() {
        for v in [2, 3] {
            for n in 1..=3 {
                for p in [rat(0, 1), rat(2, 5), rat(-3, 2)] {
                    let m = pascal_matrix(n, v, &p).unwrap();
                    assert_eq!(m.determinant().unwrap(), cofactor_det(&rows(&m)));
                }
            }
        }
        let singular = RationalMatrix::from_fn(3, 3, |r, c| rat((r * c) as i64, 1)).unwrap();
        assert_eq!(singular.determinant().unwrap(), rat(0, 1));
        let needs_pivot =
            RationalMatrix::from_fn(2, 2, |r, c| if r == c { rat(0, 1) } else { rat(1, 2) }).unwrap();
        assert_eq!(needs_pivot.determinant().unwrap(), rat(-1, 4));
    }

    #[test]
    fn factor_examples() {
        assert!(triangular_factor_check(1, 2, &rat(3, 1)).unwrap());
        assert!(triangular_factor_check(2, 2, &rat(1, 2)).unwrap());
        for v in [2, 3] {
            assert!(triangular_factor_check(1, v, &rat(0, 1)).unwrap());
            assert_eq!(shift_factor(1, &rat(0, 1)).unwrap(), RationalMatrix::identity(2).unwrap());
        }
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn det_independent_of_shift(p in small_rational(), n in 1usize..=3, v in prop::sample::select(vec![2u32, 3])) {
            let m = pascal_matrix(n, v, &p).unwrap();
            prop_assert_eq!(m.determinant().unwrap(), base_matrix_det(n, v).unwrap());
        }

        #[test]
        fn chu_vandermonde_holds(a in small_rational(), b in small_rational(), n in 0u32..=8) {
            let (l, r) = chu_vandermonde(&a, &b, n);
            prop_assert_eq!(l, r);
        }

        #[test]
        fn factorization_holds(p in small_rational(), n in 1usize..=4, v in prop::sample::select(vec![2u32, 3])) {
            prop_assert!(triangular_factor_check(n, v, &p).unwrap());
        }
    }
}

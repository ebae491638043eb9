//! Truncated q-series in fractional powers of `q`, multigraded by color
//! vectors, with arbitrary-precision integer coefficients.
//!
//! Exponents are kept as integer numerators over a per-series denominator
//! (`den`, the twist order of a run), so the convolution loop never touches
//! rationals. Terms are stored in a `BTreeMap`, which makes iteration order
//! lexicographic in `(q exponent, colors)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Key of a single term: `q^{q_num/den} y^colors`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesKey {
    pub q_num: i64,
    pub colors: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    den: u32,
    num_colors: usize,
    trunc: Rational64,
    max_num: i64,
    terms: BTreeMap<SeriesKey, BigInt>,
}

/// Converts a rational exponent to a numerator over `den`.
pub fn exponent_numerator(q: Rational64, den: u32) -> Result<i64> {
    let scaled = q * Rational64::from_integer(den as i64);
    if !scaled.is_integer() {
        return Err(Error::OffLattice { value: q.to_string(), denominator: den });
    }
    Ok(scaled.to_integer())
}

impl GradedSeries {
    pub fn zero(den: u32, num_colors: usize, trunc: Rational64) -> Result<Self> {
        if den == 0 {
            return Err(Error::input("series denominator must be positive"));
        }
        if trunc < Rational64::zero() {
            return Err(Error::input(format!("truncation {trunc} is negative")));
        }
        let max_num = (trunc * Rational64::from_integer(den as i64)).floor().to_integer();
        Ok(GradedSeries { den, num_colors, trunc, max_num, terms: BTreeMap::new() })
    }

    pub fn one(den: u32, num_colors: usize, trunc: Rational64) -> Result<Self> {
        let mut s = Self::zero(den, num_colors, trunc)?;
        s.add_term(0, vec![0; num_colors], BigInt::one())?;
        Ok(s)
    }

    /// `coeff * q^q * y^colors` (zero if `q` exceeds the truncation).
    pub fn monomial(
        den: u32,
        trunc: Rational64,
        q: Rational64,
        colors: Vec<u32>,
        coeff: BigInt,
    ) -> Result<Self> {
        let mut s = Self::zero(den, colors.len(), trunc)?;
        let q_num = exponent_numerator(q, den)?;
        s.add_term(q_num, colors, coeff)?;
        Ok(s)
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn trunc(&self) -> Rational64 {
        self.trunc
    }

    /// Largest exponent numerator kept, `floor(trunc * den)`.
    pub fn max_num(&self) -> i64 {
        self.max_num
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&SeriesKey, &BigInt)> {
        self.terms.iter()
    }

    pub fn exponent(&self, key: &SeriesKey) -> Rational64 {
        Rational64::new(key.q_num, self.den as i64)
    }

    pub fn coefficient(&self, q: Rational64, colors: &[u32]) -> BigInt {
        let Ok(q_num) = exponent_numerator(q, self.den) else {
            return BigInt::zero();
        };
        self.terms
            .get(&SeriesKey { q_num, colors: colors.to_vec() })
            .cloned()
            .unwrap_or_default()
    }

    /// Adds `coeff q^{q_num/den} y^colors` in place; terms beyond the
    /// truncation are dropped, zero results are removed.
    pub fn add_term(&mut self, q_num: i64, colors: Vec<u32>, coeff: BigInt) -> Result<()> {
        if colors.len() != self.num_colors {
            return Err(Error::DimensionMismatch { expected: self.num_colors, found: colors.len() });
        }
        if q_num < 0 {
            return Err(Error::input(format!("negative q exponent {q_num}/{}", self.den)));
        }
        if q_num > self.max_num || coeff.is_zero() {
            return Ok(());
        }
        let key = SeriesKey { q_num, colors };
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
        Ok(())
    }

    /// Adds `q^{shift/den} y^colors * sum_i dense[i] q^{i/den}`.
    pub(crate) fn add_dense(&mut self, shift: i64, colors: &[u32], dense: &[BigInt]) -> Result<()> {
        for (i, c) in dense.iter().enumerate() {
            let q_num = shift + i as i64;
            if q_num > self.max_num {
                break;
            }
            if !c.is_zero() {
                self.add_term(q_num, colors.to_vec(), c.clone())?;
            }
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.den != other.den {
            return Err(Error::SeriesMismatch(format!(
                "exponent denominators {} and {}",
                self.den, other.den
            )));
        }
        if self.num_colors != other.num_colors {
            return Err(Error::SeriesMismatch(format!(
                "{} and {} colors",
                self.num_colors, other.num_colors
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = Self::zero(self.den, self.num_colors, trunc)?;
        for (k, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(k.q_num, k.colors.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Consuming merge used when reducing partial results.
    pub fn merge(mut self, other: Self) -> Result<Self> {
        self.check_compatible(&other)?;
        if other.trunc < self.trunc {
            self = self.truncated(other.trunc)?;
        }
        for (k, c) in other.terms {
            self.add_term(k.q_num, k.colors, c)?;
        }
        Ok(self)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = Self::zero(self.den, self.num_colors, trunc)?;
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let q_num = ka.q_num + kb.q_num;
                if q_num > out.max_num {
                    // terms of `other` are sorted by exponent first
                    break;
                }
                let colors = ka.colors.iter().zip(&kb.colors).map(|(a, b)| a + b).collect();
                out.add_term(q_num, colors, ca * cb)?;
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    /// Drops every term above `trunc` (which may not exceed the current one).
    pub fn truncated(&self, trunc: Rational64) -> Result<Self> {
        let mut out = Self::zero(self.den, self.num_colors, trunc.min(self.trunc))?;
        for (k, c) in &self.terms {
            out.add_term(k.q_num, k.colors.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Keeps only terms whose total color degree is at most `max_degree`.
    pub fn restrict_color_degree(&self, max_degree: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|k, _| k.colors.iter().sum::<u32>() <= max_degree);
        out
    }

    pub fn max_color_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.colors.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// The coefficient of `y^colors`, as `(exponent, coefficient)` pairs.
    pub fn color_coefficient(&self, colors: &[u32]) -> Vec<(Rational64, BigInt)> {
        self.terms
            .iter()
            .filter(|(k, _)| k.colors == colors)
            .map(|(k, c)| (self.exponent(k), c.clone()))
            .collect()
    }

    /// Specialization `y_i -> y`: coefficients keyed by `(q_num, total degree)`.
    pub fn specialize_colors(&self) -> BTreeMap<(i64, u32), BigInt> {
        let mut out: BTreeMap<(i64, u32), BigInt> = BTreeMap::new();
        for (k, c) in &self.terms {
            *out.entry((k.q_num, k.colors.iter().sum())).or_default() += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// `1 / prod_{j=1}^{r} (1 - q^{j u})` truncated at `trunc`.
    pub fn pochhammer_inverse(
        unit: Rational64,
        r: u32,
        trunc: Rational64,
        den: u32,
        num_colors: usize,
    ) -> Result<Self> {
        let step = exponent_numerator(unit, den)?;
        if step <= 0 {
            return Err(Error::input(format!("Pochhammer unit {unit} must be positive")));
        }
        let mut out = Self::zero(den, num_colors, trunc)?;
        let dense = pochhammer_inverse_dense(step as usize, r, out.max_num as usize);
        out.add_dense(0, &vec![0; num_colors], &dense)?;
        Ok(out)
    }

    /// `prod_{j=1}^{r} (1 - q^{j u})`, truncated; the inverse of
    /// [`GradedSeries::pochhammer_inverse`].
    pub fn pochhammer(
        unit: Rational64,
        r: u32,
        trunc: Rational64,
        den: u32,
        num_colors: usize,
    ) -> Result<Self> {
        let step = exponent_numerator(unit, den)?;
        if step <= 0 {
            return Err(Error::input(format!("Pochhammer unit {unit} must be positive")));
        }
        let mut acc = Self::one(den, num_colors, trunc)?;
        for j in 1..=r as i64 {
            let mut factor = Self::one(den, num_colors, trunc)?;
            factor.add_term(j * step, vec![0; num_colors], -BigInt::one())?;
            acc = acc.mul(&factor)?;
        }
        Ok(acc)
    }
}

/// Dense coefficients (index = exponent numerator) of
/// `1 / prod_{j=1}^{r} (1 - x^{j * step})` up to `max_num`.
///
/// Each factor is a geometric series; multiplying by it is the running-sum
/// recurrence `a[i] += a[i - j*step]`.
pub(crate) fn pochhammer_inverse_dense(step: usize, r: u32, max_num: usize) -> Vec<BigInt> {
    let mut a = vec![BigInt::zero(); max_num + 1];
    a[0] = BigInt::one();
    for j in 1..=r as usize {
        let s = j * step;
        if s > max_num {
            break;
        }
        for i in s..=max_num {
            let prev = a[i - s].clone();
            a[i] += prev;
        }
    }
    a
}

/// Product of two dense univariate series, keeping the first `len` coefficients.
pub(crate) fn dense_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Formats an exponent numerator over `den` as a reduced fraction.
pub fn format_exponent(q_num: i64, den: u32) -> String {
    let g = q_num.gcd(&(den as i64)).max(1);
    let (n, d) = (q_num / g, den as i64 / g);
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if k.q_num != 0 {
                write!(f, "*q^({})", format_exponent(k.q_num, self.den))?;
            }
            for (i, e) in k.colors.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*y{}", i + 1)?,
                    e => write!(f, "*y{}^{e}", i + 1)?,
                }
            }
        }
        write!(f, " + O(q^({}))", self.trunc)
    }
}

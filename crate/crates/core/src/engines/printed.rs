use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;

use super::fermionic::{max_color_degree, short_layers};
use super::{fermionic_char_with, AlgebraSpec, Exec};
use crate::error::Result;
use crate::qseries::{dense_mul, pochhammer_inverse_dense, GradedSeries, SeriesKey};

/// The closed-form character with the coefficient table as displayed.
#[derive(Clone, Debug)]
pub struct PrintedChar {
    /// Terms with exponent in `[0, trunc]`.
    pub series: GradedSeries,
    /// Terms with negative exponent, which no character can have.
    pub negative_terms: Vec<(SeriesKey, BigInt)>,
    pub positive_definite: bool,
    /// When the form is indefinite the sum is taken over dual-charge-types
    /// of total charge at most this cap: the largest total charge of any
    /// basis monomial of degree at most `trunc`.
    pub color_degree_cap: Option<u32>,
}

pub fn printed_theorem_char(spec: &AlgebraSpec, trunc: Rational64) -> Result<PrintedChar> {
    printed_theorem_char_with(spec, trunc, Exec::default())
}

/// `spec` supplies the algebra and level; its own coefficient table is
/// used only to size the window when the printed form is indefinite.
pub fn printed_theorem_char_with(spec: &AlgebraSpec, trunc: Rational64, exec: Exec) -> Result<PrintedChar> {
    let printed = AlgebraSpec::printed(*spec.tag(), spec.level())?;
    if printed.form().is_positive_definite() {
        return Ok(PrintedChar {
            series: fermionic_char_with(&printed, trunc, exec)?,
            negative_terms: Vec::new(),
            positive_definite: true,
            color_degree_cap: None,
        });
    }
    let derived = AlgebraSpec::new(*spec.tag(), spec.level())?;
    let cap = max_color_degree(&derived, trunc)?;
    let (series, negative_terms) = windowed_sum(&printed, trunc, cap)?;
    Ok(PrintedChar { series, negative_terms, positive_definite: false, color_degree_cap: Some(cap) })
}

/// Sum over every dual-charge-type of total charge at most `cap`.
fn windowed_sum(
    spec: &AlgebraSpec,
    trunc: Rational64,
    cap: u32,
) -> Result<(GradedSeries, Vec<(SeriesKey, BigInt)>)> {
    let max_num = spec.check_trunc(trunc)?;
    let n = spec.num_colors();
    let k = spec.level() as usize;
    let form = spec.form();
    let layers: Vec<Vec<u32>> = short_layers(&vec![cap; n], |x| {
        let size: u32 = x.iter().sum();
        size > 0 && size <= cap
    });

    let mut chains: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    let mut stack: Vec<(Vec<Vec<u32>>, u32)> = vec![(Vec::new(), cap)];
    while let Some((chain, left)) = stack.pop() {
        if chain.len() == k {
            continue;
        }
        for x in &layers {
            let size: u32 = x.iter().sum();
            if size > left || chain.last().is_some_and(|top: &Vec<u32>| x.iter().zip(top).any(|(a, b)| a > b)) {
                continue;
            }
            let mut next = chain.clone();
            next.push(x.clone());
            chains.push(next.clone());
            stack.push((next, left - size));
        }
    }

    let exponents: Vec<i64> = chains.iter().map(|c| c.iter().map(|x| form.layer_num(x)).sum()).collect();
    let lowest = exponents.iter().copied().min().unwrap_or(0).min(0);
    let len = (max_num - lowest + 1) as usize;
    let table: Vec<Vec<Vec<BigInt>>> = (0..n)
        .map(|i| (0..=cap).map(|r| pochhammer_inverse_dense(spec.unit_num(i) as usize, r, len - 1)).collect())
        .collect();

    let mut series = GradedSeries::zero(spec.den(), n, trunc)?;
    let mut negative: BTreeMap<SeriesKey, BigInt> = BTreeMap::new();
    for (chain, &shift) in chains.iter().zip(&exponents) {
        if shift > max_num {
            continue;
        }
        let width = (max_num - shift + 1) as usize;
        let mut dense = vec![BigInt::zero(); width];
        dense[0] = BigInt::from(1);
        for i in 0..n {
            for s in 0..chain.len() {
                let below = chain.get(s + 1).map_or(0, |x| x[i]);
                let r = chain[s][i] - below;
                if r > 0 {
                    dense = dense_mul(&dense, &table[i][r as usize], width);
                }
            }
        }
        let colors: Vec<u32> = (0..n).map(|i| chain.iter().map(|x| x[i]).sum()).collect();
        let split = (-shift).clamp(0, width as i64) as usize;
        for (j, c) in dense[..split].iter().enumerate() {
            if !c.is_zero() {
                *negative.entry(SeriesKey { q_num: shift + j as i64, colors: colors.clone() }).or_default() += c;
            }
        }
        series.add_dense(shift + split as i64, &colors, &dense[split..])?;
    }
    negative.retain(|_, c| !c.is_zero());
    Ok((series, negative.into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::fermionic_char;
    use crate::lattice::AlgebraTag;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn matches_fermionic_off_e6() {
        for tag in AlgebraTag::minimal_ranks() {
            if tag == AlgebraTag::e6() {
                continue;
            }
            let spec = AlgebraSpec::new(tag, 2).unwrap();
            let p = printed_theorem_char(&spec, r(2, 1)).unwrap();
            assert!(p.positive_definite);
            assert_eq!(p.series, fermionic_char(&spec, r(2, 1)).unwrap());
        }
    }

    #[test]
    fn zero_truncation() {
        for tag in AlgebraTag::minimal_ranks() {
            let spec = AlgebraSpec::new(tag, 1).unwrap();
            let p = printed_theorem_char(&spec, r(0, 1)).unwrap();
            let zero = vec![0; tag.num_colors()];
            if p.positive_definite {
                assert_eq!(p.series.len(), 1);
            }
            assert_eq!(p.series.coefficient(r(0, 1), &zero), BigInt::from(1));
        }
    }

    #[test]
    fn e6_window_has_weight_zero_mixed_term() {
        let spec = AlgebraSpec::new(AlgebraTag::e6(), 1).unwrap();
        let p = printed_theorem_char(&spec, r(1, 1)).unwrap();
        assert!(!p.positive_definite);
        assert!(p.color_degree_cap.unwrap() >= 2);
        assert_eq!(p.series.coefficient(r(0, 1), &[1, 1, 0, 0]), BigInt::from(1));
    }
}

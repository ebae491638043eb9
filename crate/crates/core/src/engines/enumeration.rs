use num_bigint::BigInt;
use num_rational::Rational64;

use super::{map_reduce, AlgebraSpec, Exec};
use crate::error::{Error, Result};
use crate::qp::{self, ChargeType, Particle, QPMonomial};
use crate::qseries::GradedSeries;

/// Character as a sum over basis monomials, on the default execution path.
pub fn enumeration_char(spec: &AlgebraSpec, trunc: Rational64) -> Result<GradedSeries> {
    enumeration_char_with(spec, trunc, Exec::default())
}

pub fn enumeration_char_with(spec: &AlgebraSpec, trunc: Rational64, exec: Exec) -> Result<GradedSeries> {
    let max_num = spec.check_trunc(trunc)?;
    let types = charge_types_within(spec, trunc)?;
    let empty = GradedSeries::zero(spec.den(), spec.num_colors(), trunc)?;
    map_reduce(
        exec,
        &types,
        |ct| {
            let mut out = empty.clone();
            if let Some(counts) = count_monomials(spec, ct, max_num)? {
                let dense: Vec<BigInt> = counts.into_iter().map(BigInt::from).collect();
                out.add_dense(0, &ct.color_type(), &dense)?;
            }
            Ok(out)
        },
        || empty.clone(),
        |a, b| a.merge(b),
    )
}

/// Partitions with parts at most `k` and at most `max_len` parts,
/// non-increasing.
fn bounded_partitions(k: u32, max_len: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        if left == 0 {
            return;
        }
        for part in 1..=k {
            prefix.push(part);
            go(part, left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, max_len, &mut Vec::new(), &mut out);
    out
}

fn layers_of(parts: &[Vec<u32>], k: u32) -> Vec<Vec<u32>> {
    (1..=k)
        .map(|s| parts.iter().map(|c| c.iter().filter(|&&n| n >= s).count() as u32).collect())
        .collect()
}

/// Every charge-type that can carry a monomial of degree at most `trunc`,
/// found color by color with branch-and-bound on the quadratic form.
pub(crate) fn charge_types_within(spec: &AlgebraSpec, trunc: Rational64) -> Result<Vec<ChargeType>> {
    let k = spec.level();
    let form = spec.form();
    let bx = form.layer_box(trunc)?;
    let prefix = form.prefix_bounds()?;
    let candidates: Vec<Vec<Vec<u32>>> = bx.iter().map(|&b| bounded_partitions(k, b)).collect();

    let mut out = Vec::new();
    let mut chosen: Vec<Vec<u32>> = Vec::new();
    fn go(
        spec: &AlgebraSpec,
        candidates: &[Vec<Vec<u32>>],
        prefix: &[super::form::PrefixBound],
        trunc: Rational64,
        chosen: &mut Vec<Vec<u32>>,
        out: &mut Vec<ChargeType>,
    ) -> Result<()> {
        let i = chosen.len();
        if i == candidates.len() {
            out.push(ChargeType::new(spec.tag(), spec.level(), chosen.clone())?);
            return Ok(());
        }
        for parts in &candidates[i] {
            chosen.push(parts.clone());
            if !prefix[i].exceeds(&layers_of(chosen, spec.level()), trunc) {
                go(spec, candidates, prefix, trunc, chosen, out)?;
            }
            chosen.pop();
        }
        Ok(())
    }
    go(spec, &candidates, &prefix, trunc, &mut chosen, &mut out)?;
    Ok(out)
}

struct Slot {
    bound: i64,
    unit: i64,
    gap: i64,
    chained: bool,
}

fn slots(spec: &AlgebraSpec, ct: &ChargeType) -> Result<Vec<Slot>> {
    let den = Rational64::from_integer(spec.den() as i64);
    let mut out = Vec::new();
    for (i, parts) in ct.colors().iter().enumerate() {
        let unit = spec.unit_num(i);
        let gap_per_charge = qp::self_weight(spec.tag(), i)? * 2 * den;
        for (p, &n) in parts.iter().enumerate() {
            let bound = qp::energy_bound(spec.tag(), spec.level(), ct, i, p)? * den;
            if !bound.is_integer() || bound.to_integer() % unit != 0 {
                return Err(Error::Internal(format!("bound {bound} of color {} is off its lattice", i + 1)));
            }
            let gap = gap_per_charge * n as i64;
            out.push(Slot {
                bound: bound.to_integer(),
                unit,
                gap: gap.to_integer(),
                chained: p > 0 && parts[p - 1] == n,
            });
        }
    }
    Ok(out)
}

/// Number of basis monomials of charge-type `ct` at each exponent numerator
/// `0..=max_num`, or `None` if the lightest one is already too heavy.
fn count_monomials(spec: &AlgebraSpec, ct: &ChargeType, max_num: i64) -> Result<Option<Vec<u128>>> {
    let slots = slots(spec, ct)?;
    let lightest: i64 = slots.iter().map(|s| -s.bound).sum();
    let quadratic = spec.form().evaluate(&ct.dual(spec.level())) * Rational64::from_integer(spec.den() as i64);
    if Rational64::from_integer(lightest) != quadratic {
        return Err(Error::Internal(format!(
            "charge-type {:?}: lightest monomial has degree {lightest}/{} but the form gives {quadratic}/{}",
            ct.colors(),
            spec.den(),
            spec.den()
        )));
    }
    if lightest > max_num {
        return Ok(None);
    }
    let mut rest = vec![0i64; slots.len() + 1];
    for j in (0..slots.len()).rev() {
        rest[j] = rest[j + 1] - slots[j].bound;
    }
    let mut counts = vec![0u128; max_num as usize + 1];

    fn go(slots: &[Slot], rest: &[i64], j: usize, prev: i64, acc: i64, max_num: i64, counts: &mut [u128]) {
        let Some(slot) = slots.get(j) else {
            counts[acc as usize] += 1;
            return;
        };
        let mut energy = if slot.chained { slot.bound.min(prev - slot.gap) } else { slot.bound };
        loop {
            let degree = acc - energy;
            if degree + rest[j + 1] > max_num {
                return;
            }
            go(slots, rest, j + 1, energy, degree, max_num, counts);
            energy -= slot.unit;
        }
    }
    go(&slots, &rest, 0, 0, 0, max_num, &mut counts);
    Ok(Some(counts))
}

/// The monomial of charge-type `ct` with every energy at its largest
/// admissible value.
pub fn minimal_monomial(spec: &AlgebraSpec, ct: &ChargeType) -> Result<QPMonomial> {
    let den = spec.den() as i64;
    let mut slots = slots(spec, ct)?.into_iter();
    let mut colors = Vec::new();
    for parts in ct.colors() {
        let mut color = Vec::new();
        let mut prev = 0i64;
        for &n in parts {
            let slot = slots.next().expect("one slot per particle");
            let energy = if slot.chained { slot.bound.min(prev - slot.gap) } else { slot.bound };
            prev = energy;
            color.push(Particle::new(n, Rational64::new(energy, den)));
        }
        colors.push(color);
    }
    QPMonomial::from_particles(colors)
}

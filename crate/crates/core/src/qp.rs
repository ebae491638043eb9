//! Combinatorics of twisted quasi-particle monomials: charge-types and
//! their conjugates, the energy bounds and gap conditions defining the
//! basis sets, the linear order on monomials and the label-level maps used
//! in the linear independence argument.
//!
//! Within a color, particles are indexed by `p = 0, 1, ...` with charges
//! non-increasing in `p`; among equal charges, energies decrease in `p`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{AlgebraTag, Family, OrbitClass};

/// Conjugate partition, returned in non-increasing order.
pub fn conjugate(parts: &[u32]) -> Vec<u32> {
    let largest = parts.iter().copied().max().unwrap_or(0);
    (1..=largest).map(|s| parts.iter().filter(|&&n| n >= s).count() as u32).collect()
}

/// `sum_p (n_p + 2 sum_{p' < p} min(n_p, n_p'))`.
pub fn minsum_same(parts: &[u32]) -> u64 {
    let mut total = 0u64;
    for (p, &n) in parts.iter().enumerate() {
        total += n as u64;
        total += 2 * parts[..p].iter().map(|&m| m.min(n) as u64).sum::<u64>();
    }
    total
}

/// `sum_p sum_q min(a_p, b_q)`.
pub fn minsum_cross(a: &[u32], b: &[u32]) -> u64 {
    a.iter().map(|&x| b.iter().map(|&y| x.min(y) as u64).sum::<u64>()).sum()
}

/// Coefficient of `n` in the bound of a single particle of `color`; half the
/// gap between consecutive equal-charge particles per unit charge.
pub fn self_weight(tag: &AlgebraTag, color: usize) -> Result<Rational64> {
    let class = tag.color_class(color)?;
    Ok(match class.class {
        OrbitClass::Fixed => Rational64::one(),
        OrbitClass::Moved => Rational64::new(1, tag.twist_order() as i64),
    })
}

/// Coefficient of `sum_q min(n_{q, color-1}, n)` in the bound of a
/// particle of `color`. Zero for the first color.
pub fn cross_coupling(tag: &AlgebraTag, color: usize) -> Result<Rational64> {
    let colors = tag.num_colors();
    if color >= colors {
        return Err(Error::OutOfRange(format!("color {} of {colors}", color + 1)));
    }
    if color == 0 {
        return Ok(Rational64::zero());
    }
    let half = Rational64::new(1, 2);
    let one = Rational64::one();
    Ok(match tag.family() {
        Family::A2lm1_2 if color + 1 < colors => half,
        Family::E6_2 if color == 1 => half,
        _ => one,
    })
}

/// Energy lattice step of `color`.
pub fn energy_unit(tag: &AlgebraTag, color: usize) -> Result<Rational64> {
    Ok(tag.color_class(color)?.unit())
}

fn check_colors(tag: &AlgebraTag, found: usize) -> Result<()> {
    if found != tag.num_colors() {
        return Err(Error::DimensionMismatch { expected: tag.num_colors(), found });
    }
    Ok(())
}

/// Charges per color, each list non-increasing and bounded by the level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChargeType {
    colors: Vec<Vec<u32>>,
}

impl ChargeType {
    /// Sorts each color's charges into `p` order and validates `1 <= n <= k`.
    pub fn new(tag: &AlgebraTag, k: u32, mut colors: Vec<Vec<u32>>) -> Result<Self> {
        check_colors(tag, colors.len())?;
        for (i, parts) in colors.iter_mut().enumerate() {
            if let Some(&n) = parts.iter().find(|&&n| n == 0 || n > k) {
                return Err(Error::input(format!("charge {n} of color {} outside 1..={k}", i + 1)));
            }
            parts.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(ChargeType { colors })
    }

    pub fn colors(&self) -> &[Vec<u32>] {
        &self.colors
    }

    pub fn color(&self, i: usize) -> &[u32] {
        &self.colors[i]
    }

    /// `r_i = sum_p n_{p,i}`.
    pub fn color_type(&self) -> Vec<u32> {
        self.colors.iter().map(|c| c.iter().sum()).collect()
    }

    pub fn total_charge(&self) -> u32 {
        self.color_type().iter().sum()
    }

    pub fn dual(&self, k: u32) -> DualChargeType {
        let rows = self
            .colors
            .iter()
            .map(|c| {
                let mut r = conjugate(c);
                r.resize(k as usize, 0);
                r
            })
            .collect();
        DualChargeType { rows }
    }
}

/// Per color, `(r^(1), ..., r^(k))` non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualChargeType {
    rows: Vec<Vec<u32>>,
}

impl DualChargeType {
    pub fn new(tag: &AlgebraTag, k: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        check_colors(tag, rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k as usize {
                return Err(Error::DimensionMismatch { expected: k as usize, found: row.len() });
            }
            if row.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::input(format!("dual charge-type of color {} is not non-increasing", i + 1)));
            }
        }
        Ok(DualChargeType { rows })
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn color_type(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn to_charge_type(&self) -> ChargeType {
        let colors = self
            .rows
            .iter()
            .map(|r| conjugate(&r.iter().copied().filter(|&x| x > 0).collect::<Vec<_>>()))
            .collect();
        ChargeType { colors }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Particle {
    pub charge: u32,
    pub energy: Rational64,
}

impl Particle {
    pub fn new(charge: u32, energy: Rational64) -> Self {
        Particle { charge, energy }
    }
}

/// A monomial in twisted quasi-particles, stored per color in `p` order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPMonomial {
    colors: Vec<Vec<Particle>>,
}

impl QPMonomial {
    /// Builds a monomial from `(charge, energy)` pairs in any order.
    pub fn new(colors: Vec<Vec<(u32, Rational64)>>) -> Result<Self> {
        let colors = colors
            .into_iter()
            .map(|c| c.into_iter().map(|(n, m)| Particle::new(n, m)).collect())
            .collect();
        Self::from_particles(colors)
    }

    pub fn from_particles(mut colors: Vec<Vec<Particle>>) -> Result<Self> {
        for c in &mut colors {
            if c.iter().any(|x| x.charge == 0) {
                return Err(Error::input("quasi-particle charges must be positive"));
            }
            c.sort_by(|a, b| b.charge.cmp(&a.charge).then(b.energy.cmp(&a.energy)));
        }
        Ok(QPMonomial { colors })
    }

    pub fn empty(num_colors: usize) -> Self {
        QPMonomial { colors: vec![Vec::new(); num_colors] }
    }

    pub fn colors(&self) -> &[Vec<Particle>] {
        &self.colors
    }

    pub fn color(&self, i: usize) -> &[Particle] {
        &self.colors[i]
    }

    pub fn num_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.iter().all(|c| c.is_empty())
    }

    pub fn charges(&self) -> Vec<Vec<u32>> {
        self.colors.iter().map(|c| c.iter().map(|x| x.charge).collect()).collect()
    }

    pub fn charge_type(&self, tag: &AlgebraTag, k: u32) -> Result<ChargeType> {
        ChargeType::new(tag, k, self.charges())
    }

    pub fn color_type(&self) -> Vec<u32> {
        self.colors.iter().map(|c| c.iter().map(|x| x.charge).sum()).collect()
    }

    /// The `q`-degree contributed by the monomial, `-sum m`.
    pub fn degree(&self) -> Rational64 {
        -self.colors.iter().flatten().fold(Rational64::zero(), |acc, x| acc + x.energy)
    }
}

impl fmt::Display for QPMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (i, c) in self.colors.iter().enumerate() {
            if c.is_empty() {
                continue;
            }
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "color{}: [", i + 1)?;
            for (j, x) in c.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "({}, {})", x.charge, x.energy)?;
            }
            f.write_str("]")?;
        }
        f.write_str("}")
    }
}

/// Upper bound on the energy of particle `p` of `color` (both 0-based).
pub fn energy_bound(
    tag: &AlgebraTag,
    k: u32,
    charge_type: &ChargeType,
    color: usize,
    p: usize,
) -> Result<Rational64> {
    let parts = charge_type
        .colors
        .get(color)
        .ok_or_else(|| Error::input(format!("color {} out of range", color + 1)))?;
    let &n = parts
        .get(p)
        .ok_or_else(|| Error::input(format!("position {} out of range for color {}", p + 1, color + 1)))?;
    if n > k {
        return Err(Error::input(format!("charge {n} exceeds level {k}")));
    }
    bound_from_parts(tag, &charge_type.colors, color, p)
}

fn bound_from_parts(tag: &AlgebraTag, parts: &[Vec<u32>], color: usize, p: usize) -> Result<Rational64> {
    let w = self_weight(tag, color)?;
    let c = cross_coupling(tag, color)?;
    let n = parts[color][p];
    let cross = if color == 0 { 0 } else { minsum_cross(&parts[color - 1], &[n]) };
    let earlier: u64 = parts[color][..p].iter().map(|&m| m.min(n) as u64).sum();
    Ok(-w * n as i64 + c * cross as i64 - w * 2 * earlier as i64)
}

/// Whether `m` belongs to the basis set at level `k`.
///
/// Energies off their color's lattice are an error rather than `false`.
pub fn is_member_b(tag: &AlgebraTag, k: u32, m: &QPMonomial) -> Result<bool> {
    check_colors(tag, m.num_colors())?;
    for (i, c) in m.colors.iter().enumerate() {
        let unit = energy_unit(tag, i)?;
        if let Some(x) = c.iter().find(|x| !(x.energy / unit).is_integer()) {
            return Err(Error::OffLattice {
                value: x.energy.to_string(),
                denominator: *unit.denom() as u32,
            });
        }
    }
    let parts = m.charges();
    if parts.iter().flatten().any(|&n| n > k) {
        return Ok(false);
    }
    for (i, c) in m.colors.iter().enumerate() {
        let gap_per_charge = self_weight(tag, i)? * 2;
        for (p, x) in c.iter().enumerate() {
            if x.energy > bound_from_parts(tag, &parts, i, p)? {
                return Ok(false);
            }
            if p > 0 && c[p - 1].charge == x.charge
                && x.energy > c[p - 1].energy - gap_per_charge * c[p - 1].charge as i64 {
                    return Ok(false);
                }
        }
    }
    Ok(true)
}

/// Linear order on monomials: charge-types first, then energies, both
/// scanned from color 1 and `p = 1`. At the first difference the smaller
/// entry wins; a sequence that continues where the other has ended is the
/// smaller one.
pub fn compare_monomials(a: &QPMonomial, b: &QPMonomial) -> Ordering {
    fn scan<T: Ord>(a: &[Vec<T>], b: &[Vec<T>]) -> Ordering {
        for (ca, cb) in a.iter().zip(b) {
            for u in 0..ca.len().max(cb.len()) {
                let ord = match (ca.get(u), cb.get(u)) {
                    (Some(x), Some(y)) => x.cmp(y),
                    (Some(_), None) => Ordering::Less,
                    (None, Some(_)) => Ordering::Greater,
                    (None, None) => Ordering::Equal,
                };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
        a.len().cmp(&b.len())
    }
    let energies = |m: &QPMonomial| -> Vec<Vec<Rational64>> {
        m.colors.iter().map(|c| c.iter().map(|x| x.energy).collect()).collect()
    };
    scan(&a.charges(), &b.charges()).then_with(|| scan(&energies(a), &energies(b)))
}

/// Raises every energy of `color` by one lattice step.
pub fn delta_shift(tag: &AlgebraTag, m: &QPMonomial, color: usize) -> Result<QPMonomial> {
    check_colors(tag, m.num_colors())?;
    let unit = energy_unit(tag, color)?;
    let mut out = m.clone();
    for x in &mut out.colors[color] {
        x.energy += unit;
    }
    Ok(out)
}

/// Removes the leading color-1 particle, of charge `s` and sitting exactly
/// at its bound, and compensates the energies of the remaining color-1 and
/// color-2 particles.
pub fn remove_leading(tag: &AlgebraTag, k: u32, m: &QPMonomial, s: u32) -> Result<QPMonomial> {
    check_colors(tag, m.num_colors())?;
    let w = self_weight(tag, 0)?;
    let lead = m
        .colors
        .first()
        .and_then(|c| c.first())
        .ok_or_else(|| Error::Precondition("no color-1 particle to remove".into()))?;
    if lead.charge != s || lead.energy != -w * s as i64 {
        return Err(Error::Precondition(format!(
            "leading color-1 particle is ({}, {}), expected ({s}, {})",
            lead.charge,
            lead.energy,
            -w * s as i64
        )));
    }
    if !is_member_b(tag, k, m)? {
        return Err(Error::Precondition(format!("{m} is not in the basis set")));
    }
    let a = w * 2;
    let b = if tag.num_colors() > 1 { cross_coupling(tag, 1)? } else { Rational64::zero() };
    let mut colors = m.colors.clone();
    colors[0].remove(0);
    for x in &mut colors[0] {
        x.energy += a * x.charge.min(s) as i64;
    }
    if let Some(second) = colors.get_mut(1) {
        for x in second {
            x.energy -= b * x.charge.min(s) as i64;
        }
    }
    QPMonomial::from_particles(colors)
}

/// All charge-types with total charge at most `max_total`, parts at most `k`.
pub fn charge_types_up_to(tag: &AlgebraTag, k: u32, max_total: u32) -> Vec<ChargeType> {
    fn partitions(max_sum: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        for part in (1..=max_part.min(max_sum)).rev() {
            prefix.push(part);
            partitions(max_sum - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut per_color: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut all = Vec::new();
    partitions(max_total, k, &mut Vec::new(), &mut all);
    for _ in 0..tag.num_colors() {
        per_color.push(all.clone());
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn product(
        per_color: &[Vec<Vec<u32>>],
        budget: u32,
        current: &mut Vec<Vec<u32>>,
        out: &mut Vec<ChargeType>,
    ) {
        let Some((first, rest)) = per_color.split_first() else {
            out.push(ChargeType { colors: current.clone() });
            return;
        };
        for parts in first {
            let size: u32 = parts.iter().sum();
            if size <= budget {
                current.push(parts.clone());
                product(rest, budget - size, current, out);
                current.pop();
            }
        }
    }
    product(&per_color, max_total, &mut current, &mut out);
    out
}

/// Basis-set monomials of the given charge-type whose energies each lie
/// within `slack` lattice steps of the tightest value allowed by the bound
/// and, inside an equal-charge block, by the preceding particle.
pub fn b_monomials_near_bounds(
    tag: &AlgebraTag,
    charge_type: &ChargeType,
    slack: u32,
) -> Result<Vec<QPMonomial>> {
    let parts = &charge_type.colors;
    let mut slots = Vec::new();
    for (i, c) in parts.iter().enumerate() {
        let unit = energy_unit(tag, i)?;
        let gap = self_weight(tag, i)? * 2;
        for p in 0..c.len() {
            slots.push((i, p, bound_from_parts(tag, parts, i, p)?, unit, gap));
        }
    }
    let mut out = Vec::new();
    let mut energies: Vec<Vec<Particle>> = vec![Vec::new(); parts.len()];
    fn fill(
        slots: &[(usize, usize, Rational64, Rational64, Rational64)],
        parts: &[Vec<u32>],
        slack: u32,
        energies: &mut Vec<Vec<Particle>>,
        out: &mut Vec<QPMonomial>,
    ) {
        let Some((&(i, p, bound, unit, gap), rest)) = slots.split_first() else {
            out.push(QPMonomial { colors: energies.clone() });
            return;
        };
        let n = parts[i][p];
        let mut top = bound;
        if p > 0 && parts[i][p - 1] == n {
            top = top.min(energies[i][p - 1].energy - gap * n as i64);
        }
        for t in 0..=slack as i64 {
            energies[i].push(Particle::new(n, top - unit * t));
            fill(rest, parts, slack, energies, out);
            energies[i].pop();
        }
    }
    fill(&slots, parts, slack, &mut energies, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn a2() -> AlgebraTag {
        AlgebraTag::a(2).unwrap()
    }

    fn d43() -> AlgebraTag {
        AlgebraTag::d4_3()
    }

    /// Partitions of every size up to `max_size` with parts at most `max_part`.
    fn all_partitions(max_size: u32, max_part: u32) -> Vec<Vec<u32>> {
        fn go(left: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            out.push(prefix.clone());
            for part in 1..=max_part.min(left) {
                prefix.push(part);
                go(left - part, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(max_size, max_part, &mut Vec::new(), &mut out);
        out
    }

    /// Conjugate through the Young diagram as a set of cells.
    fn conjugate_by_cells(parts: &[u32]) -> Vec<u32> {
        let cells: Vec<(u32, u32)> = parts
            .iter()
            .enumerate()
            .flat_map(|(row, &len)| (0..len).map(move |col| (col, row as u32)))
            .collect();
        let rows = cells.iter().map(|c| c.0 + 1).max().unwrap_or(0);
        (0..rows).map(|row| cells.iter().filter(|c| c.0 == row).count() as u32).collect()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&[2, 1]), vec![2, 1]);
        assert_eq!(conjugate(&[3, 1]), vec![2, 1, 1]);
        assert!(conjugate(&[]).is_empty());
        assert_eq!(conjugate(&[1, 3]), vec![2, 1, 1]);
    }

    #[test]
    fn minsum_examples() {
        assert_eq!(minsum_same(&[1]), 1);
        assert_eq!(minsum_same(&[1, 1]), 4);
        assert_eq!(minsum_same(&[1, 2]), 5);
        assert_eq!(minsum_cross(&[1], &[1]), 1);
        assert_eq!(minsum_cross(&[2], &[1, 1]), 2);
        assert_eq!(minsum_cross(&[2, 1], &[2, 1]), 5);
    }

    #[test]
    fn partition_identities_exhaustive() {
        let family = all_partitions(14, 6);
        for lam in &family {
            let conj = conjugate(lam);
            assert_eq!(conjugate(&conj), *lam);
            assert_eq!(conj, conjugate_by_cells(lam));
            assert_eq!(minsum_same(lam), conj.iter().map(|&x| (x as u64).pow(2)).sum::<u64>());
        }
        let small = all_partitions(8, 6);
        for lam in &small {
            let lc = conjugate(lam);
            for mu in &small {
                let mc = conjugate(mu);
                let dot: u64 = lc.iter().zip(&mc).map(|(&x, &y)| x as u64 * y as u64).sum();
                assert_eq!(minsum_cross(lam, mu), dot);
            }
        }
    }

    #[test]
    fn coupling_table() {
        let a4 = AlgebraTag::a(4).unwrap();
        let got: Vec<_> = (0..4).map(|i| cross_coupling(&a4, i).unwrap()).collect();
        assert_eq!(got, vec![r(0, 1), r(1, 2), r(1, 2), r(1, 1)]);
        let d5 = AlgebraTag::d(5).unwrap();
        let got: Vec<_> = (0..4).map(|i| cross_coupling(&d5, i).unwrap()).collect();
        assert_eq!(got, vec![r(0, 1), r(1, 1), r(1, 1), r(1, 1)]);
        let e6 = AlgebraTag::e6();
        let got: Vec<_> = (0..4).map(|i| cross_coupling(&e6, i).unwrap()).collect();
        assert_eq!(got, vec![r(0, 1), r(1, 2), r(1, 1), r(1, 1)]);
        assert_eq!(cross_coupling(&d43(), 1).unwrap(), r(1, 1));
        assert!(cross_coupling(&d43(), 2).is_err());
        assert_eq!(self_weight(&d43(), 0).unwrap(), r(1, 3));
        assert_eq!(self_weight(&d43(), 1).unwrap(), r(1, 1));
        assert_eq!(self_weight(&a2(), 0).unwrap(), r(1, 2));
    }

    #[test]
    fn energy_bound_examples() {
        let ct = ChargeType::new(&d43(), 1, vec![vec![1], vec![]]).unwrap();
        assert_eq!(energy_bound(&d43(), 1, &ct, 0, 0).unwrap(), r(-1, 3));
        let ct = ChargeType::new(&a2(), 2, vec![vec![], vec![2]]).unwrap();
        assert_eq!(energy_bound(&a2(), 2, &ct, 1, 0).unwrap(), r(-2, 1));
        let ct = ChargeType::new(&a2(), 1, vec![vec![1], vec![]]).unwrap();
        assert_eq!(energy_bound(&a2(), 1, &ct, 0, 0).unwrap(), r(-1, 2));
        assert!(energy_bound(&a2(), 1, &ct, 0, 1).is_err());
        assert!(energy_bound(&a2(), 1, &ct, 2, 0).is_err());
    }

    #[test]
    fn energy_bound_cross_and_repeat_terms() {
        // color 2 of A_3: charge 2 with color-1 charges (2, 1) and one earlier
        // charge-1 particle: -2 + 1*(2 + 1) - 2*1
        let ct = ChargeType::new(&a2(), 2, vec![vec![2, 1], vec![2, 1]]).unwrap();
        assert_eq!(energy_bound(&a2(), 2, &ct, 1, 0).unwrap(), r(1, 1));
        assert_eq!(energy_bound(&a2(), 2, &ct, 1, 1).unwrap(), r(-1, 1) + 2 - 2);
        // color 1 of D_4^(3), charges (1, 1): -1/3 - 2/3
        let ct = ChargeType::new(&d43(), 1, vec![vec![1, 1], vec![]]).unwrap();
        assert_eq!(energy_bound(&d43(), 1, &ct, 0, 1).unwrap(), r(-1, 1));
    }

    #[test]
    fn membership_examples() {
        let m = QPMonomial::new(vec![vec![(1, r(-1, 3))], vec![]]).unwrap();
        assert!(is_member_b(&d43(), 1, &m).unwrap());
        let m = QPMonomial::new(vec![vec![(1, r(0, 1))], vec![]]).unwrap();
        assert!(!is_member_b(&d43(), 1, &m).unwrap());
        let m = QPMonomial::new(vec![vec![], vec![(1, r(-1, 1)), (1, r(-3, 1))]]).unwrap();
        assert!(is_member_b(&a2(), 1, &m).unwrap());
        let m = QPMonomial::new(vec![vec![], vec![(1, r(-1, 1)), (1, r(-2, 1))]]).unwrap();
        assert!(!is_member_b(&a2(), 1, &m).unwrap());
    }

    #[test]
    fn membership_rejects_off_lattice_and_high_charge() {
        let m = QPMonomial::new(vec![vec![(1, r(-1, 2))], vec![]]).unwrap();
        assert!(matches!(is_member_b(&d43(), 1, &m), Err(Error::OffLattice { .. })));
        let m = QPMonomial::new(vec![vec![], vec![(1, r(-3, 2))]]).unwrap();
        assert!(is_member_b(&a2(), 1, &m).is_err());
        let m = QPMonomial::new(vec![vec![(2, r(-1, 1))], vec![]]).unwrap();
        assert!(!is_member_b(&a2(), 1, &m).unwrap());
        assert!(is_member_b(&a2(), 2, &m).unwrap());
        assert!(QPMonomial::new(vec![vec![(0, r(-1, 1))]]).is_err());
    }

    #[test]
    fn compare_examples() {
        let b1 = QPMonomial::new(vec![vec![(1, r(-1, 2))], vec![]]).unwrap();
        let b2 = QPMonomial::new(vec![vec![(2, r(-1, 1))], vec![]]).unwrap();
        assert_eq!(compare_monomials(&b1, &b2), Ordering::Less);
        let lo = QPMonomial::new(vec![vec![(1, r(-3, 2))], vec![]]).unwrap();
        assert_eq!(compare_monomials(&lo, &b1), Ordering::Less);
        assert_eq!(compare_monomials(&b1, &b1.clone()), Ordering::Equal);
        // a sequence continuing past the other's end is smaller
        let long = QPMonomial::new(vec![vec![(1, r(-1, 2)), (1, r(-3, 2))], vec![]]).unwrap();
        assert_eq!(compare_monomials(&long, &b1), Ordering::Less);
        // colors are scanned from the first one
        let c2 = QPMonomial::new(vec![vec![(1, r(-1, 2))], vec![(2, r(-2, 1))]]).unwrap();
        assert_eq!(compare_monomials(&c2, &b2), Ordering::Less);
    }

    #[test]
    fn delta_shift_examples() {
        let m = QPMonomial::new(vec![vec![], vec![(1, r(-2, 1))]]).unwrap();
        let s = delta_shift(&a2(), &m, 1).unwrap();
        assert_eq!(s.color(1), &[Particle::new(1, r(-1, 1))]);
        let m = QPMonomial::new(vec![vec![(1, r(-1, 1))], vec![]]).unwrap();
        let s = delta_shift(&a2(), &m, 0).unwrap();
        assert_eq!(s.color(0), &[Particle::new(1, r(-1, 2))]);
        assert_eq!(delta_shift(&a2(), &s, 1).unwrap(), s);
    }

    #[test]
    fn remove_leading_examples() {
        let m = QPMonomial::new(vec![vec![(1, r(-1, 3))], vec![]]).unwrap();
        assert!(remove_leading(&d43(), 1, &m, 1).unwrap().is_empty());

        let m = QPMonomial::new(vec![vec![(1, r(-3, 2)), (2, r(-1, 1))], vec![]]).unwrap();
        let out = remove_leading(&a2(), 2, &m, 2).unwrap();
        assert_eq!(out, QPMonomial::new(vec![vec![(1, r(-1, 2))], vec![]]).unwrap());
        assert!(is_member_b(&a2(), 2, &out).unwrap());

        // color 2 of A_3 is the fixed end of the diagram, coupled with weight 1
        let m = QPMonomial::new(vec![vec![(1, r(-1, 2))], vec![(1, r(-2, 1))]]).unwrap();
        let out = remove_leading(&a2(), 1, &m, 1).unwrap();
        assert_eq!(out, QPMonomial::new(vec![vec![], vec![(1, r(-3, 1))]]).unwrap());
        assert!(is_member_b(&a2(), 1, &out).unwrap());
    }

    #[test]
    fn remove_leading_checks_precondition() {
        let m = QPMonomial::new(vec![vec![(1, r(-3, 2))], vec![]]).unwrap();
        assert!(matches!(remove_leading(&a2(), 1, &m, 1), Err(Error::Precondition(_))));
        let m = QPMonomial::new(vec![vec![(1, r(-1, 2))], vec![]]).unwrap();
        assert!(remove_leading(&a2(), 1, &m, 2).is_err());
        assert!(remove_leading(&a2(), 1, &QPMonomial::empty(2), 1).is_err());
    }

    #[test]
    fn dual_round_trip() {
        let tag = AlgebraTag::e6();
        for ct in charge_types_up_to(&tag, 3, 5) {
            let dual = ct.dual(3);
            assert_eq!(dual.color_type(), ct.color_type());
            assert_eq!(dual.to_charge_type(), ct);
            assert_eq!(DualChargeType::new(&tag, 3, dual.rows().to_vec()).unwrap(), dual);
        }
    }

    #[test]
    fn near_bound_monomials_are_members() {
        for tag in AlgebraTag::minimal_ranks() {
            for k in 1..=2 {
                for ct in charge_types_up_to(&tag, k, 3) {
                    for m in b_monomials_near_bounds(&tag, &ct, 1).unwrap() {
                        assert!(is_member_b(&tag, k, &m).unwrap(), "{m}");
                    }
                }
            }
        }
    }

    fn random_monomial(tag: AlgebraTag) -> impl Strategy<Value = QPMonomial> {
        let colors = tag.num_colors();
        prop::collection::vec(prop::collection::vec((1u32..=3, -12i64..0), 0..3), colors).prop_map(
            move |raw| {
                let colors = raw
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let unit = tag.color_class(i).unwrap().unit();
                        c.into_iter().map(|(n, e)| (n, unit * e)).collect()
                    })
                    .collect();
                QPMonomial::new(colors).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn compare_is_total_preorder(
            a in random_monomial(AlgebraTag::e6()),
            b in random_monomial(AlgebraTag::e6()),
            c in random_monomial(AlgebraTag::e6()),
        ) {
            let ab = compare_monomials(&a, &b);
            prop_assert_eq!(ab, compare_monomials(&b, &a).reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            if ab != Ordering::Greater && compare_monomials(&b, &c) != Ordering::Greater {
                prop_assert_ne!(compare_monomials(&a, &c), Ordering::Greater);
            }
        }

        #[test]
        fn membership_monotone_at_block_tail(m in random_monomial(AlgebraTag::a(3).unwrap()), pick in 0usize..16) {
            let tag = AlgebraTag::a(3).unwrap();
            prop_assume!(is_member_b(&tag, 3, &m).unwrap());
            let positions: Vec<(usize, usize)> = m.colors().iter().enumerate()
                .flat_map(|(i, c)| (0..c.len()).map(move |p| (i, p)))
                .filter(|&(i, p)| m.color(i).get(p + 1).is_none_or(|y| y.charge != m.color(i)[p].charge))
                .collect();
            prop_assume!(!positions.is_empty());
            let (i, p) = positions[pick % positions.len()];
            let mut colors = m.colors().to_vec();
            colors[i][p].energy -= tag.color_class(i).unwrap().unit();
            let lowered = QPMonomial::from_particles(colors).unwrap();
            prop_assert!(is_member_b(&tag, 3, &lowered).unwrap());
        }
    }
}

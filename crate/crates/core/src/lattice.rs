//! Root-lattice data for the four folded families: Cartan matrices in the
//! labelings used throughout the crate, the diagram automorphism `nu`, the
//! fixed-point projection and the weight/charge gradings.
//!
//! Labelings (simple roots are 1-based in docs, 0-based in code):
//!
//! - `A_{2l-1}`: the chain `1 - 2 - ... - (2l-1)`, `nu` is the reflection
//!   `i -> 2l - i`.
//! - `D_l`: the chain `1 - ... - (l-1)` with node `l` attached to `l-2`;
//!   `nu` swaps `l-1` and `l`.
//! - `E_6`: the chain `1 - 2 - 3 - 5 - 6` with node 4 attached to 3; `nu`
//!   swaps `1 <-> 6`, `2 <-> 5` and fixes 3 and 4.
//! - `D_4` with `v = 3`: the chain `1 - 2 - 3` with node 4 attached to 2;
//!   `nu` is the 3-cycle `1 -> 3 -> 4 -> 1`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The twisted family, before the rank parameter is attached.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `A_{2l-1}^{(2)}`, `l >= 2`.
    A2lm1_2,
    /// `D_l^{(2)}`, `l >= 4`.
    Dl_2,
    /// `E_6^{(2)}`.
    E6_2,
    /// `D_4^{(3)}`.
    D4_3,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A2lm1_2, Family::Dl_2, Family::E6_2, Family::D4_3];

    pub fn name(self) -> &'static str {
        match self {
            Family::A2lm1_2 => "A2lm1_2",
            Family::Dl_2 => "Dl_2",
            Family::E6_2 => "E6_2",
            Family::D4_3 => "D4_3",
        }
    }

    /// Smallest admissible rank parameter `l`.
    pub fn min_rank(self) -> u32 {
        match self {
            Family::A2lm1_2 => 2,
            Family::Dl_2 => 4,
            Family::E6_2 => 6,
            Family::D4_3 => 4,
        }
    }

    /// Whether the rank parameter is free (A and D with `v = 2`).
    pub fn has_rank_parameter(self) -> bool {
        matches!(self, Family::A2lm1_2 | Family::Dl_2)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A2lm1_2" | "A" => Ok(Family::A2lm1_2),
            "Dl_2" | "D" => Ok(Family::Dl_2),
            "E6_2" | "E6" => Ok(Family::E6_2),
            "D4_3" => Ok(Family::D4_3),
            other => Err(Error::input(format!("unknown family `{other}`"))),
        }
    }
}

/// Whether a color's representative simple root is fixed or moved by `nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitClass {
    Fixed,
    Moved,
}

/// Orbit class of a quasi-particle color together with its energy lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColorClass {
    pub class: OrbitClass,
    /// Energies of this color live in `(1/denominator) Z`.
    pub denominator: u32,
}

impl ColorClass {
    pub fn is_fixed(&self) -> bool {
        self.class == OrbitClass::Fixed
    }

    /// The lattice step `1/denominator`, also the Pochhammer unit.
    pub fn unit(&self) -> Rational64 {
        Rational64::new(1, self.denominator as i64)
    }
}

/// A family with its rank parameter fixed; cheap to copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraTag {
    family: Family,
    l: u32,
}

impl AlgebraTag {
    /// Builds a tag. The rank parameter is ignored for `E6_2` and `D4_3`.
    pub fn new(family: Family, l: u32) -> Result<Self> {
        match family {
            Family::A2lm1_2 | Family::Dl_2 => {
                if l < family.min_rank() {
                    return Err(Error::InvalidRank { family, l, min: family.min_rank() });
                }
                // keeps coordinates well inside fixed-size loops and i64 exponents
                if l > 64 {
                    return Err(Error::input(format!("rank parameter {l} is unreasonably large")));
                }
                Ok(AlgebraTag { family, l })
            }
            Family::E6_2 => Ok(AlgebraTag { family, l: 6 }),
            Family::D4_3 => Ok(AlgebraTag { family, l: 4 }),
        }
    }

    pub fn a(l: u32) -> Result<Self> {
        Self::new(Family::A2lm1_2, l)
    }

    pub fn d(l: u32) -> Result<Self> {
        Self::new(Family::Dl_2, l)
    }

    pub fn e6() -> Self {
        AlgebraTag { family: Family::E6_2, l: 6 }
    }

    pub fn d4_3() -> Self {
        AlgebraTag { family: Family::D4_3, l: 4 }
    }

    /// The smallest-rank member of each family.
    pub fn minimal_ranks() -> [AlgebraTag; 4] {
        [
            AlgebraTag { family: Family::A2lm1_2, l: 2 },
            AlgebraTag { family: Family::Dl_2, l: 4 },
            Self::e6(),
            Self::d4_3(),
        ]
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Rank parameter `l` (6 for `E6_2`, 4 for `D4_3`).
    pub fn l(&self) -> u32 {
        self.l
    }

    /// Rank `D` of the underlying finite-dimensional algebra.
    pub fn rank(&self) -> usize {
        match self.family {
            Family::A2lm1_2 => 2 * self.l as usize - 1,
            Family::Dl_2 => self.l as usize,
            Family::E6_2 => 6,
            Family::D4_3 => 4,
        }
    }

    /// Order `v` of the diagram automorphism.
    pub fn twist_order(&self) -> u32 {
        match self.family {
            Family::D4_3 => 3,
            _ => 2,
        }
    }

    /// Number of quasi-particle colors, i.e. of `nu`-orbits on simple roots.
    pub fn num_colors(&self) -> usize {
        match self.family {
            Family::A2lm1_2 => self.l as usize,
            Family::Dl_2 => self.l as usize - 1,
            Family::E6_2 => 4,
            Family::D4_3 => 2,
        }
    }

    /// Zero-based index of the simple root representing each color.
    pub fn color_representatives(&self) -> Vec<usize> {
        (0..self.num_colors()).collect()
    }

    pub fn color_class(&self, color: usize) -> Result<ColorClass> {
        if color >= self.num_colors() {
            return Err(Error::OutOfRange(format!(
                "color {} of {} (only {} colors)",
                color + 1,
                self,
                self.num_colors()
            )));
        }
        let rep = self.color_representatives()[color];
        if self.nu_index(rep) == rep {
            Ok(ColorClass { class: OrbitClass::Fixed, denominator: 1 })
        } else {
            Ok(ColorClass { class: OrbitClass::Moved, denominator: self.twist_order() })
        }
    }

    pub fn color_classes(&self) -> Vec<ColorClass> {
        (0..self.num_colors()).map(|c| self.color_class(c).expect("in range")).collect()
    }

    /// Edges of the Dynkin diagram, zero-based.
    fn edges(&self) -> Vec<(usize, usize)> {
        let d = self.rank();
        match self.family {
            Family::A2lm1_2 => (0..d - 1).map(|i| (i, i + 1)).collect(),
            Family::Dl_2 => {
                let mut e: Vec<_> = (0..d - 2).map(|i| (i, i + 1)).collect();
                e.push((d - 3, d - 1));
                e
            }
            Family::E6_2 => vec![(0, 1), (1, 2), (2, 4), (4, 5), (2, 3)],
            Family::D4_3 => vec![(0, 1), (1, 2), (1, 3)],
        }
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let d = self.rank();
        let mut c = vec![vec![0i64; d]; d];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (a, b) in self.edges() {
            c[a][b] = -1;
            c[b][a] = -1;
        }
        c
    }

    /// Image of the simple root index `i` under `nu`.
    pub fn nu_index(&self, i: usize) -> usize {
        let d = self.rank();
        match self.family {
            Family::A2lm1_2 => d - 1 - i,
            Family::Dl_2 => {
                if i == d - 2 {
                    d - 1
                } else if i == d - 1 {
                    d - 2
                } else {
                    i
                }
            }
            Family::E6_2 => [5, 4, 2, 3, 1, 0][i],
            Family::D4_3 => [2, 1, 3, 0][i],
        }
    }

    /// `nu`-orbit of the simple root `i`, starting at `i`.
    pub fn orbit(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut j = self.nu_index(i);
        while j != i {
            out.push(j);
            j = self.nu_index(j);
        }
        out
    }

    /// Simple root `alpha_i` with a one-based index, as in the docs.
    pub fn simple_root(&self, i: usize) -> Result<LatticeVector> {
        if i == 0 || i > self.rank() {
            return Err(Error::OutOfRange(format!("simple root {i} of {self}")));
        }
        let mut coords = vec![0; self.rank()];
        coords[i - 1] = 1;
        Ok(LatticeVector(coords))
    }

    pub fn zero(&self) -> LatticeVector {
        LatticeVector(vec![0; self.rank()])
    }

    pub(crate) fn check(&self, a: &LatticeVector) -> Result<()> {
        if a.0.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: a.0.len() });
        }
        Ok(())
    }
}

impl fmt::Display for AlgebraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A2lm1_2 => write!(f, "A_{}^(2)", 2 * self.l - 1),
            Family::Dl_2 => write!(f, "D_{}^(2)", self.l),
            Family::E6_2 => f.write_str("E_6^(2)"),
            Family::D4_3 => f.write_str("D_4^(3)"),
        }
    }
}

/// Element of the root lattice, in coordinates over the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.0.len(), rhs.0.len(), "lattice vectors of different rank");
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.0.len(), rhs.0.len(), "lattice vectors of different rank");
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

/// `<a, b> = a^T C b` with the Cartan matrix of `tag`.
pub fn bilinear_form(tag: &AlgebraTag, a: &LatticeVector, b: &LatticeVector) -> Result<i64> {
    tag.check(a)?;
    tag.check(b)?;
    let c = tag.cartan_matrix();
    let mut acc = 0i64;
    for (i, row) in c.iter().enumerate() {
        if a.0[i] == 0 {
            continue;
        }
        let s: i64 = row.iter().zip(&b.0).map(|(cij, bj)| cij * bj).sum();
        acc += a.0[i] * s;
    }
    Ok(acc)
}

/// The same form extended to rational coordinate vectors.
pub fn bilinear_form_rational(
    tag: &AlgebraTag,
    a: &[Rational64],
    b: &[Rational64],
) -> Result<Rational64> {
    let d = tag.rank();
    if a.len() != d || b.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: a.len().max(b.len()) });
    }
    let c = tag.cartan_matrix();
    let mut acc = Rational64::zero();
    for i in 0..d {
        for j in 0..d {
            if c[i][j] != 0 {
                acc += a[i] * b[j] * c[i][j];
            }
        }
    }
    Ok(acc)
}

/// Applies the diagram automorphism to the simple-root coordinates.
pub fn apply_nu(tag: &AlgebraTag, a: &LatticeVector) -> Result<LatticeVector> {
    tag.check(a)?;
    let mut out = vec![0; a.0.len()];
    for (i, &c) in a.0.iter().enumerate() {
        out[tag.nu_index(i)] = c;
    }
    Ok(LatticeVector(out))
}

/// `nu^j (a)`.
pub fn apply_nu_pow(tag: &AlgebraTag, a: &LatticeVector, j: u32) -> Result<LatticeVector> {
    let mut x = a.clone();
    tag.check(&x)?;
    for _ in 0..(j % tag.twist_order()) {
        x = apply_nu(tag, &x)?;
    }
    Ok(x)
}

/// Projection onto the `nu`-fixed subspace: the orbit average `(1/v) sum_j nu^j(a)`.
pub fn fixed_projection(tag: &AlgebraTag, a: &LatticeVector) -> Result<Vec<Rational64>> {
    tag.check(a)?;
    let v = tag.twist_order();
    let mut sum = vec![0i64; a.0.len()];
    let mut x = a.clone();
    for _ in 0..v {
        for (s, c) in sum.iter_mut().zip(&x.0) {
            *s += c;
        }
        x = apply_nu(tag, &x)?;
    }
    Ok(sum.into_iter().map(|s| Rational64::new(s, v as i64)).collect())
}

/// Charge grading: for each color, `|orbit| * <a, (lambda_rep)_(0)>`.
///
/// With `<alpha_j, lambda_i> = delta_ij`, the pairing `<a, nu^j lambda_i>`
/// reads the coordinate of `a` at `nu^j(i)`.
pub fn charge_vector(tag: &AlgebraTag, a: &LatticeVector) -> Result<Vec<i64>> {
    tag.check(a)?;
    let v = tag.twist_order() as i64;
    let mut out = Vec::with_capacity(tag.num_colors());
    for (color, rep) in tag.color_representatives().into_iter().enumerate() {
        // <a, (lambda_rep)_(0)> = (1/v) sum_j <a, lambda_{nu^j(rep)}>
        let mut pairing = Rational64::zero();
        let mut idx = rep;
        for _ in 0..v {
            pairing += Rational64::new(a.0[idx], v);
            idx = tag.nu_index(idx);
        }
        let prefactor = tag.orbit(rep).len() as i64;
        let value = pairing * prefactor;
        if !value.is_integer() {
            return Err(Error::Internal(format!(
                "charge of color {} for {:?} in {} is {} (non-integral)",
                color + 1,
                a.0,
                tag,
                value
            )));
        }
        out.push(value.to_integer());
    }
    Ok(out)
}

/// Weight of the operator `x_a(m)`: `-m - 1 + <a,a>/2`.
pub fn qp_weight(tag: &AlgebraTag, a: &LatticeVector, m: Rational64) -> Result<Rational64> {
    let v = tag.twist_order() as i64;
    if !(m * v).is_integer() {
        return Err(Error::OffLattice { value: m.to_string(), denominator: v as u32 });
    }
    let norm = bilinear_form(tag, a, a)?;
    Ok(-m - Rational64::one() + Rational64::new(norm, 2))
}

/// Weight of the vacuum of the basic twisted module.
pub fn vacuum_weight(tag: &AlgebraTag) -> Rational64 {
    match tag.family() {
        Family::A2lm1_2 => Rational64::new(tag.l() as i64 - 1, 16),
        Family::Dl_2 => Rational64::new(1, 16),
        Family::E6_2 => Rational64::new(1, 8),
        Family::D4_3 => Rational64::new(1, 9),
    }
}

/// Vacuum weight from the twisted Heisenberg construction,
/// `(1/(4v^2)) sum_{j=1}^{v-1} j(v-j) dim h_(j)`; used to cross-check
/// [`vacuum_weight`].
pub fn vacuum_weight_from_eigenspaces(tag: &AlgebraTag) -> Rational64 {
    let v = tag.twist_order() as i64;
    let d = tag.rank() as i64;
    // Each orbit of size |O| contributes one eigenvector for every
    // |O|-th root of unity, i.e. eigenvalue eta^j with j a multiple of v/|O|.
    let mut dims = vec![0i64; v as usize];
    let mut seen = vec![false; d as usize];
    for i in 0..d as usize {
        if seen[i] {
            continue;
        }
        let orbit = tag.orbit(i);
        for &j in &orbit {
            seen[j] = true;
        }
        let size = orbit.len() as i64;
        for t in 0..size {
            dims[(t * (v / size)) as usize] += 1;
        }
    }
    let mut acc = Rational64::zero();
    for (j, dim) in dims.iter().enumerate().skip(1) {
        let j = j as i64;
        acc += Rational64::from_integer(j * (v - j) * dim);
    }
    acc / Rational64::from_integer(4 * v * v)
}

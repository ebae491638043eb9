//! Central-extension data of the root lattice: the commutator maps `C_0` and
//! `C`, the normalized 2-cocycles `eps_C0` and `eps_C`, and the lift `psi`
//! of the diagram automorphism.
//!
//! All values are roots of unity of order dividing 6, kept as exponents of
//! `zeta = exp(i pi / 3)`, so every identity is checked exactly.

use std::fmt;
use std::ops::Mul;

use crate::error::Result;
use crate::lattice::{AlgebraTag, Family, LatticeVector};

/// `zeta^k` with `zeta = exp(i pi / 3)`, `k` mod 6.
///
/// `-1 = zeta^3`; the primitive cube root `eta = exp(2 pi i / 3) = zeta^2`.
/// For `v = 2` the twist root is `eta = -1 = zeta^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct RootOfUnity(u8);

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity(0);
    pub const MINUS_ONE: RootOfUnity = RootOfUnity(3);

    pub fn from_exponent(k: i64) -> Self {
        RootOfUnity(k.rem_euclid(6) as u8)
    }

    /// Exponent of `zeta`, in `0..6`.
    pub fn exponent(self) -> u8 {
        self.0
    }

    /// The primitive `v`-th root of unity `eta` used for the twist of order `v`.
    pub fn eta(v: u32) -> Self {
        match v {
            2 => RootOfUnity(3),
            3 => RootOfUnity(2),
            _ => panic!("twist order {v} not supported"),
        }
    }

    /// `(-1)^n`.
    pub fn sign(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Self::ONE
        } else {
            Self::MINUS_ONE
        }
    }

    pub fn pow(self, n: i64) -> Self {
        Self::from_exponent(self.0 as i64 * n)
    }

    pub fn inv(self) -> Self {
        Self::from_exponent(-(self.0 as i64))
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative order.
    pub fn order(self) -> u8 {
        6 / gcd(self.0, 6)
    }
}

fn gcd(a: u8, b: u8) -> u8 {
    if a == 0 {
        b
    } else {
        gcd(b % a, a)
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        RootOfUnity((self.0 + rhs.0) % 6)
    }
}

impl std::iter::Product for RootOfUnity {
    fn product<I: Iterator<Item = RootOfUnity>>(iter: I) -> Self {
        iter.fold(RootOfUnity::ONE, |a, b| a * b)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => f.write_str("1"),
            3 => f.write_str("-1"),
            k => write!(f, "zeta6^{k}"),
        }
    }
}

/// Precomputed Cartan matrix and `nu` permutation for allocation-free
/// evaluation of the cocycle maps on coordinate slices.
#[derive(Clone, Debug)]
pub struct CocycleData {
    tag: AlgebraTag,
    cartan: Vec<Vec<i64>>,
    nu: Vec<usize>,
    /// `nu_pows[t][i]` is the index of `nu^t(alpha_i)`.
    nu_pows: Vec<Vec<usize>>,
    /// Per power `t` of `nu`, the triples `(i, j, c)` such that the
    /// exponent of `eps_C0(nu^t a, nu^t b)` is `sum c a_i b_j`.
    lower: Vec<Vec<(usize, usize, i64)>>,
    v: u32,
}

impl CocycleData {
    pub fn new(tag: &AlgebraTag) -> Self {
        let d = tag.rank();
        let nu: Vec<usize> = (0..d).map(|i| tag.nu_index(i)).collect();
        let v = tag.twist_order();
        let mut nu_pows = vec![(0..d).collect::<Vec<_>>()];
        for t in 1..v as usize {
            let next = nu_pows[t - 1].iter().map(|&i| nu[i]).collect();
            nu_pows.push(next);
        }
        let cartan = tag.cartan_matrix();
        let lower = nu_pows
            .iter()
            .map(|perm| {
                let mut entries = Vec::new();
                for i in 0..d {
                    for j in 0..d {
                        let (pi, pj) = (perm[i], perm[j]);
                        if pi > pj && cartan[pi][pj] != 0 {
                            entries.push((i, j, cartan[pi][pj]));
                        }
                    }
                }
                entries
            })
            .collect();
        CocycleData { tag: *tag, cartan, nu, nu_pows, lower, v }
    }

    pub fn tag(&self) -> &AlgebraTag {
        &self.tag
    }

    pub fn rank(&self) -> usize {
        self.nu.len()
    }

    pub fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, row) in self.cartan.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            let mut s = 0;
            for (cij, bj) in row.iter().zip(b) {
                s += cij * bj;
            }
            acc += a[i] * s;
        }
        acc
    }

    /// `<nu^t a, b>` without materializing `nu^t a`.
    fn form_nu_pow(&self, t: usize, a: &[i64], b: &[i64]) -> i64 {
        let perm = &self.nu_pows[t % self.nu_pows.len()];
        let mut acc = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &self.cartan[perm[i]];
            acc += ai * row.iter().zip(b).map(|(c, bj)| c * bj).sum::<i64>();
        }
        acc
    }

    /// Writes `nu(a)` into `out`.
    pub fn nu_into(&self, a: &[i64], out: &mut [i64]) {
        for (i, &c) in a.iter().enumerate() {
            out[self.nu[i]] = c;
        }
    }

    /// Writes `nu^{-1}(a)` into `out`.
    pub fn nu_inv_into(&self, a: &[i64], out: &mut [i64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = a[self.nu[i]];
        }
    }

    pub fn c0(&self, a: &[i64], b: &[i64]) -> RootOfUnity {
        RootOfUnity::sign(self.form(a, b))
    }

    pub fn c(&self, a: &[i64], b: &[i64]) -> RootOfUnity {
        let eta = RootOfUnity::eta(self.v);
        let mut acc = RootOfUnity::ONE;
        for j in 0..self.v {
            let base = RootOfUnity::MINUS_ONE * eta.pow(j as i64);
            acc = acc * base.pow(self.form_nu_pow(j as usize, a, b));
        }
        acc
    }

    /// Bimultiplicative extension of `eps(alpha_i, alpha_j) = 1` for
    /// `i <= j` and `(-1)^{<alpha_i, alpha_j>}` for `i > j`.
    pub fn eps_c0(&self, a: &[i64], b: &[i64]) -> RootOfUnity {
        RootOfUnity::sign(self.eps_c0_exponent(a, b, 0))
    }

    /// Exponent of `eps_C0(nu^t a, nu^t b)`.
    fn eps_c0_exponent(&self, a: &[i64], b: &[i64], t: usize) -> i64 {
        let entries = &self.lower[t % self.lower.len()];
        entries.iter().map(|&(i, j, c)| a[i] * b[j] * c).sum()
    }

    /// Product `prod_{-v/2 < j < 0} (-eta^{-j})^{<nu^{-j} a, b>}` over integers `j`.
    pub fn eps_relation_factor(&self, a: &[i64], b: &[i64]) -> RootOfUnity {
        let eta = RootOfUnity::eta(self.v);
        let mut acc = RootOfUnity::ONE;
        // -v/2 < j < 0  <=>  0 < -j < v/2  <=>  2(-j) < v
        let mut t = 1i64;
        while 2 * t < self.v as i64 {
            let base = RootOfUnity::MINUS_ONE * eta.pow(t);
            acc = acc * base.pow(self.form_nu_pow(t as usize, a, b));
            t += 1;
        }
        acc
    }

    pub fn eps_c(&self, a: &[i64], b: &[i64]) -> RootOfUnity {
        self.eps_c0(a, b) * self.eps_relation_factor(a, b).inv()
    }

    pub fn psi(&self, a: &[i64]) -> RootOfUnity {
        match self.tag.family() {
            Family::A2lm1_2 => self.eps_c0(a, a),
            Family::Dl_2 => RootOfUnity::ONE,
            Family::E6_2 => RootOfUnity::sign(a[2] * a[3]) * self.eps_c0(a, a),
            Family::D4_3 => RootOfUnity::sign(a[1] * a[2]) * self.eps_c0(a, a),
        }
    }

    /// `(eps_C0(nu a, nu b), case-table right-hand side)`.
    pub fn nu_case(&self, a: &[i64], b: &[i64]) -> (RootOfUnity, RootOfUnity) {
        let lhs = RootOfUnity::sign(self.eps_c0_exponent(a, b, 1));
        let rhs = match self.tag.family() {
            Family::A2lm1_2 => self.eps_c0(b, a),
            Family::Dl_2 => self.eps_c0(a, b),
            Family::E6_2 => RootOfUnity::sign(a[3] * b[2] + a[2] * b[3]) * self.eps_c0(b, a),
            Family::D4_3 => RootOfUnity::sign(a[1] * b[2] + a[2] * b[1]) * self.eps_c0(b, a),
        };
        (lhs, rhs)
    }
}

fn checked(tag: &AlgebraTag, vs: &[&LatticeVector]) -> Result<CocycleData> {
    for v in vs {
        tag.check(v)?;
    }
    Ok(CocycleData::new(tag))
}

/// `C_0(a, b) = (-1)^{<a, b>}`.
pub fn commutator_c0(tag: &AlgebraTag, a: &LatticeVector, b: &LatticeVector) -> Result<RootOfUnity> {
    Ok(checked(tag, &[a, b])?.c0(&a.0, &b.0))
}

/// `C(a, b) = prod_{j=0}^{v-1} (-eta^j)^{<nu^j a, b>}`.
pub fn commutator_c(tag: &AlgebraTag, a: &LatticeVector, b: &LatticeVector) -> Result<RootOfUnity> {
    Ok(checked(tag, &[a, b])?.c(&a.0, &b.0))
}

pub fn epsilon_c0(tag: &AlgebraTag, a: &LatticeVector, b: &LatticeVector) -> Result<RootOfUnity> {
    Ok(checked(tag, &[a, b])?.eps_c0(&a.0, &b.0))
}

/// Solves `eps_C0(a,b) = prod_{-v/2<j<0} (-eta^{-j})^{<nu^{-j} a, b>} eps_C(a,b)`
/// for `eps_C`. For `v = 2` the product is empty.
pub fn epsilon_c(tag: &AlgebraTag, a: &LatticeVector, b: &LatticeVector) -> Result<RootOfUnity> {
    Ok(checked(tag, &[a, b])?.eps_c(&a.0, &b.0))
}

pub fn psi(tag: &AlgebraTag, a: &LatticeVector) -> Result<RootOfUnity> {
    Ok(checked(tag, &[a])?.psi(&a.0))
}

pub fn nu_epsilon_case_check(
    tag: &AlgebraTag,
    a: &LatticeVector,
    b: &LatticeVector,
) -> Result<(RootOfUnity, RootOfUnity)> {
    Ok(checked(tag, &[a, b])?.nu_case(&a.0, &b.0))
}

/// Every coordinate vector of the given rank with entries in `[-radius, radius]`.
pub fn coordinate_ball(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    let side = (2 * radius + 1) as usize;
    let total = side.pow(rank as u32);
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut v = vec![0i64; rank];
        for c in v.iter_mut() {
            *c = (idx % side) as i64 - radius;
            idx /= side;
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{apply_nu_pow, bilinear_form};

    fn a2() -> AlgebraTag {
        AlgebraTag::a(2).unwrap()
    }

    #[test]
    fn root_of_unity_arithmetic() {
        let eta3 = RootOfUnity::eta(3);
        assert_eq!(eta3.pow(3), RootOfUnity::ONE);
        assert_eq!(eta3.order(), 3);
        assert_eq!((RootOfUnity::MINUS_ONE * eta3).order(), 6);
        assert_eq!(RootOfUnity::eta(2), RootOfUnity::MINUS_ONE);
        assert_eq!(eta3 * eta3.inv(), RootOfUnity::ONE);
    }

    #[test]
    fn c0_examples() {
        let t = a2();
        let (a1, a2_, a3) = (t.simple_root(1).unwrap(), t.simple_root(2).unwrap(), t.simple_root(3).unwrap());
        assert_eq!(commutator_c0(&t, &a1, &a2_).unwrap(), RootOfUnity::MINUS_ONE);
        assert_eq!(commutator_c0(&t, &a1, &a3).unwrap(), RootOfUnity::ONE);
        let x = LatticeVector(vec![1, -2, 3]);
        assert_eq!(commutator_c0(&t, &x, &x).unwrap(), RootOfUnity::ONE);
    }

    #[test]
    fn c_examples() {
        let t = a2();
        let (a1, a2_) = (t.simple_root(1).unwrap(), t.simple_root(2).unwrap());
        assert_eq!(commutator_c(&t, &a2_, &a2_).unwrap(), RootOfUnity::ONE);
        assert_eq!(commutator_c(&t, &a1, &a1).unwrap(), RootOfUnity::ONE);
        assert_eq!(commutator_c(&t, &t.zero(), &a1).unwrap(), RootOfUnity::ONE);
    }

    #[test]
    fn eps_c0_examples() {
        let t = a2();
        let (a1, a2_) = (t.simple_root(1).unwrap(), t.simple_root(2).unwrap());
        assert_eq!(epsilon_c0(&t, &a1, &a2_).unwrap(), RootOfUnity::ONE);
        assert_eq!(epsilon_c0(&t, &a2_, &a1).unwrap(), RootOfUnity::MINUS_ONE);
        let two_a2 = a2_.scale(2);
        let e = epsilon_c0(&t, &a2_, &a1).unwrap();
        assert_eq!(epsilon_c0(&t, &two_a2, &a1).unwrap(), e * e);
        assert_eq!(epsilon_c0(&t, &t.zero(), &a1).unwrap(), RootOfUnity::ONE);
        assert_eq!(epsilon_c0(&t, &a1, &t.zero()).unwrap(), RootOfUnity::ONE);
    }

    #[test]
    fn eps_c_examples() {
        // v = 2: the relation product is empty, so eps_C = eps_C0
        let t = a2();
        for a in coordinate_ball(3, 1) {
            for b in coordinate_ball(3, 1) {
                let (a, b) = (LatticeVector(a.clone()), LatticeVector(b));
                assert_eq!(epsilon_c(&t, &a, &b).unwrap(), epsilon_c0(&t, &a, &b).unwrap());
            }
        }
        // D4_3, (alpha_2, alpha_2): eps_C0 = 1, factor (-eta)^{<nu alpha_2, alpha_2>} = (-eta)^2
        let d = AlgebraTag::d4_3();
        let a2d = d.simple_root(2).unwrap();
        let minus_eta = RootOfUnity::MINUS_ONE * RootOfUnity::eta(3);
        let expected = epsilon_c0(&d, &a2d, &a2d).unwrap() * minus_eta.pow(2).inv();
        assert_eq!(epsilon_c(&d, &a2d, &a2d).unwrap(), expected);
        assert_eq!(expected, RootOfUnity::eta(3));
        assert_eq!(epsilon_c(&d, &d.zero(), &a2d).unwrap(), RootOfUnity::ONE);
    }

    #[test]
    fn psi_examples() {
        let d = AlgebraTag::d(4).unwrap();
        for a in coordinate_ball(4, 1) {
            assert_eq!(psi(&d, &LatticeVector(a)).unwrap(), RootOfUnity::ONE);
        }
        let t = a2();
        assert_eq!(psi(&t, &t.simple_root(1).unwrap()).unwrap(), RootOfUnity::ONE);
        let e = AlgebraTag::e6();
        let x = &e.simple_root(3).unwrap() + &e.simple_root(4).unwrap();
        let expected = RootOfUnity::MINUS_ONE * epsilon_c0(&e, &x, &x).unwrap();
        assert_eq!(psi(&e, &x).unwrap(), expected);
    }

    #[test]
    fn case_table_examples() {
        let d = AlgebraTag::d(4).unwrap();
        let (l, r) = nu_epsilon_case_check(&d, &d.simple_root(1).unwrap(), &d.simple_root(2).unwrap()).unwrap();
        assert_eq!(l, r);
        let t = a2();
        let (a1, a2_, a3) = (t.simple_root(1).unwrap(), t.simple_root(2).unwrap(), t.simple_root(3).unwrap());
        let (l, r) = nu_epsilon_case_check(&t, &a1, &a2_).unwrap();
        assert_eq!(l, epsilon_c0(&t, &a3, &a2_).unwrap());
        assert_eq!(r, epsilon_c0(&t, &a2_, &a1).unwrap());
        assert_eq!(l, r);
        for tag in AlgebraTag::minimal_ranks() {
            let z = tag.zero();
            assert_eq!(nu_epsilon_case_check(&tag, &z, &z).unwrap(), (RootOfUnity::ONE, RootOfUnity::ONE));
        }
    }

    #[test]
    fn nu_hat_order_small_ball() {
        for tag in AlgebraTag::minimal_ranks() {
            let radius = if tag.rank() > 4 { 1 } else { 2 };
            for a in coordinate_ball(tag.rank(), radius) {
                let a = LatticeVector(a);
                let prod: RootOfUnity = (0..tag.twist_order())
                    .map(|j| psi(&tag, &apply_nu_pow(&tag, &a, j).unwrap()).unwrap())
                    .product();
                assert!(prod.is_one(), "{tag} {:?}", a.0);
            }
        }
    }

    #[test]
    fn commutator_c_is_trivial_on_fixed_pairs() {
        // on nu-fixed vectors C reduces to prod_j (-eta^j)^{<a,b>} = ((-1)^v eta^{v(v-1)/2})^{<a,b>}
        let d = AlgebraTag::d4_3();
        let a2d = d.simple_root(2).unwrap();
        let c = commutator_c(&d, &a2d, &a2d).unwrap();
        let base: RootOfUnity = (0..3).map(|j| RootOfUnity::MINUS_ONE * RootOfUnity::eta(3).pow(j)).product();
        assert_eq!(c, base.pow(2));
    }

    #[test]
    fn twisted_evaluation_matches_materialized_images() {
        for tag in AlgebraTag::minimal_ranks() {
            let data = CocycleData::new(&tag);
            let ball = coordinate_ball(tag.rank(), 1);
            for a in ball.iter().step_by(7) {
                for b in ball.iter().step_by(5) {
                    let (la, lb) = (LatticeVector(a.clone()), LatticeVector(b.clone()));
                    let na = apply_nu_pow(&tag, &la, 1).unwrap();
                    let nb = apply_nu_pow(&tag, &lb, 1).unwrap();
                    assert_eq!(data.nu_case(a, b).0, data.eps_c0(&na.0, &nb.0));
                    let mut c = RootOfUnity::ONE;
                    for j in 0..tag.twist_order() {
                        let x = apply_nu_pow(&tag, &la, j).unwrap();
                        let base = RootOfUnity::MINUS_ONE * RootOfUnity::eta(tag.twist_order()).pow(j as i64);
                        c = c * base.pow(bilinear_form(&tag, &x, &lb).unwrap());
                    }
                    assert_eq!(data.c(a, b), c);
                }
            }
        }
    }

    #[test]
    fn ball_size() {
        assert_eq!(coordinate_ball(3, 2).len(), 125);
        assert!(coordinate_ball(2, 1).contains(&vec![-1, 1]));
    }
}

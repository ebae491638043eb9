//! Exhaustive and sampled checks of the identities the character formula
//! rests on, grouped into suites. Every check reports how many instances it
//! ran and the first failing instance, if any.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{coordinate_ball, CocycleData, RootOfUnity};
use crate::engines::{map_reduce, minimal_monomial, AlgebraSpec, Exec};
use crate::error::{Error, Result};
use crate::lattice::AlgebraTag;
use crate::pascal;
use crate::qp::{self, Particle, QPMonomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Cocycle,
    Pascal,
    Qp,
    Minsum,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Cocycle => "cocycle",
            Suite::Pascal => "pascal",
            Suite::Qp => "qp",
            Suite::Minsum => "minsum",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cocycle" => Ok(Suite::Cocycle),
            "pascal" => Ok(Suite::Pascal),
            "qp" => Ok(Suite::Qp),
            "minsum" => Ok(Suite::Minsum),
            "all" => Ok(Suite::All),
            _ => Err(Error::input(format!("unknown suite {s:?}: expected cocycle, pascal, qp, minsum or all"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub cases: u64,
    pub failure: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.cases > 0
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {} ({} cases)", self.suite, self.name, self.cases)?;
        match &self.failure {
            Some(why) => write!(f, ": {why}"),
            None if self.cases == 0 => write!(f, ": no instances"),
            None => Ok(()),
        }
    }
}

/// Running count of instances and the earliest failure, keyed by a position
/// in the enumeration so that parallel runs report the same instance.
#[derive(Default)]
struct Tally {
    cases: u64,
    failure: Option<(u64, String)>,
}

impl Tally {
    fn fail(&mut self, at: u64, why: impl FnOnce() -> String) {
        if self.failure.as_ref().is_none_or(|(k, _)| at < *k) {
            self.failure = Some((at, why()));
        }
    }

    fn merge(mut self, other: Tally) -> Result<Tally> {
        self.cases += other.cases;
        if let Some((at, why)) = other.failure {
            self.fail(at, || why);
        }
        Ok(self)
    }

    fn into_check(self, suite: Suite, name: String) -> Check {
        Check { suite, name, cases: self.cases, failure: self.failure.map(|(_, why)| why) }
    }
}

/// How much of the coordinate ball the cocycle suite covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CocycleScope {
    /// Radius of the ball for single vectors and pairs.
    pub radius: i64,
    /// Balls with more triples than this are covered through parity
    /// classes instead of triple by triple.
    pub triple_budget: u64,
}

impl CocycleScope {
    pub fn full() -> Self {
        CocycleScope { radius: 2, triple_budget: 400_000_000 }
    }

    pub fn quick() -> Self {
        CocycleScope { radius: 1, triple_budget: 2_000_000 }
    }
}

/// Runs a suite; `scope` only affects the cocycle checks.
pub fn run(suite: Suite, scope: &CocycleScope, exec: Exec) -> Result<Vec<Check>> {
    match suite {
        Suite::Cocycle => cocycle_checks(scope, exec),
        Suite::Pascal => Ok(pascal_checks(11)),
        Suite::Qp => qp_checks(exec),
        Suite::Minsum => Ok(minsum_checks()),
        Suite::All => {
            let mut out = Vec::new();
            for s in [Suite::Cocycle, Suite::Pascal, Suite::Qp, Suite::Minsum] {
                out.extend(run(s, scope, exec)?);
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------- cocycle

trait Eps: Fn(&CocycleData, &[i64], &[i64]) -> RootOfUnity + Sync + Send {}
impl<F: Fn(&CocycleData, &[i64], &[i64]) -> RootOfUnity + Sync + Send> Eps for F {}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn cocycle_checks(scope: &CocycleScope, exec: Exec) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for tag in AlgebraTag::minimal_ranks() {
        let data = CocycleData::new(&tag);
        let ball = coordinate_ball(tag.rank(), scope.radius);
        out.push(cocycle_identity(&data, "eps_C0", CocycleData::eps_c0, scope, exec)?);
        if tag.twist_order() > 2 {
            out.push(cocycle_identity(&data, "eps_C", CocycleData::eps_c, scope, exec)?);
        }
        out.push(
            pairs(&ball, exec, |a, b| {
                let lhs = data.eps_c0(a, b) * data.eps_c0(b, a).inv();
                let rhs = data.c0(a, b);
                (lhs != rhs).then(|| format!("a={a:?} b={b:?}: eps(a,b)/eps(b,a) = {lhs}, (-1)^<a,b> = {rhs}"))
            })?
            .into_check(Suite::Cocycle, format!("{tag} commutator recovery, radius {}", scope.radius)),
        );
        out.push(
            pairs(&ball, exec, |a, b| {
                let (lhs, rhs) = data.nu_case(a, b);
                (lhs != rhs).then(|| format!("a={a:?} b={b:?}: eps(nu a, nu b) = {lhs}, table gives {rhs}"))
            })?
            .into_check(Suite::Cocycle, format!("{tag} nu case table, radius {}", scope.radius)),
        );
        let mut order = Tally::default();
        let mut x = vec![0; tag.rank()];
        let mut y = vec![0; tag.rank()];
        for (idx, a) in ball.iter().enumerate() {
            x.copy_from_slice(a);
            let mut prod = RootOfUnity::ONE;
            for _ in 0..tag.twist_order() {
                prod = prod * data.psi(&x);
                data.nu_into(&x, &mut y);
                std::mem::swap(&mut x, &mut y);
            }
            order.cases += 1;
            if !prod.is_one() {
                order.fail(idx as u64, || format!("a={a:?}: product of psi over the nu-orbit is {prod}"));
            }
        }
        out.push(order.into_check(Suite::Cocycle, format!("{tag} nu-hat order, radius {}", scope.radius)));
    }
    Ok(out)
}

fn pairs(
    ball: &[Vec<i64>],
    exec: Exec,
    check: impl Fn(&[i64], &[i64]) -> Option<String> + Sync + Send,
) -> Result<Tally> {
    let n = ball.len() as u64;
    let indexed: Vec<(u64, &Vec<i64>)> = (0..n).zip(ball).collect();
    map_reduce(
        exec,
        &indexed,
        |&(i, a)| {
            let mut t = Tally::default();
            for (j, b) in ball.iter().enumerate() {
                t.cases += 1;
                if let Some(why) = check(a, b) {
                    t.fail(i * n + j as u64, || why);
                }
            }
            Ok(t)
        },
        Tally::default,
        Tally::merge,
    )
}

fn cocycle_identity(data: &CocycleData, label: &str, eps: impl Eps, scope: &CocycleScope, exec: Exec) -> Result<Check> {
    let rank = data.rank() as u32;
    let tag = *data.tag();
    let r = scope.radius;
    if ((2 * r + 1) as u64).pow(3 * rank) > scope.triple_budget {
        return parity_classes(data, label, &eps, r, exec);
    }
    let ball = coordinate_ball(rank as usize, r);
    let n = ball.len() as u64;
    let indexed: Vec<(u64, &Vec<i64>)> = (0..n).zip(&ball).collect();
    let tally = map_reduce(
        exec,
        &indexed,
        |&(i, a)| {
            let mut t = Tally::default();
            let mut bc = vec![0; a.len()];
            for (j, b) in ball.iter().enumerate() {
                let ab = add(a, b);
                let e_ab = eps(data, a, b);
                for (k, c) in ball.iter().enumerate() {
                    for (s, (x, y)) in bc.iter_mut().zip(b.iter().zip(c)) {
                        *s = x + y;
                    }
                    t.cases += 1;
                    let lhs = e_ab * eps(data, &ab, c);
                    let rhs = eps(data, b, c) * eps(data, a, &bc);
                    if lhs != rhs {
                        t.fail((i * n + j as u64) * n + k as u64, || {
                            format!("a={a:?} b={b:?} c={c:?}: {lhs} vs {rhs}")
                        });
                    }
                }
            }
            Ok(t)
        },
        Tally::default,
        Tally::merge,
    )?;
    Ok(tally.into_check(Suite::Cocycle, format!("{tag} {label} 2-cocycle identity, radius {r}")))
}

fn parity_class(x: &[i64]) -> usize {
    x.iter().enumerate().fold(0, |acc, (i, &c)| acc | (((c & 1) as usize) << i))
}

fn class_representative(class: usize, rank: usize) -> Vec<i64> {
    (0..rank).map(|i| ((class >> i) & 1) as i64).collect()
}

/// Exhaustive 2-cocycle check for a sign-valued map over every triple of
/// the ball, without visiting the triples one by one. The identity only
/// evaluates the map on pairs in `B(2r) x B(r)` and `B(r) x B(2r)`. The check
/// confirms on all of those pairs that the value depends on the coordinates
/// mod 2 alone, then confirms the identity on every triple of parity
/// classes. Together these cover every triple in `B(r)^3`.
fn parity_classes(data: &CocycleData, label: &str, eps: impl Eps, r: i64, exec: Exec) -> Result<Check> {
    let rank = data.rank();
    let tag = *data.tag();
    let classes = 1usize << rank;
    let table: Vec<Vec<RootOfUnity>> = (0..classes)
        .map(|x| {
            let rx = class_representative(x, rank);
            (0..classes).map(|y| eps(data, &rx, &class_representative(y, rank))).collect()
        })
        .collect();
    let name = format!("{tag} {label} 2-cocycle identity, radius {r}, via parity classes");

    if let Some((x, y)) = (0..classes)
        .flat_map(|x| (0..classes).map(move |y| (x, y)))
        .find(|&(x, y)| table[x][y] != RootOfUnity::ONE && table[x][y] != RootOfUnity::MINUS_ONE)
    {
        let mut t = Tally::default();
        t.fail(0, || format!("value {} on classes ({x:b}, {y:b}) is not a sign", table[x][y]));
        return Ok(t.into_check(Suite::Cocycle, name));
    }

    let wide = coordinate_ball(rank, 2 * r);
    let narrow = coordinate_ball(rank, r);
    let narrow_classes: Vec<usize> = narrow.iter().map(|y| parity_class(y)).collect();
    let n = narrow.len() as u64;
    let indexed: Vec<(u64, &Vec<i64>)> = (0..wide.len() as u64).zip(&wide).collect();
    let pairs = map_reduce(
        exec,
        &indexed,
        |&(i, x)| {
            let mut t = Tally::default();
            let cx = parity_class(x);
            for (j, (y, &cy)) in narrow.iter().zip(&narrow_classes).enumerate() {
                t.cases += 2;
                let at = i * n + j as u64;
                if eps(data, x, y) != table[cx][cy] {
                    t.fail(2 * at, || format!("eps({x:?}, {y:?}) differs from its parity class value"));
                }
                if eps(data, y, x) != table[cy][cx] {
                    t.fail(2 * at + 1, || format!("eps({y:?}, {x:?}) differs from its parity class value"));
                }
            }
            Ok(t)
        },
        Tally::default,
        Tally::merge,
    )?;

    let mut triples = Tally::default();
    for a in 0..classes {
        for b in 0..classes {
            for c in 0..classes {
                triples.cases += 1;
                if table[a][b] * table[a ^ b][c] != table[b][c] * table[a][b ^ c] {
                    let at = ((a * classes + b) * classes + c) as u64;
                    triples.fail(at, || {
                        let rep = |x| class_representative(x, rank);
                        format!("classes a={:?} b={:?} c={:?}", rep(a), rep(b), rep(c))
                    });
                }
            }
        }
    }

    let failure = pairs
        .failure
        .map(|(_, why)| why)
        .or(triples.failure.map(|(_, why)| format!("identity fails on parity {why}")));
    Ok(Check { suite: Suite::Cocycle, name, cases: pairs.cases + triples.cases, failure })
}

// ----------------------------------------------------------------- pascal

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Determinants for `n <= 6`, `v` in `{2, 3}`, at zero and at 20 random
/// shifts each, the triangular factorization for `n <= 4`, and 200 random
/// Chu-Vandermonde instances.
pub fn pascal_checks(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let record = |t: &mut Tally, idx: u64, r: Result<Option<String>>| {
        t.cases += 1;
        match r {
            Ok(None) => {}
            Ok(Some(why)) => t.fail(idx, || why),
            Err(e) => t.fail(idx, || e.to_string()),
        }
    };
    for v in [2u32, 3] {
        for n in 1..=6usize {
            let expected = pascal::expected_base_det(n, v);
            let mut base = Tally::default();
            record(
                &mut base,
                0,
                pascal::base_matrix_det(n, v).map(|d| (d != expected).then(|| format!("det {d}, expected {expected}"))),
            );
            out.push(base.into_check(Suite::Pascal, format!("base determinant n={n} v={v} is {expected}")));

            let mut shifted = Tally::default();
            for idx in 0..20 {
                let p = random_rational(&mut rng, 50);
                let r = pascal::pascal_matrix(n, v, &p)
                    .and_then(|m| m.determinant())
                    .map(|d| (d != expected).then(|| format!("p={p}: det {d}, expected {expected}")));
                record(&mut shifted, idx, r);
            }
            out.push(shifted.into_check(Suite::Pascal, format!("shifted determinant n={n} v={v}, 20 random p")));

            if n <= 4 {
                let mut factor = Tally::default();
                for idx in 0..5 {
                    let p = random_rational(&mut rng, 50);
                    let r = pascal::triangular_factor_check(n, v, &p)
                        .map(|ok| (!ok).then(|| format!("p={p}: no unitriangular factorization")));
                    record(&mut factor, idx, r);
                }
                out.push(factor.into_check(Suite::Pascal, format!("triangular factorization n={n} v={v}")));
            }
        }
    }
    let mut chu = Tally::default();
    for idx in 0..200 {
        let a = random_rational(&mut rng, 50);
        let b = random_rational(&mut rng, 50);
        let n = rng.gen_range(0..=8u32);
        let (lhs, rhs) = pascal::chu_vandermonde(&a, &b, n);
        chu.cases += 1;
        if lhs != rhs {
            chu.fail(idx, || format!("a={a} b={b} N={n}: {lhs} vs {rhs}"));
        }
    }
    out.push(chu.into_check(Suite::Pascal, "Chu-Vandermonde, 200 random (a, b, N)".into()));
    out
}

// ----------------------------------------------------------------- minsum

/// Partitions of every size up to `max_size` with parts at most `max_part`.
pub fn partitions_up_to(max_size: u32, max_part: u32) -> Vec<Vec<u32>> {
    fn go(left: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        for part in (1..=max_part.min(left)).rev() {
            prefix.push(part);
            go(left - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(max_size, max_part, &mut Vec::new(), &mut out);
    out
}

/// Transpose of the Ferrers diagram, cell by cell.
fn transpose(parts: &[u32]) -> Vec<u32> {
    let mut cols: Vec<u32> = Vec::new();
    for &n in parts {
        for c in 0..n as usize {
            if c == cols.len() {
                cols.push(0);
            }
            cols[c] += 1;
        }
    }
    cols
}

fn dot(a: &[u32], b: &[u32]) -> u64 {
    a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum()
}

/// The min-sum identities over every partition of size at most 14 with
/// parts at most 6, and every pair of such partitions.
pub fn minsum_checks() -> Vec<Check> {
    let family = partitions_up_to(14, 6);
    let conj: Vec<Vec<u32>> = family.iter().map(|p| qp::conjugate(p)).collect();

    let mut conjugation = Tally::default();
    let mut same = Tally::default();
    for (idx, (lam, c)) in family.iter().zip(&conj).enumerate() {
        conjugation.cases += 1;
        if *c != transpose(lam) || qp::conjugate(c) != *lam {
            conjugation.fail(idx as u64, || format!("{lam:?}: conjugate {c:?}, diagram transpose {:?}", transpose(lam)));
        }
        same.cases += 1;
        let (lhs, rhs) = (qp::minsum_same(lam), dot(c, c));
        if lhs != rhs {
            same.fail(idx as u64, || format!("{lam:?}: {lhs} vs {rhs}"));
        }
    }
    let mut cross = Tally::default();
    let n = family.len() as u64;
    for (i, (lam, lc)) in family.iter().zip(&conj).enumerate() {
        for (j, (mu, mc)) in family.iter().zip(&conj).enumerate() {
            cross.cases += 1;
            let (lhs, rhs) = (qp::minsum_cross(lam, mu), dot(lc, mc));
            if lhs != rhs {
                cross.fail(i as u64 * n + j as u64, || format!("{lam:?}, {mu:?}: {lhs} vs {rhs}"));
            }
        }
    }
    vec![
        conjugation.into_check(Suite::Minsum, "conjugation is the diagram transpose and an involution".into()),
        same.into_check(Suite::Minsum, "same-color min-sum equals the sum of squared conjugate parts".into()),
        cross.into_check(Suite::Minsum, "cross min-sum equals the conjugate dot product".into()),
    ]
}

// --------------------------------------------------------------------- qp

/// The algebras used by the engine checks: minimal ranks plus the next
/// rank of each infinite family.
pub fn grid_algebras() -> Vec<AlgebraTag> {
    let mut out = vec![AlgebraTag::a(2).expect("valid rank"), AlgebraTag::a(3).expect("valid rank")];
    out.extend([AlgebraTag::d(4).expect("valid rank"), AlgebraTag::d(5).expect("valid rank")]);
    out.extend([AlgebraTag::e6(), AlgebraTag::d4_3()]);
    out
}

/// Removing the leading color-1 particle from a basis monomial whose
/// leading particle sits at its bound gives a basis monomial again.
/// Covers every charge-type of total charge at most `max_total` and every
/// energy within `slack` lattice steps of its bound.
pub fn closure_check(tag: &AlgebraTag, k: u32, max_total: u32, slack: u32, exec: Exec) -> Result<Check> {
    let w = qp::self_weight(tag, 0)?;
    let types: Vec<_> = qp::charge_types_up_to(tag, k, max_total)
        .into_iter()
        .filter(|ct| !ct.color(0).is_empty())
        .enumerate()
        .collect();
    let tally = map_reduce(
        exec,
        &types,
        |(t_idx, ct)| {
            let mut t = Tally::default();
            let at = |j: usize| ((*t_idx as u64) << 32) + j as u64;
            for (j, m) in qp::b_monomials_near_bounds(tag, ct, slack)?.iter().enumerate() {
                if !qp::is_member_b(tag, k, m)? {
                    t.fail(at(j), || format!("generated monomial {m} is not in the basis set"));
                    continue;
                }
                let lead = m.color(0)[0];
                if lead.energy != -w * lead.charge as i64 {
                    continue;
                }
                t.cases += 1;
                let rest = qp::remove_leading(tag, k, m, lead.charge)?;
                if !qp::is_member_b(tag, k, &rest)? {
                    t.fail(at(j), || format!("{m} -> {rest}, which is not in the basis set"));
                }
            }
            Ok(t)
        },
        Tally::default,
        Tally::merge,
    )?;
    Ok(tally.into_check(
        Suite::Qp,
        format!("{tag} k={k} leading-particle removal stays in the basis set (charge <= {max_total}, slack {slack})"),
    ))
}

/// For every charge-type of total charge at most `max_total`, the lightest
/// basis monomial has degree equal to the quadratic form of the dual
/// charge-type, and no basis monomial near the bounds is lighter.
pub fn lightest_degree_check(tag: &AlgebraTag, k: u32, max_total: u32) -> Result<Check> {
    let spec = AlgebraSpec::new(*tag, k)?;
    let mut t = Tally::default();
    for (idx, ct) in qp::charge_types_up_to(tag, k, max_total).iter().enumerate() {
        t.cases += 1;
        let at = idx as u64;
        let form_value = spec.form().evaluate(&ct.dual(k));
        let low = minimal_monomial(&spec, ct)?;
        if !qp::is_member_b(tag, k, &low)? {
            t.fail(at, || format!("lightest monomial {low} is not in the basis set"));
            continue;
        }
        if low.degree() != form_value {
            t.fail(at, || format!("{:?}: lightest degree {}, form gives {form_value}", ct.colors(), low.degree()));
            continue;
        }
        let near = qp::b_monomials_near_bounds(tag, ct, 2)?;
        let lightest_near = near.iter().map(QPMonomial::degree).min().unwrap_or(Rational64::from_integer(0));
        if lightest_near != form_value {
            t.fail(at, || format!("{:?}: lightest monomial near the bounds has degree {lightest_near}", ct.colors()));
            continue;
        }
        for (i, color) in low.colors().iter().enumerate() {
            let unit = qp::energy_unit(tag, i)?;
            for p in 0..color.len() {
                let mut raised: Vec<Vec<Particle>> = low.colors().to_vec();
                raised[i][p].energy += unit;
                let raised = QPMonomial::from_particles(raised)?;
                if qp::is_member_b(tag, k, &raised)? {
                    t.fail(at, || format!("{raised} is in the basis set and lighter than {low}"));
                }
            }
        }
    }
    Ok(t.into_check(
        Suite::Qp,
        format!("{tag} k={k} lightest monomial degree equals the quadratic form (charge <= {max_total})"),
    ))
}

pub fn qp_checks(exec: Exec) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for tag in grid_algebras() {
        for k in 1..=3 {
            out.push(closure_check(&tag, k, 5, 3, exec)?);
        }
    }
    for tag in grid_algebras() {
        for k in 1..=2 {
            out.push(lightest_degree_check(&tag, k, 4)?);
        }
    }
    Ok(out)
}

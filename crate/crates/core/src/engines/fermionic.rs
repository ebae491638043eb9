use num_bigint::BigInt;
use num_rational::Rational64;

use super::{map_reduce, AlgebraSpec, Exec};
use crate::error::Result;
use crate::qseries::{dense_mul, pochhammer_inverse_dense, GradedSeries};

/// Fermionic sum over dual-charge-types, on the default execution path.
pub fn fermionic_char(spec: &AlgebraSpec, trunc: Rational64) -> Result<GradedSeries> {
    fermionic_char_with(spec, trunc, Exec::default())
}

pub fn fermionic_char_with(spec: &AlgebraSpec, trunc: Rational64, exec: Exec) -> Result<GradedSeries> {
    let max_num = spec.check_trunc(trunc)?;
    let form = spec.form();
    let bx = form.layer_box(trunc)?;
    let layers = short_layers(&bx, |x| form.layer_num(x) <= max_num);
    let table = PochhammerTable::new(spec, &bx, max_num);
    let empty = GradedSeries::zero(spec.den(), spec.num_colors(), trunc)?;

    // chains start from the first layer; the all-zero chain is the constant term
    map_reduce(
        exec,
        &layers,
        |first| {
            let mut out = empty.clone();
            let mut chain = vec![first.clone()];
            let budget = max_num - form.layer_num(first);
            if budget >= 0 {
                extend_chains(spec, &layers, &table, max_num, budget, &mut chain, &mut out)?;
            }
            Ok(out)
        },
        || empty.clone(),
        |a, b| a.merge(b),
    )
}

/// Largest total charge of a dual-charge-type with `Q(R) <= trunc`.
pub(crate) fn max_color_degree(spec: &AlgebraSpec, trunc: Rational64) -> Result<u32> {
    let max_num = spec.check_trunc(trunc)?;
    let form = spec.form();
    let layers = short_layers(&form.layer_box(trunc)?, |x| {
        x.iter().any(|&v| v > 0) && form.layer_num(x) <= max_num
    });
    fn go(spec: &AlgebraSpec, layers: &[Vec<u32>], top: Option<&Vec<u32>>, depth: u32, budget: i64) -> u32 {
        if depth == spec.level() {
            return 0;
        }
        layers
            .iter()
            .filter(|x| top.is_none_or(|t| x.iter().zip(t).all(|(a, b)| a <= b)))
            .filter_map(|x| {
                let cost = spec.form().layer_num(x);
                (cost <= budget).then(|| x.iter().sum::<u32>() + go(spec, layers, Some(x), depth + 1, budget - cost))
            })
            .max()
            .unwrap_or(0)
    }
    Ok(go(spec, &layers, None, 0, max_num))
}

/// All nonnegative vectors inside the box accepted by `keep`, in
/// lexicographic order.
pub(crate) fn short_layers(bx: &[u32], keep: impl Fn(&[u32]) -> bool) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut x = vec![0u32; bx.len()];
    loop {
        if keep(&x) {
            out.push(x.clone());
        }
        let mut i = bx.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < bx[i] {
                x[i] += 1;
                break;
            }
            x[i] = 0;
        }
    }
}

/// Dense expansions of `1/(q^u; q^u)_r` for every color and every `r` that
/// can occur.
pub(crate) struct PochhammerTable {
    per_color: Vec<Vec<Vec<BigInt>>>,
}

impl PochhammerTable {
    pub(crate) fn new(spec: &AlgebraSpec, bx: &[u32], max_num: i64) -> Self {
        let len = max_num.max(0) as usize;
        let per_color = (0..spec.num_colors())
            .map(|i| {
                let step = spec.unit_num(i) as usize;
                (0..=bx[i]).map(|r| pochhammer_inverse_dense(step, r, len)).collect()
            })
            .collect();
        PochhammerTable { per_color }
    }

    fn get(&self, color: usize, r: u32) -> &[BigInt] {
        &self.per_color[color][r as usize]
    }
}

/// Adds the term of `chain` and recurses into every admissible next layer.
fn extend_chains(
    spec: &AlgebraSpec,
    layers: &[Vec<u32>],
    table: &PochhammerTable,
    max_num: i64,
    budget: i64,
    chain: &mut Vec<Vec<u32>>,
    out: &mut GradedSeries,
) -> Result<()> {
    let k = spec.level() as usize;
    let last = chain.last().expect("chain is never empty").clone();
    let is_zero = last.iter().all(|&x| x == 0);
    // a zero layer only ends a chain
    if is_zero || chain.len() == k {
        if !is_zero || chain.len() == 1 {
            add_chain_term(spec, chain, table, max_num - budget, max_num, out)?;
        }
        return Ok(());
    }
    add_chain_term(spec, chain, table, max_num - budget, max_num, out)?;
    for next in layers {
        if next.iter().all(|&x| x == 0) || next.iter().zip(&last).any(|(a, b)| a > b) {
            continue;
        }
        let cost = spec.form().layer_num(next);
        if cost <= budget {
            chain.push(next.clone());
            extend_chains(spec, layers, table, max_num, budget - cost, chain, out)?;
            chain.pop();
        }
    }
    Ok(())
}

fn add_chain_term(
    spec: &AlgebraSpec,
    chain: &[Vec<u32>],
    table: &PochhammerTable,
    shift: i64,
    max_num: i64,
    out: &mut GradedSeries,
) -> Result<()> {
    let len = (max_num - shift + 1) as usize;
    let mut dense = vec![BigInt::from(1)];
    dense.resize(len, BigInt::from(0));
    let colors: Vec<u32> = (0..spec.num_colors()).map(|i| chain.iter().map(|x| x[i]).sum()).collect();
    for i in 0..spec.num_colors() {
        for s in 0..chain.len() {
            let below = chain.get(s + 1).map_or(0, |x| x[i]);
            let r = chain[s][i] - below;
            if r > 0 {
                dense = dense_mul(&dense, table.get(i, r), len);
            }
        }
    }
    out.add_dense(shift, &colors, &dense)
}

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Rational64;

use super::{enumeration_char_with, fermionic_char_with, printed_theorem_char_with, AlgebraSpec, Exec};
use crate::error::{Error, Result};
use crate::lattice::AlgebraTag;
use crate::qseries::{format_exponent, GradedSeries, SeriesKey};

/// At most this many mismatching terms are kept in a report.
pub const MAX_REPORTED: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub q_num: i64,
    pub q_den: u32,
    pub colors: Vec<u32>,
    pub left: BigInt,
    pub right: BigInt,
}

impl Mismatch {
    pub fn exponent(&self) -> Rational64 {
        Rational64::new(self.q_num, self.q_den as i64)
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q^({}) y^{:?}: {} vs {}",
            format_exponent(self.q_num, self.q_den),
            self.colors,
            self.left,
            self.right
        )
    }
}

#[derive(Clone, Debug)]
pub struct EngineReport {
    pub algebra: AlgebraTag,
    pub level: u32,
    pub trunc: Rational64,
    pub engines: [String; 2],
    pub term_counts: [usize; 2],
    pub elapsed: Duration,
    /// The first [`MAX_REPORTED`] mismatches in canonical term order.
    pub mismatches: Vec<Mismatch>,
    pub mismatch_count: usize,
    /// The first mismatch with a nonnegative exponent.
    pub first_nonnegative: Option<Mismatch>,
}

impl EngineReport {
    pub fn is_match(&self) -> bool {
        self.mismatch_count == 0
    }

    pub fn first_divergence(&self) -> Option<&Mismatch> {
        self.mismatches.first()
    }

    /// One line: `identical` or the first diverging term.
    pub fn verdict(&self) -> String {
        match self.first_divergence() {
            None => "identical".to_string(),
            Some(m) => format!("first divergence at {m} ({} mismatching terms)", self.mismatch_count),
        }
    }
}

impl fmt::Display for EngineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} k={} N={}: {} ({} terms) vs {} ({} terms) in {:.3}s: {}",
            self.algebra,
            self.level,
            self.trunc,
            self.engines[0],
            self.term_counts[0],
            self.engines[1],
            self.term_counts[1],
            self.elapsed.as_secs_f64(),
            self.verdict()
        )
    }
}

/// Termwise difference of two series over the same algebra, plus extra
/// left-hand terms not representable in a series.
fn diff(left: &GradedSeries, extra_left: &[(SeriesKey, BigInt)], right: &GradedSeries) -> Diff {
    let den = left.den();
    let mut keys: BTreeSet<&SeriesKey> = left.terms().map(|(k, _)| k).collect();
    keys.extend(right.terms().map(|(k, _)| k));
    keys.extend(extra_left.iter().map(|(k, _)| k));
    let extra: BTreeMap<&SeriesKey, &BigInt> = extra_left.iter().map(|(k, c)| (k, c)).collect();
    let mut out = Diff::default();
    for key in keys {
        let q = Rational64::new(key.q_num, den as i64);
        let l = match extra.get(key) {
            Some(&c) => c.clone(),
            None => left.coefficient(q, &key.colors),
        };
        let r = if key.q_num < 0 { BigInt::from(0) } else { right.coefficient(q, &key.colors) };
        if l != r {
            let m = Mismatch { q_num: key.q_num, q_den: den, colors: key.colors.clone(), left: l, right: r };
            out.count += 1;
            if out.first_nonnegative.is_none() && key.q_num >= 0 {
                out.first_nonnegative = Some(m.clone());
            }
            if out.listed.len() < MAX_REPORTED {
                out.listed.push(m);
            }
        }
    }
    out
}

#[derive(Default)]
struct Diff {
    listed: Vec<Mismatch>,
    count: usize,
    first_nonnegative: Option<Mismatch>,
}

/// Mismatches between two series, in canonical order, and their total number.
pub fn compare_series(left: &GradedSeries, right: &GradedSeries) -> Result<(Vec<Mismatch>, usize)> {
    if left.den() != right.den() || left.num_colors() != right.num_colors() {
        return Err(Error::SeriesMismatch(format!(
            "series over 1/{} with {} colors against 1/{} with {} colors",
            left.den(),
            left.num_colors(),
            right.den(),
            right.num_colors()
        )));
    }
    let d = diff(left, &[], right);
    Ok((d.listed, d.count))
}

/// Fermionic sum against basis enumeration.
pub fn compare_engines(spec: &AlgebraSpec, trunc: Rational64, exec: Exec) -> Result<EngineReport> {
    let start = Instant::now();
    let fermionic = fermionic_char_with(spec, trunc, exec)?;
    let enumerated = enumeration_char_with(spec, trunc, exec)?;
    let d = diff(&fermionic, &[], &enumerated);
    Ok(EngineReport {
        algebra: *spec.tag(),
        level: spec.level(),
        trunc,
        engines: ["fermionic".into(), "enumeration".into()],
        term_counts: [fermionic.len(), enumerated.len()],
        elapsed: start.elapsed(),
        mismatches: d.listed,
        mismatch_count: d.count,
        first_nonnegative: d.first_nonnegative,
    })
}

/// The closed form with its displayed coefficients against basis enumeration.
pub fn compare_printed(spec: &AlgebraSpec, trunc: Rational64, exec: Exec) -> Result<EngineReport> {
    let start = Instant::now();
    let printed = printed_theorem_char_with(spec, trunc, exec)?;
    let mut enumerated = enumeration_char_with(spec, trunc, exec)?;
    if let Some(cap) = printed.color_degree_cap {
        enumerated = enumerated.restrict_color_degree(cap);
    }
    let d = diff(&printed.series, &printed.negative_terms, &enumerated);
    Ok(EngineReport {
        algebra: *spec.tag(),
        level: spec.level(),
        trunc,
        engines: ["printed".into(), "enumeration".into()],
        term_counts: [printed.series.len() + printed.negative_terms.len(), enumerated.len()],
        elapsed: start.elapsed(),
        mismatches: d.listed,
        mismatch_count: d.count,
        first_nonnegative: d.first_nonnegative,
    })
}

//! Serialized forms of characters and engine comparisons.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use twistchar_core::engines::{EngineReport, Mismatch, PrintedChar};
use twistchar_core::lattice::AlgebraTag;
use twistchar_core::qseries::{format_exponent, GradedSeries};

pub type WriteResult = Result<(), Box<dyn std::error::Error + Send + Sync>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub q_num: i64,
    pub q_den: u32,
    pub colors: Vec<u32>,
    /// Decimal, arbitrary precision.
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub family: String,
    pub rank: u32,
    pub level: u32,
    /// `num/den`.
    pub trunc: String,
    pub engine: String,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchRow {
    pub q_num: i64,
    pub q_den: u32,
    pub colors: Vec<u32>,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareDoc {
    pub family: String,
    pub rank: u32,
    pub level: u32,
    pub trunc: String,
    pub engine: String,
    /// Which engine produced `left` and which `right`.
    pub engines: [String; 2],
    pub identical: bool,
    pub mismatch_count: usize,
    /// The first mismatches in canonical order.
    pub mismatches: Vec<MismatchRow>,
}

pub fn format_trunc(n: Rational64) -> String {
    format!("{}/{}", n.numer(), n.denom())
}

fn term(q_num: i64, q_den: u32, colors: &[u32], coeff: &BigInt) -> Term {
    Term { q_num, q_den, colors: colors.to_vec(), coeff: coeff.to_string() }
}

impl SeriesDoc {
    pub fn new(tag: &AlgebraTag, level: u32, engine: &str, series: &GradedSeries) -> Self {
        let den = series.den();
        SeriesDoc {
            family: tag.family().name().to_string(),
            rank: tag.l(),
            level,
            trunc: format_trunc(series.trunc()),
            engine: engine.to_string(),
            terms: series.terms().map(|(k, c)| term(k.q_num, den, &k.colors, c)).collect(),
        }
    }

    /// The printed closed form, with terms of negative exponent listed
    /// first in the same canonical order.
    pub fn printed(tag: &AlgebraTag, level: u32, printed: &PrintedChar) -> Self {
        let mut doc = SeriesDoc::new(tag, level, "printed", &printed.series);
        let den = printed.series.den();
        let negative = printed.negative_terms.iter().map(|(k, c)| term(k.q_num, den, &k.colors, c));
        doc.terms = negative.chain(doc.terms).collect();
        doc
    }
}

impl CompareDoc {
    pub fn new(tag: &AlgebraTag, report: &EngineReport) -> Self {
        let row = |m: &Mismatch| MismatchRow {
            q_num: m.q_num,
            q_den: m.q_den,
            colors: m.colors.clone(),
            left: m.left.to_string(),
            right: m.right.to_string(),
        };
        CompareDoc {
            family: tag.family().name().to_string(),
            rank: tag.l(),
            level: report.level,
            trunc: format_trunc(report.trunc),
            engine: "compare".to_string(),
            engines: report.engines.clone(),
            identical: report.is_match(),
            mismatch_count: report.mismatch_count,
            mismatches: report.mismatches.iter().map(row).collect(),
        }
    }
}

fn colors_field(colors: &[u32]) -> String {
    colors.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn monomial(q_num: i64, q_den: u32, colors: &[u32]) -> String {
    let mut s = format!("q^({})", format_exponent(q_num, q_den));
    for (i, e) in colors.iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(&format!(" y{}", i + 1)),
            e => s.push_str(&format!(" y{}^{e}", i + 1)),
        }
    }
    s
}

pub fn write_series(doc: &SeriesDoc, format: Format, out: &mut dyn Write) -> WriteResult {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["family", "rank", "level", "trunc", "engine", "q_num", "q_den", "colors", "coeff"])?;
            for t in &doc.terms {
                w.write_record([
                    doc.family.clone(),
                    doc.rank.to_string(),
                    doc.level.to_string(),
                    doc.trunc.clone(),
                    doc.engine.clone(),
                    t.q_num.to_string(),
                    t.q_den.to_string(),
                    colors_field(&t.colors),
                    t.coeff.clone(),
                ])?;
            }
            w.flush()?;
        }
        Format::Pretty => {
            writeln!(
                out,
                "{} rank {} level {} up to q^({}), {} engine, {} terms",
                doc.family,
                doc.rank,
                doc.level,
                doc.trunc,
                doc.engine,
                doc.terms.len()
            )?;
            for t in &doc.terms {
                writeln!(out, "  {:>12}  {}", t.coeff, monomial(t.q_num, t.q_den, &t.colors))?;
            }
        }
    }
    Ok(())
}

pub fn write_compare(doc: &CompareDoc, report: &EngineReport, format: Format, out: &mut dyn Write) -> WriteResult {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["family", "rank", "level", "trunc", "q_num", "q_den", "colors", "left", "right"])?;
            for m in &doc.mismatches {
                w.write_record([
                    doc.family.clone(),
                    doc.rank.to_string(),
                    doc.level.to_string(),
                    doc.trunc.clone(),
                    m.q_num.to_string(),
                    m.q_den.to_string(),
                    colors_field(&m.colors),
                    m.left.clone(),
                    m.right.clone(),
                ])?;
            }
            w.flush()?;
        }
        Format::Pretty => {
            writeln!(
                out,
                "{} rank {} level {} up to q^({}): {} ({} terms) vs {} ({} terms): {}",
                doc.family,
                doc.rank,
                doc.level,
                doc.trunc,
                doc.engines[0],
                report.term_counts[0],
                doc.engines[1],
                report.term_counts[1],
                report.verdict()
            )?;
            for m in &doc.mismatches {
                writeln!(out, "  {}: {} {} vs {} {}", monomial(m.q_num, m.q_den, &m.colors), doc.engines[0], m.left, doc.engines[1], m.right)?;
            }
        }
    }
    Ok(())
}

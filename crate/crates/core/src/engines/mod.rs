//! Character engines: the fermionic sum over dual-charge-types and the
//! direct enumeration of basis monomials, plus the harness comparing them.

mod compare;
mod enumeration;
mod fermionic;
mod form;
mod printed;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::lattice::{AlgebraTag, ColorClass};
use crate::qp;

pub use compare::{compare_engines, compare_printed, compare_series, EngineReport, Mismatch};
pub use enumeration::{enumeration_char, enumeration_char_with, minimal_monomial};
pub use fermionic::{fermionic_char, fermionic_char_with};
pub use form::QuadraticForm;
pub use printed::{printed_theorem_char, printed_theorem_char_with, PrintedChar};

/// How the engines spread work. The parallel path runs on the current
/// rayon pool, so callers control the thread count with `ThreadPool::install`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Maps every item and folds the results with an associative, commutative
/// `reduce`, so the outcome does not depend on the schedule.
pub(crate) fn map_reduce<T, R, M, I, F>(exec: Exec, items: &[T], map: M, identity: I, reduce: F) -> Result<R>
where
    T: Sync,
    R: Send,
    M: Fn(&T) -> Result<R> + Sync + Send,
    I: Fn() -> R + Sync + Send,
    F: Fn(R, R) -> Result<R> + Sync + Send,
{
    match exec {
        Exec::Sequential => items.iter().try_fold(identity(), |acc, x| reduce(acc, map(x)?)),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(&map).try_reduce(&identity, &reduce)
        }
    }
}

/// An algebra at a fixed level together with the coefficient table that
/// drives the character formula.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    tag: AlgebraTag,
    level: u32,
    classes: Vec<ColorClass>,
    weights: Vec<Rational64>,
    cross: Vec<Rational64>,
    form: QuadraticForm,
}

impl AlgebraSpec {
    /// The coefficient table read off the basis-set bounds. Fails if the
    /// resulting per-layer form is not positive definite.
    pub fn new(tag: AlgebraTag, level: u32) -> Result<Self> {
        let cross = (0..tag.num_colors())
            .map(|i| qp::cross_coupling(&tag, i))
            .collect::<Result<Vec<_>>>()?;
        let spec = Self::with_cross(tag, level, cross)?;
        if !spec.form.is_positive_definite() {
            return Err(Error::NotPositiveDefinite(format!(
                "{tag}: leading minors {:?}",
                spec.form.leading_minors().iter().map(|m| m.to_string()).collect::<Vec<_>>()
            )));
        }
        Ok(spec)
    }

    /// The coefficient table as displayed in the closed-form character;
    /// differs from [`AlgebraSpec::new`] only in the `E6_2` coupling of
    /// colors 1 and 2. Positive definiteness is not required.
    pub fn printed(tag: AlgebraTag, level: u32) -> Result<Self> {
        let cross = (0..tag.num_colors())
            .map(|i| match (tag.family(), i) {
                (crate::lattice::Family::E6_2, 1) => Ok(Rational64::from_integer(1)),
                _ => qp::cross_coupling(&tag, i),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_cross(tag, level, cross)
    }

    fn with_cross(tag: AlgebraTag, level: u32, cross: Vec<Rational64>) -> Result<Self> {
        if level == 0 {
            return Err(Error::input("level must be at least 1"));
        }
        let weights = (0..tag.num_colors())
            .map(|i| qp::self_weight(&tag, i))
            .collect::<Result<Vec<_>>>()?;
        let form = QuadraticForm::new(tag.twist_order(), &weights, &cross)?;
        Ok(AlgebraSpec { tag, level, classes: tag.color_classes(), weights, cross, form })
    }

    pub fn tag(&self) -> &AlgebraTag {
        &self.tag
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn num_colors(&self) -> usize {
        self.classes.len()
    }

    /// Exponent denominator of every series produced for this algebra.
    pub fn den(&self) -> u32 {
        self.tag.twist_order()
    }

    pub fn classes(&self) -> &[ColorClass] {
        &self.classes
    }

    pub fn weights(&self) -> &[Rational64] {
        &self.weights
    }

    /// Coupling between colors `i - 1` and `i`, at index `i` (index 0 is zero).
    pub fn cross(&self) -> &[Rational64] {
        &self.cross
    }

    /// Pochhammer unit of each color, `1/d_i`.
    pub fn units(&self) -> Vec<Rational64> {
        self.classes.iter().map(|c| c.unit()).collect()
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub(crate) fn check_trunc(&self, trunc: Rational64) -> Result<i64> {
        if trunc < Rational64::from_integer(0) {
            return Err(Error::input(format!("truncation {trunc} is negative")));
        }
        Ok((trunc * Rational64::from_integer(self.den() as i64)).floor().to_integer())
    }

    /// Lattice step of color `i` as a numerator over [`AlgebraSpec::den`].
    pub(crate) fn unit_num(&self, i: usize) -> i64 {
        (self.den() / self.classes[i].denominator) as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Family;

    #[test]
    fn derived_tables_are_positive_definite() {
        for family in Family::ALL {
            for l in family.min_rank()..family.min_rank() + 3 {
                let Ok(tag) = AlgebraTag::new(family, l) else { continue };
                let spec = AlgebraSpec::new(tag, 1).unwrap();
                assert!(spec.form().is_positive_definite(), "{tag}");
            }
        }
    }

    #[test]
    fn printed_table_differs_only_for_e6() {
        for tag in AlgebraTag::minimal_ranks() {
            let derived = AlgebraSpec::new(tag, 1).unwrap();
            let printed = AlgebraSpec::printed(tag, 1).unwrap();
            let same = derived.cross() == printed.cross();
            assert_eq!(same, tag.family() != Family::E6_2, "{tag}");
        }
        let printed = AlgebraSpec::printed(AlgebraTag::e6(), 1).unwrap();
        assert!(!printed.form().is_positive_definite());
    }

    #[test]
    fn rejects_level_zero() {
        assert!(AlgebraSpec::new(AlgebraTag::d4_3(), 0).is_err());
    }

    #[test]
    fn map_reduce_paths_agree() {
        let items: Vec<u64> = (0..100).collect();
        let run = |exec| map_reduce(exec, &items, |x| Ok(x * x), || 0u64, |a, b| Ok(a + b)).unwrap();
        assert_eq!(run(Exec::Sequential), 328350);
        assert_eq!(run(Exec::default()), 328350);
    }
}

use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;
use twistchar_core::engines::{
    compare_engines, enumeration_char_with, fermionic_char_with, printed_theorem_char, AlgebraSpec, Exec,
};
use twistchar_core::lattice::AlgebraTag;
use twistchar_core::qseries::GradedSeries;

fn tags() -> Vec<AlgebraTag> {
    twistchar_core::verify::grid_algebras()
}

fn tag_strategy() -> impl Strategy<Value = AlgebraTag> {
    prop::sample::select(tags())
}

/// Truncations `j / den` for `j` up to `2 * den`.
fn trunc_strategy() -> impl Strategy<Value = Rational64> {
    (0i64..=12).prop_map(|j| Rational64::new(j, 6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn engines_agree(tag in tag_strategy(), k in 1u32..=3, n in trunc_strategy()) {
        let spec = AlgebraSpec::new(tag, k).unwrap();
        // truncations off the exponent lattice are plain upper bounds
        let report = compare_engines(&spec, n, Exec::default()).unwrap();
        prop_assert!(report.is_match(), "{}", report);
    }

    #[test]
    fn coefficients_are_nonnegative_counts(tag in tag_strategy(), k in 1u32..=2) {
        let spec = AlgebraSpec::new(tag, k).unwrap();
        let s = fermionic_char_with(&spec, Rational64::from_integer(2), Exec::default()).unwrap();
        prop_assert!(s.all_coefficients_nonnegative());
        for c in s.specialize_colors().values() {
            prop_assert!(*c > BigInt::from(0));
        }
    }

    #[test]
    fn raising_the_level_only_adds_terms(tag in tag_strategy(), k in 1u32..=2) {
        // every basis monomial at level k is a basis monomial at level k+1
        let n = Rational64::from_integer(2);
        let low = fermionic_char_with(&AlgebraSpec::new(tag, k).unwrap(), n, Exec::default()).unwrap();
        let high = fermionic_char_with(&AlgebraSpec::new(tag, k + 1).unwrap(), n, Exec::default()).unwrap();
        for (key, c) in low.terms() {
            prop_assert!(high.coefficient(low.exponent(key), &key.colors) >= *c);
        }
    }
}

#[test]
fn schedule_does_not_change_the_result() {
    let n = Rational64::from_integer(3);
    for tag in tags() {
        let spec = AlgebraSpec::new(tag, 2).unwrap();
        let seq = fermionic_char_with(&spec, n, Exec::Sequential).unwrap();
        assert_eq!(seq, fermionic_char_with(&spec, n, Exec::default()).unwrap());
        assert_eq!(seq.to_string(), fermionic_char_with(&spec, n, Exec::default()).unwrap().to_string());
        let en = enumeration_char_with(&spec, n, Exec::Sequential).unwrap();
        assert_eq!(en, enumeration_char_with(&spec, n, Exec::default()).unwrap());
    }
}

#[test]
fn single_moved_color_of_order_three_at_level_one() {
    // y_1^r coefficient is q^{r^2/3} / (q^{1/3}; q^{1/3})_r
    let n = Rational64::from_integer(3);
    let spec = AlgebraSpec::new(AlgebraTag::d4_3(), 1).unwrap();
    let s = fermionic_char_with(&spec, n, Exec::Sequential).unwrap();
    for r in 0..=3u32 {
        let lead = GradedSeries::monomial(3, n, Rational64::new((r * r) as i64, 3), vec![], BigInt::from(1)).unwrap();
        let expected = GradedSeries::pochhammer_inverse(Rational64::new(1, 3), r, n, 3, 0).unwrap().mul(&lead).unwrap();
        let want: Vec<_> = expected.terms().map(|(k, c)| (expected.exponent(k), c.clone())).collect();
        assert_eq!(s.color_coefficient(&[r, 0]), want, "r={r}");
    }
}

#[test]
fn printed_form_matches_derived_form_off_e6() {
    let n = Rational64::from_integer(3);
    for tag in tags().into_iter().filter(|t| *t != AlgebraTag::e6()) {
        let spec = AlgebraSpec::new(tag, 2).unwrap();
        let printed = printed_theorem_char(&spec, n).unwrap();
        assert!(printed.negative_terms.is_empty());
        assert_eq!(printed.series, fermionic_char_with(&spec, n, Exec::default()).unwrap());
    }
}

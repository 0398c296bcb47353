use rug::Float;
use zetaforge::characters::characters_mod;
use zetaforge::oracle::{l_series_oracle, zeta_em};
use zetaforge::rapid::{
    evaluate_variant, l_even_argument, l_odd_argument, odd_zeta, validate_all_variants,
    validate_formula, Ledger, RapidFormula, RapidMode, RapidParams, Variant, Verdict,
};
use zetaforge::series::FormulaId;
use zetaforge::{ComplexScalar, PrecisionContext, ZetaError};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn rel(a: &ComplexScalar, b: &ComplexScalar) -> f64 {
    (a - b).abs_f64() / b.abs_f64()
}

#[test]
fn odd_zeta_validated_matches_oracle() {
    let c = ctx();
    for m in 1..=5usize {
        let r = odd_zeta(m, &c, RapidMode::Validated, None).unwrap();
        let want = zeta_em(&ComplexScalar::from_i64(256, 2 * m as i64 + 1), &c).unwrap();
        let e = rel(&r.value, &want);
        assert!(e <= 100.0 * c.target_tol(), "m={m} rel={e:e}");
        assert!(r.terms_used <= 25, "m={m} terms={}", r.terms_used);
        assert!((&r.value - &want).abs_f64() <= r.error_bound.max(1e-70));
    }
}

#[test]
fn zeta_three_digits() {
    let r = odd_zeta(1, &ctx(), RapidMode::Validated, None).unwrap();
    let want = Float::with_val(128, Float::parse("1.2020569031595942853997381615114499907649").unwrap());
    assert!((Float::with_val(128, r.value.re()) - want).abs() < 1e-32);
}

#[test]
fn l_values_validated_for_small_moduli() {
    let c = ctx();
    for q in 2..=20u64 {
        for chi in characters_mod(q).unwrap() {
            if !chi.is_primitive() || q < 3 {
                continue;
            }
            for m in 0..=3usize {
                let (got, s) = if chi.is_even() {
                    (l_odd_argument(m, &chi, &c, RapidMode::Validated, None).unwrap(), 2 * m + 1)
                } else if m >= 1 {
                    (l_even_argument(m, &chi, &c, RapidMode::Validated, None).unwrap(), 2 * m)
                } else {
                    continue;
                };
                let want = l_series_oracle(&ComplexScalar::from_i64(256, s as i64), &chi, &c).unwrap();
                let e = rel(&got.value, &want);
                assert!(e <= 100.0 * c.target_tol(), "q={q} idx={} m={m} rel={e:e}", chi.index());
            }
        }
    }
}

#[test]
fn catalan_from_odd_character_mod_four() {
    let chi = characters_mod(4).unwrap().into_iter().find(|c| !c.is_even()).unwrap();
    let r = l_even_argument(1, &chi, &ctx(), RapidMode::Validated, None).unwrap();
    let catalan = Float::with_val(256, rug::float::Constant::Catalan).to_f64();
    assert!((r.value.re().to_f64() - catalan).abs() < 1e-15);
    assert!(r.value.im().to_f64().abs() < 1e-60);
}

#[test]
fn precondition_errors() {
    let c = ctx();
    let chars = characters_mod(5).unwrap();
    let principal = chars.iter().find(|x| x.is_principal()).unwrap();
    assert!(matches!(
        l_odd_argument(1, principal, &c, RapidMode::Validated, None),
        Err(ZetaError::NotPrimitive { .. })
    ));
    let odd = chars.iter().find(|x| !x.is_even()).unwrap();
    assert!(matches!(
        l_odd_argument(1, odd, &c, RapidMode::Validated, None),
        Err(ZetaError::CharacterParityMismatch { .. })
    ));
    let even = chars.iter().find(|x| x.is_even() && !x.is_principal()).unwrap();
    assert!(matches!(
        l_even_argument(1, even, &c, RapidMode::Validated, None),
        Err(ZetaError::CharacterParityMismatch { .. })
    ));
    assert!(odd_zeta(0, &c, RapidMode::Validated, None).is_err());
}

#[test]
fn printed_odd_zeta_is_refuted_and_gated() {
    let c = ctx();
    let report = validate_formula(FormulaId::OddZetaRapid, RapidParams::odd_zeta(1), &c).unwrap();
    assert_eq!(report.verdict, Verdict::Refuted);
    let mut ledger = Ledger::in_memory();
    ledger.record(&report);
    assert!(matches!(
        odd_zeta(1, &c, RapidMode::AsPrinted, Some(&ledger)),
        Err(ZetaError::FormulaRefuted(_))
    ));
    assert!(odd_zeta(1, &c, RapidMode::AsPrinted, None).is_ok());
}

#[test]
fn variant_sweep_confirms_expected_readings() {
    let c = ctx();
    let cases = [
        (
            RapidFormula::OddZeta,
            RapidParams::odd_zeta(2),
            "grouping=separate,tail_factor=factorial,prefactor=factorial",
        ),
        (
            RapidFormula::LOddArgument,
            RapidParams::character(2, 5, 2),
            "exponent=doubled,tail_factor=factorial,log_scaling=scaled,harmonic_scaling=scaled",
        ),
        (
            RapidFormula::LEvenArgument,
            RapidParams::character(2, 4, 1),
            "log_scaling=scaled,harmonic_sign=flipped",
        ),
    ];
    for (f, p, expected) in cases {
        let reports = validate_all_variants(f, p, &c).unwrap();
        for r in &reports {
            println!("{} {} {} {:e}", r.formula_id, r.variant, r.verdict, r.rel_err);
        }
        let confirmed: Vec<_> = reports.iter().filter(|r| r.verdict == Verdict::Confirmed).collect();
        assert_eq!(confirmed.len(), 1, "{f}");
        assert_eq!(confirmed[0].variant, expected);
        let printed = evaluate_variant(Variant::parse(f, expected).unwrap(), p, &c).unwrap();
        assert!(rel(&printed.value, confirmed[0].corrected_value.as_ref().unwrap()) <= 100.0 * c.target_tol());
    }
}

#[test]
fn ledger_round_trip_keeps_one_record_per_key() {
    let c = ctx();
    let dir = std::env::temp_dir().join(format!("zetaforge-ledger-{}", std::process::id()));
    let path = dir.join("ledger.jsonl");
    let _ = std::fs::remove_file(&path);
    let report = validate_formula(FormulaId::OddZetaRapid, RapidParams::odd_zeta(1), &c).unwrap();
    let mut ledger = Ledger::open(&path).unwrap();
    ledger.record(&report);
    ledger.record(&report);
    ledger.save().unwrap();
    let first = std::fs::read_to_string(&path).unwrap();
    assert_eq!(first.lines().count(), 1);
    let mut again = Ledger::open(&path).unwrap();
    again.record(&report);
    again.save().unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    let rec = again.records().next().unwrap();
    assert_eq!(rec.verdict, Verdict::Refuted);
    assert_eq!(rec.variant, Variant::as_printed(RapidFormula::OddZeta).tag());
    std::fs::remove_dir_all(&dir).unwrap();
}

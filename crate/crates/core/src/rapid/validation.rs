//! Comparison of printed series against the reference oracle.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    check_character, check_m, evaluate_validated, evaluate_variant, RapidFormula, RapidParams,
    Variant,
};
use crate::error::Result;
use crate::oracle::{l_series_oracle, zeta_em};
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;
use crate::series::FormulaId;

/// Both sides must be certified to this relative accuracy before a
/// disagreement counts as a refutation.
pub const CERTIFICATION_LEVEL: f64 = 1e-6;

/// Relative disagreement above which a printed series is refuted.
pub const REFUTATION_LEVEL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Confirmed,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Confirmed => "CONFIRMED",
            Verdict::Refuted => "REFUTED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const CORRECTION_NOTE: &str =
    "validated-mode value; derivation in docs/derivations.md (expansion of zeta'(-M, 1+x) at x = a/q)";

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub formula_id: FormulaId,
    pub params: RapidParams,
    pub variant: String,
    pub printed_value: Option<ComplexScalar>,
    pub printed_bound: Option<f64>,
    pub oracle_value: Option<ComplexScalar>,
    /// NaN when either side failed to evaluate
    pub abs_err: f64,
    pub rel_err: f64,
    pub verdict: Verdict,
    pub corrected_value: Option<ComplexScalar>,
    pub note: &'static str,
}

fn oracle_value(
    formula: RapidFormula,
    params: RapidParams,
    ctx: &PrecisionContext,
) -> Result<ComplexScalar> {
    let prec = ctx.working_bits();
    match formula {
        RapidFormula::OddZeta => {
            zeta_em(&ComplexScalar::from_i64(prec, 2 * params.m as i64 + 1), ctx)
        }
        RapidFormula::LOddArgument | RapidFormula::LEvenArgument => {
            let chi = params.resolve_character()?;
            let s = if formula == RapidFormula::LOddArgument {
                2 * params.m + 1
            } else {
                2 * params.m
            };
            l_series_oracle(&ComplexScalar::from_i64(prec, s as i64), &chi, ctx)
        }
    }
}

pub(super) fn check_params(formula: RapidFormula, params: RapidParams) -> Result<()> {
    match formula {
        RapidFormula::OddZeta => check_m(params.m, 1),
        RapidFormula::LOddArgument => check_character(&params.resolve_character()?, true),
        RapidFormula::LEvenArgument => {
            check_m(params.m, 1)?;
            check_character(&params.resolve_character()?, false)
        }
    }
}

fn classify(rel_err: f64, printed_rel_bound: f64, tol: f64) -> Verdict {
    if rel_err <= 100.0 * tol {
        Verdict::Confirmed
    } else if rel_err > REFUTATION_LEVEL && printed_rel_bound <= CERTIFICATION_LEVEL {
        Verdict::Refuted
    } else {
        Verdict::Inconclusive
    }
}

/// One printed reading against the oracle. Invalid parameters are an error;
/// evaluation failures give an INCONCLUSIVE report.
pub fn validate_variant(
    variant: Variant,
    params: RapidParams,
    ctx: &PrecisionContext,
) -> Result<ValidationReport> {
    let formula = variant.formula;
    check_params(formula, params)?;
    let printed = evaluate_variant(variant, params, ctx).ok();
    let oracle = oracle_value(formula, params, ctx).ok();
    let corrected = evaluate_validated(formula, params, ctx).ok().map(|r| r.value);
    let (abs_err, rel_err, verdict) = match (&printed, &oracle) {
        (Some(p), Some(o)) => {
            let abs = (&p.value - o).abs_f64();
            let scale = o.abs_f64();
            let rel = if scale > 0.0 { abs / scale } else { abs };
            let printed_rel_bound = p.error_bound / scale.max(f64::MIN_POSITIVE);
            (abs, rel, classify(rel, printed_rel_bound, ctx.target_tol()))
        }
        _ => (f64::NAN, f64::NAN, Verdict::Inconclusive),
    };
    Ok(ValidationReport {
        formula_id: formula.formula_id(),
        params,
        variant: variant.tag(),
        printed_bound: printed.as_ref().map(|p| p.error_bound),
        printed_value: printed.map(|p| p.value),
        oracle_value: oracle.map(|o| o.round_to(ctx.bits())),
        abs_err,
        rel_err,
        verdict,
        corrected_value: corrected,
        note: CORRECTION_NOTE,
    })
}

/// The default (as-printed) reading of `formula_id` against the oracle.
pub fn validate_formula(
    formula_id: FormulaId,
    params: RapidParams,
    ctx: &PrecisionContext,
) -> Result<ValidationReport> {
    let formula = RapidFormula::from_formula_id(formula_id)?;
    validate_variant(Variant::as_printed(formula), params, ctx)
}

/// Every reading of `formula` at `params`, in variant order.
pub fn validate_all_variants(
    formula: RapidFormula,
    params: RapidParams,
    ctx: &PrecisionContext,
) -> Result<Vec<ValidationReport>> {
    check_params(formula, params)?;
    Variant::all(formula)
        .into_iter()
        .map(|v| validate_variant(v, params, ctx))
        .collect()
}

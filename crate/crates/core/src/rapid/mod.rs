//! Rapidly converging series for `zeta(2m+1)`, `L(2m+1, chi)` with `chi`
//! even primitive and `L(2m, chi)` with `chi` odd primitive.
//!
//! The validated evaluators come from the expansion of `zeta'(-M, 1+x)` in
//! `x` (see `docs/derivations.md`). With `M = 2m`, or `M = 2m-1` for odd
//! characters, and `G(x) = -x^M log(x)/2 + E(M; x)`:
//!
//! ```text
//! zeta'(-2m)      = (2^{-2m-1} log 2 + E(2m; 1/2)) / (2^{-2m} - 2)
//! zeta(2m+1)      = 2 (2 pi)^{2m} (-1)^m zeta'(-2m) / (2m)!
//! L(2m+1, chi)    = (-1)^m 2^{2m+1} pi^{2m} / ((2m)! tau(conj chi)) sum_a conj chi(a) G(a/q)
//! L(2m, chi)      = i (-1)^{m+1} 2^{2m} pi^{2m-1} / ((2m-1)! tau(conj chi)) sum_a conj chi(a) G(a/q)
//! ```
//!
//! The printed evaluators reproduce the series as typeset, one [`Variant`]
//! per combination of readings at the suspect sites.

mod kernel;
mod ledger;
mod validation;
mod variant;

pub use ledger::{Ledger, LedgerRecord};
pub use validation::{
    validate_all_variants, validate_formula, validate_variant, ValidationReport, Verdict,
};
pub use variant::{RapidFormula, Site, Variant};

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::characters::{characters_mod, gauss_sum, DirichletCharacter};
use crate::constants;
use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;
use crate::series::{exp2, SeriesResult};

use kernel::{harmonic, residue_weight, zeta_even, MIN_TAIL_TERMS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RapidMode {
    /// the series as typeset, under the default reading of every site
    AsPrinted,
    /// the derived series, checked against the reference oracle
    Validated,
}

impl RapidMode {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "as_printed" | "as-printed" | "printed" => Ok(RapidMode::AsPrinted),
            "validated" => Ok(RapidMode::Validated),
            other => Err(ZetaError::Parse(format!("unknown mode {other:?}"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RapidMode::AsPrinted => "as_printed",
            RapidMode::Validated => "validated",
        }
    }
}

impl fmt::Display for RapidMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of one rapid evaluation. `q` and `index` select a character
/// from [`characters_mod`] and are absent for `zeta(2m+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RapidParams {
    pub m: usize,
    pub q: Option<u64>,
    pub index: Option<usize>,
}

impl RapidParams {
    pub fn odd_zeta(m: usize) -> Self {
        RapidParams {
            m,
            q: None,
            index: None,
        }
    }

    pub fn character(m: usize, q: u64, index: usize) -> Self {
        RapidParams {
            m,
            q: Some(q),
            index: Some(index),
        }
    }

    pub fn resolve_character(&self) -> Result<DirichletCharacter> {
        let (q, index) = self
            .q
            .zip(self.index)
            .ok_or_else(|| ZetaError::Parse("a character needs q and index".into()))?;
        characters_mod(q)?
            .into_iter()
            .nth(index)
            .ok_or_else(|| ZetaError::Parse(format!("no character with index {index} mod {q}")))
    }
}

impl fmt::Display for RapidParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}", self.m)?;
        if let (Some(q), Some(i)) = (self.q, self.index) {
            write!(f, ",q={q},index={i}")?;
        }
        Ok(())
    }
}

fn refuted_check(
    formula: RapidFormula,
    params: RapidParams,
    ledger: Option<&Ledger>,
) -> Result<()> {
    let variant = Variant::as_printed(formula);
    if let Some(rec) = ledger.and_then(|l| l.get(formula.formula_id(), &params, &variant.tag())) {
        if rec.verdict == Verdict::Refuted {
            return Err(ZetaError::FormulaRefuted(format!(
                "{} {} [{}] rel_err {:.3e}",
                formula,
                params,
                variant.tag(),
                rec.rel_err.unwrap_or(f64::NAN)
            )));
        }
    }
    Ok(())
}

/// `zeta(2m+1)`, `m >= 1`. In as-printed mode a REFUTED ledger entry for
/// these parameters turns into [`ZetaError::FormulaRefuted`].
pub fn odd_zeta(
    m: usize,
    ctx: &PrecisionContext,
    mode: RapidMode,
    ledger: Option<&Ledger>,
) -> Result<SeriesResult> {
    check_m(m, 1)?;
    match mode {
        RapidMode::Validated => odd_zeta_validated(m, ctx),
        RapidMode::AsPrinted => {
            refuted_check(RapidFormula::OddZeta, RapidParams::odd_zeta(m), ledger)?;
            odd_zeta_printed(m, Variant::as_printed(RapidFormula::OddZeta), ctx)
        }
    }
}

/// `L(2m+1, chi)` for even primitive `chi`, `m >= 0`.
pub fn l_odd_argument(
    m: usize,
    chi: &DirichletCharacter,
    ctx: &PrecisionContext,
    mode: RapidMode,
    ledger: Option<&Ledger>,
) -> Result<SeriesResult> {
    check_character(chi, true)?;
    match mode {
        RapidMode::Validated => l_validated(m, chi, ctx),
        RapidMode::AsPrinted => {
            let params = RapidParams::character(m, chi.modulus(), chi.index());
            refuted_check(RapidFormula::LOddArgument, params, ledger)?;
            l_odd_printed(m, chi, Variant::as_printed(RapidFormula::LOddArgument), ctx)
        }
    }
}

/// `L(2m, chi)` for odd primitive `chi`, `m >= 1`.
pub fn l_even_argument(
    m: usize,
    chi: &DirichletCharacter,
    ctx: &PrecisionContext,
    mode: RapidMode,
    ledger: Option<&Ledger>,
) -> Result<SeriesResult> {
    check_m(m, 1)?;
    check_character(chi, false)?;
    match mode {
        RapidMode::Validated => l_validated(m, chi, ctx),
        RapidMode::AsPrinted => {
            let params = RapidParams::character(m, chi.modulus(), chi.index());
            refuted_check(RapidFormula::LEvenArgument, params, ledger)?;
            l_even_printed(m, chi, Variant::as_printed(RapidFormula::LEvenArgument), ctx)
        }
    }
}

/// The printed series under an explicit reading, without ledger gating.
pub fn evaluate_variant(
    variant: Variant,
    params: RapidParams,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    match variant.formula {
        RapidFormula::OddZeta => {
            check_m(params.m, 1)?;
            odd_zeta_printed(params.m, variant, ctx)
        }
        RapidFormula::LOddArgument => {
            let chi = params.resolve_character()?;
            check_character(&chi, true)?;
            l_odd_printed(params.m, &chi, variant, ctx)
        }
        RapidFormula::LEvenArgument => {
            check_m(params.m, 1)?;
            let chi = params.resolve_character()?;
            check_character(&chi, false)?;
            l_even_printed(params.m, &chi, variant, ctx)
        }
    }
}

/// The validated evaluation for `formula` at `params`.
pub fn evaluate_validated(
    formula: RapidFormula,
    params: RapidParams,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    match formula {
        RapidFormula::OddZeta => odd_zeta(params.m, ctx, RapidMode::Validated, None),
        RapidFormula::LOddArgument => {
            let chi = params.resolve_character()?;
            l_odd_argument(params.m, &chi, ctx, RapidMode::Validated, None)
        }
        RapidFormula::LEvenArgument => {
            let chi = params.resolve_character()?;
            l_even_argument(params.m, &chi, ctx, RapidMode::Validated, None)
        }
    }
}

fn check_m(m: usize, min: usize) -> Result<()> {
    if m < min {
        return Err(ZetaError::Parse(format!("m must be at least {min}")));
    }
    Ok(())
}

fn check_character(chi: &DirichletCharacter, even: bool) -> Result<()> {
    if chi.modulus() < 2 {
        return Err(ZetaError::Parse("the modulus must be at least 2".into()));
    }
    if !chi.is_primitive() {
        return Err(ZetaError::NotPrimitive {
            conductor: chi.conductor(),
            modulus: chi.modulus(),
        });
    }
    if chi.is_even() != even {
        return Err(ZetaError::CharacterParityMismatch {
            expected: if even { "even" } else { "odd" },
        });
    }
    Ok(())
}

fn working_prec(ctx: &PrecisionContext, q: u64) -> u32 {
    ctx.working_bits() + 8 + 64 - q.max(1).leading_zeros()
}

fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

fn factorial(n: usize, prec: u32) -> Float {
    Float::with_val(prec, Integer::from(Integer::factorial(n as u32)))
}

fn sign(m: usize) -> i32 {
    if m % 2 == 0 {
        1
    } else {
        -1
    }
}

fn finish(
    value: ComplexScalar,
    bound: f64,
    terms: usize,
    formula: RapidFormula,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    let value = value.round_to(ctx.bits());
    // rounding to the output precision
    let bound = bound + value.abs_f64() * exp2(-(ctx.bits() as f64));
    if !(bound <= ctx.target_tol()) {
        return Err(ZetaError::exhausted(
            ctx.max_terms(),
            format!("{formula} bound {bound:.3e} above tolerance"),
        ));
    }
    Ok(SeriesResult {
        value,
        error_bound: bound,
        terms_used: terms,
        formula_id: formula.formula_id(),
    })
}

/// Slack between the requested tolerance and the truncation target.
const TARGET_SLACK: f64 = 1.0 / 16.0;

fn odd_zeta_validated(m: usize, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let prec = working_prec(ctx, 2);
    let big_m = 2 * m;
    let pow = Float::with_val(prec, Float::with_val(prec, 2).pow(-(big_m as i32)));
    let denom = Float::with_val(prec, &pow - 2u32);
    let factor = Float::with_val(prec, pi(prec) * 2u32).pow(big_m as u32) * 2u32 * sign(m)
        / factorial(big_m, prec);
    let scale = Float::with_val(prec, &factor / &denom).abs().to_f64();
    let half = Float::with_val(prec, 0.5);
    let e = kernel::e_function(big_m, &half, ctx.target_tol() * TARGET_SLACK / scale, ctx, prec)?;
    let ln2 = Float::with_val(prec, rug::float::Constant::Log2);
    let zp = (Float::with_val(prec, &pow * ln2) / 2u32 + &e.value) / denom;
    let value = ComplexScalar::real(zp * factor);
    finish(value, scale * e.bound, e.terms, RapidFormula::OddZeta, ctx)
}

/// `sum_a conj chi(a) G(a/q)` over residues prime to `q`, with the summed
/// truncation bounds and the largest tail length.
fn character_weighted_sum(
    big_m: usize,
    chibar: &DirichletCharacter,
    target_total: f64,
    prec: u32,
    weight: impl Fn(usize, &Float, f64) -> Result<kernel::Truncated>,
) -> Result<(ComplexScalar, f64, usize)> {
    let q = chibar.modulus();
    let residues: Vec<u64> = (1..q).filter(|a| chibar.value_exponent(*a as i64).is_some()).collect();
    let target = target_total / residues.len().max(1) as f64;
    let mut acc = ComplexScalar::zero(prec);
    let mut bound = 0.0;
    let mut terms = 0;
    for a in residues {
        let x = Float::with_val(prec, a) / q as u32;
        let g = weight(big_m, &x, target)?;
        acc += &chibar.value(a as i64, prec).scale(&g.value);
        bound += g.bound;
        terms = terms.max(g.terms);
    }
    Ok((acc, bound, terms))
}

fn l_validated(m: usize, chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let q = chi.modulus();
    let prec = working_prec(ctx, q);
    let chibar = chi.conj();
    let wide = PrecisionContext::new(prec, ctx.target_tol(), ctx.max_terms())?;
    let tau = gauss_sum(&chibar, &wide).value.round_to(prec);
    let (formula, big_m, prefactor) = if chi.is_even() {
        let p = Float::with_val(prec, 2).pow(2 * m as u32 + 1) * pi(prec).pow(2 * m as u32)
            * sign(m)
            / factorial(2 * m, prec);
        (RapidFormula::LOddArgument, 2 * m, ComplexScalar::real(p))
    } else {
        let p = Float::with_val(prec, 2).pow(2 * m as u32) * pi(prec).pow(2 * m as u32 - 1)
            * sign(m + 1)
            / factorial(2 * m - 1, prec);
        (
            RapidFormula::LEvenArgument,
            2 * m - 1,
            ComplexScalar::new(Float::new(prec), p),
        )
    };
    let prefactor = &prefactor * &tau.recip();
    let scale = prefactor.abs_f64();
    let (sum, bound, terms) = character_weighted_sum(
        big_m,
        &chibar,
        ctx.target_tol() * TARGET_SLACK / scale,
        prec,
        |mm, x, t| residue_weight(mm, x, t, ctx, prec),
    )?;
    finish(&prefactor * &sum, scale * bound, terms, formula, ctx)
}

/// `sum_{k>=1} w_k zeta(2k) x^{2k}` with weights `w_k` that never increase,
/// so each term is at most `x^2` times the previous one.
fn printed_tail(
    x: &Float,
    target: f64,
    ctx: &PrecisionContext,
    prec: u32,
    w: impl Fn(usize) -> Float,
) -> Result<kernel::Truncated> {
    let x2 = Float::with_val(prec, x * x);
    let ratio = x2.to_f64();
    let mut power = x2.clone();
    let mut sum = Float::with_val(prec, 0);
    let mut k = 1;
    loop {
        sum += w(k) * zeta_even(k, prec) * &power;
        power *= &x2;
        let next = Float::with_val(prec, w(k + 1) * zeta_even(k + 1, prec) * &power);
        let bound = next.to_f64().abs() / (1.0 - ratio);
        if k >= MIN_TAIL_TERMS && bound <= target {
            return Ok(kernel::Truncated {
                value: sum,
                bound,
                terms: k,
            });
        }
        if k >= ctx.max_terms() {
            return Err(ZetaError::exhausted(ctx.max_terms(), "printed rapid tail"));
        }
        k += 1;
    }
}

/// `(2k-1) M!/(M+2k)!`, or `(2k-1)! M!/(M+2k)!`.
fn tail_weight(big_m: usize, k: usize, factorial_form: bool, prec: u32) -> Float {
    let head = if factorial_form {
        factorial(2 * k - 1, prec)
    } else {
        Float::with_val(prec, 2 * k - 1)
    };
    head * factorial(big_m, prec) / factorial(big_m + 2 * k, prec)
}

fn zeta_prime_neg(k: usize, ctx: &PrecisionContext, prec: u32) -> Result<Float> {
    Ok(Float::with_val(prec, constants::shared(ctx)?.zeta_prime_neg(k, ctx)?))
}

fn binom(n: usize, k: usize, prec: u32) -> Float {
    Float::with_val(prec, Integer::from(n).binomial(k as u32))
}

fn odd_zeta_printed(m: usize, variant: Variant, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let prec = working_prec(ctx, 2);
    let two_m = 2 * m;
    let pi_pow = pi(prec).pow(two_m as u32);
    let denom = Float::with_val(prec, Float::with_val(prec, 2).pow(-(two_m as i32)) - 2u32);
    let ln2 = Float::with_val(prec, rug::float::Constant::Log2);
    let first = Float::with_val(prec, &pi_pow * ln2) * sign(m) / (Float::with_val(prec, &denom * factorial(two_m, prec)));
    let outer_den = if variant.is_alternative(Site::Prefactor) {
        factorial(two_m, prec)
    } else {
        Float::with_val(prec, two_m)
    };
    let outer = Float::with_val(prec, &pi_pow * 2u32) * sign(m) / (outer_den * &denom);
    let scale = outer.to_f64().abs();
    let mut s0 = Float::with_val(prec, 0);
    for k in 0..m {
        s0 += Float::with_val(prec, 2).pow(2 * k as u32) * binom(two_m, 2 * k, prec) * zeta_prime_neg(2 * k, ctx, prec)?;
    }
    let half_h = harmonic(two_m, prec) / 2u32;
    let head = if variant.is_alternative(Site::Grouping) {
        half_h * s0
    } else {
        half_h + s0
    };
    let factorial_form = variant.is_alternative(Site::TailFactor);
    let half = Float::with_val(prec, 0.5);
    let tail = printed_tail(&half, ctx.target_tol() * TARGET_SLACK / scale, ctx, prec, |k| {
        tail_weight(two_m, k, factorial_form, prec)
    })?;
    let value = first + outer * (head + &tail.value);
    finish(ComplexScalar::real(value), scale * tail.bound, tail.terms, RapidFormula::OddZeta, ctx)
}

/// `q^e` for a signed exponent.
fn q_pow(q: u64, e: i64, prec: u32) -> Float {
    Float::with_val(prec, q).pow(e as i32)
}

fn l_odd_printed(
    m: usize,
    chi: &DirichletCharacter,
    variant: Variant,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    let q = chi.modulus();
    let prec = working_prec(ctx, q);
    let chibar = chi.conj();
    let two_m = 2 * m;
    let wide = PrecisionContext::new(prec, ctx.target_tol(), ctx.max_terms())?;
    let tau_inv = gauss_sum(&chibar, &wide).value.round_to(prec).recip();
    let c1 = Float::with_val(prec, 2).pow(two_m as u32) * pi(prec).pow(two_m as u32) * sign(m)
        / factorial(two_m, prec);
    let c1 = tau_inv.scale(&c1);
    let c2 = c1.scale_i64(2);
    let lnq = Float::with_val(prec, q).ln();
    let p_2m = chibar.power_sum(two_m as u32, prec);
    let mut log_brace = &p_2m.scale(&lnq) - &chibar.log_power_sum(two_m as u32, prec);
    let mut harmonic_term = p_2m.scale(&(harmonic(two_m, prec) / 2u32));
    if variant.is_alternative(Site::LogScaling) {
        log_brace = log_brace.scale(&q_pow(q, -(two_m as i64), prec));
    }
    if variant.is_alternative(Site::HarmonicScaling) {
        harmonic_term = harmonic_term.scale(&q_pow(q, -(two_m as i64), prec));
    }
    let mut s1 = ComplexScalar::zero(prec);
    for k in 0..m {
        let exponent = if variant.is_alternative(Site::Exponent) {
            two_m - 2 * k
        } else {
            two_m - k
        };
        let w = q_pow(q, 2 * k as i64 - two_m as i64, prec)
            * binom(two_m, 2 * k, prec)
            * zeta_prime_neg(2 * k, ctx, prec)?;
        s1 += &chibar.power_sum(exponent as u32, prec).scale(&w);
    }
    let factorial_form = variant.is_alternative(Site::TailFactor);
    let scale = c2.abs_f64();
    let (tail, bound, terms) = character_weighted_sum(
        two_m,
        &chibar,
        ctx.target_tol() * TARGET_SLACK / scale,
        prec,
        |mm, x, t| {
            let mut r = printed_tail(x, t, ctx, prec, |k| tail_weight(mm, k, factorial_form, prec))?;
            r.value *= Float::with_val(prec, x.clone().pow(mm as u32));
            Ok(r)
        },
    )?;
    let brace = &(&s1 + &harmonic_term) + &tail;
    let value = &(&c1 * &log_brace) + &(&c2 * &brace);
    finish(value, scale * bound, terms, RapidFormula::LOddArgument, ctx)
}

fn l_even_printed(
    m: usize,
    chi: &DirichletCharacter,
    variant: Variant,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    let q = chi.modulus();
    let prec = working_prec(ctx, q);
    let chibar = chi.conj();
    let big_m = 2 * m - 1;
    let wide = PrecisionContext::new(prec, ctx.target_tol(), ctx.max_terms())?;
    let tau_inv = gauss_sum(&chibar, &wide).value.round_to(prec).recip();
    let d1 = Float::with_val(prec, 2).pow(big_m as u32) * pi(prec).pow(big_m as u32) * sign(m + 1)
        / factorial(big_m, prec);
    let d1 = tau_inv.mul_i().scale(&d1);
    let d2 = d1.scale_i64(2);
    let lnq = Float::with_val(prec, q).ln();
    let p_m = chibar.power_sum(big_m as u32, prec);
    let mut log_brace = &p_m.scale(&lnq) - &chibar.log_power_sum(big_m as u32, prec);
    if variant.is_alternative(Site::LogScaling) {
        log_brace = log_brace.scale(&q_pow(q, -(big_m as i64), prec));
    }
    let mut s1 = ComplexScalar::zero(prec);
    for k in 0..m {
        let w = q_pow(q, 2 * k as i64 + 1 - two(m), prec)
            * binom(big_m, 2 * k, prec)
            * zeta_prime_neg(2 * k, ctx, prec)?;
        s1 += &chibar.power_sum((big_m - 2 * k) as u32, prec).scale(&w);
    }
    let mut h = q_pow(q, -(big_m as i64), prec) * harmonic(big_m, prec) / 2u32;
    if !variant.is_alternative(Site::HarmonicSign) {
        h = -h;
    }
    let harmonic_term = p_m.scale(&h);
    let scale = d2.abs_f64();
    let (tail, bound, terms) = character_weighted_sum(
        big_m,
        &chibar,
        ctx.target_tol() * TARGET_SLACK / scale,
        prec,
        |mm, x, t| {
            let mut r = printed_tail(x, t, ctx, prec, |k| tail_weight(mm, k, true, prec))?;
            r.value *= Float::with_val(prec, x.clone().pow(mm as u32));
            Ok(r)
        },
    )?;
    let brace = &(&s1 + &harmonic_term) + &tail;
    let value = &(&d1 * &log_brace) + &(&d2 * &brace);
    finish(value, scale * bound, terms, RapidFormula::LEvenArgument, ctx)
}

fn two(m: usize) -> i64 {
    2 * m as i64
}

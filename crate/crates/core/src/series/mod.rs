//! Power-series expansions of the shifted Hurwitz zeta function in its
//! shift parameter, and the closed forms and log-gamma series they imply.

mod negative;
mod shifted;

pub use negative::{
    log_gamma_series, zeta_neg_m_alpha_closed, zeta_neg_m_alpha_closed_complex,
    zeta_prime_neg_series, zeta_prime_zero_alpha, zeta_second_derivative_at_zero,
};
pub use shifted::{
    absolute_term_total, shifted_hurwitz_derivative_series, shifted_hurwitz_series,
    shifted_series_coefficient,
};

use std::fmt;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};
use crate::jet::Jet;
use crate::oracle::{hurwitz_expansion, MAX_DERIVATIVE_ORDER};
use crate::precision::PrecisionContext;
use crate::scalar::{render_float, ComplexScalar};

/// Identifies the formula a [`SeriesResult`] was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaId {
    HurwitzShiftSeries,
    HurwitzShiftSeriesDeriv,
    ZetaNegClosed,
    ZetaSecondDerivZero,
    ZetaPrimeNegSeries,
    ZetaPrimeZero,
    LogGammaSeries,
    OddZetaRapid,
    LOddRapid,
    LEvenRapid,
}

impl FormulaId {
    pub const ALL: [FormulaId; 10] = [
        FormulaId::HurwitzShiftSeries,
        FormulaId::HurwitzShiftSeriesDeriv,
        FormulaId::ZetaNegClosed,
        FormulaId::ZetaSecondDerivZero,
        FormulaId::ZetaPrimeNegSeries,
        FormulaId::ZetaPrimeZero,
        FormulaId::LogGammaSeries,
        FormulaId::OddZetaRapid,
        FormulaId::LOddRapid,
        FormulaId::LEvenRapid,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaId::HurwitzShiftSeries => "hurwitz_shift_series",
            FormulaId::HurwitzShiftSeriesDeriv => "hurwitz_shift_series_deriv",
            FormulaId::ZetaNegClosed => "zeta_neg_closed",
            FormulaId::ZetaSecondDerivZero => "zeta_second_deriv_zero",
            FormulaId::ZetaPrimeNegSeries => "zeta_prime_neg_series",
            FormulaId::ZetaPrimeZero => "zeta_prime_zero",
            FormulaId::LogGammaSeries => "log_gamma_series",
            FormulaId::OddZetaRapid => "odd_zeta_rapid",
            FormulaId::LOddRapid => "l_odd_rapid",
            FormulaId::LEvenRapid => "l_even_rapid",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        FormulaId::ALL
            .into_iter()
            .find(|f| f.as_str() == text)
            .ok_or_else(|| ZetaError::Parse(format!("unknown formula id {text:?}")))
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A series value with its certified truncation bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub value: ComplexScalar,
    /// absolute bound on the truncation error
    pub error_bound: f64,
    pub terms_used: usize,
    pub formula_id: FormulaId,
}

impl SeriesResult {
    pub fn error_bound_string(&self) -> String {
        render_float(&Float::with_val(24, self.error_bound))
    }
}

/// Parameters of the shifted expansions: `zeta_k(s, alpha)`, its `r`-th
/// s-derivative, and the index `m` of the negative-integer specialisations.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionParams {
    pub k: u64,
    pub alpha: ComplexScalar,
    pub s: ComplexScalar,
    pub r: usize,
    pub m: usize,
}

impl ExpansionParams {
    pub fn new(k: u64, s: ComplexScalar, alpha: ComplexScalar) -> Self {
        ExpansionParams {
            k,
            alpha,
            s,
            r: 0,
            m: 0,
        }
    }

    pub fn with_order(mut self, r: usize) -> Self {
        self.r = r;
        self
    }

    pub fn with_index(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    /// Checks `k >= 1`, `|alpha| < k` and `r <= 4`.
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(ZetaError::Parse("k must be at least 1".into()));
        }
        check_radius(&self.alpha, self.k as f64)?;
        if self.r > MAX_DERIVATIVE_ORDER {
            return Err(ZetaError::UnsupportedOrder(self.r));
        }
        Ok(())
    }
}

pub(crate) fn check_radius(alpha: &ComplexScalar, radius: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(ZetaError::InvalidAlpha("non-finite".into()));
    }
    let abs = alpha.abs();
    if abs >= radius {
        return Err(ZetaError::RadiusViolation {
            abs: abs.to_f64(),
            radius,
        });
    }
    Ok(())
}

/// Rejects `alpha` on the closed negative real axis, where `log alpha` is cut.
pub(crate) fn check_log_branch(alpha: &ComplexScalar) -> Result<()> {
    if alpha.im().is_zero() && !alpha.re().is_sign_positive() || alpha.is_zero() {
        return Err(ZetaError::InvalidAlpha(
            "log alpha needs alpha off the closed negative real axis".into(),
        ));
    }
    Ok(())
}

/// `s (s+1) ... (s+n-1)`; the empty product is 1.
pub fn rising_factorial(s: &ComplexScalar, n: usize) -> ComplexScalar {
    let prec = s.prec();
    let mut acc = ComplexScalar::one(prec);
    for i in 0..n {
        acc *= &s.add_real(&Float::with_val(prec, i as u64));
    }
    acc
}

/// Jet in `s` of `s (s+1) ... (s+n-1) zeta_k(s+n)`, finite where the factor
/// `s+n-1` meets the pole of `zeta_k` at 1.
///
/// Within distance 1/2 of that configuration the pair is evaluated as
/// `w zeta_k(1+w) = 1 + w R(w)`, with `R` the pole-free part, which is an
/// exact rewriting and loses nothing as `w -> 0`.
pub fn term_with_pole_limit_jet(
    s: &ComplexScalar,
    n: usize,
    k: u64,
    len: usize,
    ctx: &PrecisionContext,
) -> Result<Jet> {
    assert!(n >= 1, "n must be at least 1");
    let prec = ctx.working_bits() + 8;
    let s = s.round_to(prec);
    let mut head = Jet::constant(ComplexScalar::one(prec), len);
    for i in 0..n - 1 {
        head = head.mul_shifted_variable(&s.add_real(&Float::with_val(prec, i as u64)));
    }
    let shift = Float::with_val(prec, n as u64);
    let e = hurwitz_expansion(
        &s.add_real(&shift),
        &ComplexScalar::from_i64(prec, k as i64),
        len,
        ctx,
    )?;
    Ok(head.mul(&pole_pair(&s, n, &e.regular().round_to(prec), &e.full().ok(), prec)))
}

/// `(s+n-1) zeta_k(s+n)` as a jet, given the pole-free part `regular` and,
/// away from the pole, the full jet.
pub(crate) fn pole_pair(
    s: &ComplexScalar,
    n: usize,
    regular: &Jet,
    full: &Option<Jet>,
    prec: u32,
) -> Jet {
    let w0 = s.add_real(&Float::with_val(prec, n as i64 - 1));
    let w = Jet::variable(&w0, regular.len());
    match full {
        Some(full) if w0.abs_f64() >= 0.5 => w.mul(&full.round_to(prec)),
        _ => w.mul(regular).add_scalar(&ComplexScalar::one(prec)),
    }
}

/// `s (s+1) ... (s+n-1) zeta_k(s+n)` including the removable singularity.
pub fn term_with_pole_limit(
    s: &ComplexScalar,
    n: usize,
    k: u64,
    ctx: &PrecisionContext,
) -> Result<ComplexScalar> {
    Ok(term_with_pole_limit_jet(s, n, k, 1, ctx)?
        .value()
        .round_to(ctx.bits()))
}

/// Stop rule shared by the series: a run of three consecutive negligible
/// terms together with a certified tail bound below the tolerance.
pub(crate) struct StopRule {
    log2_tol: f64,
    run: usize,
}

impl StopRule {
    pub(crate) fn new(ctx: &PrecisionContext) -> Self {
        StopRule {
            log2_tol: ctx.target_tol().log2(),
            run: 0,
        }
    }

    fn threshold(&self, sum_log2: f64) -> f64 {
        self.log2_tol + sum_log2.min(0.0)
    }

    /// Records one term; returns true once the rule is satisfied.
    pub(crate) fn observe(&mut self, term_log2: f64, sum_log2: f64, bound_log2: f64) -> bool {
        let threshold = self.threshold(sum_log2);
        if term_log2 < threshold {
            self.run += 1;
        } else {
            self.run = 0;
        }
        bound_log2 == f64::NEG_INFINITY || self.run >= 3 && bound_log2 < threshold
    }
}

pub(crate) fn exp2(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else {
        x.exp2()
    }
}

//! `log Gamma(z)` via the Stirling series after an upward shift.

use rug::{Float, Integer, Rational};

use crate::bernoulli::bernoulli_unbounded;
use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;

/// Principal-branch `log Gamma(z)` (continuous from the positive real axis),
/// independent of every zeta evaluator in the crate.
pub fn log_gamma(z: &ComplexScalar, ctx: &PrecisionContext) -> Result<ComplexScalar> {
    if z.im().is_zero() && z.re().is_integer() && !z.re().is_sign_positive()
        || z.is_zero()
    {
        return Err(ZetaError::InvalidAlpha("Gamma pole".into()));
    }
    let prec = ctx.working_bits() + 16;
    let z = z.round_to(prec);
    let target = 0.25 * prec as f64 + 0.5 * z.abs_f64();
    let shift = (target - z.re().to_f64()).ceil().max(0.0) as u64;
    if shift as usize > ctx.max_terms() {
        return Err(ZetaError::exhausted(ctx.max_terms(), "log-gamma shift"));
    }
    let mut correction = ComplexScalar::zero(prec);
    for k in 0..shift {
        correction += &z.add_real(&Float::with_val(prec, k)).ln();
    }
    let w = z.add_real(&Float::with_val(prec, shift));
    let ln_w = w.ln();
    let half = Float::with_val(prec, 0.5);
    let mut acc = &w.add_real(&-half.clone()) * &ln_w - &w;
    let two_pi = ComplexScalar::pi(prec) * 2u32;
    acc = acc.add_real(&Float::with_val(prec, two_pi.ln() * &half));
    let inv_w = w.recip();
    let inv_w2 = &inv_w * &inv_w;
    let mut w_pow = inv_w.clone();
    let threshold = acc.log2_abs() - prec as f64 - 4.0;
    let mut last = f64::INFINITY;
    for j in 1..4096usize {
        let b = bernoulli_unbounded(2 * j);
        let denom = Integer::from(2 * j) * Integer::from(2 * j - 1);
        let c = Float::with_val(prec, b / Rational::from(denom));
        let term = w_pow.scale(&c);
        let size = term.log2_abs();
        acc += &term;
        if size < threshold {
            return Ok((&acc - &correction).round_to(ctx.bits()));
        }
        if j >= 3 && size > last {
            break;
        }
        last = size;
        w_pow = &w_pow * &inv_w2;
    }
    Err(ZetaError::exhausted(ctx.max_terms(), "Stirling series"))
}

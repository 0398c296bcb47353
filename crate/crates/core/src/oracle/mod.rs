//! Reference evaluations used as ground truth for every series formula.
//!
//! Nothing in this module calls into [`crate::series`] or [`crate::rapid`].

mod euler_maclaurin;
mod log_gamma;
mod lseries;
mod stieltjes;

pub use euler_maclaurin::{hurwitz_expansion, HurwitzExpansion, ShiftedZeta};
pub use log_gamma::log_gamma;
pub use lseries::{l_series_derivative_oracle, l_series_oracle};
pub use stieltjes::{stieltjes, stieltjes_bounded, DEFAULT_MAX_STIELTJES};

use rug::Float;

use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;

/// Highest derivative order served by [`zeta_derivative_em`].
pub const MAX_DERIVATIVE_ORDER: usize = 4;

pub(crate) fn is_one(s: &ComplexScalar) -> bool {
    s.im().is_zero() && *s.re() == 1
}

/// Riemann zeta `zeta(s)` for any `s != 1`.
pub fn zeta_em(s: &ComplexScalar, ctx: &PrecisionContext) -> Result<ComplexScalar> {
    let one = ComplexScalar::one(ctx.working_bits());
    hurwitz_em(s, &one, ctx)
}

/// Hurwitz zeta `zeta(s, alpha)` for `s != 1` and `alpha` not a non-positive integer.
pub fn hurwitz_em(
    s: &ComplexScalar,
    alpha: &ComplexScalar,
    ctx: &PrecisionContext,
) -> Result<ComplexScalar> {
    zeta_derivative_em(0, s, alpha, ctx)
}

/// `d^r/ds^r zeta(s, alpha)` for `r <= 4`.
pub fn zeta_derivative_em(
    r: usize,
    s: &ComplexScalar,
    alpha: &ComplexScalar,
    ctx: &PrecisionContext,
) -> Result<ComplexScalar> {
    if r > MAX_DERIVATIVE_ORDER {
        return Err(ZetaError::UnsupportedOrder(r));
    }
    if is_one(s) {
        return Err(ZetaError::PoleAtOne);
    }
    let jet = hurwitz_expansion(s, alpha, r + 1, ctx)?.full()?;
    Ok(jet.derivative(r).round_to(ctx.bits()))
}

/// `d^r/ds^r [zeta(s, alpha) - 1/(s-1)]`, finite at `s = 1`.
pub fn hurwitz_regular_em(
    r: usize,
    s: &ComplexScalar,
    alpha: &ComplexScalar,
    ctx: &PrecisionContext,
) -> Result<ComplexScalar> {
    if r > MAX_DERIVATIVE_ORDER {
        return Err(ZetaError::UnsupportedOrder(r));
    }
    let e = hurwitz_expansion(s, alpha, r + 1, ctx)?;
    Ok(e.regular().derivative(r).round_to(ctx.bits()))
}

/// Real-argument convenience: `zeta(x)` for an integer `x != 1`.
pub fn zeta_at_integer(n: i64, ctx: &PrecisionContext) -> Result<Float> {
    let s = ComplexScalar::from_i64(ctx.working_bits(), n);
    Ok(zeta_em(&s, ctx)?.into_parts().0)
}

/// Direct summation `sum_{n>=1} n^{-s}` with the integral tail bound
/// `sum_{n>N} n^{-sigma} <= N^{1-sigma}/(sigma-1)`, used to check
/// Euler-Maclaurin for `Re s > 1` through an independent path. Returns the
/// partial sum plus the midpoint tail estimate and a certified error radius.
pub fn direct_zeta_sum(s: &ComplexScalar, terms: u64, prec: u32) -> (ComplexScalar, f64) {
    let sigma = s.re().to_f64();
    assert!(sigma > 1.0, "direct summation needs Re s > 1");
    let mut acc = ComplexScalar::zero(prec);
    for n in 1..=terms {
        let ln = ComplexScalar::real(Float::with_val(prec, n).ln());
        acc += &(&(-s) * &ln).exp();
    }
    // sum_{n>N} n^{-s} = N^{1-s}/(s-1) - N^{-s}/2 + O(|s| N^{-sigma-1})
    let n = ComplexScalar::real(Float::with_val(prec, terms));
    let ln_n = n.ln();
    let n_neg_s = (&(-s) * &ln_n).exp();
    let s_minus_1 = s.add_real(&Float::with_val(prec, -1));
    let tail = &(&n_neg_s * &n) / &s_minus_1 - n_neg_s.scale(&Float::with_val(prec, 0.5));
    acc += &tail;
    let radius = s.abs_f64() * (s.abs_f64() + 1.0) / 12.0 * (terms as f64).powf(-sigma - 1.0)
        / sigma.max(1.0);
    (acc, radius)
}

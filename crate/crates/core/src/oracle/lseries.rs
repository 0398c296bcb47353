//! Dirichlet L-functions via `L(s, chi) = q^{-s} sum_{a=1}^{q} chi(a) zeta(s, a/q)`.

use rug::{Float, Rational};

use super::euler_maclaurin::hurwitz_expansion;
use super::MAX_DERIVATIVE_ORDER;
use crate::characters::DirichletCharacter;
use crate::error::{Result, ZetaError};
use crate::jet::Jet;
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;

/// `L(s, chi)` for any `s`, except `s = 1` with the principal character.
pub fn l_series_oracle(
    s: &ComplexScalar,
    chi: &DirichletCharacter,
    ctx: &PrecisionContext,
) -> Result<ComplexScalar> {
    l_series_derivative_oracle(0, s, chi, ctx)
}

/// `d^r/ds^r L(s, chi)` for `r <= 4`.
pub fn l_series_derivative_oracle(
    r: usize,
    s: &ComplexScalar,
    chi: &DirichletCharacter,
    ctx: &PrecisionContext,
) -> Result<ComplexScalar> {
    if r > MAX_DERIVATIVE_ORDER {
        return Err(ZetaError::UnsupportedOrder(r));
    }
    let len = r + 1;
    let q = chi.modulus();
    let prec = ctx.working_bits() + 16;
    let mut regular = Jet::zero(prec, len);
    let mut weight = ComplexScalar::zero(prec);
    for a in 1..=q {
        if chi.value_exponent(a as i64).is_none() {
            continue;
        }
        let value = chi.value(a as i64, prec);
        let alpha = ComplexScalar::from_rational(prec, &Rational::from((a, q)));
        let e = hurwitz_expansion(s, &alpha, len, ctx)?;
        regular.add_assign(&e.regular().round_to(prec).scale(&value));
        weight += &value;
    }
    let s = s.round_to(prec);
    let u0 = s.add_real(&Float::with_val(prec, -1));
    // the pole contributions cancel unless sum chi(a) != 0
    if weight.abs_f64() > 0.5 {
        if u0.is_zero() {
            return Err(ZetaError::PoleAtOne);
        }
        let pole = Jet::variable(&u0, len).recip().scale(&weight);
        regular.add_assign(&pole);
    }
    let ln_q = ComplexScalar::real(Float::with_val(prec, q).ln());
    let total = Jet::neg_power(&ln_q, &s, len).mul(&regular);
    Ok(total.derivative(r).round_to(ctx.bits()))
}

//! `zeta_k(s, alpha) = zeta_k(s) + sum_{n>=1} (-1)^n (s)_n / n! zeta_k(s+n) alpha^n`
//! for `|alpha| < k`, and its term-by-term s-derivatives.

use rug::{Float, Integer, Rational};

use super::{exp2, pole_pair, ExpansionParams, FormulaId, SeriesResult, StopRule};
use crate::error::{Result, ZetaError};
use crate::jet::Jet;
use crate::oracle::{is_one, ShiftedZeta, MAX_DERIVATIVE_ORDER};
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;

/// `d^r/ds^r zeta_k(s, alpha)` (`r = params.r`, usually 0) from the series in
/// `alpha`, valid in the disc `|alpha| < k`.
pub fn shifted_hurwitz_series(
    params: &ExpansionParams,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    params.validate()?;
    let id = if params.r == 0 {
        FormulaId::HurwitzShiftSeries
    } else {
        FormulaId::HurwitzShiftSeriesDeriv
    };
    alpha_series(params.k, params.r, &params.s, &params.alpha, ctx, id)
}

/// `d^r/ds^r zeta_1(s, alpha)` for `|alpha| < 1`; each term is differentiated
/// exactly through its Taylor jet in `s`.
pub fn shifted_hurwitz_derivative_series(
    r: usize,
    s: &ComplexScalar,
    alpha: &ComplexScalar,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    let params = ExpansionParams::new(1, s.clone(), alpha.clone()).with_order(r);
    params.validate()?;
    alpha_series(1, r, s, alpha, ctx, FormulaId::HurwitzShiftSeriesDeriv)
}

/// Exact coefficient `(-1)^n (s)_n / n! alpha^n` of `zeta_k(s+n)`.
pub fn shifted_series_coefficient(s: &Rational, alpha: &Rational, n: usize) -> Rational {
    let mut c = Rational::from(1);
    for i in 0..n {
        c *= Rational::from(s + Integer::from(i));
        c /= Integer::from(i + 1);
        c *= alpha;
        c = -c;
    }
    c
}

/// `log2` of a bound on the tail `sum_{m>n}` of the `r`-th derivative,
/// from a Cauchy estimate on the circle of radius `delta` around `s`:
/// `|term_m| <= r! delta^-r A_m |alpha|^m k^{-x} (1 + k/(x-1))`,
/// `x = sigma - delta + m`, `A_m = prod_{i<m} (|s| + delta + i)/(i+1)`.
struct TailBound {
    r: usize,
    delta: f64,
    a: f64,
    sigma: f64,
    log2_alpha: f64,
    k: f64,
    log2_a_m: f64,
    log2_r_fact: f64,
}

impl TailBound {
    fn new(r: usize, s: &ComplexScalar, alpha_abs: f64, k: u64) -> Self {
        let delta = if r == 0 { 0.0 } else { 0.5 };
        TailBound {
            r,
            delta,
            a: s.abs_f64() + delta,
            sigma: s.re().to_f64(),
            log2_alpha: alpha_abs.log2(),
            k: k as f64,
            log2_a_m: 0.0,
            log2_r_fact: (2..=r).map(|i| (i as f64).log2()).sum(),
        }
    }

    /// Bound on the tail after term `n`; call with `n = 1, 2, ...` in order.
    fn after(&mut self, n: usize) -> f64 {
        // A_{n+1} gains the factor with i = n (and i = 0 on the first call)
        if n == 1 {
            self.log2_a_m += (self.a / 1.0).log2();
        }
        self.log2_a_m += ((self.a + n as f64) / (n as f64 + 1.0)).log2();
        if self.log2_alpha == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let m = (n + 1) as f64;
        let x = self.sigma - self.delta + m;
        if x <= 1.0 + 1e-9 {
            return f64::INFINITY;
        }
        let rho = ((self.a + m) / (m + 1.0)).max(1.0) * self.log2_alpha.exp2() / self.k;
        if rho >= 1.0 {
            return f64::INFINITY;
        }
        let cauchy = if self.r == 0 {
            0.0
        } else {
            self.r as f64 * (1.0 / self.delta).log2()
        };
        self.log2_r_fact + cauchy + self.log2_a_m + m * self.log2_alpha - x * self.k.log2()
            + (1.0 + self.k / (x - 1.0)).log2()
            - (1.0 - rho).log2()
    }
}

fn alpha_series(
    k: u64,
    r: usize,
    s: &ComplexScalar,
    alpha: &ComplexScalar,
    ctx: &PrecisionContext,
    id: FormulaId,
) -> Result<SeriesResult> {
    if r > MAX_DERIVATIVE_ORDER {
        return Err(ZetaError::UnsupportedOrder(r));
    }
    if is_one(s) {
        return Err(ZetaError::PoleAtOne);
    }
    let prec = ctx.working_bits() + 8;
    let len = r + 1;
    let s = s.round_to(prec);
    let alpha = alpha.round_to(prec);
    let mut zs = ShiftedZeta::new(&s, k, len, ctx);
    let base = zs.next_expansion()?.full()?.round_to(prec);
    let mut sum = base.derivative(r);
    if alpha.is_zero() {
        return Ok(SeriesResult {
            value: sum.round_to(ctx.bits()),
            error_bound: 0.0,
            terms_used: 0,
            formula_id: id,
        });
    }
    let minus_alpha = -&alpha;
    let mut power = ComplexScalar::one(prec);
    // (s)_{n-1} / (n-1)!
    let mut head = Jet::constant(ComplexScalar::one(prec), len);
    let mut bound = TailBound::new(r, &s, alpha.abs_f64(), k);
    let mut stop = StopRule::new(ctx);
    let mut n = 1usize;
    loop {
        if n > ctx.max_terms() {
            return Err(ZetaError::exhausted(ctx.max_terms(), "shifted Hurwitz series"));
        }
        power *= &minus_alpha;
        let e = zs.next_expansion()?;
        let pair = pole_pair(&s, n, &e.regular().round_to(prec), &e.full().ok(), prec);
        let inv_n = Float::with_val(prec, 1) / Float::with_val(prec, n as u64);
        let factor = power.scale(&inv_n);
        let term = head.mul(&pair).derivative(r) * &factor;
        sum += &term;
        let tail = bound.after(n);
        if stop.observe(term.log2_abs(), sum.log2_abs(), tail) {
            return Ok(SeriesResult {
                value: sum.round_to(ctx.bits()),
                error_bound: exp2(tail),
                terms_used: n,
                formula_id: id,
            });
        }
        head = head
            .mul_shifted_variable(&s.add_real(&Float::with_val(prec, n as u64 - 1)))
            .scale_real(&inv_n);
        n += 1;
    }
}

/// `sum_{n>=0} |(s)_n / n!| |zeta_k(s+n)| |alpha|^n`, the quantity bounded
/// by `zeta(sigma) (1 - |alpha|/k)^{-|s|}` for `sigma > 1`.
pub fn absolute_term_total(params: &ExpansionParams, ctx: &PrecisionContext) -> Result<f64> {
    params.validate()?;
    if is_one(&params.s) {
        return Err(ZetaError::PoleAtOne);
    }
    let prec = ctx.working_bits();
    let s = params.s.round_to(prec);
    let a = params.alpha.abs();
    let mut zs = ShiftedZeta::new(&s, params.k, 1, ctx);
    let mut coeff = Float::with_val(prec, 1);
    let mut total = Float::with_val(prec, 0);
    let mut small = 0;
    for n in 0..=ctx.max_terms() {
        let z = zs.next_expansion()?.full()?;
        let term = Float::with_val(prec, &coeff * z.value().abs());
        total += &term;
        let rel = if total.is_zero() {
            0.0
        } else {
            Float::with_val(53, &term / &total).to_f64()
        };
        small = if rel < ctx.target_tol() { small + 1 } else { 0 };
        if small >= 3 {
            return Ok(total.to_f64());
        }
        let next = s.add_real(&Float::with_val(prec, n as u64)).abs();
        coeff *= next;
        coeff *= &a;
        coeff /= (n + 1) as u64;
    }
    Err(ZetaError::exhausted(ctx.max_terms(), "absolute term total"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{hurwitz_em, zeta_derivative_em};

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::from_f64(256, re, im)
    }

    fn shifted(a: &ComplexScalar, k: i64) -> ComplexScalar {
        a.add_real(&Float::with_val(256, k))
    }

    fn rel(a: &ComplexScalar, b: &ComplexScalar) -> f64 {
        (a - b).abs_f64() / b.abs_f64()
    }

    #[test]
    fn alpha_zero_is_constant_term() {
        let ctx = PrecisionContext::default();
        let p = ExpansionParams::new(1, c(2.0, 0.0), c(0.0, 0.0));
        let r = shifted_hurwitz_series(&p, &ctx).unwrap();
        let z2 = hurwitz_em(&c(2.0, 0.0), &c(1.0, 0.0), &ctx).unwrap();
        assert_eq!(r.value, z2);
        assert_eq!(r.error_bound, 0.0);
    }

    #[test]
    fn half_shift_gives_three_zeta_two() {
        let ctx = PrecisionContext::default();
        let p = ExpansionParams::new(1, c(2.0, 0.0), c(-0.5, 0.0));
        let r = shifted_hurwitz_series(&p, &ctx).unwrap();
        let want = std::f64::consts::PI.powi(2) / 2.0;
        assert!((r.value.re().to_f64() - want).abs() < 1e-14);
        assert!(r.error_bound < 1e-30);
    }

    #[test]
    fn matches_oracle_off_axis() {
        let ctx = PrecisionContext::default();
        let s = c(2.5, 1.5);
        let p = ExpansionParams::new(3, s.clone(), c(1.7, 0.0));
        let r = shifted_hurwitz_series(&p, &ctx).unwrap();
        let want = hurwitz_em(&s, &shifted(&c(1.7, 0.0), 3), &ctx).unwrap();
        assert!(rel(&r.value, &want) < 1e-28, "{}", rel(&r.value, &want));
    }

    #[test]
    fn crosses_removable_singularities() {
        let ctx = PrecisionContext::default();
        let s = c(-2.0, 0.0);
        let p = ExpansionParams::new(1, s.clone(), c(0.4, 0.0));
        let r = shifted_hurwitz_series(&p, &ctx).unwrap();
        let want = hurwitz_em(&s, &shifted(&c(0.4, 0.0), 1), &ctx).unwrap();
        assert!(rel(&r.value, &want) < 1e-28);
    }

    #[test]
    fn derivatives_match_oracle() {
        let ctx = PrecisionContext::default();
        let r1 = shifted_hurwitz_derivative_series(1, &c(3.0, 0.0), &c(0.5, 0.0), &ctx).unwrap();
        let want = zeta_derivative_em(1, &c(3.0, 0.0), &c(1.5, 0.0), &ctx).unwrap();
        assert!(rel(&r1.value, &want) < 1e-28);
        let r2 = shifted_hurwitz_derivative_series(2, &c(2.0, 0.0), &c(-0.3, 0.0), &ctx).unwrap();
        let want = zeta_derivative_em(2, &c(2.0, 0.0), &shifted(&c(-0.3, 0.0), 1), &ctx).unwrap();
        assert!(rel(&r2.value, &want) < 1e-28);
    }

    #[test]
    fn radius_enforced() {
        let ctx = PrecisionContext::default();
        let p = ExpansionParams::new(2, c(2.0, 0.0), c(-2.0, 0.0));
        assert!(matches!(
            shifted_hurwitz_series(&p, &ctx),
            Err(ZetaError::RadiusViolation { .. })
        ));
    }

    #[test]
    fn exact_coefficients() {
        let c3 = shifted_series_coefficient(&Rational::from(2), &Rational::from((-1, 2)), 3);
        // -(2*3*4)/3! * (-1/8) = 1/2
        assert_eq!(c3, Rational::from((1, 2)));
    }
}

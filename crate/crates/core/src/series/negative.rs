//! Specialisations of the shifted expansion at non-positive integers:
//! closed forms for `zeta(-m, alpha)`, the series for `zeta_1'(-m, alpha)`,
//! `zeta'(0, alpha)`, `log Gamma(1 + alpha)` and `zeta''(0, alpha)`.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{check_log_branch, check_radius, exp2, FormulaId, SeriesResult, StopRule};
use crate::bernoulli::zeta_at_negative_integer;
use crate::constants;
use crate::error::{Result, ZetaError};
use crate::oracle::ShiftedZeta;
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;

fn harmonic(n: usize) -> Rational {
    (1..=n).fold(Rational::new(), |acc, j| acc + Rational::from((1, j as u64)))
}

fn binomial(n: usize, k: usize) -> Integer {
    Integer::from(n).binomial(k as u32)
}

/// Exact `zeta(-m, alpha)` for rational `alpha` with `|alpha| < k`:
/// `sum_{n<k} (n+alpha)^m + sum_l C(m,l) (zeta(-l) - sum_{1<=n<k} n^l) alpha^{m-l}
///  - alpha^{m+1}/(m+1)`.
pub fn zeta_neg_m_alpha_closed(m: usize, k: u64, alpha: &Rational) -> Result<Rational> {
    if k == 0 {
        return Err(ZetaError::Parse("k must be at least 1".into()));
    }
    if Rational::from(alpha.abs_ref()) >= k {
        return Err(ZetaError::RadiusViolation {
            abs: alpha.to_f64().abs(),
            radius: k as f64,
        });
    }
    let pow = |x: &Rational, e: usize| -> Rational {
        let mut acc = Rational::from(1);
        for _ in 0..e {
            acc *= x;
        }
        acc
    };
    let mut acc = Rational::new();
    for n in 0..k {
        acc += pow(&Rational::from(alpha + Integer::from(n)), m);
    }
    for l in 0..=m {
        let mut c = zeta_at_negative_integer(l);
        for n in 1..k {
            c -= Integer::from(n).pow(l as u32);
        }
        acc += c * binomial(m, l) * pow(alpha, m - l);
    }
    acc -= pow(alpha, m + 1) / Integer::from(m + 1);
    Ok(acc)
}

/// The same closed form at a complex `alpha`.
pub fn zeta_neg_m_alpha_closed_complex(
    m: usize,
    k: u64,
    alpha: &ComplexScalar,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    if k == 0 {
        return Err(ZetaError::Parse("k must be at least 1".into()));
    }
    check_radius(alpha, k as f64)?;
    let prec = ctx.working_bits();
    let alpha = alpha.round_to(prec);
    let mut acc = ComplexScalar::zero(prec);
    for n in 0..k {
        acc += &alpha.add_real(&Float::with_val(prec, n)).pow_u32(m as u32);
    }
    for l in 0..=m {
        let mut c = zeta_at_negative_integer(l);
        for n in 1..k {
            c -= Integer::from(n).pow(l as u32);
        }
        let c = c * binomial(m, l);
        acc += &alpha.pow_u32((m - l) as u32).scale_rational(&c);
    }
    let last = alpha
        .pow_u32(m as u32 + 1)
        .scale_rational(&Rational::from((1, m as u64 + 1)));
    acc = &acc - &last;
    Ok(SeriesResult {
        value: acc.round_to(ctx.bits()),
        error_bound: 0.0,
        terms_used: m + 1,
        formula_id: FormulaId::ZetaNegClosed,
    })
}

/// `sum_{k>=2} (-1)^k (k-1)! m!/(m+k)! zeta(k) alpha^{m+k}` with the bound
/// `zeta(2) |alpha|^{m+K+1} K! m!/(m+K+1)! / (1 - |alpha|)` after `K`.
struct Tail {
    sum: ComplexScalar,
    bound: f64,
    terms: usize,
}

fn zeta_tail(
    m: usize,
    alpha: &ComplexScalar,
    reference_scale: &ComplexScalar,
    ctx: &PrecisionContext,
) -> Result<Tail> {
    let prec = ctx.working_bits() + 8;
    let mut sum = ComplexScalar::zero(prec);
    let a_abs = alpha.abs_f64();
    if alpha.is_zero() {
        return Ok(Tail {
            sum,
            bound: 0.0,
            terms: 0,
        });
    }
    let zeta2_log2 = (std::f64::consts::PI.powi(2) / 6.0).log2();
    let mut zs = ShiftedZeta::new(&ComplexScalar::from_i64(prec, 2), 1, 1, ctx);
    let minus_alpha = -alpha;
    // (-1)^k alpha^{m+k}, starting at k = 2
    let mut power = alpha.pow_u32(m as u32 + 2);
    // c_k = (k-1)! m! / (m+k)!
    let mut coeff = Rational::from((1, ((m + 1) * (m + 2)) as u64));
    let mut log2_coeff = coeff.to_f64().log2();
    let mut stop = StopRule::new(ctx);
    let mut k = 2usize;
    loop {
        if k > ctx.max_terms() {
            return Err(ZetaError::exhausted(ctx.max_terms(), "zeta(k) alpha^k tail"));
        }
        let z = zs.next_expansion()?.full()?;
        let term = (&power * z.value()).scale_rational(&coeff);
        sum += &term;
        // next coefficient c_{k+1} = c_k k/(m+k+1)
        coeff *= Rational::from((k as u64, (m + k + 1) as u64));
        log2_coeff += (k as f64 / (m + k + 1) as f64).log2();
        let bound = if a_abs < 1.0 {
            zeta2_log2 + (m + k + 1) as f64 * a_abs.log2() + log2_coeff - (1.0 - a_abs).log2()
        } else {
            f64::INFINITY
        };
        let total = &sum + reference_scale;
        if stop.observe(term.log2_abs(), total.log2_abs(), bound) {
            return Ok(Tail {
                sum,
                bound: exp2(bound),
                terms: k - 1,
            });
        }
        power *= &minus_alpha;
        k += 1;
    }
}

fn check_unit_disc(alpha: &ComplexScalar) -> Result<()> {
    check_radius(alpha, 1.0)
}

fn prime_neg_raw(
    m: usize,
    alpha: &ComplexScalar,
    ctx: &PrecisionContext,
) -> Result<(ComplexScalar, f64, usize)> {
    check_unit_disc(alpha)?;
    let table = constants::shared(ctx)?;
    let prec = ctx.working_bits() + 8;
    let alpha = alpha.round_to(prec);
    let h_m = harmonic(m);
    let mut acc = ComplexScalar::real(Float::with_val(prec, table.zeta_prime_neg(m, ctx)?));
    for k in 0..m {
        let inner = Float::with_val(prec, table.zeta_prime_neg(k, ctx)?)
            - Float::with_val(prec, table.zeta_neg(k) * Rational::from(&h_m - harmonic(k)));
        let c = Float::with_val(prec, binomial(m, k)) * inner;
        acc += &alpha.pow_u32((m - k) as u32).scale(&c);
    }
    let gamma = Float::with_val(prec, table.euler_gamma());
    let c = (Float::with_val(prec, &h_m) - gamma) / Float::with_val(prec, m + 1);
    acc += &alpha.pow_u32(m as u32 + 1).scale(&c);
    let tail = zeta_tail(m, &alpha, &acc, ctx)?;
    acc += &tail.sum;
    Ok((acc, tail.bound, tail.terms + m + 1))
}

/// `zeta_1'(-m, alpha) = d/ds zeta(s, 1 + alpha)` at `s = -m`, `|alpha| < 1`:
/// a finite sum over `zeta'(-k)`, `zeta(-k)` and Euler's constant plus a
/// tail in `zeta(k) alpha^{m+k}` (empty sums are zero).
pub fn zeta_prime_neg_series(
    m: usize,
    alpha: &ComplexScalar,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    let (value, bound, terms) = prime_neg_raw(m, alpha, ctx)?;
    Ok(SeriesResult {
        value: value.round_to(ctx.bits()),
        error_bound: bound,
        terms_used: terms,
        formula_id: FormulaId::ZetaPrimeNegSeries,
    })
}

/// `zeta'(0, alpha) = -log alpha + zeta'(0) - gamma alpha + sum_{n>=2} (-alpha)^n zeta(n)/n`,
/// which equals `log(Gamma(alpha)/sqrt(2 pi))`.
pub fn zeta_prime_zero_alpha(alpha: &ComplexScalar, ctx: &PrecisionContext) -> Result<SeriesResult> {
    check_log_branch(alpha)?;
    let (value, bound, terms) = prime_neg_raw(0, alpha, ctx)?;
    let prec = value.prec();
    let value = &value - &alpha.round_to(prec).ln();
    Ok(SeriesResult {
        value: value.round_to(ctx.bits()),
        error_bound: bound,
        terms_used: terms,
        formula_id: FormulaId::ZetaPrimeZero,
    })
}

/// `log Gamma(1 + alpha) = -gamma alpha + sum_{n>=2} (-1)^n zeta(n) alpha^n / n`
/// for `|alpha| < 1` (principal branch).
pub fn log_gamma_series(alpha: &ComplexScalar, ctx: &PrecisionContext) -> Result<SeriesResult> {
    check_unit_disc(alpha)?;
    let table = constants::shared(ctx)?;
    let prec = ctx.working_bits() + 8;
    let alpha = alpha.round_to(prec);
    let gamma = Float::with_val(prec, table.euler_gamma());
    let linear = -alpha.scale(&gamma);
    let tail = zeta_tail(0, &alpha, &linear, ctx)?;
    Ok(SeriesResult {
        value: (&linear + &tail.sum).round_to(ctx.bits()),
        error_bound: tail.bound,
        terms_used: tail.terms + 1,
        formula_id: FormulaId::LogGammaSeries,
    })
}

/// `zeta''(0, alpha) = log^2 alpha + zeta''(0) + 2 gamma_1 alpha
///   + sum_{n>=2} (-alpha)^n/n (2 zeta'(n) + 2 zeta(n) H_{n-1})`,
/// `H_j` the harmonic numbers and `gamma_1` the first Stieltjes constant.
pub fn zeta_second_derivative_at_zero(
    alpha: &ComplexScalar,
    ctx: &PrecisionContext,
) -> Result<SeriesResult> {
    check_log_branch(alpha)?;
    check_unit_disc(alpha)?;
    let table = constants::shared(ctx)?;
    let prec = ctx.working_bits() + 8;
    let alpha = alpha.round_to(prec);
    let a_abs = alpha.abs_f64();
    let ln = alpha.ln();
    let mut acc = &ln * &ln;
    acc = acc.add_real(&Float::with_val(prec, table.zeta_second_derivative_zero()));
    let g1 = Float::with_val(prec, table.stieltjes(1)?) * 2u32;
    acc += &alpha.scale(&g1);
    let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
    let mut zs = ShiftedZeta::new(&ComplexScalar::from_i64(prec, 2), 1, 2, ctx);
    let minus_alpha = -&alpha;
    let mut power = &minus_alpha * &minus_alpha;
    let mut harmonic = Float::with_val(prec, 1);
    let mut stop = StopRule::new(ctx);
    let mut n = 2usize;
    loop {
        if n > ctx.max_terms() {
            return Err(ZetaError::exhausted(ctx.max_terms(), "second derivative series"));
        }
        let jet = zs.next_expansion()?.full()?;
        let inner = (&jet.derivative(1) + &jet.value().scale(&harmonic)).scale_i64(2);
        let inv_n = Float::with_val(prec, 1) / Float::with_val(prec, n as u64);
        let term = (&power * &inner).scale(&inv_n);
        acc += &term;
        // majorant 2|alpha|^j (1 + zeta(2)(1 + ln j))/j, ratio <= |alpha|(1 + 1/j)
        let j = (n + 1) as f64;
        let rho = a_abs * (1.0 + 1.0 / j);
        let bound = if rho < 1.0 {
            (2.0 * (1.0 + zeta2 * (1.0 + j.ln())) / j).log2() + j * a_abs.log2()
                - (1.0 - rho).log2()
        } else {
            f64::INFINITY
        };
        if stop.observe(term.log2_abs(), acc.log2_abs(), bound) {
            return Ok(SeriesResult {
                value: acc.round_to(ctx.bits()),
                error_bound: exp2(bound),
                terms_used: n - 1,
                formula_id: FormulaId::ZetaSecondDerivZero,
            });
        }
        harmonic += inv_n;
        power *= &minus_alpha;
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernoulli::hurwitz_at_negative_integer;
    use crate::oracle::{log_gamma, zeta_derivative_em};

    fn c(x: f64) -> ComplexScalar {
        ComplexScalar::from_f64(256, x, 0.0)
    }

    #[test]
    fn closed_form_small_cases() {
        let a = Rational::from((1, 3));
        assert_eq!(zeta_neg_m_alpha_closed(1, 1, &a).unwrap(), Rational::from((1, 36)));
        let half = Rational::from((1, 2));
        assert_eq!(
            zeta_neg_m_alpha_closed(2, 3, &half).unwrap(),
            zeta_neg_m_alpha_closed(2, 1, &half).unwrap()
        );
        for m in 0..6 {
            assert_eq!(
                zeta_neg_m_alpha_closed(m, 2, &a).unwrap(),
                hurwitz_at_negative_integer(m, &a).unwrap()
            );
        }
        assert!(zeta_neg_m_alpha_closed(0, 1, &Rational::from(1)).is_err());
    }

    #[test]
    fn prime_neg_matches_oracle() {
        let ctx = PrecisionContext::default();
        let r = zeta_prime_neg_series(1, &c(0.3), &ctx).unwrap();
        let want = zeta_derivative_em(1, &c(-1.0), &c(0.3).add_real(&Float::with_val(256, 1)), &ctx).unwrap();
        assert!((&r.value - &want).abs_f64() < 1e-28);
    }

    #[test]
    fn lerch_identity() {
        let ctx = PrecisionContext::default();
        let r = zeta_prime_zero_alpha(&c(0.25), &ctx).unwrap();
        let lg = log_gamma(&c(0.25), &ctx).unwrap();
        let half_log_2pi = (Float::with_val(256, rug::float::Constant::Pi) * 2u32).ln() / 2u32;
        let want = lg.add_real(&-half_log_2pi);
        assert!((&r.value - &want).abs_f64() < 1e-28);
    }

    #[test]
    fn log_gamma_half() {
        let ctx = PrecisionContext::default();
        let r = log_gamma_series(&c(0.5), &ctx).unwrap();
        let want = (std::f64::consts::PI.sqrt() / 2.0).ln();
        assert!((r.value.re().to_f64() - want).abs() < 1e-15);
        assert!(r.error_bound < 1e-30);
        let zero = log_gamma_series(&c(0.0), &ctx).unwrap();
        assert!(zero.value.is_zero());
    }

    #[test]
    fn second_derivative_matches_oracle() {
        let ctx = PrecisionContext::default();
        let r = zeta_second_derivative_at_zero(&c(0.5), &ctx).unwrap();
        let want = zeta_derivative_em(2, &c(0.0), &c(0.5), &ctx).unwrap();
        assert!((&r.value - &want).abs_f64() < 1e-28, "{}", (&r.value - &want).abs_f64());
        assert!(zeta_second_derivative_at_zero(&c(0.0), &ctx).is_err());
    }
}

//! Classical series identities for `zeta(s)` obtained by specialising the
//! shifted expansion, evaluated as residual checks.
//!
//! | id                | identity                                                        | expansion parameters       |
//! |-------------------|-----------------------------------------------------------------|----------------------------|
//! | `pole_subtracted` | `zeta(s) - 1/(s-1) = 1 - sum (s)_n/(n+1)! (zeta(s+n) - 1)`      | `unit_sum` at `s - 1`      |
//! | `half_shift`      | `(1 - 2^{1-s}) zeta(s) = sum (s)_n zeta(s+n) / (2^{s+n} n!)`    | `k = 1`, `alpha = -1/2`    |
//! | `unit_sum`        | `sum (s)_n/n! (zeta(s+n) - 1) = 1`                              | `k = 2`, `alpha = -1`      |
//! | `alternating_sum` | `sum (-1)^{n-1} (s)_n/n! (zeta(s+n) - 1) = 2^{-s}`              | `k = 2`, `alpha = 1`       |
//! | `euler_gamma`     | `gamma = 1 - sum_{n>=2} (zeta(n) - 1)/n`                        | `pole_subtracted` at `s -> 1` |

use std::fmt;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::constants;
use crate::error::{Result, ZetaError};
use crate::oracle::{is_one, ShiftedZeta};
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;
use crate::series::{pole_pair, shifted_series_coefficient};

/// Shown next to every Euler-constant check.
pub const EULER_GAMMA_NOTE: &str =
    "evaluated as 1 - sum_{n>=2} (zeta(n) - 1)/n; the form 1 - sum_{n>=2} zeta(n)/n diverges";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    PoleSubtracted,
    HalfShift,
    UnitSum,
    AlternatingSum,
    EulerGamma,
}

impl IdentityId {
    pub const ALL: [IdentityId; 5] = [
        IdentityId::PoleSubtracted,
        IdentityId::HalfShift,
        IdentityId::UnitSum,
        IdentityId::AlternatingSum,
        IdentityId::EulerGamma,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::PoleSubtracted => "pole_subtracted",
            IdentityId::HalfShift => "half_shift",
            IdentityId::UnitSum => "unit_sum",
            IdentityId::AlternatingSum => "alternating_sum",
            IdentityId::EulerGamma => "euler_gamma",
        }
    }

    /// Accepts the names above or the short aliases `I`, `II`, `III`, `IV`, `gamma`.
    pub fn parse(text: &str) -> Result<Self> {
        let id = match text {
            "I" | "i" => IdentityId::PoleSubtracted,
            "II" | "ii" => IdentityId::HalfShift,
            "III" | "iii" => IdentityId::UnitSum,
            "IV" | "iv" => IdentityId::AlternatingSum,
            "gamma" => IdentityId::EulerGamma,
            other => IdentityId::ALL
                .into_iter()
                .find(|id| id.as_str() == other)
                .ok_or_else(|| ZetaError::Parse(format!("unknown identity {other:?}")))?,
        };
        Ok(id)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub identity_id: IdentityId,
    /// the point `s`; 1 for the Euler-constant check
    pub s: ComplexScalar,
    pub terms: usize,
    pub lhs: ComplexScalar,
    pub rhs: ComplexScalar,
    pub residual: f64,
}

impl IdentityCheck {
    pub fn note(&self) -> Option<&'static str> {
        (self.identity_id == IdentityId::EulerGamma).then_some(EULER_GAMMA_NOTE)
    }
}

/// Both sides of an identity with `terms` series terms and `zeta` values
/// from the reference oracle.
pub fn identity_residual(
    id: IdentityId,
    s: &ComplexScalar,
    terms: usize,
    ctx: &PrecisionContext,
) -> Result<IdentityCheck> {
    if terms == 0 {
        return Err(ZetaError::Parse("at least one term is required".into()));
    }
    if id == IdentityId::EulerGamma {
        let lhs = euler_gamma_from_identity_one(terms.max(2), ctx)?;
        let table = constants::shared(ctx)?;
        let rhs = Float::with_val(ctx.bits(), table.euler_gamma());
        let residual = Float::with_val(ctx.bits(), &lhs - &rhs).abs().to_f64();
        return Ok(IdentityCheck {
            identity_id: id,
            s: ComplexScalar::one(ctx.bits()),
            terms: terms.max(2),
            lhs: ComplexScalar::real(lhs),
            rhs: ComplexScalar::real(rhs),
            residual,
        });
    }
    if is_one(s) {
        return Err(ZetaError::PoleAtOne);
    }
    let prec = ctx.working_bits() + 8;
    let s = s.round_to(prec);
    // zeta(s + n, k): k = 2 yields zeta(s+n) - 1 without cancellation
    let k = if id == IdentityId::HalfShift { 1 } else { 2 };
    let mut zs = ShiftedZeta::new(&s, k, 1, ctx);
    let first = zs.next_expansion()?;
    let mut head = ComplexScalar::one(prec);
    let mut sum = ComplexScalar::zero(prec);
    let two = ComplexScalar::from_i64(prec, 2);
    let half = Float::with_val(prec, 0.5);
    let mut weight = match id {
        IdentityId::HalfShift => (-&s * &two.ln()).exp(),
        _ => ComplexScalar::one(prec),
    };
    for n in 1..=terms {
        let e = zs.next_expansion()?;
        let pair = pole_pair(&s, n, &e.regular().round_to(prec), &e.full().ok(), prec);
        let inv_n = Float::with_val(prec, 1) / Float::with_val(prec, n as u64);
        // (s)_n / n! * zeta(s+n, k)
        let term = (&head * pair.value()).scale(&inv_n);
        let contribution = match id {
            IdentityId::PoleSubtracted => {
                term.scale(&(Float::with_val(prec, 1) / Float::with_val(prec, n as u64 + 1)))
            }
            IdentityId::HalfShift => {
                weight = weight.scale(&half);
                &term * &weight
            }
            IdentityId::UnitSum => term,
            IdentityId::AlternatingSum => {
                if n % 2 == 1 {
                    term
                } else {
                    -term
                }
            }
            IdentityId::EulerGamma => unreachable!(),
        };
        sum += &contribution;
        head = (&head * &s.add_real(&Float::with_val(prec, n as u64 - 1))).scale(&inv_n);
    }
    let one = ComplexScalar::one(prec);
    let (lhs, rhs) = match id {
        // zeta(s) - 1/(s-1) is the pole-free part of zeta(s, 2), plus 1
        IdentityId::PoleSubtracted => (first.regular().value().add_real(&Float::with_val(prec, 1)), &one - &sum),
        IdentityId::HalfShift => {
            let factor = &one - &(&(-&s).add_real(&Float::with_val(prec, 1)) * &two.ln()).exp();
            let zeta = first.full()?.value().clone();
            (&factor * &zeta, sum)
        }
        IdentityId::UnitSum => (sum, one),
        IdentityId::AlternatingSum => (sum, (-&s * &two.ln()).exp()),
        IdentityId::EulerGamma => unreachable!(),
    };
    let residual = (&lhs - &rhs).abs_f64();
    Ok(IdentityCheck {
        identity_id: id,
        s: s.round_to(ctx.bits()),
        terms,
        lhs: lhs.round_to(ctx.bits()),
        rhs: rhs.round_to(ctx.bits()),
        residual,
    })
}

/// `1 - sum_{n=2}^{N} (zeta(n) - 1)/n`, which tends to Euler's constant with
/// error at most `sum_{n>N} 2^{1-n}/n`.
pub fn euler_gamma_from_identity_one(terms: usize, ctx: &PrecisionContext) -> Result<Float> {
    if terms < 2 {
        return Err(ZetaError::Parse("at least two terms are required".into()));
    }
    let prec = ctx.working_bits() + 8;
    let mut zs = ShiftedZeta::new(&ComplexScalar::from_i64(prec, 2), 2, 1, ctx);
    let mut acc = Float::with_val(prec, 1);
    for n in 2..=terms {
        let z = zs.next_expansion()?.full()?;
        acc -= Float::with_val(prec, z.value().re()) / n as u64;
    }
    Ok(Float::with_val(ctx.bits(), acc))
}

/// `sum_{n=2}^{N} (-1)^n zeta(n)/n`, accelerated by repeated averaging of the
/// last partial sums. The limit is Euler's constant; this is the `alpha -> 1`
/// boundary of the log-gamma series.
pub fn alternating_zeta_sum(terms: usize, ctx: &PrecisionContext) -> Result<Float> {
    if terms < 4 {
        return Err(ZetaError::Parse("at least four terms are required".into()));
    }
    let prec = ctx.working_bits() + 8;
    let mut zs = ShiftedZeta::new(&ComplexScalar::from_i64(prec, 2), 1, 1, ctx);
    let mut acc = Float::with_val(prec, 0);
    let mut partial = Vec::with_capacity(terms);
    for n in 2..=terms {
        let z = zs.next_expansion()?.full()?;
        let t = Float::with_val(prec, z.value().re()) / n as u64;
        if n % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
        partial.push(acc.clone());
    }
    let depth = (terms / 4).min(64);
    let mut row: Vec<Float> = partial[partial.len() - depth - 1..].to_vec();
    while row.len() > 1 {
        row = row
            .windows(2)
            .map(|w| Float::with_val(prec, &w[0] + &w[1]) / 2u32)
            .collect();
    }
    Ok(Float::with_val(ctx.bits(), &row[0]))
}

fn rising_rational(s: i64, n: usize) -> Rational {
    (0..n).fold(Rational::from(1), |acc, i| acc * Integer::from(s + i as i64))
}

fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from(Integer::from(1) << e as u32)
    } else {
        Rational::from((Integer::from(1), Integer::from(1) << (-e) as u32))
    }
}

/// Coefficients `n = 1..=count` of the zeta-valued factor in the printed
/// series of `id` at integer `s` (`zeta(s+n) - 1`, or `zeta(s+n)` for
/// `half_shift`).
pub fn identity_coefficients(id: IdentityId, s: i64, count: usize) -> Vec<Rational> {
    (1..=count)
        .map(|n| {
            let p = rising_rational(s, n);
            match id {
                IdentityId::PoleSubtracted => p / factorial(n + 1),
                IdentityId::HalfShift => p / factorial(n) * pow2(-(s + n as i64)),
                IdentityId::UnitSum => p / factorial(n),
                IdentityId::AlternatingSum => {
                    let c = p / factorial(n);
                    if n % 2 == 1 {
                        c
                    } else {
                        -c
                    }
                }
                IdentityId::EulerGamma => Rational::from((1, n as u64 + 1)),
            }
        })
        .collect()
}

/// The same coefficients read off the shifted expansion at the parameters
/// that produce `id`, after the normalisation that turns it into the
/// printed identity. `pole_subtracted` needs `s != 1`.
pub fn expansion_coefficients(id: IdentityId, s: i64, count: usize) -> Vec<Rational> {
    let at = |s: i64, alpha: Rational, n: usize| {
        shifted_series_coefficient(&Rational::from(s), &alpha, n)
    };
    (1..=count)
        .map(|n| match id {
            IdentityId::UnitSum => at(s, Rational::from(-1), n),
            IdentityId::AlternatingSum => -at(s, Rational::from(1), n),
            IdentityId::HalfShift => at(s, Rational::from((-1, 2)), n) * pow2(-s),
            IdentityId::PoleSubtracted => {
                at(s - 1, Rational::from(-1), n + 1) / Integer::from(s - 1)
            }
            IdentityId::EulerGamma => {
                // pole_subtracted at s = 1: (1)_n/(n+1)! = 1/(n+1)
                Rational::from((1, n as u64 + 1))
            }
        })
        .collect()
}

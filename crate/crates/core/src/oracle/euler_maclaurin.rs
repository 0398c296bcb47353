//! Euler-Maclaurin evaluation of `zeta(s, a)` and its `s`-derivatives.
//!
//! For a split point `N` and `X = N + a`:
//!
//! ```text
//! zeta(s, a) = sum_{n<N} (n+a)^{-s} + X^{1-s}/(s-1) + X^{-s}/2
//!            + sum_{j>=1} B_{2j}/(2j)! s(s+1)...(s+2j-2) X^{-s-2j+1} + R
//! ```
//!
//! Everything is carried as a [`Jet`] in `s`, so derivatives come out of the
//! same arithmetic. The pole is split off: the expansion stores the regular
//! part `zeta(s, a) - 1/(s-1)`, which is finite at `s = 1`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::{Float, Integer, Rational};

use crate::bernoulli::bernoulli_unbounded;
use crate::error::{Result, ZetaError};
use crate::jet::Jet;
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;

/// `zeta(s, a)` around `s0`, stored as its regular part.
#[derive(Clone, Debug)]
pub struct HurwitzExpansion {
    s0: ComplexScalar,
    regular: Jet,
    // summed without subtracting the pole, when away from it; keeps relative
    // precision when the value is much smaller than 1/(s-1)
    full: Option<Jet>,
}

impl HurwitzExpansion {
    pub fn s0(&self) -> &ComplexScalar {
        &self.s0
    }

    /// Jet of `zeta(s, a) - 1/(s-1)`.
    pub fn regular(&self) -> &Jet {
        &self.regular
    }

    /// Jet of `zeta(s, a)`; fails at the pole.
    pub fn full(&self) -> Result<Jet> {
        if let Some(full) = &self.full {
            return Ok(full.clone());
        }
        let u0 = self.s0.add_real(&Float::with_val(self.s0.prec(), -1));
        if u0.is_zero() {
            return Err(ZetaError::PoleAtOne);
        }
        let pole = Jet::variable(&u0, self.regular.len()).recip();
        Ok(self.regular.add(&pole))
    }
}

/// `B_{2j} / (2j)!` for `j = 1..count`, cached per precision.
fn em_coefficients(prec: u32, count: usize) -> Arc<Vec<Float>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<Float>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = cache.read().expect("cache poisoned").get(&prec) {
        if v.len() >= count {
            return Arc::clone(v);
        }
    }
    let mut coeffs = Vec::with_capacity(count);
    let mut fact = Integer::from(1);
    for j in 1..=count {
        fact *= (2 * j - 1) as u32;
        fact *= (2 * j) as u32;
        let b = bernoulli_unbounded(2 * j);
        coeffs.push(Float::with_val(prec, b / Rational::from(&fact)));
    }
    let arc = Arc::new(coeffs);
    cache
        .write()
        .expect("cache poisoned")
        .insert(prec, Arc::clone(&arc));
    arc
}

/// `value * (-ln)^i / i!` for `i < len`: the jet of `x^{-s}` given `x^{-s0}`.
pub(crate) fn power_jet(value: &ComplexScalar, ln_x: &ComplexScalar, len: usize) -> Jet {
    let mut coeffs = Vec::with_capacity(len);
    let mut term = value.clone();
    let minus_ln = -ln_x;
    for i in 0..len {
        if i > 0 {
            term = (&term * &minus_ln).scale(&(Float::with_val(value.prec(), 1) / (i as u32)));
        }
        coeffs.push(term.clone());
    }
    Jet::from_coeffs(coeffs)
}

/// `(X^{1-s} - 1)/(s-1)` as a jet, valid through `s = 1`.
fn pole_free_power(x_pow: &Jet, x: &ComplexScalar, ln_x: &ComplexScalar, s0: &ComplexScalar) -> Jet {
    let prec = s0.prec();
    let len = x_pow.len();
    let u0 = s0.add_real(&Float::with_val(prec, -1));
    let u_abs = u0.abs_f64();
    if u_abs >= 0.5 {
        let inv_u = Jet::variable(&u0, len).recip();
        let x_one_minus_s = x_pow.scale(x);
        return x_one_minus_s.add_scalar(&ComplexScalar::from_i64(prec, -1)).mul(&inv_u);
    }
    // (e^{-L u} - 1)/u = -L phi(-L u), phi(z) = (e^z - 1)/z,
    // phi^{(i)}(z0)/i! = sum_j z0^j / (j! i! (j+i+1)).
    let z0 = -(ln_x * &u0);
    let z1 = -ln_x;
    let eps_log2 = -(prec as f64) - 8.0;
    let mut coeffs = Vec::with_capacity(len);
    let mut z1_pow = ComplexScalar::one(prec);
    let mut inv_ifact = Float::with_val(prec, 1);
    for i in 0..len {
        if i > 0 {
            z1_pow = &z1_pow * &z1;
            inv_ifact /= i as u32;
        }
        let mut acc = ComplexScalar::zero(prec);
        let mut zj = ComplexScalar::one(prec); // z0^j / j!
        let mut j = 0u32;
        loop {
            let t = zj.scale(&(Float::with_val(prec, 1) / (j + i as u32 + 1)));
            acc += &t;
            if j > 4 && t.log2_abs() < eps_log2 {
                break;
            }
            j += 1;
            zj = (&zj * &z0).scale(&(Float::with_val(prec, 1) / j));
        }
        let c = (&acc * &z1_pow).scale(&inv_ifact);
        coeffs.push(-(ln_x * &c));
    }
    Jet::from_coeffs(coeffs)
}

/// Euler-Maclaurin tail at `X` for `s = s0 + e`: returns the jet of
/// `X^{-s}/2 + (X^{1-s} - 1)/(s-1) + corrections` (without the `-1` when
/// `with_pole`, which needs `|s0 - 1| >= 1/2`), or `None` when the
/// asymptotic corrections start growing before reaching `scale_log2 - bits`.
fn em_tail(
    x: &ComplexScalar,
    ln_x: &ComplexScalar,
    x_neg_s0: &ComplexScalar,
    s0: &ComplexScalar,
    len: usize,
    scale_log2: f64,
    prec: u32,
    with_pole: bool,
) -> Option<Jet> {
    let x_pow = power_jet(x_neg_s0, ln_x, len);
    let half = Float::with_val(prec, 0.5);
    let mut total = x_pow.scale_real(&half);
    if with_pole {
        let u0 = s0.add_real(&Float::with_val(prec, -1));
        total.add_assign(&x_pow.scale(x).mul(&Jet::variable(&u0, len).recip()));
    } else {
        total.add_assign(&pole_free_power(&x_pow, x, ln_x, s0));
    }

    let threshold = scale_log2.max(total.log2_norm()) - prec as f64 - 4.0;
    let inv_x = x.recip();
    let inv_x2 = &inv_x * &inv_x;
    let mut x_factor = inv_x.clone();
    let mut rising = Jet::variable(s0, len);
    let mut last = f64::INFINITY;
    let mut j = 1usize;
    let mut coeffs = em_coefficients(prec, 64);
    loop {
        if j > coeffs.len() {
            coeffs = em_coefficients(prec, 2 * coeffs.len());
        }
        let c = &coeffs[j - 1];
        let term = rising.mul(&x_pow).scale(&x_factor.scale(c));
        let size = term.log2_norm();
        total.add_assign(&term);
        if size < threshold {
            return Some(total);
        }
        if j >= 3 && size > last {
            return None;
        }
        last = size;
        let s1 = s0.add_real(&Float::with_val(prec, (2 * j - 1) as u32));
        let s2 = s0.add_real(&Float::with_val(prec, (2 * j) as u32));
        rising = rising.mul_shifted_variable(&s1).mul_shifted_variable(&s2);
        x_factor = &x_factor * &inv_x2;
        j += 1;
        if j > 4096 {
            return None;
        }
    }
}

fn validate_alpha(a: &ComplexScalar) -> Result<()> {
    if !a.is_finite() {
        return Err(ZetaError::InvalidAlpha("non-finite".into()));
    }
    if a.im().is_zero() && a.re().is_integer() && !a.re().is_sign_positive() {
        return Err(ZetaError::InvalidAlpha(format!(
            "{} is a non-positive integer",
            a.re().to_f64()
        )));
    }
    if a.im().is_zero() && a.re().is_zero() {
        return Err(ZetaError::InvalidAlpha("0".into()));
    }
    Ok(())
}

/// Precision carrying the cancellation of `sum (n+a)^{-s}` for `Re s < 1`.
fn precision_for(s0: &ComplexScalar, x_abs: f64, ctx: &PrecisionContext) -> u32 {
    let sigma = s0.re().to_f64();
    let extra = if sigma < 1.0 {
        ((1.0 - sigma) * (x_abs + 1.0).log2()).ceil() as u32
    } else {
        0
    };
    ctx.working_bits() + extra + 8
}

fn initial_split(s_abs: f64, ctx: &PrecisionContext) -> f64 {
    (0.22 * ctx.working_bits() as f64 + 0.6 * s_abs).max(8.0)
}

fn away_from_pole(s0: &ComplexScalar) -> bool {
    s0.add_real(&Float::with_val(s0.prec(), -1)).abs_f64() >= 0.5
}

/// Builds the expansion from `sum`, which is the full jet when `is_full`
/// and the regular part otherwise.
fn assemble(s0: ComplexScalar, sum: Jet, is_full: bool) -> HurwitzExpansion {
    match is_full {
        true => {
            let u0 = s0.add_real(&Float::with_val(s0.prec(), -1));
            let pole = Jet::variable(&u0, sum.len()).recip();
            HurwitzExpansion {
                s0,
                regular: sum.sub(&pole),
                full: Some(sum),
            }
        }
        false => HurwitzExpansion {
            s0,
            regular: sum,
            full: None,
        },
    }
}

/// Expansion of `zeta(s, a)` in `s` around `s0`, with `len` Taylor coefficients.
pub fn hurwitz_expansion(
    s0: &ComplexScalar,
    a: &ComplexScalar,
    len: usize,
    ctx: &PrecisionContext,
) -> Result<HurwitzExpansion> {
    validate_alpha(a)?;
    if !s0.is_finite() {
        return Err(ZetaError::Parse("non-finite s".into()));
    }
    let s_abs = s0.abs_f64();
    let a_re = a.re().to_f64();
    let mut split = (initial_split(s_abs, ctx) - a_re).ceil().max(1.0) as usize;
    loop {
        if split > ctx.max_terms() {
            return Err(ZetaError::exhausted(
                ctx.max_terms(),
                "Euler-Maclaurin split point",
            ));
        }
        let prec = precision_for(s0, split as f64 + a.abs_f64(), ctx);
        let s = s0.round_to(prec);
        let a = a.round_to(prec);
        let mut direct = Jet::zero(prec, len);
        for n in 0..split {
            let base = a.add_real(&Float::with_val(prec, n as u64));
            let ln = base.ln();
            direct.add_assign(&Jet::neg_power(&ln, &s, len));
        }
        let x = a.add_real(&Float::with_val(prec, split as u64));
        let ln_x = x.ln();
        let x_neg_s = (&(-&s) * &ln_x).exp();
        let pole = away_from_pole(&s);
        match em_tail(&x, &ln_x, &x_neg_s, &s, len, direct.log2_norm(), prec, pole) {
            Some(tail) => return Ok(assemble(s, direct.add(&tail), pole)),
            None => split *= 2,
        }
    }
}

/// Successive expansions of `zeta(s0 + n, k)` for `n = 0, 1, 2, ...` and a
/// positive integer `k`, sharing one table of powers `j^{-s0-n}`.
pub struct ShiftedZeta {
    s0: ComplexScalar,
    k: u64,
    len: usize,
    prec: u32,
    ctx: PrecisionContext,
    ln_j: Vec<ComplexScalar>,
    inv_j: Vec<Float>,
    powers: Vec<ComplexScalar>,
    active: usize,
    x: ComplexScalar,
    ln_x: ComplexScalar,
    inv_x: Float,
    x_power: ComplexScalar,
    truncated: bool,
    n: usize,
}

impl ShiftedZeta {
    pub fn new(s0: &ComplexScalar, k: u64, len: usize, ctx: &PrecisionContext) -> Self {
        assert!(k >= 1, "shift must be positive");
        let split = k + initial_split(s0.abs_f64(), ctx).ceil() as u64;
        let prec = precision_for(s0, split as f64, ctx);
        let s = s0.round_to(prec);
        let mut ln_j = Vec::new();
        let mut inv_j = Vec::new();
        let mut powers = Vec::new();
        for j in k..split {
            let ln = ComplexScalar::real(Float::with_val(prec, j).ln());
            powers.push((&(-&s) * &ln).exp());
            ln_j.push(ln);
            inv_j.push(Float::with_val(prec, 1) / Float::with_val(prec, j));
        }
        let x = ComplexScalar::real(Float::with_val(prec, split));
        let ln_x = x.ln();
        let x_power = (&(-&s) * &ln_x).exp();
        ShiftedZeta {
            active: powers.len(),
            s0: s,
            k,
            len,
            prec,
            ctx: *ctx,
            ln_j,
            inv_j,
            powers,
            inv_x: Float::with_val(prec, 1) / Float::with_val(prec, split),
            x,
            ln_x,
            x_power,
            truncated: false,
            n: 0,
        }
    }

    /// Index `n` of the expansion the next call returns.
    pub fn position(&self) -> usize {
        self.n
    }

    pub fn next_expansion(&mut self) -> Result<HurwitzExpansion> {
        let prec = self.prec;
        let s_n = self.s0.add_real(&Float::with_val(prec, self.n as u64));
        let mut direct = Jet::zero(prec, self.len);
        for idx in 0..self.active {
            direct.add_assign(&power_jet(&self.powers[idx], &self.ln_j[idx], self.len));
        }
        let sigma = s_n.re().to_f64();
        let u0 = s_n.add_real(&Float::with_val(prec, -1));
        let scale = direct.log2_norm();
        if !self.truncated && sigma > 2.0 && u0.abs_f64() >= 0.5 {
            // drop powers whose contribution, summed to infinity, is negligible
            let limit = scale - prec as f64 - 4.0;
            let mut cut = self.active;
            while cut > 1 {
                let j = (self.k + cut as u64 - 1) as f64;
                let bound = -sigma * j.log2()
                    + (self.len as f64) * (1.0 + j.ln()).log2()
                    + (1.0 + j / (sigma - 1.0)).log2();
                if bound < limit {
                    cut -= 1;
                } else {
                    break;
                }
            }
            if cut < self.active {
                self.truncated = true;
                self.active = cut;
            }
        }
        let pole = away_from_pole(&s_n);
        let sum = if self.truncated {
            // the dropped terms are below working precision
            let mut d = Jet::zero(prec, self.len);
            for idx in 0..self.active {
                d.add_assign(&power_jet(&self.powers[idx], &self.ln_j[idx], self.len));
            }
            Some(d)
        } else {
            em_tail(
                &self.x,
                &self.ln_x,
                &self.x_power,
                &s_n,
                self.len,
                scale,
                prec,
                pole,
            )
            .map(|tail| direct.add(&tail))
        };
        let expansion = match sum {
            Some(sum) => assemble(s_n, sum, pole),
            None => hurwitz_expansion(
                &s_n,
                &ComplexScalar::from_i64(prec, self.k as i64),
                self.len,
                &self.ctx,
            )?,
        };
        for idx in 0..self.active {
            self.powers[idx] = self.powers[idx].scale(&self.inv_j[idx]);
        }
        self.x_power = self.x_power.scale(&self.inv_x);
        self.n += 1;
        Ok(expansion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn zeta_two_matches_closed_form() {
        let s = ComplexScalar::from_i64(300, 2);
        let a = ComplexScalar::from_i64(300, 1);
        let v = hurwitz_expansion(&s, &a, 1, &ctx()).unwrap().full().unwrap();
        let pi = ComplexScalar::pi(300);
        let expect = Float::with_val(300, &pi * &pi) / 6u32;
        let err = Float::with_val(300, v.value().re() - &expect).abs().to_f64();
        assert!(err < 1e-80, "{err}");
    }

    #[test]
    fn regular_part_at_one_is_euler_gamma() {
        let s = ComplexScalar::from_i64(300, 1);
        let a = ComplexScalar::from_i64(300, 1);
        let e = hurwitz_expansion(&s, &a, 1, &ctx()).unwrap();
        let gamma = Float::with_val(300, rug::float::Constant::Euler);
        let err = Float::with_val(300, e.regular().value().re() - &gamma)
            .abs()
            .to_f64();
        assert!(err < 1e-80, "{err}");
        assert_eq!(e.full().unwrap_err(), ZetaError::PoleAtOne);
    }

    #[test]
    fn shifted_batch_agrees_with_single_point() {
        let c = ctx();
        let s0 = ComplexScalar::from_f64(300, -1.5, 2.0);
        let mut batch = ShiftedZeta::new(&s0, 2, 2, &c);
        for n in 0..120 {
            let got = batch.next_expansion().unwrap().full().unwrap();
            if n % 17 != 0 {
                continue;
            }
            let s_n = s0.add_real(&Float::with_val(300, n));
            let want = hurwitz_expansion(&s_n, &ComplexScalar::from_i64(300, 2), 2, &c)
                .unwrap()
                .full()
                .unwrap();
            for i in 0..2 {
                let diff = (got.coeff(i) - want.coeff(i)).log2_abs();
                let scale = want.coeff(i).log2_abs();
                // absolute agreement: the stored regular part cancels the pole
                assert!(diff < scale.max(0.0) - 270.0, "n={n} i={i} diff={diff} scale={scale}");
            }
        }
    }

    #[test]
    fn rejects_nonpositive_integer_alpha() {
        let s = ComplexScalar::from_i64(128, 2);
        for bad in [0i64, -1, -3] {
            let a = ComplexScalar::from_i64(128, bad);
            assert!(matches!(
                hurwitz_expansion(&s, &a, 1, &ctx()),
                Err(ZetaError::InvalidAlpha(_))
            ));
        }
    }
}

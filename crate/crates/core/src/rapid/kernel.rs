//! Shared pieces of the rapid series: the function
//!
//! `E(M; x) = sum_{j=0}^{floor((M-1)/2)} C(M, 2j) zeta'(-2j) x^{M-2j}
//!           + H_M x^M / 2 + sum_{k>=1} c_k zeta(2k) x^{M+2k}`
//!
//! with `c_k = (2k-1)! M! / (M+2k)!`, and the even zeta values its tail uses.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::bernoulli::bernoulli_unbounded;
use crate::constants;
use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::series::exp2;

/// `zeta(2k) - sum_{n<=SPLIT} n^{-2k}` is summed numerically; the first
/// `SPLIT` terms go through the closed form of [`unit_tail`].
pub(crate) const SPLIT: u64 = 3;

/// Minimum number of tail terms evaluated before the stop rule applies.
pub(crate) const MIN_TAIL_TERMS: usize = 5;

/// Index above which `zeta(2k, SPLIT+1)` is summed directly instead of taken
/// from Bernoulli numbers.
const BERNOULLI_LIMIT: usize = 24;

type Cache = Mutex<HashMap<u32, Arc<Mutex<Vec<Float>>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `zeta(2k)` from `|B_2k| (2 pi)^{2k} / (2 (2k)!)`.
pub(crate) fn zeta_even_exact(k: usize, prec: u32) -> Float {
    let b = bernoulli_unbounded(2 * k);
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let mut v = Float::with_val(prec, b.numer()) / Float::with_val(prec, b.denom());
    v = v.abs();
    v *= two_pi.pow(2 * k as u32);
    v /= Float::with_val(prec, Integer::from(Integer::factorial(2 * k as u32)));
    v / 2u32
}

fn shifted_even(k: usize, prec: u32) -> Float {
    if k <= BERNOULLI_LIMIT {
        let mut v = zeta_even_exact(k, prec + 64);
        for n in 1..=SPLIT {
            v -= Float::with_val(prec + 64, n).pow(-2 * k as i32);
        }
        return Float::with_val(prec, v);
    }
    // remainder after N terms is below N^{1-2k}/(2k-1) < 2^{-prec-8}
    let e = 2 * k as i32;
    let n_max = (((prec + 8) as f64 / (e - 1) as f64).exp2().ceil() as u64).max(SPLIT + 2);
    let mut v = Float::with_val(prec + 16, 0);
    for n in (SPLIT + 1..=n_max).rev() {
        v += Float::with_val(prec + 16, n).pow(-e);
    }
    Float::with_val(prec, v)
}

/// `zeta(2k, SPLIT + 1) = sum_{n > SPLIT} n^{-2k}` for `k = 1..=count`,
/// cached per precision.
pub(crate) fn shifted_even_zetas(count: usize, prec: u32) -> Vec<Float> {
    let slot = {
        let mut map = cache().lock().expect("even zeta cache poisoned");
        map.entry(prec).or_default().clone()
    };
    let mut values = slot.lock().expect("even zeta cache poisoned");
    while values.len() < count {
        let k = values.len() + 1;
        values.push(shifted_even(k, prec));
    }
    values[..count].to_vec()
}

/// `zeta(2k)` for `k >= 1`.
pub(crate) fn zeta_even(k: usize, prec: u32) -> Float {
    let mut v = shifted_even_zetas(k, prec).pop().expect("k >= 1");
    for n in 1..=SPLIT {
        v += Float::with_val(prec, n).pow(-2 * k as i32);
    }
    v
}

/// Upper bound for `zeta(x, SPLIT + 1)`, `x > 1`.
fn shifted_even_bound(x: f64) -> f64 {
    let a = (SPLIT + 1) as f64;
    a.powf(-x) * (1.0 + a / (x - 1.0))
}

pub(crate) fn harmonic(n: usize, prec: u32) -> Float {
    let mut h = Float::with_val(prec, 0);
    for j in 1..=n {
        h += Float::with_val(prec, 1) / j as u32;
    }
    h
}

fn binomial(n: usize, k: usize) -> Integer {
    Integer::from(n).binomial(k as u32)
}

/// `sum_{k>=1} c_k x^{M+2k}` in closed form, `|x| < 1`:
/// `(T(x) + (-1)^M T(-x)) / 2` with
/// `T(x) = -(1+x)^M log(1+x) + sum_{n=1}^{M} C(M,n) (H_M - H_{M-n}) x^n + x^{M+1}/(M+1)`.
pub(crate) fn unit_tail(m: usize, x: &Float, prec: u32) -> Float {
    // the result is O(x^{M+2}); the closed form cancels that many leading bits
    let lost = (m as f64 + 2.0) * (1.0 - x.clone().abs().to_f64().log2()).max(1.0);
    let p = prec + lost.ceil() as u32 + m as u32 + 32;
    let x = Float::with_val(p, x);
    let t = |y: &Float| {
        let one_plus = Float::with_val(p, y + 1u32);
        let mut v = -Float::with_val(p, one_plus.clone().pow(m as u32)) * one_plus.ln();
        let hm = harmonic(m, p);
        let mut yn = Float::with_val(p, 1);
        for n in 1..=m {
            yn *= y;
            let h = Float::with_val(p, &hm - harmonic(m - n, p));
            v += Float::with_val(p, binomial(m, n)) * h * &yn;
        }
        yn *= y;
        v += yn / (m as u32 + 1);
        v
    };
    let plus = t(&x);
    let minus = t(&Float::with_val(p, -&x));
    let total = if m % 2 == 0 { plus + minus } else { plus - minus };
    Float::with_val(prec, total / 2u32)
}

/// Truncated value with its certified bound.
#[derive(Debug, Clone)]
pub(crate) struct Truncated {
    pub value: Float,
    pub bound: f64,
    pub terms: usize,
}

/// `sum_{k>=1} c_k zeta(2k, SPLIT+1) x^{M+2k}` for `0 < x < 1`, stopped once
/// the geometric bound on the remainder is below `target`.
fn remainder_tail(m: usize, x: &Float, target: f64, ctx: &PrecisionContext, prec: u32) -> Result<Truncated> {
    let a = (SPLIT + 1) as f64;
    let xf = x.to_f64();
    let ratio = (xf / a).powi(2);
    let x2 = Float::with_val(prec, x * x);
    let mut power = Float::with_val(prec, x.clone().pow(m as u32)) * &x2;
    // c_1 = 1 / ((M+1)(M+2))
    let mut c = Float::with_val(prec, 1) / ((m as u32 + 1) * (m as u32 + 2));
    let mut sum = Float::with_val(prec, 0);
    let mut zetas = shifted_even_zetas(32, prec);
    let mut k = 1usize;
    loop {
        if k > zetas.len() {
            zetas = shifted_even_zetas(2 * zetas.len(), prec);
        }
        sum += Float::with_val(prec, &c * &zetas[k - 1]) * &power;
        // bound on everything after term k
        let c_next = c.to_f64() * (2 * k * (2 * k + 1)) as f64
            / ((m + 2 * k + 1) * (m + 2 * k + 2)) as f64;
        let x_exp = (m + 2 * k + 2) as f64;
        let log2_bound = c_next.log2()
            + shifted_even_bound(2.0 * (k + 1) as f64).log2()
            + x_exp * xf.log2()
            - (1.0 - ratio).log2();
        let bound = exp2(log2_bound);
        if k >= MIN_TAIL_TERMS && bound <= target {
            return Ok(Truncated {
                value: sum,
                bound,
                terms: k,
            });
        }
        if k >= ctx.max_terms() {
            return Err(ZetaError::exhausted(ctx.max_terms(), "rapid tail"));
        }
        let num = (2 * k * (2 * k + 1)) as u32;
        let den = ((m + 2 * k + 1) * (m + 2 * k + 2)) as u32;
        c = c * num / den;
        power *= &x2;
        k += 1;
    }
}

/// `E(M; x)` for `0 < x < 1`; the `zeta(2k)` tail is split as
/// `sum_{n<=SPLIT} n^{-2k} + zeta(2k, SPLIT+1)`, the first part in closed form.
pub(crate) fn e_function(
    m: usize,
    x: &Float,
    target: f64,
    ctx: &PrecisionContext,
    prec: u32,
) -> Result<Truncated> {
    let table = constants::shared(ctx)?;
    let mut acc = Float::with_val(prec, 0);
    if m >= 1 {
        for j in 0..=(m - 1) / 2 {
            let zp = table.zeta_prime_neg(2 * j, ctx)?;
            let w = Float::with_val(prec, binomial(m, 2 * j)) * zp;
            acc += w * Float::with_val(prec, x.clone().pow((m - 2 * j) as u32));
        }
    }
    acc += harmonic(m, prec) * Float::with_val(prec, x.clone().pow(m as u32)) / 2u32;
    for n in 1..=SPLIT {
        let scaled = Float::with_val(prec, x / n as u32);
        let u = unit_tail(m, &scaled, prec);
        acc += u * Float::with_val(prec, Integer::from(n).pow(m as u32));
    }
    let rest = remainder_tail(m, x, target, ctx, prec)?;
    acc += &rest.value;
    Ok(Truncated {
        value: acc,
        bound: rest.bound,
        terms: rest.terms,
    })
}

/// `-x^M log(x) / 2 + E(M; x)`: the per-residue weight of the L-value series.
pub(crate) fn residue_weight(
    m: usize,
    x: &Float,
    target: f64,
    ctx: &PrecisionContext,
    prec: u32,
) -> Result<Truncated> {
    let mut e = e_function(m, x, target, ctx, prec)?;
    let log_part = Float::with_val(prec, x.clone().pow(m as u32)) * Float::with_val(prec, x.ln_ref()) / 2u32;
    e.value -= log_part;
    Ok(e)
}

//! Stieltjes constants `gamma_n` in
//! `zeta(s) = 1/(s-1) + sum_n (-1)^n gamma_n/n! (s-1)^n`,
//! from `gamma_n = lim (sum_{k<=N} ln^n k / k - ln^{n+1} N / (n+1))`
//! accelerated with Euler-Maclaurin applied to `f(x) = ln^n x / x`.

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;

pub const DEFAULT_MAX_STIELTJES: usize = 8;

/// `gamma_n` for `n <= 8`, absolute error below `ctx.target_tol()`.
pub fn stieltjes(n: usize, ctx: &PrecisionContext) -> Result<Float> {
    stieltjes_bounded(n, DEFAULT_MAX_STIELTJES, ctx)
}

pub fn stieltjes_bounded(n: usize, max: usize, ctx: &PrecisionContext) -> Result<Float> {
    if n > max {
        return Err(ZetaError::IndexTooLarge { index: n, max });
    }
    let mut split = (0.22 * ctx.working_bits() as f64 + 8.0 * n as f64).ceil() as u64 + 8;
    loop {
        if split as usize > ctx.max_terms() {
            return Err(ZetaError::exhausted(ctx.max_terms(), "Stieltjes split point"));
        }
        if let Some(v) = attempt(n, split, ctx) {
            return Ok(Float::with_val(ctx.bits(), v));
        }
        split *= 2;
    }
}

/// Evaluates the integer polynomial `coeffs` (ascending powers) at `x`.
fn eval_poly(coeffs: &[Integer], x: &Float) -> Float {
    let mut acc = Float::new(x.prec());
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

fn attempt(n: usize, split: u64, ctx: &PrecisionContext) -> Option<Float> {
    let prec = ctx.working_bits() + 16;
    let mut sum = Float::new(prec);
    for k in 2..split {
        let l = Float::with_val(prec, k).ln();
        let num = l.pow(n as u32);
        sum += num / k;
    }
    if n == 0 {
        sum += 1u32;
    }
    let big_n = Float::with_val(prec, split);
    let l_n = Float::with_val(prec, split).ln();
    let f_n = Float::with_val(prec, l_n.clone().pow(n as u32)) / &big_n;
    sum += Float::with_val(prec, &f_n / 2u32);
    sum -= Float::with_val(prec, l_n.clone().pow((n + 1) as u32)) / (n as u32 + 1);

    // f^{(k)}(x) = x^{-1-k} P_k(ln x), P_0 = L^n, P_{k+1} = -(k+1) P_k + P_k'
    let mut poly: Vec<Integer> = vec![Integer::new(); n + 1];
    poly[n] = Integer::from(1);
    let threshold = -(prec as f64) - 4.0;
    let inv_n = Float::with_val(prec, 1) / &big_n;
    let inv_n2 = Float::with_val(prec, &inv_n * &inv_n);
    let mut x_pow = Float::with_val(prec, &inv_n2); // N^{-2} = N^{-1-(2j-1)} for j=1
    let mut bern_fact = Integer::from(1);
    let mut last = f64::INFINITY;
    let mut k = 0usize;
    for j in 1..2048usize {
        // advance P to order 2j-1
        while k < 2 * j - 1 {
            poly = derive(&poly, k);
            k += 1;
        }
        bern_fact *= (2 * j - 1) as u32;
        bern_fact *= (2 * j) as u32;
        let b = crate::bernoulli::bernoulli_unbounded(2 * j);
        let coef = Float::with_val(prec, b / rug::Rational::from(&bern_fact));
        let term = coef * eval_poly(&poly, &l_n) * &x_pow;
        let size = if term.is_zero() {
            f64::NEG_INFINITY
        } else {
            term.clone().abs().log2().to_f64()
        };
        sum -= &term;
        if size < threshold {
            return Some(sum);
        }
        if j >= 3 && size > last {
            return None;
        }
        last = size;
        x_pow *= &inv_n2;
    }
    None
}

fn derive(poly: &[Integer], k: usize) -> Vec<Integer> {
    let mut out: Vec<Integer> = poly
        .iter()
        .map(|c| Integer::from(c * -((k + 1) as i64)))
        .collect();
    for (i, c) in poly.iter().enumerate().skip(1) {
        out[i - 1] += Integer::from(c * i as u32);
    }
    out
}

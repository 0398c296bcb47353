//! Exact Bernoulli numbers (convention `B_1 = -1/2`) and Bernoulli polynomials.

use std::sync::{OnceLock, RwLock};

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Result, ZetaError};

/// Largest index served by [`bernoulli`].
pub const DEFAULT_MAX_INDEX: usize = 64;

fn table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::from(1)]))
}

/// `B_n` for any `n`, extending the shared table as needed.
pub(crate) fn bernoulli_unbounded(n: usize) -> Rational {
    {
        let t = table().read().expect("bernoulli table poisoned");
        if n < t.len() {
            return t[n].clone();
        }
    }
    let mut t = table().write().expect("bernoulli table poisoned");
    while t.len() <= n {
        let m = t.len();
        let value = if m >= 3 && m % 2 == 1 {
            Rational::new()
        } else {
            // sum_{k=0}^{m} C(m+1, k) B_k = 0
            let mut acc = Rational::new();
            let mut binom = Integer::from(1);
            for (k, b) in t.iter().enumerate() {
                if *b != 0 {
                    acc += Rational::from(&binom * b.numer()) / b.denom();
                }
                binom *= (m + 1 - k) as u32;
                binom /= (k + 1) as u32;
            }
            -acc / Integer::from(m + 1)
        };
        t.push(value);
    }
    t[n].clone()
}

/// Exact `B_n` for `n <= 64`.
pub fn bernoulli(n: usize) -> Result<Rational> {
    bernoulli_bounded(n, DEFAULT_MAX_INDEX)
}

pub fn bernoulli_bounded(n: usize, max: usize) -> Result<Rational> {
    if n > max {
        return Err(ZetaError::IndexTooLarge { index: n, max });
    }
    Ok(bernoulli_unbounded(n))
}

/// `B_n(x) = sum_k C(n, k) B_k x^{n-k}`.
pub fn bernoulli_polynomial(n: usize, x: &Rational) -> Result<Rational> {
    if n > DEFAULT_MAX_INDEX {
        return Err(ZetaError::IndexTooLarge {
            index: n,
            max: DEFAULT_MAX_INDEX,
        });
    }
    let mut acc = Rational::new();
    let mut binom = Integer::from(1);
    for k in 0..=n {
        let b = bernoulli_unbounded(k);
        if b != 0 {
            let pow = Rational::from(x.pow((n - k) as i32));
            acc += b * pow * &binom;
        }
        binom *= (n - k) as u32;
        binom /= (k + 1) as u32;
    }
    Ok(acc)
}

/// Exact `zeta(-l) = (-1)^l B_{l+1} / (l+1)`.
pub fn zeta_at_negative_integer(l: usize) -> Rational {
    let v = bernoulli_unbounded(l + 1) / Integer::from(l + 1);
    if l % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Exact `zeta(-m, a) = -B_{m+1}(a) / (m+1)`.
pub fn hurwitz_at_negative_integer(m: usize, a: &Rational) -> Result<Rational> {
    Ok(-bernoulli_polynomial(m + 1, a)? / Integer::from(m + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0).unwrap(), Rational::from(1));
        assert_eq!(bernoulli(1).unwrap(), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2).unwrap(), Rational::from((1, 6)));
        assert_eq!(bernoulli(3).unwrap(), Rational::new());
        assert_eq!(bernoulli(12).unwrap(), Rational::from((-691, 2730)));
    }

    #[test]
    fn index_limit() {
        assert!(matches!(
            bernoulli(65),
            Err(ZetaError::IndexTooLarge { index: 65, max: 64 })
        ));
        assert!(bernoulli(64).is_ok());
    }

    #[test]
    fn odd_indices_vanish() {
        for n in (3..=63).step_by(2) {
            assert!(bernoulli(n).unwrap() == 0, "B_{n}");
        }
    }

    #[test]
    fn polynomial_reflection() {
        // B_n(1 - x) = (-1)^n B_n(x)
        let x = Rational::from((2, 7));
        let y = Rational::from(1) - x.clone();
        for n in 0..20 {
            let a = bernoulli_polynomial(n, &x).unwrap();
            let b = bernoulli_polynomial(n, &y).unwrap();
            if n % 2 == 0 {
                assert_eq!(a, b);
            } else {
                assert_eq!(a, -b);
            }
        }
    }

    #[test]
    fn negative_zeta_values() {
        assert_eq!(zeta_at_negative_integer(0), Rational::from((-1, 2)));
        assert_eq!(zeta_at_negative_integer(1), Rational::from((-1, 12)));
        assert!(zeta_at_negative_integer(2) == 0);
        assert_eq!(zeta_at_negative_integer(3), Rational::from((1, 120)));
    }
}

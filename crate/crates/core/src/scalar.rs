//! Complex numbers at a configurable binary precision, built on MPFR reals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::{Float, Rational};

use crate::error::{Result, ZetaError};

/// A complex value `re + i im` whose components are MPFR floats.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexScalar {
    re: Float,
    im: Float,
}

impl ComplexScalar {
    pub fn new(re: Float, im: Float) -> Self {
        ComplexScalar { re, im }
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        ComplexScalar { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        ComplexScalar {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_i64(prec: u32, n: i64) -> Self {
        ComplexScalar::real(Float::with_val(prec, n))
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        ComplexScalar::real(Float::with_val(prec, q))
    }

    pub fn zero(prec: u32) -> Self {
        ComplexScalar::real(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        ComplexScalar::real(Float::with_val(prec, 1))
    }

    pub fn i(prec: u32) -> Self {
        ComplexScalar::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }

    /// `e^{2 pi i t}` for an exact rational `t`, reduced modulo 1 first.
    pub fn unit_root(prec: u32, t: &Rational) -> Self {
        let (frac, _) = t.clone().fract_floor(rug::Integer::new());
        let quarter = Rational::from(&frac * 4u32);
        if *quarter.denom() == 1 {
            let one = Float::with_val(prec, 1);
            let zero = Float::new(prec);
            return match quarter.numer().to_u32().unwrap_or(0) {
                0 => ComplexScalar::new(one, zero),
                1 => ComplexScalar::new(zero, one),
                2 => ComplexScalar::new(-one, zero),
                _ => ComplexScalar::new(zero, -one),
            };
        }
        let angle = Float::with_val(prec, &frac) * Self::pi(prec) * 2u32;
        let (s, c) = angle.sin_cos(Float::new(prec));
        ComplexScalar::new(c, s)
    }

    /// Parses `"2.5"`, `"-1/3"`, `"3+4i"`, `"0.5-14.1i"` or `"2i"`.
    pub fn parse(prec: u32, text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(ZetaError::Parse("empty number".into()));
        }
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not the leading one and not part of an exponent
            let bytes = body.as_bytes();
            let mut split = None;
            for idx in (1..bytes.len()).rev() {
                let c = bytes[idx] as char;
                if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
                    split = Some(idx);
                    break;
                }
            }
            let (re_txt, im_txt) = match split {
                Some(idx) => (&body[..idx], &body[idx..]),
                None => ("0", body),
            };
            let im_txt = match im_txt {
                "" | "+" => "1",
                "-" => "-1",
                other => other,
            };
            Ok(ComplexScalar::new(
                parse_real(prec, re_txt)?,
                parse_real(prec, im_txt)?,
            ))
        } else {
            Ok(ComplexScalar::real(parse_real(prec, &t)?))
        }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn into_parts(self) -> (Float, Float) {
        (self.re, self.im)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Rounds both components to `prec` bits.
    pub fn round_to(&self, prec: u32) -> Self {
        ComplexScalar {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// `log2 |z|`, usable for values far outside the f64 range.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.abs().log2().to_f64()
    }

    pub fn conj(&self) -> Self {
        ComplexScalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn scale(&self, k: &Float) -> Self {
        let prec = self.prec().max(k.prec());
        ComplexScalar {
            re: Float::with_val(prec, &self.re * k),
            im: Float::with_val(prec, &self.im * k),
        }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        ComplexScalar {
            re: Float::with_val(self.re.prec(), &self.re * k),
            im: Float::with_val(self.im.prec(), &self.im * k),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let k = Float::with_val(self.prec(), q);
        self.scale(&k)
    }

    pub fn add_real(&self, x: &Float) -> Self {
        let prec = self.prec().max(x.prec());
        ComplexScalar {
            re: Float::with_val(prec, &self.re + x),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn mul_i(&self) -> Self {
        ComplexScalar {
            re: -self.im.clone(),
            im: self.re.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        let prec = self.prec();
        let den = Float::with_val(prec, self.re.clone().square() + self.im.clone().square());
        ComplexScalar {
            re: Float::with_val(prec, &self.re / &den),
            im: Float::with_val(prec, -(self.im.clone()) / &den),
        }
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let m = self.re.clone().exp();
        if self.im.is_zero() {
            return ComplexScalar::real(m);
        }
        let (s, c) = self.im.clone().sin_cos(Float::new(prec));
        ComplexScalar {
            re: Float::with_val(prec, &m * &c),
            im: Float::with_val(prec, &m * &s),
        }
    }

    /// Principal logarithm, cut along the negative real axis.
    pub fn ln(&self) -> Self {
        let prec = self.prec();
        if self.im.is_zero() && self.re.is_sign_positive() {
            return ComplexScalar::real(self.re.clone().ln());
        }
        let modulus = self.abs().ln();
        let arg = self.im.clone().atan2(&self.re);
        ComplexScalar {
            re: Float::with_val(prec, modulus),
            im: Float::with_val(prec, arg),
        }
    }

    /// Principal power `self^exponent = exp(exponent * ln self)`.
    pub fn pow(&self, exponent: &ComplexScalar) -> Self {
        (exponent * &self.ln()).exp()
    }

    pub fn pow_u32(&self, n: u32) -> Self {
        let mut result = ComplexScalar::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn max_abs_component(&self) -> f64 {
        self.re.to_f64().abs().max(self.im.to_f64().abs())
    }
}

fn parse_real(prec: u32, text: &str) -> Result<Float> {
    if let Some((num, den)) = text.split_once('/') {
        let n = parse_real(prec, num)?;
        let d = parse_real(prec, den)?;
        if d.is_zero() {
            return Err(ZetaError::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Float::with_val(prec, &n / &d));
    }
    let text = text.strip_prefix('+').unwrap_or(text);
    Float::parse(text)
        .map(|p| Float::with_val(prec, p))
        .map_err(|e| ZetaError::Parse(format!("{text:?}: {e}")))
}

/// Renders `x` as a decimal string carrying every bit of its precision.
pub fn render_float(x: &Float) -> String {
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).floor() as usize;
    x.to_string_radix(10, Some(digits.max(1)))
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&render_float(&self.re));
        }
        let im = render_float(&self.im);
        if im.starts_with('-') {
            write!(f, "{}{}i", render_float(&self.re), im)
        } else {
            write!(f, "{}+{}i", render_float(&self.re), im)
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<ComplexScalar> for ComplexScalar {
            type Output = ComplexScalar;
            fn $method(self, rhs: ComplexScalar) -> ComplexScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ComplexScalar> for ComplexScalar {
            type Output = ComplexScalar;
            fn $method(self, rhs: &ComplexScalar) -> ComplexScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ComplexScalar> for &ComplexScalar {
            type Output = ComplexScalar;
            fn $method(self, rhs: ComplexScalar) -> ComplexScalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&ComplexScalar> for &ComplexScalar {
    type Output = ComplexScalar;
    fn add(self, rhs: &ComplexScalar) -> ComplexScalar {
        let prec = self.prec().max(rhs.prec());
        ComplexScalar {
            re: Float::with_val(prec, &self.re + &rhs.re),
            im: Float::with_val(prec, &self.im + &rhs.im),
        }
    }
}

impl Sub<&ComplexScalar> for &ComplexScalar {
    type Output = ComplexScalar;
    fn sub(self, rhs: &ComplexScalar) -> ComplexScalar {
        let prec = self.prec().max(rhs.prec());
        ComplexScalar {
            re: Float::with_val(prec, &self.re - &rhs.re),
            im: Float::with_val(prec, &self.im - &rhs.im),
        }
    }
}

impl Mul<&ComplexScalar> for &ComplexScalar {
    type Output = ComplexScalar;
    fn mul(self, rhs: &ComplexScalar) -> ComplexScalar {
        let prec = self.prec().max(rhs.prec());
        if self.im.is_zero() && rhs.im.is_zero() {
            return ComplexScalar::real(Float::with_val(prec, &self.re * &rhs.re));
        }
        let ac = Float::with_val(prec, &self.re * &rhs.re);
        let bd = Float::with_val(prec, &self.im * &rhs.im);
        let ad = Float::with_val(prec, &self.re * &rhs.im);
        let bc = Float::with_val(prec, &self.im * &rhs.re);
        ComplexScalar {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl Div<&ComplexScalar> for &ComplexScalar {
    type Output = ComplexScalar;
    fn div(self, rhs: &ComplexScalar) -> ComplexScalar {
        if rhs.im.is_zero() {
            let prec = self.prec().max(rhs.prec());
            return ComplexScalar {
                re: Float::with_val(prec, &self.re / &rhs.re),
                im: Float::with_val(prec, &self.im / &rhs.re),
            };
        }
        self * &rhs.recip()
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ComplexScalar {
    type Output = ComplexScalar;
    fn neg(self) -> ComplexScalar {
        ComplexScalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &ComplexScalar {
    type Output = ComplexScalar;
    fn neg(self) -> ComplexScalar {
        -(self.clone())
    }
}

impl AddAssign<&ComplexScalar> for ComplexScalar {
    fn add_assign(&mut self, rhs: &ComplexScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<ComplexScalar> for ComplexScalar {
    fn add_assign(&mut self, rhs: ComplexScalar) {
        *self += &rhs;
    }
}

impl SubAssign<&ComplexScalar> for ComplexScalar {
    fn sub_assign(&mut self, rhs: &ComplexScalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ComplexScalar> for ComplexScalar {
    fn mul_assign(&mut self, rhs: &ComplexScalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        let z = ComplexScalar::parse(128, "3+4i").unwrap();
        assert_eq!(z.to_f64(), (3.0, 4.0));
        let z = ComplexScalar::parse(128, "0.5-14.1i").unwrap();
        assert_eq!(z.to_f64(), (0.5, -14.1));
        let z = ComplexScalar::parse(128, "-1/3").unwrap();
        assert!((z.to_f64().0 + 1.0 / 3.0).abs() < 1e-16);
        let z = ComplexScalar::parse(128, "2i").unwrap();
        assert_eq!(z.to_f64(), (0.0, 2.0));
        let z = ComplexScalar::parse(128, "1e-6").unwrap();
        assert_eq!(z.to_f64(), (1e-6, 0.0));
        let z = ComplexScalar::parse(128, "1e-3-2e-3i").unwrap();
        assert_eq!(z.to_f64(), (1e-3, -2e-3));
        assert!(ComplexScalar::parse(128, "abc").is_err());
    }

    #[test]
    fn exp_ln_roundtrip() {
        let z = ComplexScalar::from_f64(200, -1.5, 2.25);
        let back = z.ln().exp();
        let err = (&back - &z).abs_f64();
        assert!(err < 1e-55, "{err}");
    }

    #[test]
    fn principal_log_of_negative_real() {
        let z = ComplexScalar::from_f64(128, -1.0, 0.0).ln();
        let (re, im) = z.to_f64();
        assert!(re.abs() < 1e-30);
        assert!((im - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn unit_root_quarter_turn() {
        let z = ComplexScalar::unit_root(128, &Rational::from((5, 4)));
        let (re, im) = z.to_f64();
        assert!(re.abs() < 1e-30 && (im - 1.0).abs() < 1e-30);
    }

    #[test]
    fn pow_u32_matches_repeated_multiplication() {
        let z = ComplexScalar::from_f64(128, 0.3, -0.7);
        let mut direct = ComplexScalar::one(128);
        for _ in 0..7 {
            direct = &direct * &z;
        }
        assert!((&direct - &z.pow_u32(7)).abs_f64() < 1e-35);
    }
}

//! Truncated Taylor expansions in the variable `s`.
//!
//! A [`Jet`] of length `L` stores `c_0, ..., c_{L-1}` with
//! `f(s0 + e) = sum c_i e^i + O(e^L)`, so `f^{(r)}(s0) = r! c_r`. Every
//! derivative in the crate is obtained by propagating jets through the
//! same arithmetic that computes the value, never by numerical
//! differentiation.

use rug::Float;

use crate::scalar::ComplexScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    coeffs: Vec<ComplexScalar>,
}

impl Jet {
    pub fn constant(value: ComplexScalar, len: usize) -> Self {
        let prec = value.prec();
        let mut coeffs = Vec::with_capacity(len);
        coeffs.push(value);
        coeffs.resize(len, ComplexScalar::zero(prec));
        Jet { coeffs }
    }

    pub fn zero(prec: u32, len: usize) -> Self {
        Jet {
            coeffs: vec![ComplexScalar::zero(prec); len],
        }
    }

    /// The independent variable `s0 + e`.
    pub fn variable(s0: &ComplexScalar, len: usize) -> Self {
        let mut jet = Jet::constant(s0.clone(), len);
        if len > 1 {
            jet.coeffs[1] = ComplexScalar::one(s0.prec());
        }
        jet
    }

    /// `exp(v0 + slope * e)`, e.g. `x^{-s} = exp(-s0 ln x - ln x * e)`.
    pub fn exp_linear(v0: &ComplexScalar, slope: &ComplexScalar, len: usize) -> Self {
        let base = v0.exp();
        let mut coeffs = Vec::with_capacity(len);
        let mut term = base;
        for i in 0..len {
            if i > 0 {
                term = (&term * slope).scale(&(Float::with_val(slope.prec(), 1) / (i as u32)));
            }
            coeffs.push(term.clone());
        }
        Jet { coeffs }
    }

    /// `x^{-s}` at `s = s0 + e` for a base with precomputed logarithm.
    pub fn neg_power(ln_x: &ComplexScalar, s0: &ComplexScalar, len: usize) -> Self {
        let minus_ln = -ln_x;
        Jet::exp_linear(&(&minus_ln * s0), &minus_ln, len)
    }

    pub fn from_coeffs(coeffs: Vec<ComplexScalar>) -> Self {
        assert!(!coeffs.is_empty());
        Jet { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.coeffs
    }

    pub fn value(&self) -> &ComplexScalar {
        &self.coeffs[0]
    }

    pub fn coeff(&self, i: usize) -> &ComplexScalar {
        &self.coeffs[i]
    }

    /// `r`-th derivative at the expansion point: `r! c_r`.
    pub fn derivative(&self, r: usize) -> ComplexScalar {
        let mut fact = rug::Integer::from(1);
        for i in 2..=r {
            fact *= i as u32;
        }
        let f = Float::with_val(self.coeffs[r].prec(), &fact);
        self.coeffs[r].scale(&f)
    }

    pub fn add(&self, other: &Jet) -> Jet {
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Jet) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn add_scalar(&self, x: &ComplexScalar) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += x;
        out
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let len = self.len().min(other.len());
        let prec = self.coeffs[0].prec();
        let mut coeffs = vec![ComplexScalar::zero(prec); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += &(a * b);
            }
        }
        Jet { coeffs }
    }

    pub fn scale(&self, k: &ComplexScalar) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn scale_real(&self, k: &Float) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect(),
        }
    }

    /// Multiplies by the linear factor `(s0 + shift) + e`.
    pub fn mul_shifted_variable(&self, s0_plus_shift: &ComplexScalar) -> Jet {
        let len = self.len();
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            let mut c = &self.coeffs[i] * s0_plus_shift;
            if i > 0 {
                c += &self.coeffs[i - 1];
            }
            coeffs.push(c);
        }
        Jet { coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Jet {
        let len = self.len();
        let inv0 = self.coeffs[0].recip();
        let mut out: Vec<ComplexScalar> = Vec::with_capacity(len);
        out.push(inv0.clone());
        for n in 1..len {
            let mut acc = ComplexScalar::zero(inv0.prec());
            for i in 1..=n {
                acc += &(&self.coeffs[i] * &out[n - i]);
            }
            out.push(-(&acc * &inv0));
        }
        Jet { coeffs: out }
    }

    /// Largest coefficient magnitude, as `log2`.
    pub fn log2_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.log2_abs())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn round_to(&self, prec: u32) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c.round_to(prec)).collect(),
        }
    }
}

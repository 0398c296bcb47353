//! Dirichlet characters with exact root-of-unity values.
//!
//! `(Z/qZ)^*` is written as a product of cyclic factors with fixed
//! generators (one per odd prime power, `-1` and `5` for `2^e`). A character
//! is an exponent vector on those generators; its values are stored as
//! exponents `e` meaning `exp(2 pi i e / L)` with `L` the exponent of the
//! group, so algebraic identities hold exactly.

use std::fmt;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;

pub const MAX_MODULUS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug)]
struct CharacterGroup {
    modulus: u64,
    /// exponent `L` of the group; every value is an `L`-th root of unity
    order: u64,
    generators: Vec<u64>,
    generator_orders: Vec<u64>,
    /// discrete logarithms of each residue, `None` off the unit group
    dlog: Vec<Option<Vec<u64>>>,
}

#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    exponents: Vec<u64>,
    index: usize,
    conductor: u64,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus())
            .field("index", &self.index)
            .field("exponents", &self.exponents)
            .field("conductor", &self.conductor)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

/// Serializable description of a character.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub modulus: u64,
    pub index: usize,
    pub conductor: u64,
    pub parity: Parity,
    pub primitive: bool,
    pub generators: Vec<u64>,
    pub exponents: Vec<u64>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

fn primitive_root_mod_prime_power(p: u64, e: u32) -> u64 {
    let m = p.pow(e);
    let phi = m / p * (p - 1);
    let primes: Vec<u64> = factorize(phi).into_iter().map(|(r, _)| r).collect();
    (2..m)
        .find(|&g| gcd(g, m) == 1 && primes.iter().all(|&r| pow_mod(g, phi / r, m) != 1))
        .expect("odd prime powers are cyclic")
}

/// Lifts `g mod m_part` to the residue mod `q` that is 1 modulo `q / m_part`.
fn crt_lift(g: u64, m_part: u64, q: u64) -> u64 {
    let rest = q / m_part;
    (0..m_part)
        .map(|t| 1 + t * rest)
        .find(|x| x % m_part == g % m_part)
        .expect("coprime moduli")
        % q.max(1)
}

impl CharacterGroup {
    fn new(q: u64) -> Self {
        let mut generators = Vec::new();
        let mut generator_orders = Vec::new();
        for (p, e) in factorize(q) {
            let m = p.pow(e);
            if p == 2 {
                if e >= 2 {
                    generators.push(crt_lift(m - 1, m, q));
                    generator_orders.push(2);
                }
                if e >= 3 {
                    generators.push(crt_lift(5, m, q));
                    generator_orders.push(m / 4);
                }
            } else {
                generators.push(crt_lift(primitive_root_mod_prime_power(p, e), m, q));
                generator_orders.push(m / p * (p - 1));
            }
        }
        let order = generator_orders.iter().copied().fold(1, lcm);
        let mut dlog = vec![None; q as usize];
        let total: u64 = generator_orders.iter().product();
        let mut digits = vec![0u64; generators.len()];
        for _ in 0..total {
            let mut x = 1 % q;
            for (g, &d) in generators.iter().zip(&digits) {
                x = x * pow_mod(*g, d, q) % q;
            }
            dlog[x as usize] = Some(digits.clone());
            for (d, &ord) in digits.iter_mut().zip(&generator_orders) {
                *d += 1;
                if *d < ord {
                    break;
                }
                *d = 0;
            }
        }
        CharacterGroup {
            modulus: q,
            order,
            generators,
            generator_orders,
            dlog,
        }
    }
}

/// All `phi(q)` characters mod `q`, ordered by exponent vector (the first
/// generator varies fastest); index 0 is the principal character.
pub fn characters_mod(q: u64) -> Result<Vec<DirichletCharacter>> {
    if q == 0 {
        return Err(ZetaError::Parse("modulus must be positive".into()));
    }
    if q > MAX_MODULUS {
        return Err(ZetaError::ModulusTooLarge(q));
    }
    let group = Arc::new(CharacterGroup::new(q));
    let total: u64 = group.generator_orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0u64; group.generators.len()];
    for index in 0..total as usize {
        let mut chi = DirichletCharacter {
            group: Arc::clone(&group),
            exponents: digits.clone(),
            index,
            conductor: 0,
        };
        chi.conductor = chi.compute_conductor();
        out.push(chi);
        for (d, &ord) in digits.iter_mut().zip(&group.generator_orders) {
            *d += 1;
            if *d < ord {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    /// `L` such that every value is an `L`-th root of unity.
    pub fn root_order(&self) -> u64 {
        self.group.order
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn generators(&self) -> &[u64] {
        &self.group.generators
    }

    /// `Some(e)` with `chi(a) = exp(2 pi i e / L)`, or `None` when `gcd(a, q) > 1`.
    pub fn value_exponent(&self, a: i64) -> Option<u64> {
        let q = self.modulus() as i64;
        let r = a.rem_euclid(q) as usize;
        let logs = self.group.dlog[r].as_ref()?;
        let l = self.group.order;
        let mut e = 0u64;
        for ((&x, &d), &ord) in self
            .exponents
            .iter()
            .zip(logs)
            .zip(&self.group.generator_orders)
        {
            e = (e + x * d % ord * (l / ord)) % l;
        }
        Some(e)
    }

    pub fn value_table(&self) -> Vec<Option<u64>> {
        (0..self.modulus() as i64)
            .map(|a| self.value_exponent(a))
            .collect()
    }

    /// `chi(a)` at `prec` bits.
    pub fn value(&self, a: i64, prec: u32) -> ComplexScalar {
        match self.value_exponent(a) {
            None => ComplexScalar::zero(prec),
            Some(0) => ComplexScalar::one(prec),
            Some(e) => ComplexScalar::unit_root(prec, &Rational::from((e, self.root_order()))),
        }
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&x| x == 0)
    }

    pub fn parity(&self) -> Parity {
        match self.value_exponent(-1) {
            Some(0) | None => Parity::Even,
            Some(_) => Parity::Odd,
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus()
    }

    /// Complex conjugate character.
    pub fn conj(&self) -> DirichletCharacter {
        let exponents = self
            .exponents
            .iter()
            .zip(&self.group.generator_orders)
            .map(|(&x, &ord)| (ord - x) % ord)
            .collect::<Vec<_>>();
        let mut index = 0usize;
        for (&x, &ord) in exponents.iter().zip(&self.group.generator_orders).rev() {
            index = index * ord as usize + x as usize;
        }
        DirichletCharacter {
            group: Arc::clone(&self.group),
            exponents,
            index,
            conductor: self.conductor,
        }
    }

    fn compute_conductor(&self) -> u64 {
        let q = self.modulus();
        let mut divisors: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
        divisors.sort_unstable();
        for f in divisors {
            let trivial_on_kernel = (1..=q)
                .filter(|a| a % f == 1 % f && gcd(*a, q) == 1)
                .all(|a| self.value_exponent(a as i64) == Some(0));
            if trivial_on_kernel {
                return f;
            }
        }
        q
    }

    pub fn record(&self) -> CharacterRecord {
        CharacterRecord {
            modulus: self.modulus(),
            index: self.index,
            conductor: self.conductor,
            parity: self.parity(),
            primitive: self.is_primitive(),
            generators: self.group.generators.clone(),
            exponents: self.exponents.clone(),
        }
    }

    /// `sum_{a=1}^{q-1} chi(a) a^j`, accumulated exactly per root of unity.
    pub fn power_sum(&self, j: u32, prec: u32) -> ComplexScalar {
        let l = self.root_order();
        let mut buckets: Vec<Integer> = vec![Integer::new(); l as usize];
        for a in 1..self.modulus().max(2) {
            if let Some(e) = self.value_exponent(a as i64) {
                buckets[e as usize] += Integer::from(a).pow(j);
            }
        }
        let mut acc = ComplexScalar::zero(prec);
        for (e, total) in buckets.iter().enumerate() {
            if *total == 0 {
                continue;
            }
            let root = ComplexScalar::unit_root(prec, &Rational::from((e as u64, l)));
            acc += &root.scale(&Float::with_val(prec, total));
        }
        acc
    }

    /// `sum_{a=1}^{q-1} chi(a) a^j log a`.
    pub fn log_power_sum(&self, j: u32, prec: u32) -> ComplexScalar {
        let l = self.root_order();
        let mut buckets: Vec<Float> = vec![Float::new(prec); l as usize];
        for a in 2..self.modulus().max(2) {
            if let Some(e) = self.value_exponent(a as i64) {
                let w = Float::with_val(prec, Integer::from(a).pow(j))
                    * Float::with_val(prec, a).ln();
                buckets[e as usize] += w;
            }
        }
        let mut acc = ComplexScalar::zero(prec);
        for (e, total) in buckets.iter().enumerate() {
            if *total == 0 {
                continue;
            }
            let root = ComplexScalar::unit_root(prec, &Rational::from((e as u64, l)));
            acc += &root.scale(total);
        }
        acc
    }

    /// Exact `sum_{a mod q} chi(a) conj(psi(a))` as a multiset of roots of unity.
    pub fn inner_product(&self, other: &DirichletCharacter) -> RootOfUnitySum {
        assert_eq!(self.modulus(), other.modulus());
        let l = self.root_order();
        let mut counts = vec![0u64; l as usize];
        for a in 0..self.modulus() as i64 {
            if let (Some(x), Some(y)) = (self.value_exponent(a), other.value_exponent(a)) {
                counts[((x + l - y) % l) as usize] += 1;
            }
        }
        RootOfUnitySum { counts }
    }
}

/// `sum_e counts[e] * exp(2 pi i e / L)` with `L = counts.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootOfUnitySum {
    counts: Vec<u64>,
}

impl RootOfUnitySum {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// The exact integer value when it can be certified: every term at
    /// exponent 0, or equal weight on every `d`-th root of unity (`d > 1`),
    /// which sums to zero.
    pub fn exact_integer(&self) -> Option<i64> {
        let l = self.counts.len();
        if self.counts.iter().skip(1).all(|&c| c == 0) {
            return Some(self.counts[0] as i64);
        }
        for d in 2..=l {
            if l % d != 0 {
                continue;
            }
            let step = l / d;
            let c0 = self.counts[0];
            let uniform = self
                .counts
                .iter()
                .enumerate()
                .all(|(e, &c)| if e % step == 0 { c == c0 } else { c == 0 });
            if uniform {
                return Some(0);
            }
        }
        None
    }
}

/// `tau(chi)` with its modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussSumValue {
    pub value: ComplexScalar,
    pub modulus: u64,
}

/// `tau(chi) = sum_{a=1}^{q} chi(a) exp(2 pi i a / q)`.
pub fn gauss_sum(chi: &DirichletCharacter, ctx: &PrecisionContext) -> GaussSumValue {
    let prec = ctx.working_bits();
    let q = chi.modulus();
    let l = chi.root_order();
    let mut acc = ComplexScalar::zero(prec);
    for a in 1..=q {
        if let Some(e) = chi.value_exponent(a as i64) {
            let phase = Rational::from((e, l)) + Rational::from((a, q));
            acc += &ComplexScalar::unit_root(prec, &phase);
        }
    }
    GaussSumValue {
        value: acc.round_to(ctx.bits()),
        modulus: q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_phi() {
        for q in 1..=60 {
            assert_eq!(characters_mod(q).unwrap().len() as u64, euler_phi(q), "q={q}");
        }
    }

    #[test]
    fn modulus_four() {
        let chars = characters_mod(4).unwrap();
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_principal());
        assert_eq!(chars[0].conductor(), 1);
        assert!(!chars[0].is_primitive());
        let odd = &chars[1];
        assert_eq!(odd.parity(), Parity::Odd);
        assert_eq!(odd.value_exponent(3), Some(1));
        assert_eq!(odd.root_order(), 2);
        assert_eq!(odd.conductor(), 4);
        assert!(odd.is_primitive());
    }

    #[test]
    fn modulus_eight_induced_from_four() {
        let chars = characters_mod(8).unwrap();
        let induced: Vec<_> = chars
            .iter()
            .filter(|c| {
                c.value_exponent(3) == Some(1)
                    && c.value_exponent(5) == Some(0)
                    && c.value_exponent(7) == Some(1)
            })
            .collect();
        assert_eq!(induced.len(), 1);
        assert_eq!(induced[0].conductor(), 4);
    }

    #[test]
    fn modulus_five_has_one_real_nonprincipal() {
        let chars = characters_mod(5).unwrap();
        assert_eq!(chars.len(), 4);
        let real: Vec<_> = chars
            .iter()
            .filter(|c| !c.is_principal())
            .filter(|c| c.value_table().iter().flatten().all(|&e| 2 * e % c.root_order() == 0))
            .collect();
        assert_eq!(real.len(), 1);
        // Legendre symbol: squares 1, 4 map to 1
        assert_eq!(real[0].value_exponent(4), Some(0));
        assert_eq!(real[0].value_exponent(2), Some(2));
        assert!(real[0].is_even());
    }

    #[test]
    fn conjugate_round_trip() {
        for chi in characters_mod(21).unwrap() {
            let back = chi.conj().conj();
            assert_eq!(back, chi);
            assert_eq!(back.index(), chi.index());
            let prod = chi.inner_product(&chi.conj().conj());
            assert_eq!(prod.exact_integer(), Some(12));
        }
    }

    #[test]
    fn gauss_sum_mod_four() {
        let ctx = PrecisionContext::default();
        let chars = characters_mod(4).unwrap();
        let tau = gauss_sum(&chars[1], &ctx).value;
        let (re, im) = tau.to_f64();
        assert!(re.abs() < 1e-70 && (im - 2.0).abs() < 1e-70);
        let trivial = &characters_mod(1).unwrap()[0];
        let t = gauss_sum(trivial, &ctx).value.to_f64();
        assert!((t.0 - 1.0).abs() < 1e-70 && t.1.abs() < 1e-70);
    }

    #[test]
    fn power_sums() {
        let chars = characters_mod(4).unwrap();
        // chi(1)*1 + chi(3)*27 = -26
        let s = chars[1].power_sum(3, 128).to_f64();
        assert_eq!(s, (-26.0, 0.0));
        let t = chars[1].log_power_sum(1, 128).to_f64();
        assert!((t.0 + 3.0 * 3f64.ln()).abs() < 1e-14);
    }
}

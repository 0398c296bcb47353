//! Precomputed constants shared by the series evaluators.
//!
//! Every real entry comes from the reference oracle, never from the series
//! formulas it is later compared with. Tables are immutable once built and
//! are memoized per precision; the text format lets a table persist between
//! runs.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Float, Rational};

use crate::bernoulli::{bernoulli_unbounded, zeta_at_negative_integer, DEFAULT_MAX_INDEX};
use crate::error::{Result, ZetaError};
use crate::oracle;
use crate::precision::PrecisionContext;
use crate::scalar::ComplexScalar;

/// Environment variable naming the file a table is loaded from and saved to.
pub const CONSTANTS_PATH_ENV: &str = "ZETAFORGE_CONSTANTS_PATH";

const FORMAT_HEADER: &str = "zetaforge-constants v1";
const ZETA_POS_MAX: usize = 32;
const ZETA_PRIME_NEG_MAX: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsTable {
    bits: u32,
    prec: u32,
    bernoulli: Vec<Rational>,
    zeta_neg: Vec<Rational>,
    /// `zeta(n)` for `n = 2..`, stored at index `n - 2`
    zeta_pos: Vec<Float>,
    zeta_prime_neg: Vec<Float>,
    zeta_second_zero: Float,
    stieltjes: Vec<Float>,
}

impl ConstantsTable {
    pub fn build(ctx: &PrecisionContext) -> Result<Self> {
        let prec = ctx.working_bits();
        let bernoulli = (0..=DEFAULT_MAX_INDEX).map(bernoulli_unbounded).collect();
        let zeta_neg = (0..DEFAULT_MAX_INDEX).map(zeta_at_negative_integer).collect();
        let one = ComplexScalar::one(prec);
        let wide = PrecisionContext::new(ctx.bits() + 16, ctx.target_tol(), ctx.max_terms())?;
        let mut zeta_pos = Vec::with_capacity(ZETA_POS_MAX - 1);
        for n in 2..=ZETA_POS_MAX as i64 {
            zeta_pos.push(Float::with_val(prec, oracle::zeta_at_integer(n, &wide)?));
        }
        let mut zeta_prime_neg = Vec::with_capacity(ZETA_PRIME_NEG_MAX + 1);
        for k in 0..=ZETA_PRIME_NEG_MAX as i64 {
            let s = ComplexScalar::from_i64(prec, -k);
            let d = oracle::zeta_derivative_em(1, &s, &one, &wide)?;
            zeta_prime_neg.push(Float::with_val(prec, d.re()));
        }
        let d2 = oracle::zeta_derivative_em(2, &ComplexScalar::zero(prec), &one, &wide)?;
        let zeta_second_zero = Float::with_val(prec, d2.re());
        let mut stieltjes = Vec::with_capacity(oracle::DEFAULT_MAX_STIELTJES + 1);
        for n in 0..=oracle::DEFAULT_MAX_STIELTJES {
            stieltjes.push(Float::with_val(prec, oracle::stieltjes(n, &wide)?));
        }
        Ok(ConstantsTable {
            bits: ctx.bits(),
            prec,
            bernoulli,
            zeta_neg,
            zeta_pos,
            zeta_prime_neg,
            zeta_second_zero,
            stieltjes,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn bernoulli(&self, n: usize) -> Result<&Rational> {
        self.bernoulli.get(n).ok_or(ZetaError::IndexTooLarge {
            index: n,
            max: self.bernoulli.len() - 1,
        })
    }

    /// Exact `zeta(-l)`.
    pub fn zeta_neg(&self, l: usize) -> Rational {
        match self.zeta_neg.get(l) {
            Some(v) => v.clone(),
            None => zeta_at_negative_integer(l),
        }
    }

    /// `zeta(n)` for an integer `n >= 2`, computed on demand past the table.
    pub fn zeta_pos(&self, n: usize, ctx: &PrecisionContext) -> Result<Float> {
        assert!(n >= 2, "zeta_pos needs n >= 2");
        match self.zeta_pos.get(n - 2) {
            Some(v) => Ok(v.clone()),
            None => Ok(Float::with_val(
                self.prec,
                oracle::zeta_at_integer(n as i64, ctx)?,
            )),
        }
    }

    /// `zeta'(-k)`, computed on demand past the table.
    pub fn zeta_prime_neg(&self, k: usize, ctx: &PrecisionContext) -> Result<Float> {
        match self.zeta_prime_neg.get(k) {
            Some(v) => Ok(v.clone()),
            None => {
                let s = ComplexScalar::from_i64(self.prec, -(k as i64));
                let one = ComplexScalar::one(self.prec);
                let d = oracle::zeta_derivative_em(1, &s, &one, ctx)?;
                Ok(Float::with_val(self.prec, d.re()))
            }
        }
    }

    pub fn zeta_second_derivative_zero(&self) -> &Float {
        &self.zeta_second_zero
    }

    pub fn stieltjes(&self, n: usize) -> Result<&Float> {
        self.stieltjes.get(n).ok_or(ZetaError::IndexTooLarge {
            index: n,
            max: self.stieltjes.len() - 1,
        })
    }

    pub fn euler_gamma(&self) -> &Float {
        &self.stieltjes[0]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{FORMAT_HEADER}");
        let _ = writeln!(out, "bits {}", self.bits);
        let _ = writeln!(out, "prec {}", self.prec);
        for (n, b) in self.bernoulli.iter().enumerate() {
            let _ = writeln!(out, "bernoulli {n} {b}");
        }
        for (l, z) in self.zeta_neg.iter().enumerate() {
            let _ = writeln!(out, "zeta_neg {l} {z}");
        }
        for (i, z) in self.zeta_pos.iter().enumerate() {
            let _ = writeln!(out, "zeta_pos {} {}", i + 2, exact_decimal(z));
        }
        for (k, z) in self.zeta_prime_neg.iter().enumerate() {
            let _ = writeln!(out, "zeta_prime_neg {k} {}", exact_decimal(z));
        }
        let _ = writeln!(out, "zeta_second_zero {}", exact_decimal(&self.zeta_second_zero));
        for (n, g) in self.stieltjes.iter().enumerate() {
            let _ = writeln!(out, "stieltjes {n} {}", exact_decimal(g));
        }
        out
    }

    /// Parses the output of [`to_text`](Self::to_text).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some(FORMAT_HEADER) {
            return Err(ZetaError::Parse("missing constants header".into()));
        }
        let mut bits = None;
        let mut prec = None;
        let mut bernoulli = Vec::new();
        let mut zeta_neg = Vec::new();
        let mut zeta_pos = Vec::new();
        let mut zeta_prime_neg = Vec::new();
        let mut zeta_second_zero = None;
        let mut stieltjes = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || ZetaError::Parse(format!("malformed constants line {line:?}"));
            match fields.as_slice() {
                ["bits", v] => bits = Some(v.parse::<u32>().map_err(|_| bad())?),
                ["prec", v] => prec = Some(v.parse::<u32>().map_err(|_| bad())?),
                ["zeta_second_zero", v] => {
                    zeta_second_zero = Some(parse_float(v, prec.ok_or_else(bad)?)?)
                }
                [key, idx, v] => {
                    let idx: usize = idx.parse().map_err(|_| bad())?;
                    let p = prec.ok_or_else(bad)?;
                    match *key {
                        "bernoulli" => push_indexed(&mut bernoulli, idx, parse_rational(v)?)?,
                        "zeta_neg" => push_indexed(&mut zeta_neg, idx, parse_rational(v)?)?,
                        "zeta_pos" => {
                            push_indexed(&mut zeta_pos, idx.wrapping_sub(2), parse_float(v, p)?)?
                        }
                        "zeta_prime_neg" => {
                            push_indexed(&mut zeta_prime_neg, idx, parse_float(v, p)?)?
                        }
                        "stieltjes" => push_indexed(&mut stieltjes, idx, parse_float(v, p)?)?,
                        _ => return Err(bad()),
                    }
                }
                _ => return Err(bad()),
            }
        }
        let missing = |what: &str| ZetaError::Parse(format!("constants file lacks {what}"));
        if bernoulli.is_empty() || stieltjes.is_empty() || zeta_pos.is_empty() {
            return Err(missing("a required section"));
        }
        Ok(ConstantsTable {
            bits: bits.ok_or_else(|| missing("bits"))?,
            prec: prec.ok_or_else(|| missing("prec"))?,
            bernoulli,
            zeta_neg,
            zeta_pos,
            zeta_prime_neg,
            zeta_second_zero: zeta_second_zero.ok_or_else(|| missing("zeta_second_zero"))?,
            stieltjes,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_text())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

fn push_indexed<T>(v: &mut Vec<T>, idx: usize, value: T) -> Result<()> {
    if idx != v.len() {
        return Err(ZetaError::Parse(format!(
            "constants entries out of order at index {idx}"
        )));
    }
    v.push(value);
    Ok(())
}

fn exact_decimal(x: &Float) -> String {
    x.to_string_radix(10, None)
}

fn parse_float(text: &str, prec: u32) -> Result<Float> {
    Float::parse(text)
        .map(|p| Float::with_val(prec, p))
        .map_err(|e| ZetaError::Parse(format!("{text:?}: {e}")))
}

fn parse_rational(text: &str) -> Result<Rational> {
    Rational::parse(text)
        .map(Rational::from)
        .map_err(|e| ZetaError::Parse(format!("{text:?}: {e}")))
}

fn cache() -> &'static Mutex<HashMap<u32, Arc<ConstantsTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ConstantsTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The table for `ctx.bits()`, built on first use and shared afterwards.
pub fn shared(ctx: &PrecisionContext) -> Result<Arc<ConstantsTable>> {
    if let Some(t) = cache().lock().expect("constants cache poisoned").get(&ctx.bits()) {
        return Ok(Arc::clone(t));
    }
    // built outside the lock; a concurrent builder produces an identical table
    let table = Arc::new(ConstantsTable::build(ctx)?);
    let mut guard = cache().lock().expect("constants cache poisoned");
    Ok(Arc::clone(guard.entry(ctx.bits()).or_insert(table)))
}

/// Makes `table` the shared table for its precision.
pub fn install(table: ConstantsTable) -> Arc<ConstantsTable> {
    let table = Arc::new(table);
    cache()
        .lock()
        .expect("constants cache poisoned")
        .insert(table.bits(), Arc::clone(&table));
    table
}

pub fn constants_path_from_env() -> Option<PathBuf> {
    std::env::var_os(CONSTANTS_PATH_ENV).map(PathBuf::from)
}

/// Loads the table at `path` when it matches `ctx`, otherwise builds one and
/// writes it there; either way the result is installed as shared.
pub fn load_or_build(path: &Path, ctx: &PrecisionContext) -> Result<Arc<ConstantsTable>> {
    if let Ok(table) = ConstantsTable::load(path) {
        if table.bits() == ctx.bits() {
            return Ok(install(table));
        }
    }
    let table = ConstantsTable::build(ctx)?;
    table.save(path)?;
    Ok(install(table))
}

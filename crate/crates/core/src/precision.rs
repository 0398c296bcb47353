use crate::error::{Result, ZetaError};

/// Default working precision in bits.
pub const DEFAULT_BITS: u32 = 256;
/// Default requested relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-30;
/// Default series cutoff.
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// Guard bits carried by every internal computation on top of `bits`.
pub(crate) const GUARD_BITS: u32 = 32;

/// Working precision, requested tolerance and series cutoff shared by all
/// evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    bits: u32,
    target_tol: f64,
    max_terms: usize,
}

impl PrecisionContext {
    /// Builds a context, rejecting tolerances that are not achievable at the
    /// requested precision (`tol < 2^(8 - bits)`).
    pub fn new(bits: u32, target_tol: f64, max_terms: usize) -> Result<Self> {
        if bits < 64 {
            return Err(ZetaError::InvalidContext(format!(
                "precision must be at least 64 bits, got {bits}"
            )));
        }
        if !(target_tol.is_finite() && target_tol > 0.0) {
            return Err(ZetaError::InvalidContext(format!(
                "tolerance must be positive, got {target_tol}"
            )));
        }
        let floor = 2f64.powi(8 - bits as i32);
        if target_tol < floor {
            return Err(ZetaError::InvalidContext(format!(
                "tolerance {target_tol:e} below 2^(8-{bits}) = {floor:e}"
            )));
        }
        if max_terms < 8 {
            return Err(ZetaError::InvalidContext(format!(
                "max_terms must be at least 8, got {max_terms}"
            )));
        }
        Ok(PrecisionContext {
            bits,
            target_tol,
            max_terms,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn target_tol(&self) -> f64 {
        self.target_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<Self> {
        if max_terms < 8 {
            return Err(ZetaError::InvalidContext(format!(
                "max_terms must be at least 8, got {max_terms}"
            )));
        }
        self.max_terms = max_terms;
        Ok(self)
    }

    /// Precision used for intermediate quantities.
    pub fn working_bits(&self) -> u32 {
        self.bits + GUARD_BITS
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            bits: DEFAULT_BITS,
            target_tol: DEFAULT_TOL,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

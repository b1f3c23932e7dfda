use rug::ops::Pow;
use rug::Float;

use super::scalar::powi;
use crate::error::{QError, Result};
use crate::par::Execution;

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const DEFAULT_MAX_TERMS: usize = 10_000;
/// 2^-200
pub const DEFAULT_REL_TOL_LOG2: i32 = -200;

/// A validated base `0 < q < 1` together with the precision configuration
/// shared by every evaluation.
///
/// The fractional powers `q^{1/4}`, `q^{1/2}` are computed once at the
/// working precision. Contexts are immutable and cheap to clone.
#[derive(Debug, Clone)]
pub struct QContext {
    q: Float,
    q_quarter: Float,
    q_half: Float,
    log2_q: f64,
    precision_bits: u32,
    series_rel_tol: f64,
    max_terms: usize,
    execution: Execution,
}

#[derive(Debug, Clone)]
pub struct QContextBuilder {
    q: String,
    precision_bits: u32,
    series_rel_tol: f64,
    max_terms: usize,
    execution: Execution,
}

impl QContextBuilder {
    pub fn precision_bits(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    pub fn series_rel_tol(mut self, tol: f64) -> Self {
        self.series_rel_tol = tol;
        self
    }

    pub fn max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn execution(mut self, exec: Execution) -> Self {
        self.execution = exec;
        self
    }

    pub fn build(self) -> Result<QContext> {
        if self.precision_bits < 53 {
            return Err(QError::InvalidContext(format!("precision_bits must be >= 53, got {}", self.precision_bits)));
        }
        if !(self.series_rel_tol > 0.0) || !self.series_rel_tol.is_finite() {
            return Err(QError::InvalidContext(format!(
                "series_rel_tol must be positive, got {}",
                self.series_rel_tol
            )));
        }
        if self.max_terms < 8 {
            return Err(QError::InvalidContext(format!("max_terms must be >= 8, got {}", self.max_terms)));
        }
        let parsed = Float::parse(self.q.trim())
            .map_err(|e| QError::InvalidContext(format!("cannot parse q = {:?}: {e}", self.q)))?;
        let q = Float::with_val(self.precision_bits, parsed);
        QContext::from_parts(q, self.precision_bits, self.series_rel_tol, self.max_terms, self.execution)
    }
}

impl QContext {
    /// Context with default precision settings for the decimal base `q`.
    pub fn new(q: &str) -> Result<Self> {
        Self::builder(q).build()
    }

    pub fn from_f64(q: f64) -> Result<Self> {
        Self::from_parts(
            Float::with_val(DEFAULT_PRECISION_BITS, q),
            DEFAULT_PRECISION_BITS,
            default_rel_tol(),
            DEFAULT_MAX_TERMS,
            Execution::default(),
        )
    }

    pub fn builder(q: &str) -> QContextBuilder {
        QContextBuilder {
            q: q.to_string(),
            precision_bits: DEFAULT_PRECISION_BITS,
            series_rel_tol: default_rel_tol(),
            max_terms: DEFAULT_MAX_TERMS,
            execution: Execution::default(),
        }
    }

    fn from_parts(
        q: Float,
        precision_bits: u32,
        series_rel_tol: f64,
        max_terms: usize,
        execution: Execution,
    ) -> Result<Self> {
        if !(q > 0 && q < 1) {
            return Err(QError::InvalidContext(format!("q must lie strictly inside (0, 1), got {}", q.to_f64())));
        }
        let q_half = Float::with_val(precision_bits, q.sqrt_ref());
        let q_quarter = Float::with_val(precision_bits, q_half.sqrt_ref());
        let log2_q = Float::with_val(64, q.log2_ref()).to_f64();
        Ok(QContext { q, q_quarter, q_half, log2_q, precision_bits, series_rel_tol, max_terms, execution })
    }

    /// Same settings, different base.
    pub fn with_q(&self, q: Float) -> Result<Self> {
        Self::from_parts(
            Float::with_val(self.precision_bits, q),
            self.precision_bits,
            self.series_rel_tol,
            self.max_terms,
            self.execution,
        )
    }

    pub fn with_precision(&self, bits: u32) -> Result<Self> {
        if bits < 53 {
            return Err(QError::InvalidContext(format!("precision_bits must be >= 53, got {bits}")));
        }
        let mut q = self.q.clone();
        q.set_prec(bits);
        Self::from_parts(q, bits, self.series_rel_tol, self.max_terms, self.execution)
    }

    pub fn with_max_terms(&self, n: usize) -> Result<Self> {
        if n < 8 {
            return Err(QError::InvalidContext(format!("max_terms must be >= 8, got {n}")));
        }
        let mut c = self.clone();
        c.max_terms = n;
        Ok(c)
    }

    pub fn with_rel_tol(&self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(QError::InvalidContext(format!("series_rel_tol must be positive, got {tol}")));
        }
        let mut c = self.clone();
        c.series_rel_tol = tol;
        Ok(c)
    }

    pub fn with_execution(&self, exec: Execution) -> Self {
        let mut c = self.clone();
        c.execution = exec;
        c
    }

    pub fn q(&self) -> &Float {
        &self.q
    }

    pub fn q_quarter(&self) -> &Float {
        &self.q_quarter
    }

    pub fn q_half(&self) -> &Float {
        &self.q_half
    }

    pub fn log2_q(&self) -> f64 {
        self.log2_q
    }

    pub fn prec(&self) -> u32 {
        self.precision_bits
    }

    pub fn series_rel_tol(&self) -> f64 {
        self.series_rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn execution(&self) -> Execution {
        self.execution
    }

    /// `q^{k/4}` at precision `prec`. Powers are taken of the stored binary `q`,
    /// so every evaluation sees the same base regardless of its working precision.
    pub fn q_pow_quarter(&self, k: i64, prec: u32) -> Float {
        let k = i32::try_from(k).expect("q exponent out of range");
        if prec <= self.precision_bits {
            return powi(&self.q_quarter, k, prec);
        }
        let base = Float::with_val(prec, &self.q);
        let quarter = Float::with_val(prec, base.sqrt_ref()).sqrt();
        Float::with_val(prec, quarter.pow(k))
    }

    /// `q^e` for real exponent `e`, at precision `prec`.
    pub fn q_pow_real(&self, e: f64, prec: u32) -> Float {
        if e == 0.0 {
            return Float::with_val(prec, 1);
        }
        let base = Float::with_val(prec, &self.q);
        if e.fract() == 0.0 && e.abs() < i32::MAX as f64 {
            return base.pow(e as i32);
        }
        base.pow(Float::with_val(64, e))
    }

    /// `q` at precision `prec` (the stored value, zero-extended).
    pub fn q_at(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.q)
    }

    /// Digits used when rendering values: `floor(0.3·bits) − 5`.
    pub fn output_digits(&self) -> usize {
        ((self.precision_bits as f64 * 0.3).floor() as usize).saturating_sub(5).max(10)
    }
}

pub fn default_rel_tol() -> f64 {
    2f64.powi(DEFAULT_REL_TOL_LOG2)
}

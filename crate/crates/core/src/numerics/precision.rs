use std::fmt;
use std::sync::Arc;

use rug::ops::Pow;
use rug::Float;

use super::quadrature::NodeCache;
use crate::error::{Error, Result};

/// Arbitrary-precision real used throughout the crate.
pub type Real = Float;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const GUARD_BITS: u32 = 32;

/// Smallest working precision accepted by [`PrecisionContext::new`].
pub const MIN_DIGITS: u32 = 30;
/// Working precision used when nothing else is requested.
pub const DEFAULT_DIGITS: u32 = 120;
/// Escalation ceiling for the default context.
pub const DEFAULT_MAX_DIGITS: u32 = 240;

/// Working precision, target tolerance and escalation ceiling.
///
/// Every numeric routine takes one of these explicitly. Cloning is cheap: the
/// quadrature node tables computed for this precision are shared between
/// clones and are immutable once built.
#[derive(Clone)]
pub struct PrecisionContext {
    digits: u32,
    tol_digits: u32,
    max_digits: u32,
    tol: Real,
    nodes: Arc<NodeCache>,
}

impl PrecisionContext {
    /// Context with `digits` decimal digits and tolerance `10^-(digits-20)`.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Precision(format!(
                "working precision must be at least {MIN_DIGITS} digits, got {digits}"
            )));
        }
        Self::build(digits, digits - 20, digits.max(DEFAULT_MAX_DIGITS))
    }

    /// Target tolerance `10^-tol_digits`.
    ///
    /// The tolerance can not ask for more than `digits - 10` digits.
    pub fn with_tol_digits(self, tol_digits: u32) -> Result<Self> {
        if tol_digits + 10 > self.digits || tol_digits == 0 {
            return Err(Error::Precision(format!(
                "tolerance 1e-{tol_digits} is not supported at {} digits",
                self.digits
            )));
        }
        Self::build(self.digits, tol_digits, self.max_digits)
    }

    pub fn with_max_digits(self, max_digits: u32) -> Result<Self> {
        if max_digits < self.digits {
            return Err(Error::Precision(format!(
                "escalation cap {max_digits} is below the working precision {}",
                self.digits
            )));
        }
        Ok(Self { max_digits, ..self })
    }

    fn build(digits: u32, tol_digits: u32, max_digits: u32) -> Result<Self> {
        let prec = bits_for(digits);
        let tol = Float::with_val(64, 10).pow(-(tol_digits as i32));
        Ok(Self {
            digits,
            tol_digits,
            max_digits,
            tol,
            nodes: Arc::new(NodeCache::new(prec)),
        })
    }

    /// Doubled working precision, capped at `max_digits`; `None` once the cap
    /// has been reached. The tolerance is kept.
    pub fn escalate(&self) -> Option<Self> {
        if self.digits >= self.max_digits {
            return None;
        }
        let digits = (self.digits * 2).min(self.max_digits);
        Self::build(digits, self.tol_digits, self.max_digits).ok()
    }

    /// Cheaper context for quadrature-limited cross-checks.
    pub fn oracle(digits: u32, tol_digits: u32) -> Result<Self> {
        Self::new(digits)?.with_tol_digits(tol_digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn max_digits(&self) -> u32 {
        self.max_digits
    }

    /// Decimal exponent of the tolerance.
    pub fn tol_digits(&self) -> u32 {
        self.tol_digits
    }

    pub fn tol(&self) -> Real {
        Float::with_val(self.prec(), &self.tol)
    }

    /// Binary precision of every value produced under this context.
    pub fn prec(&self) -> u32 {
        bits_for(self.digits)
    }

    /// `10^-digits`, the unit roundoff in decimal terms.
    pub fn eps(&self) -> Real {
        self.pow10(-(self.digits as i32))
    }

    pub fn pow10(&self, e: i32) -> Real {
        Float::with_val(self.prec(), 10).pow(e)
    }

    pub fn real(&self, x: f64) -> Real {
        Float::with_val(self.prec(), x)
    }

    pub fn int(&self, n: i64) -> Real {
        Float::with_val(self.prec(), n)
    }

    pub fn ratio(&self, p: i64, q: i64) -> Real {
        Float::with_val(self.prec(), p) / q
    }

    pub fn zero(&self) -> Real {
        Float::new(self.prec())
    }

    pub fn one(&self) -> Real {
        self.int(1)
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.prec(), rug::float::Constant::Pi)
    }

    /// Copy of `x` rounded to this context's precision.
    pub fn lift(&self, x: &Real) -> Real {
        Float::with_val(self.prec(), x)
    }

    /// Parses a decimal literal such as `"0.5"`, `"3/2"` or `"1e-9"`.
    pub fn parse(&self, s: &str) -> Result<Real> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = self.parse(p)?;
            let q = self.parse(q)?;
            if q.is_zero() {
                return Err(Error::Domain(format!("zero denominator in {s:?}")));
            }
            return Ok(p / q);
        }
        let parsed = Float::parse(s).map_err(|e| Error::Domain(format!("{s:?}: {e}")))?;
        Ok(Float::with_val(self.prec(), parsed))
    }

    /// Decimal string with `digits` significant digits.
    pub fn format(&self, x: &Real) -> String {
        format_real(x, self.digits as usize)
    }

    pub(crate) fn nodes(&self) -> &NodeCache {
        &self.nodes
    }
}

impl PartialEq for PrecisionContext {
    fn eq(&self, other: &Self) -> bool {
        self.digits == other.digits
            && self.tol_digits == other.tol_digits
            && self.max_digits == other.max_digits
    }
}

impl fmt::Debug for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrecisionContext")
            .field("digits", &self.digits)
            .field("tol", &format_args!("1e-{}", self.tol_digits))
            .field("max_digits", &self.max_digits)
            .finish()
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(DEFAULT_DIGITS).expect("default precision is valid")
    }
}

fn bits_for(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
}

/// Decimal rendering with a fixed number of significant digits.
pub fn format_real(x: &Real, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_precision() {
        assert!(PrecisionContext::new(20).is_err());
        assert!(PrecisionContext::new(30).is_ok());
    }

    #[test]
    fn tolerance_bounded_by_precision() {
        let ctx = PrecisionContext::new(50).unwrap();
        assert!(ctx.clone().with_tol_digits(40).is_ok());
        assert!(ctx.with_tol_digits(41).is_err());
    }

    #[test]
    fn escalation_doubles_and_caps() {
        let ctx = PrecisionContext::new(120).unwrap();
        let up = ctx.escalate().unwrap();
        assert_eq!(up.digits(), 240);
        assert!(up.escalate().is_none());
        let odd = PrecisionContext::new(100).unwrap().with_max_digits(150).unwrap();
        assert_eq!(odd.escalate().unwrap().digits(), 150);
    }

    #[test]
    fn parses_fractions_and_exponents() {
        let ctx = PrecisionContext::new(40).unwrap();
        assert_eq!(ctx.parse("3/2").unwrap(), ctx.ratio(3, 2));
        assert_eq!(ctx.parse("1e-3").unwrap(), ctx.pow10(-3));
        assert!(ctx.parse("abc").is_err());
    }
}

use std::fmt;

use super::precision::{format_real, PrecisionContext, Real};
use crate::error::{Error, Result};

/// The parameter point `(α, ν, λ, t)` of the weight `x^α e^{-λx} ρ_ν(xt)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub alpha: Real,
    pub nu: Real,
    pub lambda: Real,
    pub t: Real,
}

impl Params {
    /// Checks α > −1, ν ≥ 0, λ ≥ 0, t ≥ 0 and λ² + t² ≠ 0. With t = 0 the
    /// kernel factor is Γ(ν), so ν = 0 is excluded there.
    pub fn new(alpha: Real, nu: Real, lambda: Real, t: Real) -> Result<Self> {
        let p = Self { alpha, nu, lambda, t };
        p.validate()?;
        Ok(p)
    }

    /// Parses decimal or `p/q` literals at the context's precision.
    pub fn parse(alpha: &str, nu: &str, lambda: &str, t: &str, ctx: &PrecisionContext) -> Result<Self> {
        Self::new(ctx.parse(alpha)?, ctx.parse(nu)?, ctx.parse(lambda)?, ctx.parse(t)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Domain(format!("{what} at {self}")));
        if self.alpha <= -1 {
            return bad("α must exceed -1");
        }
        if self.nu < 0 {
            return bad("ν must be non-negative");
        }
        if self.lambda < 0 || self.t < 0 {
            return bad("λ and t must be non-negative");
        }
        if self.lambda.is_zero() && self.t.is_zero() {
            return bad("λ and t can not both vanish");
        }
        if self.t.is_zero() && self.nu.is_zero() {
            return bad("t = 0 needs ν > 0");
        }
        if ![&self.alpha, &self.nu, &self.lambda, &self.t].iter().all(|x| x.is_finite()) {
            return bad("parameters must be finite");
        }
        Ok(())
    }

    pub fn with_lambda(&self, lambda: Real) -> Result<Self> {
        Self::new(self.alpha.clone(), self.nu.clone(), lambda, self.t.clone())
    }

    pub fn with_t(&self, t: Real) -> Result<Self> {
        Self::new(self.alpha.clone(), self.nu.clone(), self.lambda.clone(), t)
    }

    /// Same point with every component rounded to `ctx`'s precision.
    pub fn lift(&self, ctx: &PrecisionContext) -> Self {
        Self {
            alpha: ctx.lift(&self.alpha),
            nu: ctx.lift(&self.nu),
            lambda: ctx.lift(&self.lambda),
            t: ctx.lift(&self.t),
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |x: &Real| format_real(x, 12);
        write!(
            f,
            "(α, ν, λ, t) = ({}, {}, {}, {})",
            s(&self.alpha),
            s(&self.nu),
            s(&self.lambda),
            s(&self.t)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_guards() {
        let ctx = PrecisionContext::new(40).unwrap();
        let ok = |a, n, l, t| Params::parse(a, n, l, t, &ctx).is_ok();
        assert!(ok("0", "1", "1", "0"));
        assert!(ok("-1/2", "0", "0", "1"));
        assert!(!ok("-1", "1", "1", "1"));
        assert!(!ok("0", "-0.5", "1", "1"));
        assert!(!ok("0", "1", "0", "0"));
        assert!(!ok("0", "0", "1", "0"));
        assert!(!ok("0", "1", "-1", "1"));
    }
}

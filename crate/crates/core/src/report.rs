//! Residual bookkeeping shared by the identity checks.

use rug::Float;

use crate::numerics::{format_real, Params, Real};

/// A residual together with the bound it must stay under.
#[derive(Clone, Debug)]
pub struct Check {
    pub residual: Real,
    pub bound: Real,
}

impl Check {
    pub fn new(residual: Real, bound: Real) -> Self {
        Self { residual, bound }
    }

    /// Residual `lhs - rhs` with bound `factor · scale`.
    pub fn compare(lhs: &Real, rhs: &Real, scale: &Real, factor: &Real) -> Self {
        let p = lhs.prec();
        let residual = Float::with_val(p, lhs - rhs);
        let bound = Float::with_val(p, scale.abs_ref()) * factor;
        Self { residual, bound }
    }

    pub fn pass(&self) -> bool {
        Float::with_val(self.residual.prec(), self.residual.abs_ref()) <= self.bound
    }

    /// `|residual| / bound`; below one means pass.
    pub fn ratio(&self) -> f64 {
        if self.bound.is_zero() {
            return if self.residual.is_zero() { 0.0 } else { f64::INFINITY };
        }
        (Float::with_val(self.residual.prec(), self.residual.abs_ref()) / &self.bound).to_f64()
    }

    pub fn entry(&self, identity: &str, n: Option<usize>, m: Option<usize>) -> ResidualEntry {
        ResidualEntry {
            identity: identity.to_string(),
            n,
            m,
            value: Float::with_val(self.residual.prec(), self.residual.abs_ref()),
            tol: self.bound.clone(),
            pass: self.pass(),
        }
    }
}

/// One line of an identity report.
#[derive(Clone, Debug)]
pub struct ResidualEntry {
    pub identity: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    /// Absolute residual.
    pub value: Real,
    pub tol: Real,
    pub pass: bool,
}

impl ResidualEntry {
    pub fn describe(&self) -> String {
        let mut s = self.identity.clone();
        if let Some(n) = self.n {
            s += &format!(" n={n}");
        }
        if let Some(m) = self.m {
            s += &format!(" m={m}");
        }
        format!(
            "{s}: residual {} (tol {}) {}",
            format_real(&self.value, 6),
            format_real(&self.tol, 3),
            if self.pass { "ok" } else { "FAIL" }
        )
    }
}

/// Residuals of one identity family at one parameter point.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub id: String,
    pub params: Option<Params>,
    pub entries: Vec<ResidualEntry>,
    /// Identities that were skipped or degenerate at this point, and why.
    pub notes: Vec<String>,
}

impl IdentityReport {
    pub fn new(id: &str, params: Option<&Params>) -> Self {
        Self {
            id: id.to_string(),
            params: params.cloned(),
            entries: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn push(&mut self, identity: &str, n: Option<usize>, m: Option<usize>, check: &Check) {
        self.entries.push(check.entry(identity, n, m));
    }

    pub fn extend(&mut self, other: IdentityReport) {
        self.entries.extend(other.entries);
        self.notes.extend(other.notes);
    }

    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> Vec<&ResidualEntry> {
        self.entries.iter().filter(|e| !e.pass).collect()
    }

    /// Largest `|residual| / tol` over all entries.
    pub fn worst_ratio(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| {
                if e.tol.is_zero() {
                    if e.value.is_zero() { 0.0 } else { f64::INFINITY }
                } else {
                    (e.value.clone() / &e.tol).to_f64()
                }
            })
            .fold(0.0, f64::max)
    }
}

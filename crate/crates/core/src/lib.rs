//! Orthogonal polynomials for the weight `x^α e^{-λx} ρ_ν(xt)` on `(0, ∞)`,
//! where `ρ_ν(x) = 2 x^{ν/2} K_ν(2√x)`, together with numerical checks of the
//! identities they satisfy.

pub mod calculus;
pub mod composition;
pub mod error;
pub mod kernels;
pub mod moments;
pub mod numerics;
pub mod opoly;
pub mod report;

pub use error::{Error, Result};
pub use numerics::{Params, PrecisionContext, Real};
pub use report::{Check, IdentityReport, ResidualEntry};

//! Precision-managed numerics: gamma functions, quadrature, finite
//! differences and small dense linear algebra.

pub mod diff;
pub mod gamma;
pub mod linalg;
pub mod params;
pub mod precision;
pub mod quadrature;

pub use diff::{fd_bound, fd_step, nth_derivative, param_derivative, param_derivative_bounded, Derivative, Stencil};
pub use gamma::{factorial, gamma_fn, ln_gamma, pochhammer};
pub use params::Params;
pub use precision::{format_real, PrecisionContext, Real, DEFAULT_DIGITS, DEFAULT_MAX_DIGITS, MIN_DIGITS};
pub use quadrature::{
    gauss_legendre, integrate_interval, integrate_interval_vec, integrate_semiline, integrate_semiline_vec,
    Estimate, QuadratureSpec, Scheme, VecEstimate,
};

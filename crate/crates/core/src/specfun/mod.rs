//! Scalar special functions: complex log-gamma and beta, Gauss ₂F₁,
//! the expansion of t/(1−e^{−t}), and tanh-sinh quadrature on (0, 1).

mod gamma;
mod hyp2f1;
mod kernel;
mod quadrature;

pub use gamma::{beta, gamma, is_nonpositive_integer, ln_beta, log_gamma, pole_distance};
pub use hyp2f1::{gauss_2f1, gauss_2f1_estimate, MAX_TERMS};
pub use kernel::bern_kernel_coeffs;
pub use quadrature::{integrate01, integrate01_log, Node, QuadratureRule};

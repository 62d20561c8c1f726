#![no_std]
// `num_traits::Float` backs f64 math under no_std and is shadowed by inherent methods once std is linked.
#![allow(unused_imports)]
extern crate alloc;

pub mod cfunction;
pub mod error;
pub mod hcseries;
pub mod localseries;
pub mod multiplicity;
pub mod rankone;
pub mod rootsys;
pub mod specfun;
pub mod taufun;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// A value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: C64,
    pub error: f64,
}

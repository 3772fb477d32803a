//! Multiple polylogarithms at roots of unity: convergence domains, generalised
//! Euler–Boole summation, asymptotic expansions and regularised values.
#![no_std]
extern crate alloc;

pub mod error;
pub mod real;
pub mod rootsofunity;
pub mod eulerpoly;
pub mod scalefun;

pub use error::{Error, Result};
pub use real::{Complex, Real};
pub mod summation;
pub mod asymptotics;
pub mod polylog;

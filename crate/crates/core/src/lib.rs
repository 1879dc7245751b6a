//! Large-parameter asymptotics for Lamé and Mathieu eigenproblems.
//!
//! The crate generates the polynomial coefficients of the parabolic-cylinder
//! expansions in exact rational arithmetic, evaluates the truncated series,
//! builds the uniform (Liouville) approximations, and provides independent
//! reference solvers used to check all of it.
//!
//! Everything here is pure computation; the crate is `no_std` and only needs
//! an allocator.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod coeffs;
pub mod error;
pub mod exact;
mod math;
pub mod expand;
pub mod oracle;
pub mod quad;
pub mod real;
pub mod special;
pub mod uniform;

pub use coeffs::{gen_lame_tables, gen_mathieu_tables, CoeffTables, Family};
pub use error::{Error, Result};
pub use exact::{Rational, TPoly};
pub use expand::{Branch, EigenResult, Method, ProblemSpec};
pub use real::{Dd, Real};

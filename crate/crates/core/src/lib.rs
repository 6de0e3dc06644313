//! Numerical core for the light-cone fractional integration operator.
//!
//! Everything here is a pure function of its arguments and runs without
//! `std`: Gamma and Bessel-J evaluation with the asymptotic main/remainder
//! split, the kernel family `Omega^lambda(alpha)` in physical and spectral
//! form, Gauss–Jacobi and radial quadrature rules, the exponent-region
//! classifier, Stein–Weiss admissibility, and the frequency-case bounds for
//! the Bessel remainder.
//!
//! Grids, FFTs, operator application and IO live in the `conewave` crate.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

pub mod cases;
pub mod error;
pub mod kernel;
pub mod quadrature;
pub mod region;
pub mod specialfn;
pub mod stein_weiss;

pub use error::{Error, Result};
pub use kernel::KernelSpec;
pub use quadrature::RadialQuadrature;
pub use region::{classify_exponents, ExponentPoint, Region};
pub use specialfn::BesselOrder;
pub use stein_weiss::{Constraint, SteinWeissParams};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

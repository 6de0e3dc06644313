//! Grids, FFT-based operators, norm functionals, verification batteries and
//! the `conewave` command line, built on `conewave-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod conop;
pub mod error;
pub mod fields;
pub mod report;
pub mod verify;

pub use error::{Error, Result};

//! Verification batteries behind `verify <suite>` and `norm-test`.

mod estimates;
mod kernel_checks;
pub mod norm;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::report::Outcome;

pub use estimates::{lieb_constant, truth_table, TruthRow};
pub use kernel_checks::sup_scaled;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Bessel,
    FtIdentity,
    CaseBounds,
    SteinWeiss,
    Crucial,
    MixedNorm,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Bessel, Suite::FtIdentity, Suite::CaseBounds, Suite::SteinWeiss, Suite::Crucial, Suite::MixedNorm];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Bessel => "bessel",
            Suite::FtIdentity => "ft-identity",
            Suite::CaseBounds => "case-bounds",
            Suite::SteinWeiss => "stein-weiss",
            Suite::Crucial => "crucial",
            Suite::MixedNorm => "mixed-norm",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|v| v.label() == s).ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

pub fn run_suite(suite: Suite, cfg: &ExperimentConfig) -> Result<Outcome> {
    match suite {
        Suite::Bessel => kernel_checks::bessel(cfg),
        Suite::FtIdentity => kernel_checks::ft_identity(cfg),
        Suite::CaseBounds => kernel_checks::case_bounds(cfg),
        Suite::SteinWeiss => estimates::stein_weiss(cfg),
        Suite::Crucial => estimates::crucial(cfg),
        Suite::MixedNorm => estimates::mixed(cfg),
    }
}

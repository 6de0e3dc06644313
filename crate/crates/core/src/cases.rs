//! Frequency-case bounds for the product of two Bessel remainders.
//!
//! For `r >= s > 0` the quantity
//!
//! `LHS = |xi|^{-((n+1)/n) alpha} (r|xi|)^{1/2} (s|xi|)^{1/2} |e(2 pi r |xi|)| |e(2 pi s |xi|)|`
//!
//! is compared against `(r - s)^{-((n-1)/n) alpha} |xi|^{-2 alpha}`. The ratio's
//! supremum over the samples is the fitted constant `C`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{domain, Result};
use crate::kernel::KernelSpec;
use crate::specialfn::bessel_remainder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// `|xi| <= 1/(2 pi r)`
    Low,
    /// `1/(2 pi r) < |xi| <= 1/(2 pi s)`
    Middle,
    /// `|xi| > 1/(2 pi s)`
    High,
}

impl Regime {
    pub fn of(xi: f64, r: f64, s: f64) -> Regime {
        if xi <= 1.0 / (2.0 * PI * r) {
            Regime::Low
        } else if xi <= 1.0 / (2.0 * PI * s) {
            Regime::Middle
        } else {
            Regime::High
        }
    }

    pub fn index(self) -> usize {
        match self {
            Regime::Low => 0,
            Regime::Middle => 1,
            Regime::High => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseSample {
    pub xi: f64,
    pub r: f64,
    pub s: f64,
    pub regime: Regime,
    pub lhs: f64,
    /// `(r - s)^{-((n-1)/n) alpha} |xi|^{-2 alpha}`
    pub envelope: f64,
}

impl CaseSample {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.envelope
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseBoundReport {
    pub samples: Vec<CaseSample>,
    /// Largest `LHS / envelope` over all samples.
    pub fitted_constant: f64,
    /// Same, restricted to each regime; `None` when a regime has no samples.
    pub per_regime: [Option<f64>; 3],
    /// `n = 1`: the `(r - s)` factor has exponent 0 and drops out.
    pub separation_factor_trivial: bool,
}

/// Evaluates the case bound on `(xi, r, s)` samples with `r >= s > 0`.
/// Samples with `r == s` are only valid when `n = 1`.
pub fn case_bound_check(spec: &KernelSpec, samples: &[(f64, f64, f64)]) -> Result<CaseBoundReport> {
    let nf = spec.n() as f64;
    let alpha = spec.alpha();
    let nu = spec.bessel_order();
    let sep_exp = (nf - 1.0) / nf * alpha;
    let mut out = Vec::with_capacity(samples.len());
    let mut fitted = 0.0_f64;
    let mut per_regime = [None::<f64>; 3];
    for &(xi, r, s) in samples {
        if !(s > 0.0 && r >= s) {
            return Err(domain("r", r, "r >= s > 0"));
        }
        if !(xi > 0.0) {
            return Err(domain("|xi|", xi, "|xi| > 0"));
        }
        let er = bessel_remainder(nu, 2.0 * PI * r * xi)?;
        let es = bessel_remainder(nu, 2.0 * PI * s * xi)?;
        let lhs = libm::pow(xi, -(nf + 1.0) / nf * alpha)
            * libm::sqrt(r * xi)
            * libm::sqrt(s * xi)
            * libm::fabs(er)
            * libm::fabs(es);
        let sep = if sep_exp == 0.0 { 1.0 } else { libm::pow(r - s, -sep_exp) };
        let envelope = sep * libm::pow(xi, -2.0 * alpha);
        let sample = CaseSample { xi, r, s, regime: Regime::of(xi, r, s), lhs, envelope };
        let ratio = sample.ratio();
        fitted = fitted.max(ratio);
        let slot = &mut per_regime[sample.regime.index()];
        *slot = Some(slot.map_or(ratio, |c: f64| c.max(ratio)));
        out.push(sample);
    }
    Ok(CaseBoundReport { samples: out, fitted_constant: fitted, per_regime, separation_factor_trivial: sep_exp == 0.0 })
}

/// `count` log-uniform frequencies on `[lo, hi]`.
pub fn log_samples(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let span = libm::log(hi / lo);
    (0..count).map(|i| lo * libm::exp(span * i as f64 / (count - 1) as f64)).collect()
}

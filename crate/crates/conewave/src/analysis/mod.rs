//! Norms, inequality checkers and empirical operator-ratio statistics.

mod crucial;
pub mod ensembles;
mod mixed;
mod sw_ratio;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Domain, Sampled};

pub use conewave_core::cases::{case_bound_check, log_samples, CaseBoundReport, CaseSample, Regime};
pub use conewave_core::region::{classify_exponents, necessary_band, ExponentPoint, Region, BOUNDARY_TOL};
pub use conewave_core::stein_weiss::{Constraint, SteinWeissParams};
pub use crucial::crucial_estimate_ratio;
pub use mixed::{mixed_norm, mixed_norm_checked, MixedNormReport, MixedNormSpec};
pub use sw_ratio::{stein_weiss_ratio, stein_weiss_ratio_unchecked, SteinWeissQuadrature};

/// `(sum |f|^p dV)^{1/p}`, or `max |f|` for `p = infinity`.
pub fn lp_norm<F: Sampled + ?Sized>(f: &F, p: f64) -> Result<f64> {
    f.require(Domain::Physical)?;
    lp_norm_of(f.samples(), f.cell_volume(), p)
}

pub(crate) fn lp_norm_of(samples: &[Complex64], cell: f64, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::NormExponent(p));
    }
    if p.is_infinite() {
        return Ok(samples.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    // scale by the max to avoid overflow in |f|^p
    let peak = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = samples.iter().map(|v| (v.norm() / peak).powf(p)).sum();
    Ok(peak * (sum * cell).powf(1.0 / p))
}

/// One labelled test function.
#[derive(Debug, Clone)]
pub struct Member<F> {
    pub label: String,
    /// Dilation parameter the member was built with (1 when not a dilation family).
    pub scale: f64,
    pub field: F,
}

/// Summary of `|T f|_q / |f|_p` over an ensemble: a lower bound on the operator
/// norm, never the norm itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioStats {
    pub labels: Vec<String>,
    pub scales: Vec<f64>,
    pub ratios: Vec<f64>,
    pub max: f64,
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    /// `max / min`.
    pub spread: f64,
}

impl RatioStats {
    pub fn from_ratios(labels: Vec<String>, scales: Vec<f64>, ratios: Vec<f64>) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let mut sorted = ratios.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 { sorted[mid] } else { 0.5 * (sorted[mid - 1] + sorted[mid]) };
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        Ok(Self { labels, scales, ratios, max, min, median, mean, spread: max / min })
    }
}

/// Applies `op` to every member and collects `|T f|_q / |f|_p`.
pub fn operator_ratio_estimate<F, T>(op: T, inv_p: f64, inv_q: f64, family: &[Member<F>]) -> Result<RatioStats>
where
    F: Sampled + Sync,
    T: Fn(&F) -> Result<F> + Sync,
{
    use rayon::prelude::*;
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for e in [inv_p, inv_q] {
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::NormExponent(1.0 / e));
        }
    }
    let ratios = family
        .par_iter()
        .map(|m| {
            let out = op(&m.field)?;
            Ok(lp_norm(&out, 1.0 / inv_q)? / lp_norm(&m.field, 1.0 / inv_p)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    RatioStats::from_ratios(
        family.iter().map(|m| m.label.clone()).collect(),
        family.iter().map(|m| m.scale).collect(),
        ratios,
    )
}

/// Trend-based boundedness verdict over a dilation family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendVerdict {
    pub spread: f64,
    /// Least-squares slope of `ln ratio` against `ln scale`.
    pub slope: f64,
    pub monotone: bool,
    pub spread_limit: f64,
    pub growth_limit: f64,
    pub passed: bool,
}

/// Passes when the spread stays below `spread_limit` and there is no monotone
/// power-law drift with `|slope| > growth_limit`.
pub fn trend_verdict(scales: &[f64], ratios: &[f64], spread_limit: f64, growth_limit: f64) -> TrendVerdict {
    let slope = log_slope(scales, ratios);
    let mut order: Vec<usize> = (0..scales.len()).collect();
    order.sort_by(|&a, &b| scales[a].total_cmp(&scales[b]));
    let seq: Vec<f64> = order.iter().map(|&i| ratios[i]).collect();
    let monotone = seq.len() > 1 && (seq.windows(2).all(|w| w[1] > w[0]) || seq.windows(2).all(|w| w[1] < w[0]));
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = max / min;
    let passed = spread.is_finite() && spread < spread_limit && !(monotone && slope.abs() > growth_limit);
    TrendVerdict { spread, slope, monotone, spread_limit, growth_limit, passed }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{dilate_field, Field, Grid};
    use std::f64::consts::PI;

    #[test]
    fn norms_of_simple_fields() {
        let g = Grid::new(1, 64, 8.0).unwrap();
        assert_eq!(lp_norm(&Field::zeros(g), 3.0).unwrap(), 0.0);
        let mut cell = Field::zeros(g);
        cell.samples_mut()[10] = Complex64::new(1.0, 0.0);
        for p in [1.5, 2.0, 7.0] {
            let want = g.cell_volume().powf(1.0 / p);
            assert!((lp_norm(&cell, p).unwrap() - want).abs() < 1e-15);
        }
        assert_eq!(lp_norm(&cell, f64::INFINITY).unwrap(), 1.0);
        assert!(matches!(lp_norm(&cell, 1.0), Err(Error::NormExponent(_))));
    }

    #[test]
    fn norm_scales_under_dilation() {
        let g = Grid::new(1, 1024, 64.0).unwrap();
        let f = Field::from_real_fn(g, |x| (-PI * x[0] * x[0]).exp() * (1.0 + 0.3 * x[0]));
        for delta in [0.25, 0.5, 2.0, 3.0] {
            let fd = dilate_field(&f, delta).unwrap();
            for p in [1.5, 2.0, 4.0] {
                let want = delta.powf(1.0 / p) * lp_norm(&f, p).unwrap();
                let got = lp_norm(&fd, p).unwrap();
                assert!((got - want).abs() < 1e-6 * want, "{delta} {p}");
            }
        }
    }

    #[test]
    fn identity_has_unit_ratio() {
        let g = Grid::new(1, 64, 8.0).unwrap();
        let family: Vec<Member<Field>> = (1..5)
            .map(|k| Member {
                label: format!("g{k}"),
                scale: k as f64,
                field: Field::from_real_fn(g, move |x| (-PI * x[0] * x[0] / k as f64).exp()),
            })
            .collect();
        let stats = operator_ratio_estimate(|f: &Field| Ok(f.clone()), 0.4, 0.4, &family).unwrap();
        assert!(stats.ratios.iter().all(|&r| (r - 1.0).abs() < 1e-14));
        let empty: Vec<Member<Field>> = Vec::new();
        assert!(matches!(
            operator_ratio_estimate(|f: &Field| Ok(f.clone()), 0.5, 0.5, &empty),
            Err(Error::EmptyFamily)
        ));
    }

    #[test]
    fn verdicts() {
        let s = [0.25, 0.5, 1.0, 2.0, 4.0];
        let flat = [1.0, 1.01, 0.99, 1.0, 1.02];
        assert!(trend_verdict(&s, &flat, 2.0, 0.05).passed);
        let grow: Vec<f64> = s.iter().map(|d: &f64| d.powf(0.1)).collect();
        let v = trend_verdict(&s, &grow, 2.0, 0.05);
        assert!(v.monotone && (v.slope - 0.1).abs() < 1e-12 && !v.passed);
    }
}

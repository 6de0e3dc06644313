//! Empirical `L^p -> L^q` checks for the spacetime operator.

use conewave_core::region::{classify_exponents, ExponentPoint};
use conewave_core::{KernelSpec, RadialQuadrature};

use crate::analysis::ensembles::{dilation_family, Profile};
use crate::analysis::{log_slope, operator_ratio_estimate, trend_verdict, RatioStats};
use crate::config::ExperimentConfig;
use crate::conop::SpacetimeMultiplier;
use crate::error::Result;
use crate::fields::{Axis, Grid, SpacetimeField};
use crate::report::{Outcome, Record};

/// A spacetime grid with the radial rule used on it.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub space: Grid,
    pub time: Axis,
    pub quad: RadialQuadrature,
}

impl Discretization {
    /// Square grid with `r_max = L/4`.
    pub fn square(n: u32, points: usize, extent: f64, r_min: f64, nodes: usize) -> Result<Self> {
        let space = Grid::new(n, points, extent)?;
        let time = Axis::new(points, extent)?;
        let quad = RadialQuadrature::log_uniform(r_min, 0.25 * extent, nodes)?;
        Ok(Self { space, time, quad })
    }

    /// Twice the points per axis and `2M - 1` radial nodes.
    pub fn refined(&self) -> Self {
        Self { space: self.space.refined(), time: self.time.refined(), quad: self.quad.refined() }
    }

    pub fn describe(&self) -> String {
        format!(
            "grid n={} N={} L={} x N_t={} L_t={}, r in [{}, {}] with {} nodes",
            self.space.n(),
            self.space.points(),
            self.space.extent(),
            self.time.points(),
            self.time.extent(),
            self.quad.r_min(),
            self.quad.r_max(),
            self.quad.len()
        )
    }

    pub fn multiplier(&self, spec: &KernelSpec) -> Result<SpacetimeMultiplier> {
        SpacetimeMultiplier::from_kernel(self.space, self.time, spec, &self.quad)
    }
}

/// `|I f|_q / |f|_p` over one profile's dilation family.
pub fn family_ratios(
    table: &SpacetimeMultiplier,
    disc: &Discretization,
    profile: Profile,
    dilations: &[f64],
    inv_p: f64,
    inv_q: f64,
) -> Result<RatioStats> {
    let family = dilation_family(profile, disc.space, disc.time, dilations);
    operator_ratio_estimate(|f: &SpacetimeField| table.apply(f), inv_p, inv_q, &family)
}

/// Ratio spread on the scaling line, and the drift when `1/q` is shifted both ways.
pub fn scaling_line(
    alpha: f64,
    inv_p: f64,
    disc: &Discretization,
    dilations: &[f64],
    cfg: &ExperimentConfig,
) -> Result<Outcome> {
    let n = disc.space.n();
    let spec = KernelSpec::real(alpha, n)?;
    let table = disc.multiplier(&spec)?;
    let inv_q = inv_p - alpha / n as f64;
    let tol = &cfg.tolerances;
    let prov = disc.describe();
    let mut out = Outcome::default();

    let on = family_ratios(&table, disc, Profile::Gaussian, dilations, inv_p, inv_q)?;
    out.push(Record::at_most(
        "scaling-line-spread",
        format!("alpha={alpha} 1/p={inv_p} 1/q={inv_q}"),
        on.spread - 1.0,
        tol.scaling_spread,
        prov.clone(),
    ));
    for shift in [tol.off_line_shift, -tol.off_line_shift] {
        let q2 = inv_q + shift;
        let stats = family_ratios(&table, disc, Profile::Gaussian, dilations, inv_p, q2)?;
        let slope = log_slope(&stats.scales, &stats.ratios);
        let predicted = (n as f64 + 1.0) * (alpha / n as f64 + q2 - inv_p);
        let v = trend_verdict(&stats.scales, &stats.ratios, f64::INFINITY, 0.0);
        let ok = v.monotone && slope.signum() == predicted.signum();
        out.push(
            Record::new("off-line-exponent", format!("1/q={q2} predicted={predicted}"), slope, prov.clone())
                .with_pass(ok),
        );
    }
    Ok(out)
}

/// Trend verdict for each profile across the dilations and, when given, a refined grid.
pub fn boundedness(
    alpha: f64,
    inv_p: f64,
    grids: &[Discretization],
    profiles: &[Profile],
    dilations: &[f64],
    cfg: &ExperimentConfig,
) -> Result<Outcome> {
    let n = grids[0].space.n();
    let spec = KernelSpec::real(alpha, n)?;
    let inv_q = inv_p - alpha / n as f64;
    let tol = &cfg.tolerances;
    let point = ExponentPoint::new(inv_p, inv_q, alpha, n)?;
    let region = classify_exponents(&point);
    let mut out = Outcome::default();
    out.note(format!("alpha={alpha} 1/p={inv_p} 1/q={inv_q} classifies as {region}"));

    let mut per_grid: Vec<Vec<RatioStats>> = Vec::new();
    for disc in grids {
        let table = disc.multiplier(&spec)?;
        let stats = profiles
            .iter()
            .map(|&p| family_ratios(&table, disc, p, dilations, inv_p, inv_q))
            .collect::<Result<Vec<_>>>()?;
        per_grid.push(stats);
    }
    let prov = grids.iter().map(Discretization::describe).collect::<Vec<_>>().join("; ");
    let mut all = Vec::new();
    for (k, &profile) in profiles.iter().enumerate() {
        let ratios: Vec<f64> = per_grid.iter().flat_map(|g| g[k].ratios.iter().copied()).collect();
        all.extend(ratios.iter().copied());
        let base = &per_grid[0][k];
        let v = trend_verdict(&base.scales, &base.ratios, tol.trend_spread, tol.growth_slope);
        let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let case = format!("{profile} alpha={alpha} 1/p={inv_p}");
        out.push(Record::at_most("family-spread", case.clone(), max / min, tol.trend_spread, prov.clone()));
        out.push(Record::new("family-trend-slope", case.clone(), v.slope, grids[0].describe()).with_pass(v.passed));
        if per_grid.len() > 1 {
            let change =
                base.ratios.iter().zip(&per_grid[1][k].ratios).map(|(a, b)| ((b - a) / b).abs()).fold(0.0, f64::max);
            out.push(Record::new("refinement-change", case, change, prov.clone()));
        }
    }
    let max = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = all.iter().copied().fold(f64::INFINITY, f64::min);
    out.push(Record::new("all-families-spread", format!("alpha={alpha} 1/p={inv_p}"), max / min, prov));
    out.note("spread across different profiles compares unrelated test functions and is reported without a threshold");
    Ok(out)
}

/// The `norm-test` battery: the scaling check at the first point, then the
/// boundedness proxy at every point.
pub fn norm_test(cfg: &ExperimentConfig) -> Result<Outcome> {
    let nt = &cfg.norm_test;
    let disc = Discretization::square(cfg.kernel.n, nt.points_per_axis, nt.extent, nt.r_min, nt.nodes)?;
    let mut out = Outcome::default();
    if nt.scaling_check {
        let [alpha, inv_p] = nt.points[0];
        out.extend(scaling_line(alpha, inv_p, &disc, &nt.dilations, cfg)?);
    }
    let grids = if nt.refine { vec![disc.clone(), disc.refined()] } else { vec![disc] };
    for &[alpha, inv_p] in &nt.points {
        out.extend(boundedness(alpha, inv_p, &grids, &nt.profiles, &nt.dilations, cfg)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_battery_runs() {
        let cfg = ExperimentConfig::default();
        let disc = Discretization::square(1, 128, 32.0, 0.01, 64).unwrap();
        let s = scaling_line(0.4, 0.7, &disc, &[0.5, 1.0, 2.0], &cfg).unwrap();
        assert_eq!(s.records.len(), 3);
        assert!(s.records.iter().all(|r| r.measured.is_finite()));
        let b =
            boundedness(0.4, 0.7, &[disc.clone(), disc.refined()], &[Profile::Gaussian], &[1.0, 2.0], &cfg).unwrap();
        assert!(b.notes[0].contains("RegionII"));
        assert_eq!(b.records.len(), 4);
    }
}
